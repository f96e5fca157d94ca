"""Command-line surface.

Subcommands: check-displacement, check-4ft, transport-cost, check-te,
limit-exp, campaign.  Exit codes: 0 all checks pass, 1 an inequality check
failed (an implementation-bug signal, since the inequalities are theorems),
2 usage or parse errors.  `--json` switches to machine output everywhere.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict
from fractions import Fraction

from . import io as formats
from .campaign import CHECKS, CampaignConfig, run_campaign
from .displacement import chain_diagnostics, displacement_gap
from .errors import DiscretePLError, ParseError
from .fourfunctions import check_4ft_additive, check_4ft_conclusion, check_4ft_hypothesis
from .limits import (
    CLT_DEMOS,
    DISP_DEMOS,
    PL_DEMOS,
    ContFn,
    clt_experiment,
    pl_limit_experiment,
    rescaled_displacement_experiment,
)
from .transport import curvature_cost, gaussian_weights, geometric_weights, ot_cost, transport_entropy_check


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discretepl", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-displacement", help="exact ratio sum and entropy gap for one pair of pmfs")
    p.add_argument("--nu0", required=True)
    p.add_argument("--nu1", required=True)
    p.add_argument("--dump-coupling", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check-4ft", help="four-functions hypothesis and conclusion on the cube")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--k", required=True)
    p.add_argument("--additive", action="store_true", help="treat the files as exponents")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("transport-cost", help="exact optimal transport cost under a curvature cost")
    p.add_argument("--mu")
    p.add_argument("--mu-kind", choices=("geometric", "gaussian"))
    p.add_argument("--K", type=int, default=50, help="truncation half-width for --mu-kind")
    p.add_argument("--cost-table", help="explicit cost table file instead of a curvature cost")
    p.add_argument("--nu0", required=True)
    p.add_argument("--nu1", required=True)
    p.add_argument("--duals", action="store_true")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("check-te", help="random transport-entropy checks under a reference measure")
    p.add_argument("--mu")
    p.add_argument("--mu-kind", choices=("geometric", "gaussian"))
    p.add_argument("--K", type=int, default=12)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=8, help="max support width of the random pmfs")
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("limit-exp", help="discrete-to-continuous experiments")
    p.add_argument("--kind", choices=("pl", "clt", "disp"), required=True)
    p.add_argument("--demo", help=f"pl: {','.join(PL_DEMOS)}; clt: {','.join(CLT_DEMOS)}; disp: {','.join(DISP_DEMOS)}")
    p.add_argument("--spec", help="JSON file with expression strings (see README)")
    p.add_argument("--n", type=_int_list, default=[64, 256, 1024, 4096])
    p.add_argument("--lambda", dest="lam", type=float, default=1.0, help="argument rescaling for clt")
    p.add_argument("--csv", help="write rows to this CSV file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("campaign", help="seeded random campaign over one inequality suite")
    p.add_argument("--check", choices=CHECKS, default="leq1")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--support-width", type=int, default=40)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", help="write per-trial records to this CSV file")

    return parser


def _cmd_check_displacement(args) -> int:
    nu0 = formats.parse_pmf_file(args.nu0)
    nu1 = formats.parse_pmf_file(args.nu1)
    report = displacement_gap(nu0, nu1)
    chains = chain_diagnostics(report.pair)
    ok = report.ratio_sum <= 1 and report.gap >= -1e-12 and all(c.bound_holds for c in chains)
    if args.json:
        payload = {
            "P": str(report.ratio_sum),
            "gap": report.gap,
            "entropies": {
                "nu0": report.entropy0,
                "nu1": report.entropy1,
                "nu_minus": report.entropy_minus,
                "nu_plus": report.entropy_plus,
            },
            "jensen_certificate": report.jensen_certificate,
            "levels": [
                {
                    "levels": c.levels,
                    "isolated": c.isolated,
                    "alphas": {str(b): str(a) for b, a in c.alphas.items()},
                    "bound_holds": c.bound_holds,
                }
                for c in chains
            ],
            "coupling": [[x, y, str(p)] for x, y, p in report.pair.pi.atoms] if args.dump_coupling else None,
            "ok": ok,
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"P = {report.ratio_sum} (<= 1: {report.ratio_sum <= 1})")
        print(f"entropy gap = {report.gap:.12g} (>= 0 up to 1e-12: {report.gap >= -1e-12})")
        for c in chains:
            kind = "isolated" if c.isolated else "chain"
            print(f"  {kind} levels={list(c.levels)} mass={c.mass} contribution={c.ratio_contribution} ok={c.bound_holds}")
        if args.dump_coupling:
            sys.stdout.write(formats.emit_coupling(report.pair.pi))
    return 0 if ok else 1


def _cmd_check_4ft(args) -> int:
    if args.dim < 1 or args.dim > 16:
        raise ParseError(0, "--dim must be in 1..16")
    fns = tuple(formats.parse_cubefn_file(path, args.dim) for path in (args.f, args.g, args.h, args.k))
    if args.additive:
        outcome = check_4ft_additive(*fns)
        ok = outcome.ok
        payload = {
            "hypothesis_ok": outcome.hypothesis_ok,
            "witness": outcome.hyp_witness,
            "lhs_log": outcome.lhs,
            "rhs_log": outcome.rhs,
            "conclusion_ok": outcome.conclusion_ok,
        }
    else:
        hyp = check_4ft_hypothesis(*fns)
        lhs, rhs, concl = check_4ft_conclusion(*fns)
        ok = hyp.ok and concl
        payload = {
            "hypothesis_ok": hyp.ok,
            "witness": [str(w) for w in hyp.witness] if hyp.witness else None,
            "lhs": str(lhs),
            "rhs": str(rhs),
            "conclusion_ok": concl,
        }
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for key, value in payload.items():
            print(f"{key}: {value}")
    return 0 if ok else 1


def _reference_measure(args):
    if args.mu:
        return formats.parse_pmf_file(args.mu)
    if args.mu_kind == "geometric":
        return geometric_weights(args.K)
    if args.mu_kind == "gaussian":
        return gaussian_weights(args.K)
    raise ParseError(0, "need --mu or --mu-kind")


def _cmd_transport_cost(args) -> int:
    nu0 = formats.parse_pmf_file(args.nu0)
    nu1 = formats.parse_pmf_file(args.nu1)
    if args.cost_table:
        cost = formats.parse_cost_table_file(args.cost_table)
    else:
        cost = curvature_cost(_reference_measure(args))
    result = ot_cost(cost, nu0, nu1, want_duals=args.duals)
    if args.json:
        payload = {
            "cost": result.cost,
            "cost_exact": str(result.cost_exact),
            "plan": [[x, y, str(p)] for x, y, p in result.plan.atoms],
            "dual_u": list(result.dual_u.values) if result.dual_u else None,
            "dual_v": list(result.dual_v.values) if result.dual_v else None,
        }
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(f"transport cost = {result.cost:.12g} (exact {result.cost_exact})")
        for x, y, p in result.plan.atoms:
            print(f"  {x} -> {y}: {p}")
        if result.dual_u is not None:
            print(f"dual u: {[round(v, 9) for v in result.dual_u.values]}")
            print(f"dual v: {[round(v, 9) for v in result.dual_v.values]}")
    return 0


def _cmd_check_te(args) -> int:
    import random

    mu = _reference_measure(args)
    if args.mu:
        from .transport import positive_window

        window = positive_window(mu)
    else:
        window = mu.window()
    rng = random.Random(args.seed)
    failures = []
    worst = math.inf
    from .campaign import _pmf_in_window

    for index in range(args.trials):
        nu0 = _pmf_in_window(rng, window, args.resolution, args.width)
        nu1 = _pmf_in_window(rng, window, args.resolution, args.width)
        check = transport_entropy_check(mu, nu0, nu1)
        worst = min(worst, check.rhs - check.lhs)
        if not check.holds:
            failures.append({"index": index, "nu0": str(nu0), "nu1": str(nu1), "lhs": check.lhs, "rhs": check.rhs})
    if args.json:
        print(json.dumps({"trials": args.trials, "failures": failures, "min_slack": worst}, sort_keys=True, indent=2))
    else:
        print(f"{args.trials - len(failures)}/{args.trials} transport-entropy checks passed; min slack {worst:.6g}")
        for f in failures:
            print(f"  FAILED {f}")
    return 0 if not failures else 1


def _load_expr(expr: str):
    allowed = {name: getattr(math, name) for name in dir(math) if not name.startswith("_")}

    def fn(x: float) -> float:
        return float(eval(expr, {"__builtins__": {}}, dict(allowed, x=x)))  # noqa: S307 - research tool

    return fn


def _limit_inputs(args):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            spec = json.load(fh)
        window = tuple(spec.get("window", (-8.0, 8.0)))
        if args.kind == "pl":
            fns = [ContFn(_load_expr(spec[key]), window, spec[key]) for key in ("F", "G", "H", "K")]
            return (*fns, float(spec.get("N", 6.0)))
        if args.kind == "clt":
            return tuple(ContFn(_load_expr(spec[key]), window, spec[key]) for key in ("f", "g", "h"))
        raise ParseError(0, "--spec for disp experiments is not supported; use --demo")
    demos = {"pl": PL_DEMOS, "clt": CLT_DEMOS, "disp": DISP_DEMOS}[args.kind]
    name = args.demo or next(iter(demos))
    if name not in demos:
        raise ParseError(0, f"unknown demo {name!r}; choose from {list(demos)}")
    return demos[name]


def _rows_out(rows, args) -> None:
    dicts = []
    for row in rows:
        d = asdict(row)
        for key, value in d.items():
            if isinstance(value, Fraction):
                d[key] = str(value)
        dicts.append(d)
    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(dicts[0].keys()))
            writer.writeheader()
            writer.writerows(dicts)
    if args.json:
        print(json.dumps(dicts, sort_keys=True, indent=2))
    else:
        for d in dicts:
            print(" ".join(f"{k}={v}" for k, v in d.items()))


def _cmd_limit_exp(args) -> int:
    inputs = _limit_inputs(args)
    if args.kind == "pl":
        rows = pl_limit_experiment(*inputs, args.n)
    elif args.kind == "clt":
        rows = clt_experiment(*inputs, args.n, lam=args.lam)
    else:
        rows = rescaled_displacement_experiment(*inputs, args.n)
    _rows_out(rows, args)
    return 0 if all(row.holds for row in rows) else 1


def _cmd_campaign(args) -> int:
    cfg = CampaignConfig(
        seed=args.seed,
        trials=args.trials,
        support_width=args.support_width,
        mass_resolution=args.resolution,
        check=args.check,
    )
    report = run_campaign(cfg)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8") as fh:
            fh.write(report.to_csv())
    if args.json:
        print(report.to_json())
    else:
        print(f"{report.passes}/{len(report.records)} {cfg.check} trials passed (seed {cfg.seed})")
        for key, value in report.extremes.items():
            print(f"  {key}: {value}")
        for record in report.records:
            if not record.passed:
                print(f"  FAILED trial {record.index}: {record.witness}")
    return 0 if report.failures == 0 else 1


_COMMANDS = {
    "check-displacement": _cmd_check_displacement,
    "check-4ft": _cmd_check_4ft,
    "transport-cost": _cmd_transport_cost,
    "check-te": _cmd_check_te,
    "limit-exp": _cmd_limit_exp,
    "campaign": _cmd_campaign,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DiscretePLError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
