"""Seeded random campaigns over the inequality checkers.

Instances are generated from integer weights with exact normalization, so
every mass identity in a campaign is checked in rational arithmetic.  The
instance stream is a pure function of (seed, trial index): records carry an
input digest and the emitted JSON/CSV is byte-stable for a fixed seed.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .coupling import binary_lattice_couplings, check_marginals, is_staircase, monotone_coupling
from .displacement import displacement_gap, level_sets, midpoint_measures, pair_ratio_sum
from .errors import ConfigError
from .fourfunctions import check_4ft_conclusion, check_4ft_hypothesis, random_hypothesis_quadruple
from .measures import Pmf, from_weights
from .transport import LogWeights, transport_entropy_check

CHECKS = ("leq1", "displacement", "card", "4ft", "transport-lemma", "te")


@dataclass(frozen=True)
class CampaignConfig:
    seed: int
    trials: int
    support_width: int = 40
    mass_resolution: int = 64
    check: str = "leq1"

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.mass_resolution < 2:
            raise ConfigError("mass resolution must be >= 2")
        if self.support_width < 1:
            raise ConfigError("support width must be >= 1")
        if self.check not in CHECKS:
            raise ConfigError(f"unknown check {self.check!r}; choose from {CHECKS}")


@dataclass(frozen=True)
class TrialRecord:
    index: int
    digest: str
    passed: bool
    values: dict
    witness: str | None = None


@dataclass
class CampaignReport:
    config: CampaignConfig
    records: list[TrialRecord] = field(default_factory=list)
    extremes: dict = field(default_factory=dict)

    @property
    def passes(self) -> int:
        return sum(1 for r in self.records if r.passed)

    @property
    def failures(self) -> int:
        return len(self.records) - self.passes

    def to_json(self) -> str:
        payload = {
            "config": {
                "seed": self.config.seed,
                "trials": self.config.trials,
                "support_width": self.config.support_width,
                "mass_resolution": self.config.mass_resolution,
                "check": self.config.check,
            },
            "summary": {"passes": self.passes, "failures": self.failures, "extremes": self.extremes},
            "records": [
                {
                    "index": r.index,
                    "digest": r.digest,
                    "passed": r.passed,
                    "values": r.values,
                    "witness": r.witness,
                }
                for r in self.records
            ],
        }
        return json.dumps(payload, sort_keys=True, indent=2)

    def to_csv(self) -> str:
        keys = sorted({k for r in self.records for k in r.values})
        lines = [",".join(["index", "digest", "passed"] + keys)]
        for r in self.records:
            row = [str(r.index), r.digest, str(int(r.passed))]
            row += [str(r.values.get(k, "")) for k in keys]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"


def trial_rng(seed: int, index: int) -> random.Random:
    # string seeding is hash-randomization independent, so trials are
    # reproducible individually and order-independent
    return random.Random(f"{seed}:{index}")


def random_pmf(rng: random.Random, max_width: int, resolution: int) -> Pmf:
    """Integer weights in [1, resolution] on a random window, normalized exactly."""
    width = rng.randint(1, max_width)
    offset = rng.randint(-max_width, max_width)
    return from_weights(offset, [rng.randint(1, resolution) for _ in range(width)])


def random_binary_pmf(rng: random.Random, resolution: int) -> Pmf:
    w0 = rng.randint(0, resolution)
    w1 = rng.randint(0, resolution)
    if w0 == 0 and w1 == 0:
        w1 = 1
    return from_weights(0, [w0, w1])


def random_concave_weights(rng: random.Random, max_width: int, slope_bound: int = 4) -> LogWeights:
    """Concave integer log-weights: increments drawn non-increasing."""
    width = rng.randint(2, max_width)
    offset = rng.randint(-max_width, max_width // 2)
    slopes = sorted((rng.randint(-slope_bound, slope_bound) for _ in range(width - 1)), reverse=True)
    values = [0]
    for s in slopes:
        values.append(values[-1] + s)
    return LogWeights(offset, tuple(Fraction(v) for v in values))


def rational_log_concave_family(name: str, half_width: int) -> Pmf:
    """Truncated log-concave reference families with exact rational masses."""
    span = range(-half_width, half_width + 1)
    if name == "geometric-half":
        weights = [Fraction(1, 2) ** abs(x) for x in span]
    elif name == "geometric-two-thirds":
        weights = [Fraction(2, 3) ** abs(x) for x in span]
    elif name == "binomial":
        import math as _math

        weights = [Fraction(_math.comb(2 * half_width, x + half_width)) for x in span]
    elif name == "gaussian-half":
        weights = [Fraction(1, 2) ** (x * x) for x in span]
    elif name == "uniform":
        weights = [Fraction(1) for _ in span]
    else:
        raise ConfigError(f"unknown family {name!r}")
    return from_weights(-half_width, weights)


LOG_CONCAVE_FAMILIES = ("geometric-half", "geometric-two-thirds", "binomial", "gaussian-half", "uniform")


def _digest(*parts: str) -> str:
    return hashlib.sha256("|".join(parts).encode()).hexdigest()[:12]


def _pmf_in_window(rng: random.Random, window: range, resolution: int, max_width: int) -> Pmf:
    width = rng.randint(1, min(max_width, len(window)))
    start = rng.randint(window.start, window.stop - width)
    return from_weights(start, [rng.randint(1, resolution) for _ in range(width)])


def _leq1_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    nu0 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    nu1 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    pair = midpoint_measures(nu0, nu1)
    total = pair_ratio_sum(pair)
    passed = total <= 1
    return TrialRecord(
        index=index,
        digest=_digest(str(nu0), str(nu1)),
        passed=passed,
        values={"P": str(total), "atoms": len(pair.pi.atoms)},
        witness=None if passed else f"P={total}>1 for nu0={nu0} nu1={nu1}",
    )


def _displacement_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    nu0 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    nu1 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    report = displacement_gap(nu0, nu1)
    passed = report.gap >= -1e-12 and report.ratio_sum <= 1 and report.jensen_certificate <= report.log_ratio_sum + 1e-10
    return TrialRecord(
        index=index,
        digest=_digest(str(nu0), str(nu1)),
        passed=passed,
        values={"gap": report.gap, "P": str(report.ratio_sum)},
        witness=None if passed else f"gap={report.gap} P={report.ratio_sum} for nu0={nu0} nu1={nu1}",
    )


def _card_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    nu0 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    nu1 = random_pmf(rng, cfg.support_width, cfg.mass_resolution)
    pi = monotone_coupling(nu0, nu1)
    sizes = [len(ls.pairs) for ls in level_sets(pi)]
    passed = bool(sizes) and max(sizes) <= 2 and is_staircase(pi) and check_marginals(pi)
    return TrialRecord(
        index=index,
        digest=_digest(str(nu0), str(nu1)),
        passed=passed,
        values={"max_card": max(sizes), "levels": len(sizes)},
        witness=None if passed else f"level-set invariant failed for nu0={nu0} nu1={nu1}",
    )


def _fourfn_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    n = rng.randint(1, 4)
    quad = random_hypothesis_quadruple(rng, n, cfg.mass_resolution)
    hyp = check_4ft_hypothesis(*quad)
    lhs, rhs, holds = check_4ft_conclusion(*quad)
    passed = hyp.ok and holds
    return TrialRecord(
        index=index,
        digest=_digest(*(str(q.values) for q in quad)),
        passed=passed,
        values={"n": n, "lhs": str(lhs), "rhs": str(rhs)},
        witness=None if passed else f"conclusion {lhs} > {rhs}",
    )


def _transport_lemma_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    nu1 = random_binary_pmf(rng, cfg.mass_resolution)
    nu2 = random_binary_pmf(rng, cfg.mass_resolution)
    pi, pi_tilde = binary_lattice_couplings(nu1, nu2)
    a0, b0 = nu1.mass(0), nu2.mass(0)
    if b0 <= a0:
        formulas_ok = (
            pi.mass(0, 0) == b0
            and pi.mass(1, 0) == 0
            and pi.mass(0, 1) == a0 - b0
            and pi.mass(1, 1) == nu1.mass(1)
            and pi_tilde.atoms == pi.atoms
            and pi_tilde.marginal0 == nu1
            and pi_tilde.marginal1 == nu2
        )
    else:
        formulas_ok = (
            pi.mass(0, 0) == a0
            and pi.mass(1, 1) == nu2.mass(1)
            and pi.mass(0, 1) == 0
            and pi.mass(1, 0) == b0 - a0
            and pi_tilde.mass(0, 1) == b0 - a0
            and pi_tilde.mass(1, 0) == 0
            and pi_tilde.marginal0 == nu2
            and pi_tilde.marginal1 == nu1
        )
    passed = formulas_ok and pi.marginal0 == nu1 and pi.marginal1 == nu2
    return TrialRecord(
        index=index,
        digest=_digest(str(nu1), str(nu2)),
        passed=passed,
        values={"case": "i" if b0 <= a0 else "ii"},
        witness=None if passed else f"coupling masses off for nu1={nu1} nu2={nu2}",
    )


def _te_trial(rng: random.Random, cfg: CampaignConfig, index: int) -> TrialRecord:
    family = LOG_CONCAVE_FAMILIES[rng.randrange(len(LOG_CONCAVE_FAMILIES))]
    half_width = min(12, cfg.support_width)
    mu = rational_log_concave_family(family, half_width)
    window = range(-half_width, half_width + 1)
    nu0 = _pmf_in_window(rng, window, cfg.mass_resolution, 12)
    nu1 = _pmf_in_window(rng, window, cfg.mass_resolution, 12)
    check = transport_entropy_check(mu, nu0, nu1)
    return TrialRecord(
        index=index,
        digest=_digest(family, str(nu0), str(nu1)),
        passed=check.holds,
        values={"family": family, "lhs": check.lhs, "rhs": check.rhs},
        witness=None if check.holds else f"T={check.lhs} > H+H={check.rhs} under {family}",
    )


_TRIALS = {
    "leq1": _leq1_trial,
    "displacement": _displacement_trial,
    "card": _card_trial,
    "4ft": _fourfn_trial,
    "transport-lemma": _transport_lemma_trial,
    "te": _te_trial,
}


def run_campaign(cfg: CampaignConfig) -> CampaignReport:
    """Deterministic campaign: same seed, byte-identical report."""
    report = CampaignReport(cfg)
    runner = _TRIALS[cfg.check]
    for index in range(cfg.trials):
        record = runner(trial_rng(cfg.seed, index), cfg, index)
        report.records.append(record)
    _summarize(report)
    return report


def _summarize(report: CampaignReport) -> None:
    records = report.records
    if not records:
        return
    check = report.config.check
    if check in ("leq1", "displacement"):
        max_p = max(records, key=lambda r: Fraction(r.values["P"]))
        report.extremes["max_P"] = {"index": max_p.index, "P": max_p.values["P"]}
        if check == "displacement":
            min_gap = min(records, key=lambda r: r.values["gap"])
            report.extremes["min_gap"] = {"index": min_gap.index, "gap": min_gap.values["gap"]}
    elif check == "card":
        max_card = max(records, key=lambda r: r.values["max_card"])
        report.extremes["max_card"] = {"index": max_card.index, "card": max_card.values["max_card"]}
    elif check == "te":
        slack = min(records, key=lambda r: r.values["rhs"] - r.values["lhs"])
        report.extremes["min_slack"] = {"index": slack.index, "slack": slack.values["rhs"] - slack.values["lhs"]}
