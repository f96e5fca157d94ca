#!/usr/bin/env python3
"""Run every shipped limit-experiment demo and write one CSV per demo.

Usage: python scripts/run_limit_experiments.py [--out results] [--quick]
"""

import argparse
import csv
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from discretepl.limits import (
    CLT_DEMOS,
    DISP_DEMOS,
    PL_DEMOS,
    clt_experiment,
    pl_limit_experiment,
    rescaled_displacement_experiment,
)


def write_rows(rows, path: Path) -> None:
    dicts = []
    for row in rows:
        d = asdict(row)
        for key, value in d.items():
            if isinstance(value, Fraction):
                d[key] = str(value)
        dicts.append(d)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(dicts[0]))
        writer.writeheader()
        writer.writerows(dicts)
    print(f"wrote {path} ({len(dicts)} rows)")


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", default="results")
    parser.add_argument("--quick", action="store_true", help="smaller grids for a fast pass")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    pl_ns = [64, 256] if args.quick else [64, 256, 1024, 4096]
    clt_ns = [100, 1000] if args.quick else [100, 1000, 10_000]
    disp_ns = [64, 256] if args.quick else [64, 256, 1024, 2048]

    for name, inputs in PL_DEMOS.items():
        write_rows(pl_limit_experiment(*inputs, pl_ns), out / f"pl_{name}.csv")
    for name, inputs in CLT_DEMOS.items():
        write_rows(clt_experiment(*inputs, clt_ns), out / f"clt_{name}.csv")
    for name, inputs in DISP_DEMOS.items():
        write_rows(rescaled_displacement_experiment(*inputs, disp_ns), out / f"disp_{name}.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
