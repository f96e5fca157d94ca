#!/usr/bin/env python3
"""Run every campaign suite at one seed and print a summary table.

Usage: python scripts/run_campaigns.py [--seed 1] [--trials 1000] [--json-dir DIR]
"""

import argparse
import sys
from pathlib import Path

from discretepl.campaign import CHECKS, CampaignConfig, run_campaign


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--trials", type=int, default=1000)
    parser.add_argument("--json-dir", help="also dump one JSON report per suite")
    args = parser.parse_args()

    failures = 0
    for check in CHECKS:
        cfg = CampaignConfig(seed=args.seed, trials=args.trials, check=check)
        report = run_campaign(cfg)
        failures += report.failures
        extremes = "; ".join(f"{k}={v}" for k, v in report.extremes.items())
        print(f"{check:>16}: {report.passes}/{args.trials} passed  {extremes}")
        if args.json_dir:
            out = Path(args.json_dir)
            out.mkdir(parents=True, exist_ok=True)
            (out / f"{check}.json").write_text(report.to_json())
    return 0 if failures == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
