#!/usr/bin/env python3
"""Ablation study over the fixture suite: the full engine against the
no-alternative-selectors and no-incremental variants.

Usage: python3 scripts/run_ablations.py [--seed N]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from webrpa.harness import generate_fixture_suite, run_fixture_benchmark
from webrpa.synthesis import SynthConfig

VARIANTS = (
    ("full", SynthConfig()),
    ("no-selector", SynthConfig(no_selector=True)),
    ("no-incremental", SynthConfig(incremental=False)),
)


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    fixtures = generate_fixture_suite(args.seed)
    print(f"{'variant':<15} {'solved':>6} {'acc(avg)':>9} {'post(avg)':>9} "
          f"{'avg ms/test':>11} {'wall s':>7}")
    for name, config in VARIANTS:
        reports = [run_fixture_benchmark(f, config=config) for f in fixtures]
        solved = sum(r.intended_found for r in reports)
        acc = sum(r.accuracy for r in reports) / len(reports)
        post = sum(r.post_accuracy or 0.0 for r in reports) / len(reports)
        times = [t["time_s"] for r in reports for t in r.per_test]
        wall = sum(r.wall_time_s for r in reports)
        print(f"{name:<15} {solved:>3}/{len(reports):<2} {acc:>8.0%} {post:>9.0%} "
              f"{sum(times) / len(times) * 1000:>10.1f} {wall:>7.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
