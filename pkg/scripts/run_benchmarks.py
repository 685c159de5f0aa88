#!/usr/bin/env python3
"""Generate the fixture suite and run the prefix-prediction benchmark over
every fixture, printing the summary table and writing JSON reports.

Usage: python3 scripts/run_benchmarks.py [--seed N] [--timeout MS] [--out DIR]
"""

import argparse
import json
import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from webrpa.harness import BenchmarkReport, generate_fixture_suite, run_fixture_benchmark
from webrpa.synthesis import SynthConfig


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--timeout", type=int, default=1000, help="per-test budget (ms)")
    parser.add_argument("--out", default=None)
    args = parser.parse_args()

    fixtures = generate_fixture_suite(args.seed)
    print(BenchmarkReport.header())
    reports = []
    t0 = time.monotonic()
    for fixture in fixtures:
        report = run_fixture_benchmark(fixture, config=SynthConfig(),
                                       timeout_s=args.timeout / 1000.0)
        reports.append(report)
        print(report.row())
    wall = time.monotonic() - t0
    times = [t["time_s"] for r in reports for t in r.per_test]
    print(f"\n{len(times)} prefix tests, avg {sum(times) / len(times) * 1000:.1f} ms, "
          f"suite wall {wall:.1f} s")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for report in reports:
            with open(os.path.join(args.out, f"{report.name}.report.json"), "w") as fh:
                json.dump(report.to_json(), fh, indent=2)
        print(f"reports written to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
