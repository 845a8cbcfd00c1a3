"""Run a check suite and read its report.

Run: python3 demos/04_check_suites.py [suite]
"""
import sys

from ceslab.lab import SuiteConfig, render_report, run_suite, suite_names
from ceslab.lab.coverage import coverage_gaps


def main(suite="examples"):
    print("available suites:", ", ".join(suite_names()))
    gaps = coverage_gaps()
    print("claims without a case:", gaps["uncovered"] or "none")
    report = run_suite(SuiteConfig(suite, seed=42))
    sys.stdout.write(render_report(report, "text").decode())
    failed = [c for c in report.cases if c.status == "fail"]
    for c in failed:
        print(f"\n{c.name} failed: observed {c.observed!r}, bound {c.bound!r}, witness {c.witness}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
