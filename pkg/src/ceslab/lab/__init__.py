"""Automated checks of identities, constants and equivalences."""
from .core import FAIL, FLAGGED, PASS, Case, Report, SuiteConfig, run_suite, suite_names
from .report import render_report
from .constants import estimate_best_constant, RATIOS

__all__ = ["Case", "Report", "SuiteConfig", "run_suite", "suite_names", "render_report",
           "estimate_best_constant", "RATIOS", "PASS", "FAIL", "FLAGGED"]
