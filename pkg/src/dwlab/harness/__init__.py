"""Verification harness: named experiments, ratio statistics, reports."""

from .report import Report, emit_report, ratio_stats, interval_drift
from .experiments import EXPERIMENTS, run_experiment, run_all

__all__ = [
    "Report",
    "emit_report",
    "ratio_stats",
    "interval_drift",
    "EXPERIMENTS",
    "run_experiment",
    "run_all",
]
