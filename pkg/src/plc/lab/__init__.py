"""Generators, scheme checks and executable suites."""
from .report import Record, Report, replay
from .suites import SUITES, run_suite

__all__ = ["Record", "Report", "replay", "SUITES", "run_suite"]
