"""
Utility functions and classes for the DTC toolkit.

This module provides terminal colors, logging setup, run-status reporting
and the CSV/JSON writers used for run artifacts.
"""

from dtc_toolkit.utils.colors import Colors
from dtc_toolkit.utils.logging import setup_logging, get_logger
from dtc_toolkit.utils.helpers import (
    format_duration,
    report_failure,
    report_interrupt,
    report_outputs,
)
from dtc_toolkit.utils.io import read_csv, write_csv, write_json, write_manifest

__all__ = [
    # Terminal coloring utilities
    "Colors",
    # Logging utilities
    "setup_logging",
    "get_logger",
    # Run-status reporting
    "format_duration",
    "report_failure",
    "report_interrupt",
    "report_outputs",
    # Artifact writers
    "read_csv",
    "write_csv",
    "write_json",
    "write_manifest",
]
