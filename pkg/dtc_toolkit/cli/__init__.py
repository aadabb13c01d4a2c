"""
Command Line Interface for the DTC toolkit.

This package provides the command-line interface, argument parsing,
command implementations and the main entry point for the application.
"""

from dtc_toolkit.cli.main import main, run_cli
from dtc_toolkit.cli.arguments import parse_arguments
from dtc_toolkit.cli.commands import COMMANDS, RunContext

__all__ = ["main", "run_cli", "parse_arguments", "COMMANDS", "RunContext"]
