"""
Main CLI entry point for the DTC toolkit.

This module provides the main entry point for the command-line
interface, handling arguments, configuration, logging setup and
command execution.
"""

import os
import sys
import time
import logging
from typing import List, Optional

from dtc_toolkit.config import ConfigManager
from dtc_toolkit.utils.io import write_manifest
from dtc_toolkit.utils.logging import setup_logging
from dtc_toolkit.cli.commands import RunContext, run_command
from dtc_toolkit.exceptions import ConfigError, DomainError, DTCError, NumericalFailure
from dtc_toolkit.utils.helpers import report_failure, report_interrupt, report_outputs
from dtc_toolkit.cli.arguments import parse_arguments, validate_args, get_help_text


# Setup logging
logger = logging.getLogger(__name__)

LOG_LEVEL_ENV = "DTC_LOG_LEVEL"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_INTERRUPTED = 130


def _log_level(args, configured: str) -> str:
    if args.verbose:
        return "DEBUG"
    if args.quiet:
        return "WARNING"
    return os.environ.get(LOG_LEVEL_ENV, configured)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the DTC toolkit CLI.

    Args:
        argv: Arguments to parse (defaults to sys.argv)

    Returns:
        int: Exit code (0 success, 1 failure, 2 configuration error,
            3 numerical failure)
    """
    try:
        # Parse arguments
        args = parse_arguments(argv)

        # Validate arguments
        problem = validate_args(args)
        if problem:
            report_failure(problem, kind="invalid arguments")
            print(get_help_text(), file=sys.stderr)
            return EXIT_CONFIG

        # Load configuration
        config = ConfigManager.load_config(args.config)
        run = ConfigManager.load_run_config(args.config)

        setup_logging(_log_level(args, run.log_level.value), log_file=args.log_file)

        ctx = RunContext(args, config, run)
        started = time.perf_counter()
        outputs = run_command(ctx)
        manifest = write_manifest(
            ctx.out_dir, ctx.command, ctx.manifest_inputs(), ctx.seed, outputs
        )

        if not args.quiet:
            report_outputs(ctx.command, [*outputs, manifest], time.perf_counter() - started)
        return EXIT_OK

    except ConfigError as e:
        report_failure(str(e), kind="configuration error", details=e.details)
        return EXIT_CONFIG
    except NumericalFailure as e:
        report_failure(str(e), kind="numerical failure", details=e.details)
        logger.debug("Failure details", exc_info=True)
        return EXIT_NUMERICAL
    except (DomainError, DTCError) as e:
        report_failure(str(e), details=e.details)
        return EXIT_FAILURE
    except KeyboardInterrupt:
        report_interrupt()
        return EXIT_INTERRUPTED
    except Exception as e:
        report_failure(str(e), kind=type(e).__name__)
        logger.debug("Unexpected error", exc_info=True)
        return EXIT_FAILURE


def run_cli() -> None:
    """Entry point for setuptools console_scripts."""
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
