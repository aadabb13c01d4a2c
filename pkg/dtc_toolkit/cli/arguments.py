"""
Argument parsing for the DTC toolkit CLI.

This module handles command-line argument parsing for the application,
defining the global options and one subcommand per workflow step.
"""

import logging
import argparse
from argparse import Namespace
from typing import List, Optional

from dtc_toolkit import __version__

# Setup logging
logger = logging.getLogger(__name__)

EPILOG = """
Examples:
  dtc zz-scan --points 201 --out runs/zz
  dtc optimize-cz --config run.json --seed 3 --threads 4
  dtc cz-metrics --l1-cz 0.00027 --r-cz 0.0009
  dtc rb-sim --m-values 1 20 50 100 200 --shots 0
"""


def _float_list(parser: argparse.ArgumentParser, name: str, help_text: str) -> None:
    parser.add_argument(name, type=float, nargs="+", default=None, help=help_text)


def _flux_range(parser: argparse.ArgumentParser, points: int) -> None:
    parser.add_argument("--flux-min", type=float, default=None, help="First reduced flux (default 0.0)")
    parser.add_argument("--flux-max", type=float, default=None, help="Last reduced flux (default 0.5)")
    parser.add_argument("--points", type=int, default=None, help=f"Grid points (default {points})")


def _pulse_source(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--waveform-file", default=None, help="Waveform CSV (t_ns,amplitude)")
    parser.add_argument("--amplitude", type=float, default=None, help="Peak flux excursion of the Slepian pulse")
    parser.add_argument("--duration", type=float, default=None, help="Pulse core duration (ns)")


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser with every subcommand.

    Returns:
        argparse.ArgumentParser: Configured parser
    """
    parser = argparse.ArgumentParser(
        prog="dtc",
        description="DTC toolkit - double-transmon-coupler CZ gate simulation and calibration",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )

    # Run options
    run_group = parser.add_argument_group("Run Options")
    run_group.add_argument("--config", default=None, help="Run configuration file (JSON)")
    run_group.add_argument("--out", default=None, help="Output directory")
    run_group.add_argument("--seed", type=int, default=None, help="Root random seed")
    run_group.add_argument("--threads", type=int, default=None, help="Maximum worker threads")

    # Output options
    output_group = parser.add_argument_group("Output Options")
    output_group.add_argument("--verbose", action="store_true", help="Enable debug logging")
    output_group.add_argument("--quiet", "-q", action="store_true", help="Only log warnings and errors")
    output_group.add_argument("--log-file", action="store_true", help="Also log to the rotating log file")

    # Information options
    info_group = parser.add_argument_group("Information")
    info_group.add_argument(
        "--version", "-v", action="version", version=f"%(prog)s {__version__}"
    )

    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("spectrum", help="Labeled energy spectrum over a flux grid")
    _flux_range(p, 51)
    p.add_argument("--n-states", type=int, default=None, help="Eigenstates per flux point (default 12)")

    p = sub.add_parser("zz-scan", help="ZZ interaction over a flux grid")
    _flux_range(p, 201)

    p = sub.add_parser("idle-point", help="Locate the flux bias of minimal |zeta|")
    _float_list(p, "--bracket", "Flux bracket (two values)")
    p.add_argument("--tol", type=float, default=None, help="Flux tolerance")

    p = sub.add_parser("param-search", help="Two-stage coupler design search (parameters from --config)")

    p = sub.add_parser("pulse-gen", help="Generate the Slepian pulse and its equal-area square")
    _pulse_source(p)

    p = sub.add_parser("predistort", help="Predistort a pulse for a Z-line distortion model")
    _pulse_source(p)
    p.add_argument("--model", default=None, help="Distortion model name (short_term or long_term)")

    p = sub.add_parser("optimize-cz", help="Optimize the CZ pulse with the evolutionary search")
    _pulse_source(p)
    p.add_argument("--objective", choices=["fidelity", "jazz2"], default=None, help="Objective (default fidelity)")
    p.add_argument("--epochs", type=int, default=None, help="Epoch budget")
    p.add_argument("--population", type=int, default=None, help="Offspring per epoch")

    p = sub.add_parser("gate-report", help="CPHASE angles, leakage and fidelity of a pulse")
    _pulse_source(p)
    p.add_argument("--calibrate-vz", action="store_true", help="Use Ramsey-calibrated VZ phases")

    p = sub.add_parser("rb-sim", help="Simulate standard and interleaved leakage RB")
    _float_list(p, "--m-values", "Sequence lengths")
    p.add_argument("--n-sequences", type=int, default=None, help="Sequences per length (default 10)")
    p.add_argument("--shots", type=int, default=None, help="Shots per sequence; 0 for exact probabilities")

    p = sub.add_parser("lrb-fit", help="Fit leakage RB datasets")
    p.add_argument("--srb-file", default=None, help="SRB dataset CSV")
    p.add_argument("--irb-file", default=None, help="IRB dataset CSV")

    p = sub.add_parser("cz-metrics", help="CZ metrics from fits or from known errors")
    p.add_argument("--srb-fit", default=None, help="SRB fit JSON")
    p.add_argument("--irb-fit", default=None, help="IRB fit JSON")
    p.add_argument("--l1-cz", type=float, default=None, help="CZ leakage per gate")
    p.add_argument("--r-cz", type=float, default=None, help="CZ gate error")

    p = sub.add_parser("gate-length-study", help="Depolarizing error against gate length")
    _float_list(p, "--lengths", "Gate lengths (ns)")
    p.add_argument("--t-eff-us", type=float, default=None, help="Synthetic effective coherence time (us)")

    p = sub.add_parser("qpt", help="Simulated process tomography of the CZ gate")
    p.add_argument("--spam", choices=["none", "readout"], default=None, help="Readout error model (default readout)")
    p.add_argument("--depolarizing", type=float, default=None, help="Depolarizing probability after the gate")

    p = sub.add_parser("error-budget", help="Incoherent and flux-noise error budget")
    p.add_argument("--gate-time", type=float, default=None, help="Gate duration (ns)")
    p.add_argument("--flux-noise", action="store_true", help="Also run the quasi-static flux-noise Monte Carlo")

    p = sub.add_parser("toy-model", help="Lumped-mode model of the coupler")
    p.add_argument("--alpha", type=float, default=None, help="Junction ratio; derived from the device when omitted")
    _flux_range(p, 101)

    return parser


def parse_arguments(args: Optional[List[str]] = None) -> Namespace:
    """
    Parse command-line arguments.

    Args:
        args: Optional list of arguments to parse (defaults to sys.argv)

    Returns:
        Namespace: Parsed arguments.
    """
    parsed_args = build_parser().parse_args(args)
    logger.debug(f"Parsed arguments: {parsed_args}")
    return parsed_args


def validate_args(args: Namespace) -> Optional[str]:
    """
    Check for conflicting or missing arguments.

    Args:
        args: Parsed arguments

    Returns:
        Optional[str]: Problem description, or None if the arguments are valid
    """
    conflicts = [
        (args.quiet and args.verbose, "--quiet cannot be used with --verbose"),
        (args.command is None, "a command is required"),
        (args.threads is not None and args.threads < 1, "--threads must be positive"),
        (args.seed is not None and args.seed < 0, "--seed must be non-negative"),
    ]
    for condition, message in conflicts:
        if condition:
            return message

    if args.command == "cz-metrics":
        direct = args.l1_cz is not None or args.r_cz is not None
        fitted = args.srb_fit is not None or args.irb_fit is not None
        if direct == fitted:
            return "cz-metrics takes either --srb-fit/--irb-fit or --l1-cz/--r-cz"
    if args.command == "idle-point" and args.bracket is not None and len(args.bracket) != 2:
        return "--bracket takes two values"

    return None


def get_help_text() -> str:
    """
    Get the full help text for the CLI.

    Returns:
        str: Full help text
    """
    return build_parser().format_help()
