"""
Run-status reporting for the dtc command line.

Every diagnostic line is prefixed with ``dtc:`` and written to stderr;
stdout carries only the artifact paths of a successful run.
"""

import sys
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from dtc_toolkit.utils.colors import Colors

PREFIX = "dtc"


def report_failure(message: str, kind: Optional[str] = None, details: Optional[Dict[str, Any]] = None) -> None:
    """
    Write the failure line of a run, followed by one line per context value.

    Args:
        message: What went wrong
        kind: Failure class shown before the message (e.g. "numerical failure")
        details: Context attached to a toolkit error, such as the flux or label
    """
    head = f"{PREFIX}: {kind}: {message}" if kind else f"{PREFIX}: {message}"
    print(Colors.failure(head), file=sys.stderr)
    for key, value in sorted((details or {}).items()):
        print(Colors.detail(f"  {key} = {value}"), file=sys.stderr)


def report_interrupt() -> None:
    print(Colors.interrupted(f"{PREFIX}: interrupted, partial artifacts may remain"), file=sys.stderr)


def report_outputs(command: str, paths: Sequence[Path], seconds: float) -> None:
    """Print the artifact paths to stdout and the completion line to stderr."""
    for path in paths:
        print(str(path))
    print(
        Colors.completed(f"{PREFIX}: {command} wrote {len(paths)} files in {format_duration(seconds)}"),
        file=sys.stderr,
    )


def format_duration(seconds: float) -> str:
    """
    Format a wall-clock run time, e.g. "250ms", "1m 5s" or "1h 2m 5s".
    """
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"

    m, s = divmod(seconds, 60)
    h, m = divmod(m, 60)
    parts = [f"{v:.0f}{unit}" for v, unit in ((h, "h"), (m, "m")) if v > 0]
    if s > 0 or not parts:
        parts.append(f"{s:.0f}s")
    return " ".join(parts)
