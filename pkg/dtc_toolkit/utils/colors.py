"""
Coloring of the dtc diagnostic stream.

Artifact paths go to stdout uncolored so they can be piped; only the
status lines written to stderr are colored, and only when stderr is a
terminal and NO_COLOR is unset.
"""

import os
import sys


def _stderr_supports_color() -> bool:
    return (
        sys.stderr.isatty()
        and os.environ.get("TERM") != "dumb"
        and not os.environ.get("NO_COLOR")
    )


class Colors:
    """ANSI styles for the failure, interruption and completion lines of a run."""

    RESET = "\033[0m"
    BOLD = "\033[1m"

    RED = "\033[91m"
    GREEN = "\033[92m"
    YELLOW = "\033[93m"
    GREY = "\033[90m"

    _ENABLED = _stderr_supports_color()

    @classmethod
    def disable(cls) -> None:
        cls._ENABLED = False

    @classmethod
    def enable(cls) -> None:
        """Re-evaluate stderr and NO_COLOR."""
        cls._ENABLED = _stderr_supports_color()

    @classmethod
    def is_enabled(cls) -> bool:
        return cls._ENABLED

    @classmethod
    def colorize(cls, text: str, style: str) -> str:
        if not cls._ENABLED:
            return text
        return f"{style}{text}{cls.RESET}"

    @classmethod
    def failure(cls, text: str) -> str:
        """Style of a run that ended with a nonzero exit code."""
        return cls.colorize(text, f"{cls.BOLD}{cls.RED}")

    @classmethod
    def interrupted(cls, text: str) -> str:
        return cls.colorize(text, cls.YELLOW)

    @classmethod
    def completed(cls, text: str) -> str:
        return cls.colorize(text, cls.GREEN)

    @classmethod
    def detail(cls, text: str) -> str:
        """Style of the key=value context lines under a failure."""
        return cls.colorize(text, cls.GREY)
