"""
Custom exceptions for the DTC toolkit.

This package provides the hierarchy of exceptions raised throughout the toolkit
so that configuration problems and numerical failures are reported consistently.
"""

from dtc_toolkit.exceptions.errors import (
    DTCError,
    ConfigError,
    DomainError,
    NumericalFailure,
    ConvergenceError,
    NumericalError,
    LabelingError,
    TrackingError,
    SearchError,
    ResonanceError,
    ModelError,
    StepSizeError,
    NonAdiabaticError,
    PhaseUnwrapError,
    ChannelError,
    FitError,
    InversionError,
)

__all__ = [
    # Base and configuration
    "DTCError",
    "ConfigError",
    "DomainError",
    # Numerical failures
    "NumericalFailure",
    "ConvergenceError",
    "NumericalError",
    "LabelingError",
    "TrackingError",
    "SearchError",
    "ResonanceError",
    "ModelError",
    "StepSizeError",
    "NonAdiabaticError",
    "PhaseUnwrapError",
    "ChannelError",
    "FitError",
    "InversionError",
]
