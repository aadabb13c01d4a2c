"""
Custom exception classes for the DTC toolkit.

This module defines the hierarchy of exceptions raised by the numerical
modules and the command-line front end. Every exception carries a
``details`` dictionary with the diagnostics that explain the failure, so
callers can log or serialize them without parsing messages.
"""

from typing import Optional, Dict, Any, List, Sequence


class DTCError(Exception):
    """
    Base exception class for all DTC toolkit errors.

    This is the parent class of all custom exceptions raised by the package,
    providing a common interface for error handling and consistent error reporting.
    """

    def __init__(
        self,
        message: str,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
    ):
        """
        Initialize DTCError.

        Args:
            message: Error message
            details: Optional dictionary with additional error details
            cause: Optional original exception that caused this error
        """
        self.message = message
        self.details = details or {}
        self.cause = cause

        # Construct error message with cause if available
        if cause:
            full_message = (
                f"{message} (Caused by: {type(cause).__name__}: {str(cause)})"
            )
        else:
            full_message = message

        super().__init__(full_message)


class ConfigError(DTCError):
    """
    Exception raised for configuration-related errors.

    Raised for unreadable or invalid run configurations and for device
    parameters that cannot describe a physical circuit (for example a
    singular capacitance matrix).
    """

    def __init__(
        self,
        message: str,
        config_key: Optional[str] = None,
        config_file: Optional[str] = None,
        **kwargs,
    ):
        """
        Initialize ConfigError.

        Args:
            message: Error message
            config_key: Optional key in the configuration that caused the error
            config_file: Optional path to the configuration file
            **kwargs: Additional keyword arguments for DTCError
        """
        details = kwargs.pop("details", {})

        if config_key is not None:
            details["config_key"] = config_key

        if config_file is not None:
            details["config_file"] = config_file

        super().__init__(message, details=details, **kwargs)


class DomainError(DTCError):
    """Exception raised when an argument lies outside its mathematical domain."""

    def __init__(
        self,
        message: str,
        parameter: Optional[str] = None,
        value: Any = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if parameter is not None:
            details["parameter"] = parameter

        if value is not None:
            details["value"] = value

        super().__init__(message, details=details, **kwargs)


class NumericalFailure(DTCError):
    """
    Base class for failures of a numerical procedure.

    The command-line front end maps every subclass of this exception to
    exit status 3.
    """


class ConvergenceError(NumericalFailure):
    """Exception raised when a basis truncation is too small to converge."""

    def __init__(
        self,
        message: str,
        cutoff: Optional[int] = None,
        edge_weight: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if cutoff is not None:
            details["cutoff"] = cutoff

        if edge_weight is not None:
            details["edge_weight"] = edge_weight

        super().__init__(message, details=details, **kwargs)


class NumericalError(NumericalFailure):
    """
    Exception raised when an eigensolver result fails its residual check.

    Args in ``details``: the worst residual norm and the tolerance it was
    compared against.
    """

    def __init__(
        self,
        message: str,
        residual: Optional[float] = None,
        tolerance: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if residual is not None:
            details["residual"] = residual

        if tolerance is not None:
            details["tolerance"] = tolerance

        super().__init__(message, details=details, **kwargs)


class LabelingError(NumericalFailure):
    """Exception raised when a required product label cannot be identified."""

    def __init__(
        self,
        message: str,
        label: Optional[Sequence[int]] = None,
        overlap: Optional[float] = None,
        flux: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if label is not None:
            details["label"] = tuple(label)

        if overlap is not None:
            details["overlap"] = overlap

        if flux is not None:
            details["flux"] = flux

        super().__init__(message, details=details, **kwargs)


class TrackingError(NumericalFailure):
    """Exception raised when adiabatic continuity tracking loses a branch."""

    def __init__(
        self,
        message: str,
        flux: Optional[float] = None,
        overlap: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if flux is not None:
            details["flux"] = flux

        if overlap is not None:
            details["overlap"] = overlap

        super().__init__(message, details=details, **kwargs)


class SearchError(NumericalFailure):
    """Exception raised when a bracketed or grid search finds no admissible point."""

    def __init__(
        self,
        message: str,
        bracket: Optional[Sequence[float]] = None,
        nearest_misses: Optional[List[Dict[str, Any]]] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if bracket is not None:
            details["bracket"] = tuple(bracket)

        if nearest_misses is not None:
            details["nearest_misses"] = nearest_misses

        super().__init__(message, details=details, **kwargs)


class ResonanceError(NumericalFailure):
    """Exception raised at an exact resonance of a dispersive expression."""

    def __init__(self, message: str, pair: Optional[str] = None, **kwargs):
        details = kwargs.pop("details", {})

        if pair is not None:
            details["pair"] = pair

        super().__init__(message, details=details, **kwargs)


class ModelError(NumericalFailure):
    """Exception raised for a distortion model whose step response is not invertible."""

    def __init__(
        self,
        message: str,
        terms: Optional[List[Dict[str, float]]] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if terms is not None:
            details["terms"] = terms

        super().__init__(message, details=details, **kwargs)


class StepSizeError(NumericalFailure):
    """Exception raised when the propagator drifts from unitarity."""

    def __init__(
        self,
        message: str,
        unitarity_error: Optional[float] = None,
        dt: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if unitarity_error is not None:
            details["unitarity_error"] = unitarity_error

        if dt is not None:
            details["dt"] = dt

        super().__init__(message, details=details, **kwargs)


class NonAdiabaticError(NumericalFailure):
    """Exception raised when the computational block is not diagonally dominant."""

    def __init__(
        self,
        message: str,
        diagonal_magnitudes: Optional[Sequence[float]] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if diagonal_magnitudes is not None:
            details["diagonal_magnitudes"] = [float(x) for x in diagonal_magnitudes]

        super().__init__(message, details=details, **kwargs)


class PhaseUnwrapError(NumericalFailure):
    """Exception raised when repeated-pulse phases cannot be unwrapped unambiguously."""

    def __init__(
        self,
        message: str,
        phase_per_cycle: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if phase_per_cycle is not None:
            details["phase_per_cycle"] = phase_per_cycle

        super().__init__(message, details=details, **kwargs)


class ChannelError(NumericalFailure):
    """Exception raised when a Kraus set violates completeness."""

    def __init__(
        self,
        message: str,
        completeness_error: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if completeness_error is not None:
            details["completeness_error"] = completeness_error

        super().__init__(message, details=details, **kwargs)


class FitError(NumericalFailure):
    """Exception raised when a nonlinear fit does not converge."""

    def __init__(
        self,
        message: str,
        residuals: Optional[Sequence[float]] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if residuals is not None:
            details["residuals"] = [float(r) for r in residuals]

        super().__init__(message, details=details, **kwargs)


class InversionError(NumericalFailure):
    """Exception raised when the tomography frame cannot be inverted."""

    def __init__(
        self,
        message: str,
        rank: Optional[int] = None,
        condition: Optional[float] = None,
        **kwargs,
    ):
        details = kwargs.pop("details", {})

        if rank is not None:
            details["rank"] = rank

        if condition is not None:
            details["condition"] = condition

        super().__init__(message, details=details, **kwargs)
