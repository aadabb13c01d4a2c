import math

from dtc_toolkit.exceptions.errors import (
    DTCError,
    ConfigError,
    DomainError,
    NumericalFailure,
    ConvergenceError,
    LabelingError,
    SearchError,
    StepSizeError,
    NonAdiabaticError,
    FitError,
    InversionError,
)


def test_dtc_error():
    error = DTCError(
        "An error occurred", details={"key": "value"}, cause=ValueError("Invalid value")
    )
    assert str(error) == "An error occurred (Caused by: ValueError: Invalid value)"
    assert error.details == {"key": "value"}
    assert isinstance(error.cause, ValueError)


def test_config_error():
    error = ConfigError("Config error", config_key="device", config_file="run.json")
    assert str(error) == "Config error"
    assert error.details == {"config_key": "device", "config_file": "run.json"}
    assert isinstance(error, DTCError)


def test_domain_error():
    error = DomainError("Out of range", parameter="alpha", value=1.2)
    assert error.details == {"parameter": "alpha", "value": 1.2}
    assert not isinstance(error, NumericalFailure)


def test_convergence_error():
    error = ConvergenceError("Basis too small", cutoff=10, edge_weight=1e-3)
    assert error.details == {"cutoff": 10, "edge_weight": 1e-3}
    assert isinstance(error, NumericalFailure)


def test_labeling_error():
    error = LabelingError("No label", label=[1, 0, 0, 0], overlap=0.2, flux=0.4)
    assert error.details == {"label": (1, 0, 0, 0), "overlap": 0.2, "flux": 0.4}


def test_search_error_keeps_nearest_misses():
    misses = [{"e_jc": 20.0, "zeta_min_khz": 3.0}]
    error = SearchError("No feasible cell", bracket=[0.2, 0.4], nearest_misses=misses)
    assert error.details["bracket"] == (0.2, 0.4)
    assert error.details["nearest_misses"] == misses


def test_step_size_error():
    error = StepSizeError("Drift", unitarity_error=1e-6, dt=0.5)
    assert error.details == {"unitarity_error": 1e-6, "dt": 0.5}


def test_non_adiabatic_error():
    error = NonAdiabaticError("Not adiabatic", diagonal_magnitudes=[0.9, 0.4, 0.95, 0.99])
    assert error.details == {"diagonal_magnitudes": [0.9, 0.4, 0.95, 0.99]}


def test_fit_error_with_cause():
    error = FitError("No convergence", residuals=[0.1, -0.2], cause=RuntimeError("maxfev"))
    assert error.details == {"residuals": [0.1, -0.2]}
    assert "RuntimeError: maxfev" in str(error)


def test_inversion_error():
    error = InversionError("Singular frame", rank=200, condition=math.inf)
    assert error.details == {"rank": 200, "condition": math.inf}
    assert isinstance(error, NumericalFailure)
