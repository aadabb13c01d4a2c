"""
DTC toolkit: simulation and calibration of double-transmon-coupler CZ gates.

This package models a two-qubit device coupled through a double-transmon
coupler and covers the full gate workflow:

- Circuit Hamiltonian, dressed spectrum and state labeling
- ZZ interaction scans, idle-point search and device parameter search
- Adiabatic pulse shaping and Z-line distortion predistortion
- Gate propagators, CPHASE angles, leakage and pulse optimization
- Incoherent and flux-noise error budgets
- Leakage randomized benchmarking and process tomography
"""

__version__ = "1.0.0"

from dtc_toolkit.models import (
    BasisConfig,
    CircuitParams,
    CZMetrics,
    LeakageErrorModel,
    Propagator,
    RBDataset,
    RunConfig,
    Waveform,
)

from dtc_toolkit.exceptions import (
    DTCError,
    ConfigError,
    DomainError,
    NumericalFailure,
)

__all__ = [
    "__version__",
    # Models
    "BasisConfig",
    "CircuitParams",
    "CZMetrics",
    "LeakageErrorModel",
    "Propagator",
    "RBDataset",
    "RunConfig",
    "Waveform",
    # Exceptions
    "DTCError",
    "ConfigError",
    "DomainError",
    "NumericalFailure",
]
