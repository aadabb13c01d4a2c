"""
Data models for the DTC toolkit.

This package provides Pydantic models for the circuit, pulses, gates,
noise channels, benchmarking, tomography and run configuration.
"""

from dtc_toolkit.models.circuit import (
    COMPUTATIONAL_LABELS,
    BareBasis,
    BasisConfig,
    CircuitParams,
    EnergySpectrum,
    HamiltonianOperator,
    PotentialSurface,
    SearchCell,
    SearchResult,
    SearchSpec,
    StateLabels,
    ToyParams,
    ZZCurve,
)
from dtc_toolkit.models.pulse import DistortionModel, DistortionTerm, SlepianConfig, Waveform
from dtc_toolkit.models.gate import (
    GatePhases,
    JazzFit,
    JazzModel,
    LeakageReport,
    OptimizationResult,
    OptimizerConfig,
    Propagator,
    TraceEntry,
    VZCalibration,
)
from dtc_toolkit.models.noise import (
    ErrorBudget,
    FluxNoiseParams,
    FluxNoiseResult,
    IncoherentEstimate,
    KrausSet,
    NoiseParams,
)
from dtc_toolkit.models.benchmarking import (
    CZMetrics,
    FitResult,
    GateLengthRow,
    GateLengthStudy,
    LeakageErrorModel,
    RBDataset,
)
from dtc_toolkit.models.tomography import PauliTransferMatrix, QPTDataset, SpamModel
from dtc_toolkit.models.config import LogLevel, RunConfig

__all__ = [
    # Circuit models
    "COMPUTATIONAL_LABELS",
    "BareBasis",
    "BasisConfig",
    "CircuitParams",
    "EnergySpectrum",
    "HamiltonianOperator",
    "PotentialSurface",
    "SearchCell",
    "SearchResult",
    "SearchSpec",
    "StateLabels",
    "ToyParams",
    "ZZCurve",
    # Pulse models
    "DistortionModel",
    "DistortionTerm",
    "SlepianConfig",
    "Waveform",
    # Gate models
    "GatePhases",
    "JazzFit",
    "JazzModel",
    "LeakageReport",
    "OptimizationResult",
    "OptimizerConfig",
    "Propagator",
    "TraceEntry",
    "VZCalibration",
    # Noise models
    "ErrorBudget",
    "FluxNoiseParams",
    "FluxNoiseResult",
    "IncoherentEstimate",
    "KrausSet",
    "NoiseParams",
    # Benchmarking models
    "CZMetrics",
    "FitResult",
    "GateLengthRow",
    "GateLengthStudy",
    "LeakageErrorModel",
    "RBDataset",
    # Tomography models
    "PauliTransferMatrix",
    "QPTDataset",
    "SpamModel",
    # Configuration models
    "LogLevel",
    "RunConfig",
]
