"""
Gate models for the DTC toolkit.

This module defines the propagator produced by time evolution, the CPHASE
phases and leakage extracted from it, the JAZZ measurement model and the
optimizer configuration and results used for pulse and VZ calibration.
"""

import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dtc_toolkit.models.circuit import Label
from dtc_toolkit.models.pulse import Waveform
from dtc_toolkit.models.types import ComplexArray, FloatArray


class Propagator(BaseModel):
    """
    Gate propagator over the retained idle-point eigenbasis.

    ``matrix`` is expressed in the interaction picture of the idle
    Hamiltonian with the global phase fixed on the ground state;
    ``lab_matrix`` is the raw time-ordered product, which composes
    exactly under waveform concatenation.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: ComplexArray
    lab_matrix: Optional[ComplexArray] = None
    comp_indices: Tuple[int, int, int, int] = Field(
        default=(0, 1, 2, 3), description="Positions of |00>, |01>, |10>, |11>"
    )
    energies: Optional[FloatArray] = Field(default=None, description="Idle eigenenergies (GHz)")
    labels: Optional[List[Label]] = None
    dt: float = Field(default=0.0, ge=0.0, description="Sample period of the waveform (ns)")
    steps: int = Field(default=0, ge=0, description="Number of integrator sub-steps")
    duration: float = Field(default=0.0, ge=0.0)
    idle_flux: Optional[float] = None
    global_phase: float = 0.0

    @model_validator(mode="after")
    def validate_matrix(self) -> "Propagator":
        shape = self.matrix.shape
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] < 4:
            raise ValueError("propagator must be a square matrix of dimension >= 4")
        if len(set(self.comp_indices)) != 4 or max(self.comp_indices) >= shape[0]:
            raise ValueError("comp_indices must be four distinct valid positions")
        return self

    @property
    def dimension(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def comp_block(self) -> np.ndarray:
        idx = np.asarray(self.comp_indices)
        return self.matrix[np.ix_(idx, idx)]

    @property
    def unitarity_error(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(self.dimension))))

    @classmethod
    def from_block(cls, block: np.ndarray) -> "Propagator":
        """Wrap a bare 4x4 computational block."""
        return cls(matrix=np.asarray(block, dtype=complex))


class GatePhases(BaseModel):
    """Diagonal phases of the computational block (radians)."""

    model_config = ConfigDict(frozen=True)

    theta00: float
    theta01: float
    theta10: float
    theta11: float
    theta_cz: float = Field(description="theta11 - theta10 - theta01 + theta00 wrapped to (-pi, pi]")
    theta1: float = Field(description="Single-qubit phase of Q1, theta10 - theta00 wrapped")
    theta2: float = Field(description="Single-qubit phase of Q2, theta01 - theta00 wrapped")

    @property
    def cz_error_deg(self) -> float:
        """|theta_cz - pi| in degrees, measured the short way round."""
        return math.degrees(math.pi - abs(self.theta_cz))


class LeakageReport(BaseModel):
    """Leakage out of the computational subspace per input state."""

    model_config = ConfigDict(frozen=True)

    per_state: Tuple[float, float, float, float]
    l1: float = Field(ge=0.0, le=1.0)


class JazzModel(BaseModel):
    """
    JAZZ measurement model P0(t) = (1 - cos(zeta t / 2 + omega_b t + phi0)) / 2.

    Frequencies are in MHz (cycles per microsecond), durations in ns.
    """

    model_config = ConfigDict(frozen=True)

    zeta_mhz: float
    baseline_mhz: float = 0.0
    phi0: float = 0.0
    durations: List[float] = Field(min_length=1)
    baseline_mode: bool = False

    @model_validator(mode="after")
    def validate_model(self) -> "JazzModel":
        if any(t <= 0 for t in self.durations):
            raise ValueError("durations must be positive")
        if self.baseline_mode and not self.baseline_mhz > abs(self.zeta_mhz) / 2:
            raise ValueError("baseline mode requires omega_b > |zeta| / 2")
        return self

    @property
    def oscillation_mhz(self) -> float:
        """omega_m = zeta / 2 + omega_b."""
        return self.zeta_mhz / 2 + self.baseline_mhz


class JazzFit(BaseModel):
    """Frequency and phase recovered from JAZZ data."""

    model_config = ConfigDict(frozen=True)

    oscillation_mhz: float
    zeta_mhz: float
    phi0: float
    residual_rms: float


class OptimizerConfig(BaseModel):
    """Settings for the seeded (mu + lambda) evolutionary search."""

    model_config = ConfigDict(frozen=True)

    n_control: int = Field(default=20, ge=2)
    population: int = Field(default=20, ge=2, description="Offspring per epoch")
    parents: int = Field(default=5, ge=1, description="Survivors kept between epochs")
    epochs: int = Field(default=100, ge=1, description="Epoch budget")
    sigma0: float = Field(default=0.01, gt=0.0, description="Initial perturbation scale")
    sigma_decay: float = Field(default=0.97, gt=0.0, le=1.0)
    sigma_min: float = Field(default=1e-6, ge=0.0)
    target: float = Field(default=0.9999, ge=0.0, le=1.0)
    seed: int = Field(default=0, ge=0)
    max_workers: int = Field(default=1, ge=1)

    def sigma_at(self, epoch: int) -> float:
        return max(self.sigma0 * self.sigma_decay**epoch, self.sigma_min)


class TraceEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    epoch: int
    candidate: int
    objective: float


class OptimizationResult(BaseModel):
    """Best-seen waveform of an optimization run and its trace."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    waveform: Waveform
    best_objective: float
    controls: Optional[FloatArray] = None
    trace: List[TraceEntry] = Field(default_factory=list)
    best_per_epoch: List[float] = Field(default_factory=list)
    reached_target: bool = False

    def csv_rows(self):
        for entry in self.trace:
            yield entry.epoch, entry.candidate, entry.objective


class VZCalibration(BaseModel):
    """Virtual-Z phases from the repeated-pulse Ramsey fit and its refinement."""

    model_config = ConfigDict(frozen=True)

    theta1: float
    theta2: float
    ramsey_theta1: float
    ramsey_theta2: float
    refined_objective: float

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()
