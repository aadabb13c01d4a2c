"""
Noise models for the DTC toolkit.

This module defines Kraus-operator channels and the parameter and result
types of the incoherent-error and flux-noise estimates. Coherence times
are in microseconds, gate times in nanoseconds.
"""

import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from dtc_toolkit.models.types import FloatArray


class KrausSet(BaseModel):
    """Channel rho -> sum_k K_k rho K_k^dagger."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operators: List[np.ndarray] = Field(min_length=1)
    label: str = ""

    @field_validator("operators", mode="before")
    @classmethod
    def validate_operators(cls, v) -> List[np.ndarray]:
        ops = [np.asarray(k, dtype=complex) for k in v]
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError("Kraus operators must be square")
        if any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must share one dimension")
        return ops

    @property
    def dimension(self) -> int:
        return int(self.operators[0].shape[0])

    @property
    def completeness_error(self) -> float:
        total = sum(k.conj().T @ k for k in self.operators)
        return float(np.max(np.abs(total - np.eye(self.dimension))))

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.operators)


class NoiseParams(BaseModel):
    """Coherence parameters entering the incoherent CZ error."""

    model_config = ConfigDict(frozen=True)

    t1: Tuple[float, float] = Field(description="T1 of Q1 and Q2 (us)")
    t_phi: Tuple[float, float] = Field(description="Pure dephasing times of Q1 and Q2 (us)")
    t_cz: float = Field(default=math.inf, description="CZ-correlated dephasing time (us)")
    gate_time: float = Field(gt=0.0, description="Gate duration (ns)")

    @field_validator("t1", "t_phi")
    @classmethod
    def validate_pair(cls, v: Tuple[float, float]) -> Tuple[float, float]:
        if any(not t > 0 for t in v):
            raise ValueError("coherence times must be positive")
        return v

    @field_validator("t_cz")
    @classmethod
    def validate_t_cz(cls, v: float) -> float:
        if not v > 0:
            raise ValueError("t_cz must be positive")
        return v


class IncoherentEstimate(BaseModel):
    """Term-by-term incoherent CZ error and the equivalent effective time."""

    model_config = ConfigDict(frozen=True)

    terms: Dict[str, float]
    total: float
    t_eff: float = Field(description="Effective coherence time (us); inf without noise")


class FluxNoiseParams(BaseModel):
    """1/f flux-noise description, S_Phi(f) = A_Phi / f."""

    model_config = ConfigDict(frozen=True)

    amplitude: float = Field(default=4.84, ge=0.0, description="sqrt(A_Phi) in micro flux quanta")
    sensitivity: Optional[float] = Field(default=None, description="d omega / d phi_ex (GHz/rad)")
    samples: int = Field(default=200, ge=1)
    seed: int = Field(default=0, ge=0)
    f_low: float = Field(default=1.0, gt=0.0, description="Lower band edge (Hz)")
    f_high: float = Field(default=1.0e7, gt=0.0, description="Upper band edge (Hz)")
    max_workers: int = Field(default=1, ge=1)

    @property
    def offset_std(self) -> float:
        """
        Standard deviation of the quasi-static offset in reduced flux units.

        The two-sided convention integrates A_Phi / |f| over both signs of
        frequency, giving sigma^2 = 2 A_Phi ln(f_high / f_low).
        """
        if self.f_high <= self.f_low:
            return 0.0
        a_phi = (self.amplitude * 1e-6) ** 2
        return math.sqrt(2.0 * a_phi * math.log(self.f_high / self.f_low))


class FluxNoiseResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    offsets: FloatArray
    errors: FloatArray
    mean: float
    std: float
    nominal_infidelity: float


class ErrorBudget(BaseModel):
    """Composed incoherent error of all channels next to the linear estimate."""

    model_config = ConfigDict(frozen=True)

    contributions: Dict[str, float]
    linear_total: float
    composed_total: float
    t_eff: float
