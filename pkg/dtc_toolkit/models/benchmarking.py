"""
Benchmarking models for the DTC toolkit.

This module defines the isotropic leakage/depolarizing error model used for
randomized benchmarking, RB datasets, fit results and the CZ-gate metrics
extracted from standard and interleaved runs.
"""

from typing import Any, Dict, List, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dtc_toolkit.models.types import FloatArray, IntArray


class LeakageErrorModel(BaseModel):
    """
    Per-Clifford error model.

    Each step leaks population L1 out of the computational subspace,
    returns L2 of the leaked population, and depolarizes the remaining
    computational population with probability p_D. gamma and l20 bias the
    measured probabilities; p_id0 and p_x1_0 are the prepared values.
    """

    model_config = ConfigDict(frozen=True)

    l1: float = Field(default=0.0, ge=0.0, le=1.0)
    l2: float = Field(default=0.0, ge=0.0, le=1.0)
    p_d: float = Field(default=0.0, ge=0.0, le=1.0)
    gamma: float = Field(default=0.0, ge=0.0, le=1.0)
    l20: float = Field(default=0.0, ge=0.0, le=1.0)
    p_id0: float = Field(default=1.0, ge=0.0, le=1.0)
    p_x1_0: float = Field(default=1.0, ge=0.0, le=1.0)
    dim: int = Field(default=4, ge=2)

    @model_validator(mode="after")
    def validate_rates(self) -> "LeakageErrorModel":
        if self.l1 + self.l2 > 1.0:
            raise ValueError("l1 + l2 must not exceed 1")
        if self.p_id0 > self.p_x1_0 + 1e-15:
            raise ValueError("p_id0 cannot exceed p_x1_0")
        return self

    @property
    def lambda_l(self) -> float:
        return 1.0 - self.l1 - self.l2

    @property
    def lambda_r(self) -> float:
        return (1.0 - self.l1) * (1.0 - self.p_d)

    def compose(self, then: "LeakageErrorModel") -> "LeakageErrorModel":
        """
        Exact single-step model of this step followed by ``then``.

        SPAM fields are kept from self.
        """
        lam_l = self.lambda_l * then.lambda_l
        l2 = then.lambda_l * self.l2 + then.l2
        l1 = 1.0 - lam_l - l2
        lam_r = self.lambda_r * then.lambda_r
        p_d = 1.0 - lam_r / (1.0 - l1) if l1 < 1.0 else 0.0
        return self.model_copy(
            update={"l1": max(l1, 0.0), "l2": l2, "p_d": min(max(p_d, 0.0), 1.0)}
        )


class RBDataset(BaseModel):
    """Per-sequence survival probabilities of an RB experiment."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m_values: IntArray
    p_id: FloatArray = Field(description="Shape (n_m, n_seq)")
    p_x1: FloatArray = Field(description="Shape (n_m, n_seq)")
    variant: Literal["SRB", "IRB"] = "SRB"
    shots: int = Field(default=0, ge=0, description="Shots per sequence; 0 for exact probabilities")
    dim: int = Field(default=4, ge=2)

    @field_validator("p_id", "p_x1")
    @classmethod
    def as_columns(cls, v: np.ndarray) -> np.ndarray:
        return v.reshape(-1, 1) if v.ndim == 1 else v

    @model_validator(mode="after")
    def validate_dataset(self) -> "RBDataset":
        if np.any(np.diff(self.m_values) <= 0):
            raise ValueError("m_values must be strictly increasing")
        for name in ("p_id", "p_x1"):
            arr = getattr(self, name)
            if arr.shape[0] != self.m_values.size:
                raise ValueError(f"{name} must have one row per m value")
            if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
                raise ValueError(f"{name} probabilities must lie in [0, 1]")
        if self.p_id.shape != self.p_x1.shape:
            raise ValueError("p_id and p_x1 must share one shape")
        return self

    @property
    def n_sequences(self) -> int:
        return int(self.p_id.shape[1])

    @property
    def p_id_mean(self) -> np.ndarray:
        return self.p_id.mean(axis=1)

    @property
    def p_x1_mean(self) -> np.ndarray:
        return self.p_x1.mean(axis=1)

    @property
    def p_id_std(self) -> np.ndarray:
        return self.p_id.std(axis=1)

    @property
    def p_x1_std(self) -> np.ndarray:
        return self.p_x1.std(axis=1)

    def csv_rows(self):
        for i, m in enumerate(self.m_values):
            for s in range(self.n_sequences):
                yield self.variant, int(m), s, float(self.p_id[i, s]), float(self.p_x1[i, s])


class FitResult(BaseModel):
    """
    Fitted leakage and survival decays.

    P_X1 = A_M + B_M lambda_L^m and P_id - P_X1 / d = C_M lambda_r^m + D_M.
    """

    model_config = ConfigDict(frozen=True)

    lambda_l: float
    a_m: float
    b_m: float
    lambda_r: float
    c_m: float
    d_m: float
    stderr: Dict[str, float] = Field(default_factory=dict)
    degenerate_leakage: bool = False
    dim: int = 4

    @property
    def leakage_rate(self) -> float:
        """L1 = (1 - A)(1 - lambda_L)."""
        return (1.0 - self.a_m) * (1.0 - self.lambda_l)

    @property
    def error_rate(self) -> float:
        """r = (1 - lambda_r)(1 - 1/d)."""
        return (1.0 - self.lambda_r) * (1.0 - 1.0 / self.dim)


class CZMetrics(BaseModel):
    """CZ-gate metrics from a pair of SRB and IRB fits."""

    model_config = ConfigDict(frozen=True)

    l1_cz: float
    lambda_r_cz: float
    r_cz: float
    p_d_cz: float
    r_d_cz: float
    f_bar: float = Field(description="(d-1)/d lambda_r_CZ + (1 - L1_CZ)/d")
    f_bar_from_errors: float = Field(description="1 - L1_CZ/d - r_CZ")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class GateLengthRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    length_ns: float
    r_cz: float
    l1_cz: float
    r_d_cz: float
    outlier: bool = False


class GateLengthStudy(BaseModel):
    """Depolarizing error against gate length with its linear fit."""

    model_config = ConfigDict(frozen=True)

    rows: List[GateLengthRow]
    slope_per_ns: float
    intercept: float
    t_eff_us: float
    pearson_r: float
    outliers: List[float] = Field(default_factory=list, description="Lengths flagged as outliers")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()
