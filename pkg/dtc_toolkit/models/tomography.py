"""
Tomography models for the DTC toolkit.

This module defines the Pauli transfer matrix, the simulated process
tomography dataset and the readout SPAM model.
"""

from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from dtc_toolkit.models.types import FloatArray


class PauliTransferMatrix(BaseModel):
    """
    Real 16x16 PTM over normalized two-qubit Paulis.

    Row and column order is {I, X, Y, Z} x {I, X, Y, Z} with Q1 the first
    factor.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: FloatArray

    @field_validator("matrix")
    @classmethod
    def validate_matrix(cls, v: np.ndarray) -> np.ndarray:
        if v.shape != (16, 16):
            raise ValueError(f"PTM must be 16x16, got {v.shape}")
        return v

    @property
    def trace_preservation_error(self) -> float:
        expected = np.zeros(16)
        expected[0] = 1.0
        return float(np.max(np.abs(self.matrix[0] - expected)))


class SpamModel(BaseModel):
    """
    Readout assignment matrices per qubit.

    Column n of each matrix holds P(measured m | prepared n).
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    assignment: List[FloatArray] = Field(min_length=2, max_length=2)

    @field_validator("assignment")
    @classmethod
    def validate_assignment(cls, v: List[np.ndarray]) -> List[np.ndarray]:
        for m in v:
            if m.shape != (2, 2):
                raise ValueError("assignment matrices must be 2x2")
            if np.any(m < 0) or not np.allclose(m.sum(axis=0), 1.0, atol=1e-9):
                raise ValueError("assignment matrices must be column-stochastic")
        return v

    @property
    def joint(self) -> np.ndarray:
        """4x4 assignment over outcomes 00, 01, 10, 11."""
        return np.kron(self.assignment[0], self.assignment[1])


class QPTDataset(BaseModel):
    """
    Outcome probabilities of 36 preparations x 9 axis settings x 4 outcomes.

    ``probabilities[j, s, k]`` is the probability of outcome k
    (00, 01, 10, 11) after preparation j and measurement setting s.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probabilities: FloatArray
    spam: Optional[SpamModel] = None

    @field_validator("probabilities")
    @classmethod
    def validate_probabilities(cls, v: np.ndarray) -> np.ndarray:
        if v.shape != (36, 9, 4):
            raise ValueError(f"expected shape (36, 9, 4), got {v.shape}")
        if np.any(v < -1e-12) or np.any(v > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        return v

    @property
    def table(self) -> np.ndarray:
        """Flattened 36 x 36 preparation by projector table."""
        return self.probabilities.reshape(36, 36)
