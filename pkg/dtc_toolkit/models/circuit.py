"""
Circuit models for the DTC toolkit.

This module defines the value types describing the four-transmon circuit
(two data qubits and the two coupler transmons), the truncated Hamiltonian,
flux-resolved spectra, the p/m-mode toy model and the ZZ-interaction
results derived from them.

Units: capacitances in fF, critical currents in nA, energies as
frequencies in GHz, flux as the reduced value phi_ex / 2pi.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dtc_toolkit.models.types import ComplexArray, FloatArray, IntArray, label_string

Label = Tuple[int, int, int, int]

# Computational product states |Q1, Q2, P, M> in the order 00, 01, 10, 11
COMPUTATIONAL_LABELS: Tuple[Label, ...] = (
    (0, 0, 0, 0),
    (0, 1, 0, 0),
    (1, 0, 0, 0),
    (1, 1, 0, 0),
)

MUTUAL_KEYS = ("C12", "C13", "C14", "C23", "C24", "C34")


class CircuitParams(BaseModel):
    """
    Circuit parameters of the two-qubit DTC device.

    Node order is Q1, Q2, coupler node 3, coupler node 4. The fifth
    junction closes the coupler loop between nodes 3 and 4.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    cap_matrix: FloatArray = Field(
        description="Symmetric 4x4 matrix of node (diagonal) and mutual capacitances in fF"
    )
    critical_currents: FloatArray = Field(
        description="Critical currents I_c1..I_c5 in nA"
    )

    @field_validator("cap_matrix")
    @classmethod
    def validate_cap_matrix(cls, v: np.ndarray) -> np.ndarray:
        if v.shape != (4, 4):
            raise ValueError(f"cap_matrix must be 4x4, got shape {v.shape}")
        if not np.allclose(v, v.T, rtol=0.0, atol=1e-12):
            raise ValueError("cap_matrix must be symmetric")
        if np.any(np.diag(v) <= 0):
            raise ValueError("node capacitances C_ii must be positive")
        if np.any(v[~np.eye(4, dtype=bool)] < 0):
            raise ValueError("mutual capacitances C_ij must be non-negative")
        return v

    @field_validator("critical_currents")
    @classmethod
    def validate_currents(cls, v: np.ndarray) -> np.ndarray:
        if v.shape != (5,):
            raise ValueError(f"critical_currents must have 5 entries, got {v.shape}")
        if np.any(v <= 0):
            raise ValueError("critical currents must be positive")
        return v

    @classmethod
    def from_table(
        cls,
        node_caps: Sequence[float],
        mutual_caps: Dict[str, float],
        critical_currents: Sequence[float],
    ) -> "CircuitParams":
        """
        Build parameters from the tabulated form.

        Args:
            node_caps: C11, C22, C33, C44 in fF
            mutual_caps: mapping with keys C12, C13, C14, C23, C24, C34 (fF);
                missing keys are zero
            critical_currents: I_c1..I_c5 in nA
        """
        cap = np.diag(np.asarray(node_caps, dtype=float))
        for key in MUTUAL_KEYS:
            i, j = int(key[1]) - 1, int(key[2]) - 1
            cap[i, j] = cap[j, i] = float(mutual_caps.get(key, 0.0))
        return cls(cap_matrix=cap, critical_currents=critical_currents)

    def mutual(self, i: int, j: int) -> float:
        """Mutual capacitance between 1-based nodes i and j."""
        return float(self.cap_matrix[i - 1, j - 1])

    def replace(
        self,
        node_caps: Optional[Dict[int, float]] = None,
        mutual_caps: Optional[Dict[str, float]] = None,
        currents: Optional[Dict[int, float]] = None,
    ) -> "CircuitParams":
        """
        Return a validated copy with selected entries replaced.

        Args:
            node_caps: 1-based node index -> C_ii
            mutual_caps: key such as "C13" -> value
            currents: 1-based junction index -> I_c
        """
        cap = self.cap_matrix.copy()
        ic = self.critical_currents.copy()
        for node, value in (node_caps or {}).items():
            cap[node - 1, node - 1] = value
        for key, value in (mutual_caps or {}).items():
            i, j = int(key[1]) - 1, int(key[2]) - 1
            cap[i, j] = cap[j, i] = value
        for junction, value in (currents or {}).items():
            ic[junction - 1] = value
        return CircuitParams(cap_matrix=cap, critical_currents=ic)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cap_matrix": self.cap_matrix.tolist(),
            "critical_currents": self.critical_currents.tolist(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CircuitParams":
        """
        Create parameters from a dictionary.

        Accepts either the matrix form (cap_matrix, critical_currents) or
        the tabulated form (node_caps, mutual_caps, critical_currents).
        """
        if "cap_matrix" in data:
            return cls(
                cap_matrix=data["cap_matrix"],
                critical_currents=data["critical_currents"],
            )
        return cls.from_table(
            data["node_caps"], data.get("mutual_caps", {}), data["critical_currents"]
        )


class BasisConfig(BaseModel):
    """Truncation settings for the two-stage charge-basis construction."""

    model_config = ConfigDict(frozen=True)

    charge_cutoff_qubit: int = Field(
        default=15, ge=2, description="Qubit charge states span -N_q..N_q"
    )
    charge_cutoff_coupler: int = Field(
        default=16, ge=2, description="Charge states per coupler node span -N_c..N_c"
    )
    kept_levels_qubit: int = Field(
        default=6, ge=3, description="Eigenstates kept per qubit"
    )
    kept_levels_coupler: int = Field(
        default=12, ge=6, description="Coupler eigenstates kept at the reference flux"
    )
    kept_total: int = Field(
        default=60, ge=20, description="Eigenstates retained for dynamics"
    )
    reference_flux: float = Field(
        default=0.309, description="Flux (phi_ex/2pi) at which the coupler basis is built"
    )
    edge_tolerance: float = Field(
        default=1e-6,
        gt=0.0,
        description="Maximum weight of a kept subsystem state on the outermost charge states",
    )

    @model_validator(mode="after")
    def validate_levels(self) -> "BasisConfig":
        if self.kept_levels_qubit > 2 * self.charge_cutoff_qubit + 1:
            raise ValueError("kept_levels_qubit exceeds the qubit charge basis")
        if self.kept_levels_coupler > (2 * self.charge_cutoff_coupler + 1) ** 2:
            raise ValueError("kept_levels_coupler exceeds the coupler charge basis")
        return self

    def enlarged(self, step: int = 2) -> "BasisConfig":
        """Return the basis with every cutoff and kept count increased by step."""
        return self.model_copy(
            update={
                "charge_cutoff_qubit": self.charge_cutoff_qubit + step,
                "charge_cutoff_coupler": self.charge_cutoff_coupler + step,
                "kept_levels_qubit": self.kept_levels_qubit + step,
                "kept_levels_coupler": self.kept_levels_coupler + step,
            }
        )


class HamiltonianOperator(BaseModel):
    """
    Flux-decomposed Hamiltonian H(phi) = H0 + cos(2 pi phi) A + sin(2 pi phi) B.

    The optional subsystem fields describe the retained product basis
    Q1 x Q2 x coupler and are filled in by the circuit builder; a bare
    operator (only h0, a, b) is also valid.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    h0: ComplexArray
    a: ComplexArray
    b: ComplexArray
    dims: Optional[Tuple[int, int, int]] = Field(
        default=None, description="Retained dimensions (Q1, Q2, coupler)"
    )
    qubit_energies: Optional[List[FloatArray]] = None
    coupler_h0: Optional[ComplexArray] = None
    coupler_a: Optional[ComplexArray] = None
    coupler_b: Optional[ComplexArray] = None
    coupler_n_plus: Optional[ComplexArray] = None
    coupler_n_minus: Optional[ComplexArray] = None

    @model_validator(mode="after")
    def validate_shapes(self) -> "HamiltonianOperator":
        shape = self.h0.shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise ValueError("h0 must be a square matrix")
        if self.a.shape != shape or self.b.shape != shape:
            raise ValueError("h0, a and b must share one shape")
        if self.dims is not None and int(np.prod(self.dims)) != shape[0]:
            raise ValueError("dims do not multiply to the operator dimension")
        return self

    @property
    def dimension(self) -> int:
        return int(self.h0.shape[0])

    @property
    def has_subsystems(self) -> bool:
        return self.dims is not None and self.coupler_h0 is not None

    def at(self, flux: float) -> np.ndarray:
        """Assemble H at reduced flux phi_ex/2pi."""
        angle = 2.0 * np.pi * flux
        return self.h0 + np.cos(angle) * self.a + np.sin(angle) * self.b

    def coupler_at(self, flux: float) -> np.ndarray:
        """Assemble the retained coupler block at reduced flux phi_ex/2pi."""
        if self.coupler_h0 is None:
            raise ValueError("operator carries no coupler block")
        angle = 2.0 * np.pi * flux
        return self.coupler_h0 + np.cos(angle) * self.coupler_a + np.sin(angle) * self.coupler_b


class StateLabels(BaseModel):
    """Product-state labels assigned to a set of eigenvectors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    labels: List[Label]
    overlaps: FloatArray = Field(description="Squared overlap with the assigned product state")
    ambiguous: List[bool]
    warnings: List[str] = Field(default_factory=list)

    def index_of(self, label: Sequence[int]) -> Optional[int]:
        """Position of the eigenvector carrying label, or None."""
        label = tuple(int(n) for n in label)
        for i, assigned in enumerate(self.labels):
            if assigned == label:
                return i
        return None


class EnergySpectrum(BaseModel):
    """
    Flux-resolved spectrum.

    ``energies`` rows are ascending eigenenergies (ground state at 0) at each
    flux point; ``tracked_energies`` follows each branch of the first point
    adiabatically, column b holding branch b.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    flux_points: FloatArray
    energies: FloatArray
    labels: List[List[Label]]
    overlaps: FloatArray
    tracked_energies: FloatArray
    branch_index: IntArray
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def validate_shapes(self) -> "EnergySpectrum":
        n = len(self.flux_points)
        if self.energies.shape[0] != n or len(self.labels) != n:
            raise ValueError("energies and labels must have one row per flux point")
        if self.tracked_energies.shape != self.energies.shape:
            raise ValueError("tracked_energies must match energies")
        return self

    @property
    def n_states(self) -> int:
        return int(self.energies.shape[1])

    def energy_of(self, label: Sequence[int]) -> FloatArray:
        """Energy of the state carrying label at every flux point (NaN if absent)."""
        label = tuple(int(n) for n in label)
        out = np.full(len(self.flux_points), np.nan)
        for i, row in enumerate(self.labels):
            for j, assigned in enumerate(row):
                if assigned == label:
                    out[i] = self.energies[i, j]
        return out

    def csv_rows(self):
        for i, flux in enumerate(self.flux_points):
            for j in range(self.n_states):
                yield (
                    float(flux),
                    label_string(self.labels[i][j]),
                    float(self.energies[i, j]),
                    float(self.overlaps[i, j]),
                )


class ToyParams(BaseModel):
    """
    Parameters of the p/m-mode toy model.

    Couplings are magnitudes; the relative minus sign of the m-mode path
    is applied by the effective-coupling formula.
    """

    model_config = ConfigDict(frozen=True)

    qubit_freqs: Tuple[float, float]
    anharmonicities: Tuple[float, float]
    omega_p: float
    omega_m: float
    g_1p: float = Field(ge=0.0)
    g_2p: float = Field(ge=0.0)
    g_1m: float = Field(ge=0.0)
    g_2m: float = Field(ge=0.0)
    c_q: Tuple[float, float] = Field(description="Qubit shunt capacitances (fF)")
    c_g: Tuple[float, float] = Field(description="Qubit-coupler capacitances (fF)")
    c_c: float = Field(description="Symmetrized coupler node capacitance (fF)")
    c_34: float = Field(description="Coupler mutual capacitance (fF)")
    c_p: float = Field(description="Effective p-mode capacitance (fF)")
    c_m: float = Field(description="Effective m-mode capacitance (fF)")
    c_gp: float = Field(description="Effective qubit-p-mode coupling capacitance (fF)")
    c_gm: float = Field(description="Effective qubit-m-mode coupling capacitance (fF)")
    e_j: float = Field(gt=0.0, description="Symmetrized coupler junction energy (GHz)")
    alpha: float = Field(ge=0.0, lt=1.0, description="E_J5 / E_J")
    flux: float = Field(description="Reduced flux at which omega_m was evaluated")
    asymmetry: float = Field(ge=0.0, description="Largest relative coupler asymmetry")

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class PotentialSurface(BaseModel):
    """Exact and approximated coupler potentials on a (phi_p, phi_m) grid."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    phi_p: FloatArray
    phi_m: FloatArray
    v_exact: FloatArray
    v_approx: FloatArray

    @property
    def difference(self) -> np.ndarray:
        return self.v_exact - self.v_approx

    def csv_rows(self):
        diff = self.difference
        for i, p in enumerate(self.phi_p):
            for j, m in enumerate(self.phi_m):
                yield (
                    float(p),
                    float(m),
                    float(self.v_exact[i, j]),
                    float(self.v_approx[i, j]),
                    float(diff[i, j]),
                )


class ZZCurve(BaseModel):
    """ZZ interaction over a flux grid, in MHz (zeta / 2pi, signed)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    flux_points: FloatArray
    zeta: FloatArray

    @model_validator(mode="after")
    def validate_lengths(self) -> "ZZCurve":
        if self.flux_points.shape != self.zeta.shape or self.zeta.size == 0:
            raise ValueError("flux_points and zeta must be non-empty and equally long")
        return self

    @property
    def idle_index(self) -> int:
        return int(np.argmin(np.abs(self.zeta)))

    @property
    def max_index(self) -> int:
        return int(np.argmax(np.abs(self.zeta)))

    @property
    def idle_point(self) -> float:
        return float(self.flux_points[self.idle_index])

    @property
    def max_point(self) -> float:
        return float(self.flux_points[self.max_index])

    @property
    def onoff_ratio(self) -> float:
        """|zeta_max / zeta_min|; infinite when zeta vanishes at the idle point."""
        zeta_min = abs(float(self.zeta[self.idle_index]))
        zeta_max = abs(float(self.zeta[self.max_index]))
        if zeta_min == 0.0:
            return float("inf") if zeta_max > 0.0 else 1.0
        return zeta_max / zeta_min

    def csv_rows(self):
        for flux, zeta in zip(self.flux_points, self.zeta):
            yield float(flux), float(zeta)


class SearchSpec(BaseModel):
    """
    Grid specification for the staged coupler parameter search.

    Stage one sweeps (C_c, E_Jc) at ``alpha_fixed``; stage two sweeps
    (E_Jc, alpha) at the best C_c of stage one. Each cell sets
    C13 = C24 = C_g, C33 = C44 = C_c, I_c3 = I_c4 from E_Jc and
    I_c5 = alpha * I_c3; the qubit entries come from ``base``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    base: CircuitParams
    c_g: float = Field(gt=0.0, description="Qubit-coupler capacitance (fF)")
    c_c_values: List[float] = Field(min_length=1)
    e_jc_values: List[float] = Field(min_length=1, description="Coupler E_J grid (GHz)")
    alpha_values: List[float] = Field(min_length=1)
    alpha_fixed: float = Field(gt=0.0, lt=1.0)
    stray_caps: Dict[str, float] = Field(
        default_factory=dict, description="Fixed C12, C14, C23, C34 (fF)"
    )
    flux_grid: List[float] = Field(min_length=2)
    max_zeta_min_khz: float = Field(
        default=20.0, gt=0.0, description="Largest tolerated |zeta| at the idle point (kHz)"
    )
    min_zeta_max_mhz: float = Field(
        default=50.0, gt=0.0, description="Smallest required |zeta| at the operating point (MHz)"
    )

    @field_validator("alpha_values")
    @classmethod
    def validate_alpha(cls, v: List[float]) -> List[float]:
        if any(not 0.0 < a < 1.0 for a in v):
            raise ValueError("alpha values must lie in (0, 1)")
        return v


class SearchCell(BaseModel):
    """One evaluated grid cell of the parameter search."""

    model_config = ConfigDict(frozen=True)

    stage: int
    c_g: float
    c_c: float
    e_jc: float
    alpha: float
    zeta_min_khz: float
    zeta_max_mhz: float
    feasible: bool
    score: float


class SearchResult(BaseModel):
    """Outcome of the staged parameter search."""

    model_config = ConfigDict(frozen=True)

    stage_one: List[SearchCell]
    stage_two: List[SearchCell]
    candidates: List[SearchCell] = Field(description="Feasible cells, best first")
    nearest_misses: List[SearchCell] = Field(default_factory=list)
    best_c_c: float

    @property
    def feasible(self) -> bool:
        return len(self.candidates) > 0


class BareBasis(BaseModel):
    """Product states of the uncoupled subsystems at one flux point."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    vectors: ComplexArray = Field(description="Columns are product states in the retained basis")
    labels: List[Label]
    energies: FloatArray

    @model_validator(mode="after")
    def validate_sizes(self) -> "BareBasis":
        if self.vectors.shape[1] != len(self.labels) or len(self.labels) != self.energies.size:
            raise ValueError("one label and one energy per bare vector are required")
        return self
