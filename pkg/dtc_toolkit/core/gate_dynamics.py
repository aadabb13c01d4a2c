"""
Gate dynamics under a flux pulse.

This module integrates the Schroedinger equation of the DTC Hamiltonian
over a flux waveform in the retained idle-point eigenbasis and extracts the
CPHASE angles, leakage, virtual-Z corrections and average gate fidelity of
the resulting propagator.

Frame convention: propagators are reported in the interaction picture of
the idle Hamiltonian, with the global phase fixed on |0000>. Computational
states are ordered |00>, |01>, |10>, |11> with Q1 the first label.
"""

import logging
import math
from typing import Any, Dict, Optional, Union

import numpy as np
import scipy.linalg

from dtc_toolkit.core.circuit_model import bare_basis, build_hamiltonian, eigensolve, label_states
from dtc_toolkit.exceptions import (
    DomainError,
    LabelingError,
    NonAdiabaticError,
    StepSizeError,
)
from dtc_toolkit.models.circuit import COMPUTATIONAL_LABELS, BasisConfig, CircuitParams, HamiltonianOperator
from dtc_toolkit.models.gate import GatePhases, LeakageReport, Propagator
from dtc_toolkit.models.pulse import Waveform

# Setup logging
logger = logging.getLogger(__name__)

CZ = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

UNITARITY_TOLERANCE = 1e-8
MAX_EXCURSION = 0.25
DIAGONAL_DOMINANCE = 0.5


def wrap_phase(x: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    return x - 2.0 * math.pi * math.ceil((x - math.pi) / (2.0 * math.pi))


def _step_exponential(h: np.ndarray, step: float) -> np.ndarray:
    energies, vectors = scipy.linalg.eigh(h)
    return (vectors * np.exp(-2j * math.pi * energies * step)) @ vectors.conj().T


def evolve(
    params: Optional[CircuitParams],
    basis: Optional[BasisConfig],
    waveform: Waveform,
    idle_flux: float = 0.309,
    hamiltonian: Optional[HamiltonianOperator] = None,
    kept_total: Optional[int] = None,
    substeps: int = 4,
    max_excursion: float = MAX_EXCURSION,
    flux_offset: float = 0.0,
) -> Propagator:
    """
    Propagator of a flux pulse applied on top of the idle bias.

    Each sample interval is split into ``substeps`` piecewise-constant
    steps evaluated at their midpoints on the linearly interpolated
    waveform.

    Args:
        params: Circuit parameters (unused when hamiltonian is given)
        basis: Truncation settings
        waveform: Flux excursion from the idle point
        idle_flux: Idle reduced flux
        hamiltonian: Prebuilt operator
        kept_total: Retained idle eigenstates; basis.kept_total by default
        substeps: Integrator sub-steps per sample interval
        max_excursion: Largest allowed |waveform| sample
        flux_offset: Quasi-static flux offset added to the Hamiltonian only;
            the basis and frame stay at the idle point

    Raises:
        DomainError: If the waveform leaves the allowed excursion or does
            not start and end at the idle point
        LabelingError: If a computational state is missing from the basis
        StepSizeError: If the product drifts from unitarity
    """
    samples = waveform.samples
    peak = float(np.max(np.abs(samples)))
    if peak > max_excursion:
        raise DomainError(
            f"Waveform excursion {peak:.4g} exceeds {max_excursion}", parameter="waveform", value=peak
        )
    if abs(samples[0]) > 1e-12 or abs(samples[-1]) > 1e-12:
        raise DomainError("Waveform must start and end at the idle point", parameter="waveform")
    if substeps < 1:
        raise DomainError("substeps must be positive", parameter="substeps", value=substeps)

    ham = hamiltonian or build_hamiltonian(params, basis)
    k = min(kept_total or (basis or BasisConfig()).kept_total, ham.dimension)
    idle_energies, vectors = eigensolve(ham, idle_flux, k)

    if ham.has_subsystems:
        labels = label_states(vectors, bare_basis(ham, idle_flux), idle_flux)
        comp = []
        for label in COMPUTATIONAL_LABELS:
            idx = labels.index_of(label)
            if idx is None:
                raise LabelingError(
                    f"Computational state {label} not among the {k} retained states",
                    label=label,
                    flux=idle_flux,
                )
            comp.append(idx)
        comp_indices = tuple(comp)
        state_labels = labels.labels
    else:
        comp_indices = (0, 1, 2, 3)
        state_labels = None

    h0 = vectors.conj().T @ ham.h0 @ vectors
    a = vectors.conj().T @ ham.a @ vectors
    b = vectors.conj().T @ ham.b @ vectors

    step = waveform.dt / substeps
    offsets = (np.arange(substeps) + 0.5) / substeps
    u = np.eye(k, dtype=complex)
    for j in range(samples.size - 1):
        for frac in offsets:
            flux = idle_flux + flux_offset + samples[j] + frac * (samples[j + 1] - samples[j])
            angle = 2.0 * math.pi * flux
            h = h0 + math.cos(angle) * a + math.sin(angle) * b
            u = _step_exponential(0.5 * (h + h.conj().T), step) @ u

    drift = float(np.max(np.abs(u.conj().T @ u - np.eye(k))))
    if drift > UNITARITY_TOLERANCE:
        raise StepSizeError(
            f"Propagator drifted from unitarity by {drift:.3g}; reduce the step",
            unitarity_error=drift,
            dt=step,
        )

    duration = waveform.duration
    frame = np.exp(2j * math.pi * idle_energies * duration)
    interaction = frame[:, None] * u
    global_phase = float(np.angle(interaction[comp_indices[0], comp_indices[0]]))
    n_steps = (samples.size - 1) * substeps
    logger.debug(f"Evolved {n_steps} steps over {duration} ns in a {k}-state basis")
    return Propagator(
        matrix=interaction * np.exp(-1j * global_phase),
        lab_matrix=u,
        comp_indices=comp_indices,
        energies=idle_energies,
        labels=state_labels,
        dt=waveform.dt,
        steps=n_steps,
        duration=duration,
        idle_flux=idle_flux,
        global_phase=global_phase,
    )


def _block(u: Union[Propagator, np.ndarray]) -> np.ndarray:
    if isinstance(u, Propagator):
        return u.comp_block
    return np.asarray(u, dtype=complex)[:4, :4]


def cphase_angles(u: Union[Propagator, np.ndarray]) -> GatePhases:
    """
    Diagonal phases and conditional phase of the computational block.

    Raises:
        NonAdiabaticError: If any computational diagonal element has
            magnitude 0.5 or less
    """
    diag = np.diag(_block(u))
    magnitudes = np.abs(diag)
    if np.any(magnitudes <= DIAGONAL_DOMINANCE):
        raise NonAdiabaticError(
            "Computational block is not diagonally dominant",
            diagonal_magnitudes=magnitudes,
        )
    t00, t01, t10, t11 = (float(x) for x in np.angle(diag))
    return GatePhases(
        theta00=t00,
        theta01=t01,
        theta10=t10,
        theta11=t11,
        theta_cz=wrap_phase(t11 - t10 - t01 + t00),
        theta1=wrap_phase(t10 - t00),
        theta2=wrap_phase(t01 - t00),
    )


def leakage_of(u: Union[Propagator, np.ndarray]) -> LeakageReport:
    """Population leaving the computational subspace for each computational input."""
    if isinstance(u, Propagator):
        matrix, comp = u.matrix, np.asarray(u.comp_indices)
    else:
        matrix, comp = np.asarray(u, dtype=complex), np.arange(4)
    kept = np.sum(np.abs(matrix[np.ix_(comp, comp)]) ** 2, axis=0)
    per_state = np.clip(1.0 - kept, 0.0, 1.0)
    return LeakageReport(
        per_state=tuple(float(x) for x in per_state), l1=float(per_state.mean())
    )


def vz_correction(theta1: float, theta2: float) -> np.ndarray:
    return np.diag(
        [1.0, np.exp(-1j * theta2), np.exp(-1j * theta1), np.exp(-1j * (theta1 + theta2))]
    )


def apply_vz(u: Union[Propagator, np.ndarray], theta1: float, theta2: float) -> np.ndarray:
    """Computational block after virtual-Z correction, global phase fixed on |00>."""
    block = vz_correction(theta1, theta2) @ _block(u)
    pivot = block[0, 0]
    if abs(pivot) > 0:
        block = block * (abs(pivot) / pivot)
    return block


def average_gate_fidelity(m: np.ndarray, target: Optional[np.ndarray] = None) -> float:
    """
    Average gate fidelity (Tr(M^dagger M) + |Tr M|^2) / (d (d + 1)).

    Args:
        m: Computational block, possibly subnormalized by leakage
        target: Ideal gate; M is replaced by target^dagger M when given

    Raises:
        DomainError: If M has operator norm above 1
    """
    m = np.asarray(m, dtype=complex)
    if target is not None:
        m = np.asarray(target, dtype=complex).conj().T @ m
    norm = float(np.linalg.norm(m, 2))
    if norm > 1.0 + 1e-9:
        raise DomainError("Operator norm exceeds 1", parameter="m", value=norm)
    d = m.shape[0]
    return float((np.trace(m.conj().T @ m).real + abs(np.trace(m)) ** 2) / (d * (d + 1)))


def cz_fidelity(u: Union[Propagator, np.ndarray]) -> float:
    """Average CZ fidelity after the optimal virtual-Z correction."""
    phases = cphase_angles(u)
    return average_gate_fidelity(apply_vz(u, phases.theta1, phases.theta2), CZ)


def gate_report(
    u: Propagator, theta1: Optional[float] = None, theta2: Optional[float] = None
) -> Dict[str, Any]:
    """
    Summary of a CZ propagator.

    Single-qubit phases default to those read from the diagonal.
    """
    phases = cphase_angles(u)
    theta1 = phases.theta1 if theta1 is None else theta1
    theta2 = phases.theta2 if theta2 is None else theta2
    return {
        "theta_cz_rad": phases.theta_cz,
        "theta1_rad": theta1,
        "theta2_rad": theta2,
        "leakage_l1": leakage_of(u).l1,
        "fidelity": average_gate_fidelity(apply_vz(u, theta1, theta2), CZ),
        "dt_ns": u.dt,
        "steps": u.steps,
    }
