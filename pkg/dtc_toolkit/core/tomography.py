"""
Quantum process tomography.

This module provides the Pauli transfer matrix of two-qubit channels, the
simulated 36-preparation by 36-projector tomography experiment with readout
errors, the linear-inversion reconstruction with CP/TP projection and the
PTM gate fidelity.
"""

import logging
from itertools import product
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from dtc_toolkit.core.clifford import IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z, SINGLE_QUBIT_GATES
from dtc_toolkit.exceptions import DomainError, InversionError
from dtc_toolkit.models.noise import KrausSet
from dtc_toolkit.models.tomography import PauliTransferMatrix, QPTDataset, SpamModel

# Setup logging
logger = logging.getLogger(__name__)

DIM = 4
MAX_CONDITION = 1e8
PROJECTION_ITERATIONS = 100
PSD_TOLERANCE = 1e-12

_SINGLE_PAULIS = {"I": IDENTITY_2, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
PREPARATION_GATES = ("Y/2", "-Y/2", "-X/2", "X/2", "I", "X")
MEASUREMENT_AXES = ("X", "Y", "Z")

Channel = Union[KrausSet, np.ndarray]


def pauli_labels() -> List[str]:
    """Two-qubit Pauli labels in PTM order, Q1 first."""
    return [a + b for a, b in product(_SINGLE_PAULIS, repeat=2)]


def _pauli_basis() -> np.ndarray:
    return np.array(
        [np.kron(_SINGLE_PAULIS[a], _SINGLE_PAULIS[b]) / 2.0 for a, b in product(_SINGLE_PAULIS, repeat=2)]
    )


PAULI_BASIS = _pauli_basis()


def _as_kraus(channel: Channel) -> KrausSet:
    if isinstance(channel, KrausSet):
        kraus = channel
    else:
        kraus = KrausSet(operators=[np.asarray(channel, dtype=complex)], label="unitary")
    if kraus.dimension != DIM:
        raise DomainError("Tomography acts on two-qubit channels", parameter="channel", value=kraus.dimension)
    return kraus


def ptm_of(channel: Channel) -> PauliTransferMatrix:
    """
    Pauli transfer matrix R_ij = Tr(P_i E(P_j)) over normalized Paulis.

    Args:
        channel: Kraus set or 4x4 unitary

    Raises:
        DomainError: If the channel is not two-qubit
    """
    kraus = _as_kraus(channel)
    images = [kraus.apply(p) for p in PAULI_BASIS]
    matrix = np.array([[np.trace(p @ image).real for image in images] for p in PAULI_BASIS])
    return PauliTransferMatrix(matrix=matrix)


def _matrix(r: Union[PauliTransferMatrix, np.ndarray]) -> np.ndarray:
    return r.matrix if isinstance(r, PauliTransferMatrix) else np.asarray(r, dtype=float)


def choi_from_ptm(r: Union[PauliTransferMatrix, np.ndarray]) -> np.ndarray:
    """Unnormalized Choi matrix sum_ij R_ij P_j^T (x) P_i (trace d for TP maps)."""
    matrix = _matrix(r)
    return np.einsum("ij,jab,icd->acbd", matrix, PAULI_BASIS.transpose(0, 2, 1), PAULI_BASIS).reshape(
        DIM * DIM, DIM * DIM
    )


def ptm_from_choi(choi: np.ndarray) -> PauliTransferMatrix:
    """Inverse of choi_from_ptm."""
    blocks = np.asarray(choi).reshape(DIM, DIM, DIM, DIM)
    matrix = np.einsum("jba,idc,acbd->ij", PAULI_BASIS.transpose(0, 2, 1), PAULI_BASIS, blocks).real
    return PauliTransferMatrix(matrix=matrix)


def _preparations() -> np.ndarray:
    ground = np.array([1.0, 0.0], dtype=complex)
    states = [
        (SINGLE_QUBIT_GATES[g] if g != "I" else IDENTITY_2) @ ground for g in PREPARATION_GATES
    ]
    rhos = []
    for s1, s2 in product(states, repeat=2):
        psi = np.kron(s1, s2)
        rhos.append(np.outer(psi, psi.conj()))
    return np.array(rhos)


def _projectors() -> np.ndarray:
    """Projectors ordered (setting, outcome); outcome 0 is the +1 eigenstate."""
    projectors = []
    for a, b in product(MEASUREMENT_AXES, repeat=2):
        pa, pb = _SINGLE_PAULIS[a], _SINGLE_PAULIS[b]
        for k1, k2 in product((0, 1), repeat=2):
            first = (IDENTITY_2 + (-1) ** k1 * pa) / 2.0
            second = (IDENTITY_2 + (-1) ** k2 * pb) / 2.0
            projectors.append(np.kron(first, second))
    return np.array(projectors).reshape(len(MEASUREMENT_AXES) ** 2, 4, DIM, DIM)


PREPARED_STATES = _preparations()
PROJECTORS = _projectors()


def simulate_qpt(channel: Channel, spam: Optional[SpamModel] = None) -> QPTDataset:
    """
    Outcome probabilities of the 36 x 9 x 4 tomography experiment.

    Readout errors act on the outcome distribution of each setting through
    the joint assignment matrix.
    """
    kraus = _as_kraus(channel)
    probabilities = np.zeros((len(PREPARED_STATES), PROJECTORS.shape[0], 4))
    for j, rho in enumerate(PREPARED_STATES):
        out = kraus.apply(rho)
        for s in range(PROJECTORS.shape[0]):
            ideal = np.array([np.trace(p @ out).real for p in PROJECTORS[s]])
            probabilities[j, s] = ideal if spam is None else spam.joint @ ideal
    return QPTDataset(probabilities=np.clip(probabilities, 0.0, 1.0), spam=spam)


def _design_matrix() -> np.ndarray:
    prep = np.einsum("bxy,jyx->jb", PAULI_BASIS, PREPARED_STATES).real
    meas = np.einsum("axy,skyx->ska", PAULI_BASIS, PROJECTORS).real.reshape(-1, 16)
    return np.einsum("ra,jb->jrab", meas, prep).reshape(-1, 256)


def project_cptp(r: Union[PauliTransferMatrix, np.ndarray]) -> PauliTransferMatrix:
    """
    Alternate projections onto completely positive and trace-preserving maps.

    Ends on the trace-preserving set, so the first row is exactly delta_0j.
    """
    matrix = _matrix(r).copy()
    for i in range(PROJECTION_ITERATIONS):
        matrix[0] = 0.0
        matrix[0, 0] = 1.0
        choi = choi_from_ptm(matrix)
        choi = 0.5 * (choi + choi.conj().T)
        values, vectors = np.linalg.eigh(choi)
        if values.min() >= -PSD_TOLERANCE:
            break
        choi = (vectors * np.clip(values, 0.0, None)) @ vectors.conj().T
        matrix = ptm_from_choi(choi).matrix
    else:
        logger.warning("CP/TP projection stopped at the iteration limit")
    matrix[0] = 0.0
    matrix[0, 0] = 1.0
    return PauliTransferMatrix(matrix=matrix)


def reconstruct_ptm(dataset: QPTDataset) -> PauliTransferMatrix:
    """
    Linear-inversion PTM followed by CP/TP projection.

    The frame assumes ideal preparations and projectors; readout errors in
    the data are not corrected.

    Raises:
        InversionError: If the preparation/measurement frame is rank
            deficient or ill-conditioned
    """
    design = _design_matrix()
    solution, _, rank, singular = np.linalg.lstsq(design, dataset.probabilities.ravel(), rcond=None)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf
    if rank < 256 or condition > MAX_CONDITION:
        raise InversionError("Tomography frame cannot be inverted", rank=int(rank), condition=condition)
    linear = solution.reshape(16, 16)
    logger.debug(f"Linear inversion done, frame condition {condition:.3g}")
    return project_cptp(linear)


def fidelity_from_ptm(
    r: Union[PauliTransferMatrix, np.ndarray], r_ideal: Union[PauliTransferMatrix, np.ndarray]
) -> float:
    """(Tr(R_ideal^T R) + d) / (d (d + 1)) with d = 4."""
    return float((np.trace(_matrix(r_ideal).T @ _matrix(r)) + DIM) / (DIM * (DIM + 1)))


def ptm_long_form(r: Union[PauliTransferMatrix, np.ndarray]) -> List[Tuple[str, str, float]]:
    """Rows of (row_label, col_label, value) for heatmaps."""
    labels = pauli_labels()
    matrix = _matrix(r)
    return [(labels[i], labels[j], float(matrix[i, j])) for i, j in product(range(16), repeat=2)]


def readout_assignment_matrices(q1: Sequence[Sequence[float]], q2: Sequence[Sequence[float]]) -> SpamModel:
    """
    Two-level readout assignment matrices.

    Args:
        q1: Readout table of Q1, rows prepared state, columns measured state
        q2: Readout table of Q2, same layout

    Returns:
        SpamModel whose column-normalized 2x2 blocks hold P(m | n)
    """
    blocks = []
    for table in (q1, q2):
        block = np.asarray(table, dtype=float)[:2, :2].T
        blocks.append(block / block.sum(axis=0, keepdims=True))
    return SpamModel(assignment=blocks)
