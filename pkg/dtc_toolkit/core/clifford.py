"""
Clifford groups for randomized benchmarking.

This module generates the one- and two-qubit Clifford groups modulo global
phase by breadth-first search over physical generators. One-qubit elements
are built from {X, Y, +-X/2, +-Y/2}, so each element carries a shortest
physical decomposition; the two-qubit group is generated from the
quarter-turn rotations on each qubit together with CZ.
"""

import logging
import math
from collections import deque
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from dtc_toolkit.exceptions import DomainError

# Setup logging
logger = logging.getLogger(__name__)

IDENTITY_2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CZ_GATE = np.diag([1.0, 1.0, 1.0, -1.0]).astype(complex)

KEY_DECIMALS = 8


def rx(theta: float) -> np.ndarray:
    """exp(-i theta X / 2)."""
    return math.cos(theta / 2) * IDENTITY_2 - 1j * math.sin(theta / 2) * PAULI_X


def ry(theta: float) -> np.ndarray:
    """exp(-i theta Y / 2)."""
    return math.cos(theta / 2) * IDENTITY_2 - 1j * math.sin(theta / 2) * PAULI_Y


SINGLE_QUBIT_GATES: Dict[str, np.ndarray] = {
    "X": rx(math.pi),
    "Y": ry(math.pi),
    "X/2": rx(math.pi / 2),
    "-X/2": rx(-math.pi / 2),
    "Y/2": ry(math.pi / 2),
    "-Y/2": ry(-math.pi / 2),
}


def canonical_key(u: np.ndarray) -> bytes:
    """
    Hashable key of a unitary modulo global phase.

    The phase of the first entry with magnitude above 1e-6 is divided out
    before rounding.
    """
    flat = np.asarray(u, dtype=complex).ravel()
    pivot = flat[np.argmax(np.abs(flat) > 1e-6)]
    normalized = flat * (abs(pivot) / pivot)
    parts = np.concatenate([normalized.real, normalized.imag]).round(KEY_DECIMALS) + 0.0
    return parts.tobytes()


def _breadth_first(
    generators: Dict[str, np.ndarray], dim: int
) -> Tuple[List[np.ndarray], List[Tuple[str, ...]]]:
    identity = np.eye(dim, dtype=complex)
    elements = [identity]
    decompositions: List[Tuple[str, ...]] = [()]
    seen = {canonical_key(identity): 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for name, g in generators.items():
            candidate = g @ elements[i]
            key = canonical_key(candidate)
            if key in seen:
                continue
            seen[key] = len(elements)
            elements.append(candidate)
            decompositions.append(decompositions[i] + (name,))
            queue.append(len(elements) - 1)
    return elements, decompositions


class CliffordGroup:
    """
    Clifford group modulo global phase.

    Decompositions list physical gates in time order. The identity is
    executed as a single idle gate of the same length, so it counts as one
    physical gate.
    """

    def __init__(
        self,
        n_qubits: int,
        elements: Sequence[np.ndarray],
        decompositions: Sequence[Tuple[str, ...]],
    ):
        """
        Initialize the group.

        Args:
            n_qubits: Number of qubits
            elements: Unitaries, identity first
            decompositions: Physical gates per element
        """
        self.n_qubits = n_qubits
        self.elements = np.asarray(elements, dtype=complex)
        self.decompositions = [tuple(d) if d else ("I",) for d in decompositions]
        self._index = {canonical_key(u): i for i, u in enumerate(self.elements)}
        self.inverses = np.array(
            [self.index_of(u.conj().T) for u in self.elements], dtype=int
        )
        self.table = None
        if len(self) <= 64:
            self.table = np.array(
                [[self.compose(i, j) for j in range(len(self))] for i in range(len(self))],
                dtype=int,
            )

    def __len__(self) -> int:
        return int(self.elements.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.elements.shape[1])

    @property
    def average_gate_count(self) -> float:
        return float(np.mean([len(d) for d in self.decompositions]))

    def index_of(self, u: np.ndarray) -> int:
        """
        Raises:
            DomainError: If u is not a group element
        """
        try:
            return self._index[canonical_key(u)]
        except KeyError:
            raise DomainError("Unitary is not a Clifford element", parameter="u")

    def compose(self, first: int, then: int) -> int:
        """Index of the element applying ``first`` and then ``then``."""
        if self.table is not None:
            return int(self.table[first, then])
        return self.index_of(self.elements[then] @ self.elements[first])

    def recovery(
        self, sequence: Sequence[int], interleaved: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """
        Exact inverse of a sequence product.

        Args:
            sequence: Element indices in time order
            interleaved: Optional gate applied after every element

        Returns:
            Unitary undoing the ideal sequence up to global phase
        """
        total = np.eye(self.dimension, dtype=complex)
        for i in sequence:
            total = self.elements[i] @ total
            if interleaved is not None:
                total = interleaved @ total
        return total.conj().T

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.integers(len(self), size=size)


@lru_cache(maxsize=2)
def build_clifford_group(n_qubits: int) -> CliffordGroup:
    """
    Generate the Clifford group on one or two qubits.

    Args:
        n_qubits: 1 (24 elements) or 2 (11520 elements)

    Raises:
        DomainError: For any other qubit count
    """
    if n_qubits == 1:
        elements, decompositions = _breadth_first(SINGLE_QUBIT_GATES, 2)
    elif n_qubits == 2:
        generators = {
            "X/2@Q1": np.kron(SINGLE_QUBIT_GATES["X/2"], IDENTITY_2),
            "Y/2@Q1": np.kron(SINGLE_QUBIT_GATES["Y/2"], IDENTITY_2),
            "X/2@Q2": np.kron(IDENTITY_2, SINGLE_QUBIT_GATES["X/2"]),
            "Y/2@Q2": np.kron(IDENTITY_2, SINGLE_QUBIT_GATES["Y/2"]),
            "CZ": CZ_GATE,
        }
        elements, decompositions = _breadth_first(generators, 4)
    else:
        raise DomainError("Clifford groups are built for 1 or 2 qubits", parameter="n_qubits", value=n_qubits)

    group = CliffordGroup(n_qubits, elements, decompositions)
    logger.debug(f"Built {n_qubits}-qubit Clifford group with {len(group)} elements")
    return group
