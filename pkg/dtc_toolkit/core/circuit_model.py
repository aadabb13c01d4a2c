"""
Circuit Hamiltonian of the double-transmon coupler.

This module builds the four-node Hamiltonian (two data transmons and the
two coupler transmons joined by a fifth junction) in a truncated product
basis, diagonalizes it as a function of external flux, and labels the
eigenstates by their dominant product state |Q1, Q2, P, M>.

Truncation is two-staged: each qubit node is diagonalized in its own
charge basis, and the coupler is diagonalized at a reference flux in the
two-node charge basis. The retained coupler vectors are closed under
complex conjugation, so the assembled operator keeps the decomposition
H(phi) = H0 + cos(2 pi phi) A + sin(2 pi phi) B with flux-independent
parts and an exactly even spectrum in phi.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse.linalg
from scipy import constants
from scipy.optimize import linear_sum_assignment

from dtc_toolkit.exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    LabelingError,
    NumericalError,
    TrackingError,
)
from dtc_toolkit.models.circuit import (
    BareBasis,
    BasisConfig,
    CircuitParams,
    EnergySpectrum,
    HamiltonianOperator,
    Label,
    StateLabels,
)

# Setup logging
logger = logging.getLogger(__name__)

# e^2 / (2 h C) in GHz for C = 1 fF
EC_PER_INVERSE_FF = constants.e**2 / (2.0 * constants.h * 1e-15) / 1e9
# Phi0 I_c / (2 pi h) in GHz for I_c = 1 nA
EJ_PER_NA = 1e-9 / (4.0 * np.pi * constants.e) / 1e9

COUPLING_KEYS = ("C12", "C13", "C14", "C23", "C24")

DENSE_LIMIT = 3000
RESIDUAL_TOLERANCE = 1e-10
AMBIGUOUS_OVERLAP = 0.25
TRACKING_OVERLAP = 0.5
TRACKING_MARGIN = 4


def ej_from_current(critical_current) -> np.ndarray:
    """Josephson energy E_J/h in GHz from critical current in nA."""
    return np.asarray(critical_current, dtype=float) * EJ_PER_NA


def maxwell_matrix(cap: np.ndarray) -> np.ndarray:
    """Maxwell capacitance matrix: row sums on the diagonal, -C_ij off it."""
    cap = np.asarray(cap, dtype=float)
    off = cap - np.diag(np.diag(cap))
    return np.diag(np.diag(cap) + off.sum(axis=1)) - off


def ec_matrix(cap: np.ndarray) -> np.ndarray:
    """
    Charging-energy matrix E_C = e^2 / 2 * C^-1 in GHz.

    Raises:
        ConfigError: If the Maxwell matrix is singular
    """
    maxwell = maxwell_matrix(cap)
    if np.linalg.cond(maxwell) > 1e12:
        raise ConfigError("Capacitance matrix is singular", config_key="cap_matrix")
    return EC_PER_INVERSE_FF * np.linalg.inv(maxwell)


def _charge_states(cutoff: int) -> np.ndarray:
    return np.arange(-cutoff, cutoff + 1, dtype=float)


def _raise_operator(cutoff: int) -> np.ndarray:
    """e^{i phi} acting as |n> -> |n + 1>."""
    return np.eye(2 * cutoff + 1, k=-1)


def transmon_levels(
    ej: float, ec: float, cutoff: int, levels: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Lowest levels of a single transmon H = 4 E_C n^2 - E_J cos(phi).

    Returns:
        Energies, eigenvectors (columns, charge basis) and the charge
        operator projected onto the kept levels
    """
    n = _charge_states(cutoff)
    shift = _raise_operator(cutoff)
    h = np.diag(4.0 * ec * n**2) - 0.5 * ej * (shift + shift.T)
    energies, vectors = scipy.linalg.eigh(h, subset_by_index=[0, levels - 1])
    n_kept = vectors.T @ (n[:, None] * vectors)
    return energies, vectors, n_kept


def _edge_weight_1d(vectors: np.ndarray) -> float:
    return float(np.max(np.abs(vectors[0]) ** 2 + np.abs(vectors[-1]) ** 2))


def _coupler_operators(ec: np.ndarray, ej: np.ndarray, cutoff: int):
    """Coupler H0, A, B and node charges in the full two-node charge basis."""
    n = _charge_states(cutoff)
    size = n.size
    eye = np.eye(size)
    shift = _raise_operator(cutoff)

    n3 = np.kron(np.diag(n), eye)
    n4 = np.kron(eye, np.diag(n))
    cos3 = 0.5 * np.kron(shift + shift.T, eye)
    cos4 = 0.5 * np.kron(eye, shift + shift.T)
    # e^{i(phi4 - phi3)}
    cross = np.kron(shift.T, shift)

    h0 = (
        4.0 * ec[2, 2] * n3 @ n3
        + 4.0 * ec[3, 3] * n4 @ n4
        + 8.0 * ec[2, 3] * n3 @ n4
        - ej[2] * cos3
        - ej[3] * cos4
    )
    a = -0.5 * ej[4] * (cross + cross.T)
    b = -ej[4] * (cross - cross.T) / 2j
    return h0, a, b, n3, n4


def _coupler_edge_mask(cutoff: int) -> np.ndarray:
    n = _charge_states(cutoff)
    edge = np.abs(n) == cutoff
    return np.logical_or.outer(edge, edge).ravel()


def build_hamiltonian(
    params: CircuitParams,
    basis: Optional[BasisConfig] = None,
    couplings: Optional[Iterable[str]] = None,
) -> HamiltonianOperator:
    """
    Build the flux-decomposed Hamiltonian in the retained product basis.

    Args:
        params: Circuit parameters
        basis: Truncation settings (defaults when omitted)
        couplings: Subset of qubit-qubit and qubit-coupler capacitive
            couplings to keep ("C12", "C13", "C14", "C23", "C24"); all are
            kept when omitted. Charging energies are unaffected.

    Returns:
        HamiltonianOperator over Q1 x Q2 x coupler

    Raises:
        ConfigError: If the capacitance matrix is singular or the coupling
            mask names an unknown key
        ConvergenceError: If a kept subsystem state reaches the charge cutoff
    """
    basis = basis or BasisConfig()
    kept = set(COUPLING_KEYS if couplings is None else couplings)
    unknown = kept - set(COUPLING_KEYS)
    if unknown:
        raise ConfigError(
            f"Unknown coupling keys: {sorted(unknown)}", config_key="couplings"
        )

    ec = ec_matrix(params.cap_matrix)
    ej = ej_from_current(params.critical_currents)

    qubit_energies = []
    qubit_charges = []
    for node in (0, 1):
        energies, vectors, n_kept = transmon_levels(
            ej[node], ec[node, node], basis.charge_cutoff_qubit, basis.kept_levels_qubit
        )
        edge = _edge_weight_1d(vectors)
        if edge > basis.edge_tolerance:
            raise ConvergenceError(
                f"Qubit {node + 1} states reach the charge cutoff; increase charge_cutoff_qubit",
                cutoff=basis.charge_cutoff_qubit,
                edge_weight=edge,
            )
        qubit_energies.append(energies - energies[0])
        qubit_charges.append(n_kept)

    hc0, ac, bc, n3, n4 = _coupler_operators(ec, ej, basis.charge_cutoff_coupler)
    angle = 2.0 * np.pi * basis.reference_flux
    _, ref_vectors = scipy.linalg.eigh(
        hc0 + np.cos(angle) * ac + np.sin(angle) * bc,
        subset_by_index=[0, basis.kept_levels_coupler - 1],
    )
    edge_mask = _coupler_edge_mask(basis.charge_cutoff_coupler)
    edge = float(np.max(np.sum(np.abs(ref_vectors[edge_mask]) ** 2, axis=0)))
    if edge > basis.edge_tolerance:
        raise ConvergenceError(
            "Coupler states reach the charge cutoff; increase charge_cutoff_coupler",
            cutoff=basis.charge_cutoff_coupler,
            edge_weight=edge,
        )

    # Real orthonormal span of the kept vectors and their conjugates
    stacked = np.hstack([ref_vectors.real, ref_vectors.imag])
    u, s, _ = np.linalg.svd(stacked, full_matrices=False)
    w = u[:, s > 1e-8 * s[0]]
    logger.debug(
        f"Coupler basis: {basis.kept_levels_coupler} levels span {w.shape[1]} real vectors"
    )

    def project(op):
        return w.T @ op @ w

    c_h0 = project(hc0).real
    c_a = project(ac).real
    c_b = project(bc)
    c_n3 = project(n3).real
    c_n4 = project(n4).real

    m1, m2, mw = basis.kept_levels_qubit, basis.kept_levels_qubit, w.shape[1]
    i1, i2, ic = np.eye(m1), np.eye(m2), np.eye(mw)
    n1, n2 = qubit_charges

    def kron3(x, y, z):
        return np.kron(np.kron(x, y), z)

    h0 = (
        kron3(np.diag(qubit_energies[0]), i2, ic)
        + kron3(i1, np.diag(qubit_energies[1]), ic)
        + kron3(i1, i2, c_h0)
    ).astype(complex)
    coupling_terms = {
        "C12": (ec[0, 1], kron3(n1, n2, ic)),
        "C13": (ec[0, 2], kron3(n1, i2, c_n3)),
        "C14": (ec[0, 3], kron3(n1, i2, c_n4)),
        "C23": (ec[1, 2], kron3(i1, n2, c_n3)),
        "C24": (ec[1, 3], kron3(i1, n2, c_n4)),
    }
    for key, (energy, operator) in coupling_terms.items():
        if key in kept:
            h0 = h0 + 8.0 * energy * operator

    a_full = kron3(i1, i2, c_a).astype(complex)
    b_full = kron3(i1, i2, c_b)

    ham = HamiltonianOperator(
        h0=_hermitize(h0),
        a=_hermitize(a_full),
        b=_hermitize(b_full),
        dims=(m1, m2, mw),
        qubit_energies=qubit_energies,
        coupler_h0=c_h0.astype(complex),
        coupler_a=c_a.astype(complex),
        coupler_b=_hermitize(c_b),
        coupler_n_plus=(c_n3 + c_n4).astype(complex),
        coupler_n_minus=(c_n3 - c_n4).astype(complex),
    )
    logger.info(f"Built Hamiltonian of dimension {ham.dimension} (dims {ham.dims})")
    return ham


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest component of each column real and positive."""
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)[None, :]


def eigensolve(
    ham: HamiltonianOperator, flux: float, k: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Lowest k eigenpairs of H at reduced flux.

    Args:
        ham: Flux-decomposed Hamiltonian
        flux: Reduced flux phi_ex / 2pi
        k: Number of eigenpairs

    Returns:
        Ascending energies (GHz) and eigenvectors as columns

    Raises:
        DomainError: If k is not in [1, dimension]
        NumericalError: If an eigenpair residual exceeds tolerance
    """
    dim = ham.dimension
    if not 1 <= k <= dim:
        raise DomainError(f"k must lie in [1, {dim}]", parameter="k", value=k)

    matrix = ham.at(flux)
    if dim <= DENSE_LIMIT or k >= dim - 1:
        energies, vectors = scipy.linalg.eigh(matrix, subset_by_index=[0, k - 1])
    else:
        energies, vectors = scipy.sparse.linalg.eigsh(matrix, k=k, which="SA")
        order = np.argsort(energies)
        energies, vectors = energies[order], vectors[:, order]

    scale = max(1.0, float(np.max(np.abs(matrix))))
    residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * energies, axis=0)))
    if residual > RESIDUAL_TOLERANCE * scale:
        raise NumericalError(
            f"Eigensolver residual too large at flux {flux}",
            residual=residual,
            tolerance=RESIDUAL_TOLERANCE * scale,
        )
    return energies, _fix_phases(vectors)


def coupler_labels(
    energies: np.ndarray, n_plus: np.ndarray, n_minus: np.ndarray
) -> List[Tuple[int, int]]:
    """
    Assign (P, M) occupations to coupler eigenstates in ascending order.

    Each state is reached from an already-labeled lower state by the
    strongest dipole step: n3 + n4 adds a p-mode quantum, n3 - n4 an
    m-mode quantum.

    Args:
        energies: Ascending coupler energies
        n_plus: n3 + n4 in the coupler eigenbasis
        n_minus: n3 - n4 in the coupler eigenbasis
    """
    labels: List[Tuple[int, int]] = [(0, 0)]
    used = {(0, 0)}
    for k in range(1, len(energies)):
        candidates = []
        for j in range(k):
            candidates.append((abs(n_plus[k, j]), j, (1, 0)))
            candidates.append((abs(n_minus[k, j]), j, (0, 1)))
        candidates.sort(key=lambda c: (-c[0], c[1]))
        chosen = None
        for _, j, step in candidates:
            label = (labels[j][0] + step[0], labels[j][1] + step[1])
            if label not in used:
                chosen = label
                break
        if chosen is None:
            total = 1
            while chosen is None:
                for p in range(total, -1, -1):
                    if (p, total - p) not in used:
                        chosen = (p, total - p)
                        break
                total += 1
        labels.append(chosen)
        used.add(chosen)
    return labels


def bare_basis(ham: HamiltonianOperator, flux: float) -> BareBasis:
    """
    Product states of the uncoupled qubits and coupler at reduced flux.

    Raises:
        DomainError: If the operator carries no subsystem structure
    """
    if not ham.has_subsystems:
        raise DomainError(
            "Hamiltonian carries no subsystem structure for labeling", parameter="ham"
        )
    m1, m2, mw = ham.dims
    c_energies, c_vectors = scipy.linalg.eigh(ham.coupler_at(flux))
    n_plus = c_vectors.conj().T @ ham.coupler_n_plus @ c_vectors
    n_minus = c_vectors.conj().T @ ham.coupler_n_minus @ c_vectors
    c_labels = coupler_labels(c_energies, n_plus, n_minus)

    vectors = np.kron(np.eye(m1 * m2), c_vectors)
    labels: List[Label] = []
    energies = np.empty(m1 * m2 * mw)
    e1, e2 = ham.qubit_energies
    pos = 0
    for i in range(m1):
        for j in range(m2):
            for c in range(mw):
                labels.append((i, j, c_labels[c][0], c_labels[c][1]))
                energies[pos] = e1[i] + e2[j] + c_energies[c]
                pos += 1
    return BareBasis(vectors=vectors, labels=labels, energies=energies)


def label_states(
    eigenvectors: np.ndarray, bare: BareBasis, flux: Optional[float] = None
) -> StateLabels:
    """
    Injective maximum-overlap assignment of eigenvectors to product labels.

    Pairs are assigned greedily in order of decreasing overlap; ties go to
    the lower bare product energy. Overlaps below 0.25 are recorded as
    ambiguous but still labeled.
    """
    overlaps = np.abs(bare.vectors.conj().T @ eigenvectors) ** 2
    n_bare, k = overlaps.shape
    bare_idx, eig_idx = np.meshgrid(np.arange(n_bare), np.arange(k), indexing="ij")
    order = np.lexsort(
        (eig_idx.ravel(), bare.energies[bare_idx.ravel()], -np.round(overlaps.ravel(), 12))
    )

    assigned: List[Optional[int]] = [None] * k
    taken = np.zeros(n_bare, dtype=bool)
    remaining = k
    for flat in order:
        b, e = divmod(int(flat), k)
        if taken[b] or assigned[e] is not None:
            continue
        assigned[e] = b
        taken[b] = True
        remaining -= 1
        if remaining == 0:
            break

    labels = [bare.labels[b] for b in assigned]
    best = np.array([overlaps[b, e] for e, b in enumerate(assigned)])
    ambiguous = [bool(o < AMBIGUOUS_OVERLAP) for o in best]
    warnings = []
    where = "" if flux is None else f" at flux {flux:.6g}"
    for label, overlap, flag in zip(labels, best, ambiguous):
        if flag:
            message = f"Ambiguous label {label}{where}: overlap {overlap:.3f}"
            warnings.append(message)
            logger.warning(message)
    return StateLabels(labels=labels, overlaps=best, ambiguous=ambiguous, warnings=warnings)


def labeled_energies(
    ham: HamiltonianOperator, flux: float, k: int
) -> Tuple[np.ndarray, StateLabels]:
    """Ground-referenced energies and labels of the lowest k states."""
    energies, vectors = eigensolve(ham, flux, k)
    labels = label_states(vectors, bare_basis(ham, flux), flux)
    return energies - energies[0], labels


def energy_of(
    energies: np.ndarray, labels: StateLabels, label: Sequence[int], flux: float
) -> float:
    """
    Energy of the state carrying label.

    Raises:
        LabelingError: If the label is missing or its overlap is ambiguous
    """
    idx = labels.index_of(label)
    if idx is None:
        raise LabelingError(
            f"No eigenstate labeled {tuple(label)} at flux {flux:.6g}; increase the state count",
            label=label,
            flux=flux,
        )
    if labels.ambiguous[idx]:
        raise LabelingError(
            f"Label {tuple(label)} is ambiguous at flux {flux:.6g}",
            label=label,
            overlap=float(labels.overlaps[idx]),
            flux=flux,
        )
    return float(energies[idx])


def transition_frequencies(
    ham: HamiltonianOperator, flux: float, n_states: int = 12
) -> Dict[str, float]:
    """
    Dressed transition frequencies (GHz) of Q1, Q2 and the two coupler modes.
    """
    energies, labels = labeled_energies(ham, flux, n_states)
    targets = {"Q1": (1, 0, 0, 0), "Q2": (0, 1, 0, 0), "P": (0, 0, 1, 0), "M": (0, 0, 0, 1)}
    return {name: energy_of(energies, labels, label, flux) for name, label in targets.items()}


def anharmonicities(
    ham: HamiltonianOperator, flux: float, n_states: int = 16
) -> Dict[str, float]:
    """Dressed anharmonicities E_2 - 2 E_1 (GHz) of Q1 and Q2."""
    energies, labels = labeled_energies(ham, flux, n_states)
    out = {}
    for name, one, two in (
        ("Q1", (1, 0, 0, 0), (2, 0, 0, 0)),
        ("Q2", (0, 1, 0, 0), (0, 2, 0, 0)),
    ):
        out[name] = energy_of(energies, labels, two, flux) - 2.0 * energy_of(
            energies, labels, one, flux
        )
    return out


def spectrum_scan(
    params: CircuitParams,
    basis: Optional[BasisConfig] = None,
    flux_grid: Sequence[float] = (),
    n_states: int = 12,
    hamiltonian: Optional[HamiltonianOperator] = None,
    max_workers: int = 1,
) -> EnergySpectrum:
    """
    Flux-resolved spectrum with adiabatic branch tracking.

    Eigenpairs at each flux point are computed independently (optionally
    in parallel); branches are then followed from point to point by
    maximum overlap in a sequential pass.

    Args:
        params: Circuit parameters
        basis: Truncation settings
        flux_grid: Sorted reduced flux values
        n_states: States reported per point
        hamiltonian: Prebuilt operator for params and basis
        max_workers: Threads for the per-point eigensolves

    Raises:
        DomainError: If the grid is empty or unsorted
        TrackingError: If a branch overlaps its successor by less than 0.5
    """
    grid = np.asarray(flux_grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise DomainError("flux_grid must be non-empty and strictly increasing", parameter="flux_grid")

    ham = hamiltonian or build_hamiltonian(params, basis)
    n_solve = min(n_states + TRACKING_MARGIN, ham.dimension)

    def solve(flux: float):
        energies, vectors = eigensolve(ham, flux, n_solve)
        labels = label_states(vectors[:, :n_states], bare_basis(ham, flux), flux)
        logger.debug(f"Solved flux point {flux:.6g}")
        return energies - energies[0], vectors, labels

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(solve, grid))
    else:
        results = [solve(flux) for flux in grid]

    n_flux = grid.size
    energies = np.array([r[0][:n_states] for r in results])
    tracked = np.empty((n_flux, n_states))
    branch_index = np.empty((n_flux, n_states), dtype=int)
    branch_index[0] = np.arange(n_states)
    tracked[0] = energies[0]
    previous = results[0][1][:, :n_states]

    for i in range(1, n_flux):
        current_energies, current, _ = results[i]
        overlap = np.abs(previous.conj().T @ current) ** 2
        rows, cols = linear_sum_assignment(-overlap)
        worst = float(np.min(overlap[rows, cols]))
        if worst < TRACKING_OVERLAP:
            raise TrackingError(
                f"Branch tracking lost between flux {grid[i - 1]:.6g} and {grid[i]:.6g}; refine the grid",
                flux=float(grid[i]),
                overlap=worst,
            )
        branch_index[i, rows] = cols
        tracked[i, rows] = current_energies[cols]
        previous = current[:, cols]

    warnings = [w for r in results for w in r[2].warnings]
    logger.info(f"Spectrum scan over {n_flux} flux points complete")
    return EnergySpectrum(
        flux_points=grid,
        energies=energies,
        labels=[r[2].labels for r in results],
        overlaps=np.array([r[2].overlaps for r in results]),
        tracked_energies=tracked,
        branch_index=branch_index,
        warnings=warnings,
    )
