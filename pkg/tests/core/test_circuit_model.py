from functools import reduce

import numpy as np
import pytest
import scipy.sparse

from dtc_toolkit.config import get_default_config
from dtc_toolkit.core.circuit_model import (
    EC_PER_INVERSE_FF,
    anharmonicities,
    build_hamiltonian,
    coupler_labels,
    ec_matrix,
    eigensolve,
    ej_from_current,
    energy_of,
    label_states,
    labeled_energies,
    maxwell_matrix,
    spectrum_scan,
    transition_frequencies,
    transmon_levels,
)
from dtc_toolkit.core.zz_analysis import zz_at, zz_from_energies
from dtc_toolkit.exceptions import ConfigError, ConvergenceError, DomainError, LabelingError
from dtc_toolkit.models import BareBasis, BasisConfig, CircuitParams

BASIS = BasisConfig(kept_levels_qubit=4, kept_levels_coupler=8, kept_total=20)


@pytest.fixture(scope="module")
def device():
    block = get_default_config()["device"]
    return CircuitParams.from_table(
        block["node_caps"], block["mutual_caps"], block["critical_currents"]
    )


@pytest.fixture(scope="module")
def hamiltonian(device):
    return build_hamiltonian(device, BASIS)


def test_unit_conversions():
    assert ej_from_current(1.0) == pytest.approx(0.4967, rel=1e-3)
    assert EC_PER_INVERSE_FF == pytest.approx(19.37, rel=1e-3)


def test_maxwell_matrix(device):
    maxwell = maxwell_matrix(device.cap_matrix)
    assert np.allclose(maxwell, maxwell.T)
    assert np.allclose(maxwell @ np.ones(4), np.diag(device.cap_matrix))
    assert maxwell[0, 2] == pytest.approx(-5.73)
    ec = ec_matrix(device.cap_matrix)
    assert np.allclose(ec @ maxwell, EC_PER_INVERSE_FF * np.eye(4))


def test_singular_capacitance_matrix():
    cap = np.array([[1e-12, 1e3], [1e3, 1e-12]])
    with pytest.raises(ConfigError):
        ec_matrix(cap)


def test_transmon_levels():
    energies, vectors, n_kept = transmon_levels(10.0, 0.2, 15, 4)
    f01 = energies[1] - energies[0]
    anharmonicity = energies[2] - 2 * energies[1] + energies[0]
    assert f01 == pytest.approx(np.sqrt(8 * 10.0 * 0.2) - 0.2, rel=2e-2)
    assert anharmonicity == pytest.approx(-0.2, rel=0.15)
    assert vectors.shape == (31, 4)
    assert np.allclose(n_kept, n_kept.T)
    assert np.allclose(np.diag(n_kept), 0.0, atol=1e-10)


def test_coupler_labels():
    n_plus = np.zeros((4, 4))
    n_minus = np.zeros((4, 4))
    n_plus[1, 0] = 1.0
    n_minus[2, 0] = 1.0
    n_plus[3, 1] = 1.4
    labels = coupler_labels(np.array([0.0, 1.0, 2.0, 2.1]), n_plus, n_minus)
    assert labels == [(0, 0), (1, 0), (0, 1), (2, 0)]


def test_label_states_follows_overlap():
    bare = BareBasis(
        vectors=np.eye(3),
        labels=[(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0)],
        energies=[0.0, 1.0, 2.0],
    )
    labels = label_states(np.eye(3)[:, [1, 0, 2]], bare)
    assert labels.labels == [(1, 0, 0, 0), (0, 0, 0, 0), (0, 1, 0, 0)]
    assert np.allclose(labels.overlaps, 1.0)
    assert not any(labels.ambiguous)
    assert labels.index_of((0, 1, 0, 0)) == 2


def test_label_states_flags_ambiguous_overlap():
    bare = BareBasis(
        vectors=np.eye(5),
        labels=[(n, 0, 0, 0) for n in range(5)],
        energies=np.arange(5.0),
    )
    labels = label_states(np.ones((5, 1)) / np.sqrt(5), bare, flux=0.3)
    assert labels.labels == [(0, 0, 0, 0)]
    assert labels.ambiguous == [True]
    assert len(labels.warnings) == 1

    with pytest.raises(LabelingError):
        energy_of(np.zeros(1), labels, (0, 0, 0, 0), 0.3)
    with pytest.raises(LabelingError):
        energy_of(np.zeros(1), labels, (1, 0, 0, 0), 0.3)


def test_build_hamiltonian(hamiltonian):
    assert hamiltonian.dims[:2] == (4, 4)
    assert hamiltonian.dims[2] >= 8
    assert hamiltonian.has_subsystems
    h = hamiltonian.at(0.309)
    assert np.allclose(h, h.conj().T)


def test_build_hamiltonian_rejects_unknown_coupling(device):
    with pytest.raises(ConfigError):
        build_hamiltonian(device, BASIS, couplings=["C34"])


def test_eigensolve(hamiltonian):
    energies, vectors = eigensolve(hamiltonian, 0.309, 6)
    assert np.all(np.diff(energies) >= 0)
    assert np.allclose(vectors.conj().T @ vectors, np.eye(6), atol=1e-10)
    with pytest.raises(DomainError):
        eigensolve(hamiltonian, 0.309, 0)


def test_labeled_spectrum_at_idle(hamiltonian):
    energies, labels = labeled_energies(hamiltonian, 0.309, 12)
    assert energies[0] == 0.0
    assert labels.labels[0] == (0, 0, 0, 0)

    freqs = transition_frequencies(hamiltonian, 0.309)
    assert 3.5 < freqs["Q1"] < freqs["Q2"] < 6.0
    assert freqs["P"] > freqs["Q2"]
    alphas = anharmonicities(hamiltonian, 0.309)
    assert -0.3 < alphas["Q1"] < -0.1
    assert -0.3 < alphas["Q2"] < -0.1


def test_uncoupled_circuit_has_no_zz(device):
    ham = build_hamiltonian(device, BASIS, couplings=[])
    assert abs(zz_at(device, BASIS, 0.309, hamiltonian=ham)) < 1e-6


@pytest.mark.slow
def test_spectrum_scan(device, hamiltonian):
    grid = [0.300, 0.302, 0.304, 0.306]
    spectrum = spectrum_scan(device, BASIS, grid, n_states=6, hamiltonian=hamiltonian)
    assert spectrum.energies.shape == (4, 6)
    assert np.allclose(spectrum.energies[:, 0], 0.0)
    assert np.array_equal(spectrum.branch_index[0], np.arange(6))
    assert len(spectrum.labels) == 4
    threaded = spectrum_scan(
        device, BASIS, grid, n_states=6, hamiltonian=hamiltonian, max_workers=2
    )
    assert np.allclose(threaded.tracked_energies, spectrum.tracked_energies)


def test_spectrum_scan_rejects_unsorted_grid(device, hamiltonian):
    with pytest.raises(DomainError):
        spectrum_scan(device, BASIS, [0.31, 0.30], hamiltonian=hamiltonian)


@pytest.mark.parametrize("flux", [0.13, 0.309, 0.47])
def test_spectrum_is_even_and_periodic_in_flux(hamiltonian, flux):
    reference = np.linalg.eigvalsh(hamiltonian.at(flux))
    for other in (-flux, flux + 1.0, 1.0 - flux, flux - 2.0):
        assert np.allclose(np.linalg.eigvalsh(hamiltonian.at(other)), reference, atol=1e-9)


def _full_charge_hamiltonian(device, cutoff, flux):
    """Four-node Hamiltonian directly in the product charge basis."""
    ec = ec_matrix(device.cap_matrix)
    ej = ej_from_current(device.critical_currents)
    n = np.arange(-cutoff, cutoff + 1, dtype=float)
    eye = scipy.sparse.identity(n.size, format="csr")
    up = scipy.sparse.eye(n.size, k=-1, format="csr")

    def on(node, op):
        ops = [eye] * 4
        ops[node] = op
        return reduce(lambda x, y: scipy.sparse.kron(x, y, format="csr"), ops)

    charges = [on(i, scipy.sparse.diags(n)) for i in range(4)]
    h = sum(4.0 * ec[i, i] * charges[i] @ charges[i] for i in range(4))
    for i in range(4):
        for j in range(i + 1, 4):
            h = h + 8.0 * ec[i, j] * charges[i] @ charges[j]
        h = h - 0.5 * ej[i] * (on(i, up) + on(i, up.T))
    cross = on(2, up.T) @ on(3, up)
    phase = np.exp(-2j * np.pi * flux)
    h = h - 0.5 * ej[4] * (phase * cross + np.conj(phase) * cross.T)
    return h.toarray()


@pytest.mark.slow
@pytest.mark.parametrize("flux", [0.309, 0.47])
def test_two_stage_basis_matches_full_charge_basis(device, flux):
    # Keeping every subsystem state makes the product basis a rotation of
    # the full charge basis.
    cutoff = 3
    basis = BasisConfig(
        charge_cutoff_qubit=cutoff,
        charge_cutoff_coupler=cutoff,
        kept_levels_qubit=2 * cutoff + 1,
        kept_levels_coupler=(2 * cutoff + 1) ** 2,
        kept_total=20,
        edge_tolerance=2.0,
    )
    ham = build_hamiltonian(device, basis)
    assert ham.dimension == (2 * cutoff + 1) ** 4

    full = np.linalg.eigvalsh(_full_charge_hamiltonian(device, cutoff, flux))[:20]
    full = full - full[0]
    energies, labels = labeled_energies(ham, flux, 20)
    assert np.allclose(energies, full, atol=1e-8)

    computational = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0)]
    expected = zz_from_energies(*(full[labels.index_of(label)] for label in computational))
    assert zz_at(device, basis, flux, hamiltonian=ham) == pytest.approx(expected, abs=1e-6)


@pytest.fixture(scope="module")
def default_basis():
    return BasisConfig(**get_default_config()["basis"])


@pytest.fixture(scope="module")
def default_hamiltonian(device, default_basis):
    return build_hamiltonian(device, default_basis)


@pytest.mark.slow
def test_default_basis_builds(default_hamiltonian, default_basis):
    assert default_hamiltonian.dims[:2] == (6, 6)
    assert default_hamiltonian.dimension >= default_basis.kept_total


@pytest.mark.slow
def test_default_basis_is_converged(device, default_basis, default_hamiltonian):
    enlarged = build_hamiltonian(device, default_basis.enlarged())
    energies, _ = eigensolve(default_hamiltonian, 0.309, 20)
    bigger, _ = eigensolve(enlarged, 0.309, 20)
    # 1 kHz in GHz
    assert np.allclose(energies - energies[0], bigger - bigger[0], atol=1e-6)


@pytest.mark.parametrize(
    "overrides, cutoff",
    [
        ({"charge_cutoff_qubit": 3, "kept_levels_qubit": 6}, 3),
        ({"charge_cutoff_coupler": 4, "kept_levels_coupler": 12}, 4),
    ],
)
def test_truncated_charge_basis_is_rejected(device, overrides, cutoff):
    with pytest.raises(ConvergenceError) as exc_info:
        build_hamiltonian(device, BasisConfig(**overrides))
    assert exc_info.value.details["cutoff"] == cutoff
    assert exc_info.value.details["edge_weight"] > 1e-6
