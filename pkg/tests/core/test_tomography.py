import numpy as np
import pytest

from dtc_toolkit.config import get_default_config
from dtc_toolkit.core.clifford import CZ_GATE
from dtc_toolkit.core.noise_channels import compose, depolarizing_kraus
from dtc_toolkit.core.tomography import (
    PREPARED_STATES,
    PROJECTORS,
    choi_from_ptm,
    fidelity_from_ptm,
    pauli_labels,
    project_cptp,
    ptm_from_choi,
    ptm_long_form,
    ptm_of,
    readout_assignment_matrices,
    reconstruct_ptm,
    simulate_qpt,
)
from dtc_toolkit.exceptions import DomainError
from dtc_toolkit.models import KrausSet


def test_labels_and_frame_shapes():
    labels = pauli_labels()
    assert labels[0] == "II"
    assert labels[1] == "IX"
    assert labels[4] == "XI"
    assert len(labels) == 16
    assert PREPARED_STATES.shape == (36, 4, 4)
    assert PROJECTORS.shape == (9, 4, 4, 4)
    assert np.allclose(PROJECTORS.sum(axis=1), np.eye(4))


def test_identity_ptm():
    assert np.allclose(ptm_of(np.eye(4)).matrix, np.eye(16))


def test_depolarizing_ptm():
    p = 0.05
    expected = np.diag([1.0] + [1.0 - p] * 15)
    assert np.allclose(ptm_of(depolarizing_kraus(p)).matrix, expected)


def test_cz_ptm_is_signed_permutation():
    r = ptm_of(CZ_GATE).matrix
    assert np.allclose(np.abs(r).sum(axis=0), 1.0)
    assert np.allclose(r @ r.T, np.eye(16))
    assert fidelity_from_ptm(r, r) == pytest.approx(1.0)


def test_ptm_composition_is_matrix_product():
    first = depolarizing_kraus(0.02)
    second = KrausSet(operators=[CZ_GATE])
    composed = ptm_of(compose(second, first)).matrix
    assert np.allclose(composed, ptm_of(second).matrix @ ptm_of(first).matrix)


def test_choi_round_trip():
    r = ptm_of(compose(depolarizing_kraus(0.1), KrausSet(operators=[CZ_GATE]))).matrix
    choi = choi_from_ptm(r)
    assert np.trace(choi).real == pytest.approx(4.0)
    assert np.linalg.eigvalsh(choi).min() > -1e-12
    assert np.allclose(ptm_from_choi(choi).matrix, r)


def test_ptm_of_rejects_single_qubit_channel():
    with pytest.raises(DomainError):
        ptm_of(np.eye(2))


def test_ideal_reconstruction():
    ptm = reconstruct_ptm(simulate_qpt(CZ_GATE))
    assert np.allclose(ptm.matrix, ptm_of(CZ_GATE).matrix, atol=1e-8)
    assert fidelity_from_ptm(ptm, ptm_of(CZ_GATE)) == pytest.approx(1.0, abs=1e-9)


def test_depolarized_reconstruction_fidelity():
    p = 0.02
    channel = compose(depolarizing_kraus(p), KrausSet(operators=[CZ_GATE]))
    ptm = reconstruct_ptm(simulate_qpt(channel))
    assert fidelity_from_ptm(ptm, ptm_of(CZ_GATE)) == pytest.approx(1.0 - 3.0 * p / 4.0, abs=1e-9)


def test_readout_errors_lower_fidelity():
    readout = get_default_config()["readout"]
    spam = readout_assignment_matrices(readout["q1"], readout["q2"])
    assert np.allclose(spam.assignment[0].sum(axis=0), 1.0)
    assert spam.assignment[0][0, 0] == pytest.approx(0.9933 / (0.9933 + 0.0006))

    ptm = reconstruct_ptm(simulate_qpt(CZ_GATE, spam))
    fidelity = fidelity_from_ptm(ptm, ptm_of(CZ_GATE))
    assert 0.93 < fidelity < 0.98
    assert np.allclose(ptm.matrix[0], np.eye(16)[0])


def test_projection_restores_positivity():
    r = ptm_of(CZ_GATE).matrix.copy()
    r[5, 5] += 0.3
    before = np.linalg.eigvalsh(choi_from_ptm(r)).min()
    projected = project_cptp(r)
    after = np.linalg.eigvalsh(choi_from_ptm(projected)).min()
    assert before < -1e-3
    assert after > before
    assert np.allclose(projected.matrix[0], np.eye(16)[0])
    assert projected.trace_preservation_error == pytest.approx(0.0, abs=1e-12)


def test_long_form_rows():
    rows = ptm_long_form(ptm_of(np.eye(4)))
    assert len(rows) == 256
    assert rows[0] == ("II", "II", 1.0)
    assert rows[1] == ("II", "IX", 0.0)


def _random_channel(rng, n_kraus=3) -> KrausSet:
    g = rng.normal(size=(4 * n_kraus, 4)) + 1j * rng.normal(size=(4 * n_kraus, 4))
    isometry, _ = np.linalg.qr(g)
    return KrausSet(operators=[isometry[4 * k : 4 * k + 4] for k in range(n_kraus)])


def test_random_channels_survive_tomography(rng):
    for _ in range(20):
        channel = _random_channel(rng)
        assert channel.completeness_error < 1e-12
        ptm = reconstruct_ptm(simulate_qpt(channel))
        assert np.max(np.abs(ptm.matrix - ptm_of(channel).matrix)) <= 1e-6
