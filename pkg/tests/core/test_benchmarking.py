import numpy as np
import pytest

from dtc_toolkit.core.benchmarking import (
    cz_metrics,
    cz_metrics_from_errors,
    fit_lrb,
    fit_rb_decay,
    gate_length_study,
    recursion_survival,
    simulate_rb,
    simulate_rb_unitary,
    single_qubit_rb_error,
)
from dtc_toolkit.core.clifford import CZ_GATE, build_clifford_group
from dtc_toolkit.core.noise_channels import depolarizing_kraus
from dtc_toolkit.exceptions import DomainError
from dtc_toolkit.models import LeakageErrorModel, Propagator, RBDataset

M_VALUES = [1, 20, 50, 100, 200, 300, 400, 500, 700]
SRB_MODEL = LeakageErrorModel(l1=4e-4, l2=1e-4, p_d=1e-2)
CZ_MODEL = LeakageErrorModel(l1=2.7e-4, l2=1e-4, p_d=9.3e-4)


def test_identity_model_survives():
    p_x1, p_id = recursion_survival(LeakageErrorModel(), M_VALUES)
    assert np.allclose(p_x1, 1.0)
    assert np.allclose(p_id, 1.0)

    data = simulate_rb(LeakageErrorModel(), [1, 5, 10], n_sequences=2)
    assert np.allclose(data.p_id, 1.0)
    assert np.allclose(data.p_x1, 1.0)


def test_density_simulation_matches_recursion():
    model = LeakageErrorModel(
        l1=2e-3, l2=3e-4, p_d=1.5e-3, gamma=0.01, l20=0.002, p_id0=0.97, p_x1_0=0.99
    )
    m = [1, 5, 20, 60]
    data = simulate_rb(model, m, n_sequences=3, seed=4)
    p_x1, p_id = recursion_survival(model, m)
    assert np.allclose(data.p_x1, p_x1[:, None], atol=1e-10)
    assert np.allclose(data.p_id, p_id[:, None], atol=1e-10)


def test_interleaved_simulation_matches_composed_model():
    m = [1, 10, 40]
    data = simulate_rb(SRB_MODEL, m, n_sequences=2, interleave=CZ_MODEL)
    p_x1, p_id = recursion_survival(SRB_MODEL.compose(CZ_MODEL), m)
    assert data.variant == "IRB"
    assert np.allclose(data.p_x1, p_x1[:, None], atol=1e-10)
    assert np.allclose(data.p_id, p_id[:, None], atol=1e-10)


def test_shot_sampling_is_seeded():
    first = simulate_rb(SRB_MODEL, [1, 20, 50], n_sequences=2, shots=1000, seed=7)
    again = simulate_rb(SRB_MODEL, [1, 20, 50], n_sequences=2, shots=1000, seed=7)
    other = simulate_rb(SRB_MODEL, [1, 20, 50], n_sequences=2, shots=1000, seed=8)
    assert np.array_equal(first.p_id, again.p_id)
    assert not np.array_equal(first.p_id, other.p_id)
    assert np.allclose(first.p_id * 1000, np.round(first.p_id * 1000))


def test_lrb_fit_recovers_model():
    model = LeakageErrorModel(l1=2e-3, l2=3e-4, p_d=1.5e-3)
    fit = fit_lrb(simulate_rb(model, M_VALUES, n_sequences=1))
    assert fit.leakage_rate == pytest.approx(2e-3, rel=1e-4)
    assert fit.a_m * (1.0 - fit.lambda_l) == pytest.approx(3e-4, rel=1e-4)
    p_d = 1.0 - fit.lambda_r / (1.0 - fit.leakage_rate)
    assert p_d == pytest.approx(1.5e-3, rel=1e-3)
    assert not fit.degenerate_leakage


def test_lrb_fit_flags_constant_leakage():
    model = LeakageErrorModel(p_d=5e-3)
    fit = fit_lrb(simulate_rb(model, [1, 10, 50, 100, 200], n_sequences=1))
    assert fit.degenerate_leakage
    assert fit.lambda_l == 1.0
    assert fit.b_m == 0.0
    assert fit.leakage_rate == 0.0


def test_lrb_fit_needs_four_lengths():
    data = RBDataset(m_values=[1, 2, 3], p_id=[0.9, 0.8, 0.7], p_x1=[1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        fit_lrb(data)


def test_cz_metrics_from_fits():
    srb = fit_lrb(simulate_rb(SRB_MODEL, M_VALUES, n_sequences=1))
    irb = fit_lrb(simulate_rb(SRB_MODEL, M_VALUES, n_sequences=1, interleave=CZ_MODEL))
    metrics = cz_metrics(srb, irb)
    assert metrics.l1_cz == pytest.approx(2.7e-4, abs=1e-5)
    assert metrics.lambda_r_cz == pytest.approx(CZ_MODEL.lambda_r, abs=1e-6)
    assert metrics.r_cz == pytest.approx(9e-4, abs=2e-5)
    assert metrics.f_bar == pytest.approx(metrics.f_bar_from_errors, abs=1e-5)


def test_cz_metrics_headline_values():
    metrics = cz_metrics_from_errors(0.00027, 0.00090)
    assert metrics.f_bar == pytest.approx(0.9990325, abs=1e-12)
    assert metrics.f_bar_from_errors == pytest.approx(0.9990325, abs=1e-12)
    assert round(metrics.f_bar, 4) == 0.9990

    assert cz_metrics_from_errors(0.0003, 0.0009).r_d_cz == pytest.approx(0.000675, abs=1e-12)


def test_single_qubit_rb_error():
    r, r_gate = single_qubit_rb_error(0.9994)
    assert r == pytest.approx(3e-4)
    assert r_gate == pytest.approx(1.6e-4)
    with pytest.raises(DomainError):
        single_qubit_rb_error(0.0)


def test_fit_rb_decay():
    m = np.array([1, 10, 25, 50, 100, 200, 400])
    a, p, b = fit_rb_decay(m, 0.5 * 0.99**m + 0.5)
    assert a == pytest.approx(0.5, rel=1e-6)
    assert p == pytest.approx(0.99, rel=1e-8)
    assert b == pytest.approx(0.5, rel=1e-6)


def test_gate_length_study_recovers_t_eff():
    lengths = [40.0, 48.0, 56.0, 64.0, 72.0, 80.0]
    metrics = [cz_metrics_from_errors(0.0, 0.4 * t * 1e-3 / 23.9) for t in lengths]
    study = gate_length_study(lengths, metrics)
    assert study.t_eff_us == pytest.approx(23.9, rel=1e-6)
    assert abs(study.intercept) < 1e-9
    assert study.pearson_r == pytest.approx(1.0)
    assert study.outliers == []


def test_gate_length_study_flags_outlier():
    lengths = [40.0, 48.0, 56.0, 64.0, 72.0, 80.0]
    errors = [0.4 * t * 1e-3 / 23.9 for t in lengths]
    errors[2] += 1e-3
    study = gate_length_study(lengths, [cz_metrics_from_errors(0.0, r) for r in errors])
    assert study.outliers == [56.0]
    assert [row.outlier for row in study.rows] == [False, False, True, False, False, False]
    assert study.t_eff_us == pytest.approx(23.9, rel=1e-6)


def test_gate_length_study_needs_three_points():
    with pytest.raises(DomainError):
        gate_length_study([40.0, 48.0], [cz_metrics_from_errors(0.0, 1e-3)] * 2)


def test_unitary_rb_with_ideal_gate():
    u = Propagator.from_block(CZ_GATE)
    data = simulate_rb_unitary(u, [1, 5, 10], n_sequences=2)
    assert np.allclose(data.p_id, 1.0)
    assert np.allclose(data.p_x1, 1.0)


def test_unitary_rb_with_depolarizing_noise():
    u = Propagator.from_block(CZ_GATE)
    p = 0.01
    data = simulate_rb_unitary(u, [1, 5, 10], n_sequences=2, noise=depolarizing_kraus(p))
    expected = 0.25 + 0.75 * (1.0 - p) ** np.array([1, 5, 10])
    assert np.allclose(data.p_id, expected[:, None], atol=1e-10)


def test_clifford_group_sizes():
    assert len(build_clifford_group(1)) == 24
    group = build_clifford_group(2)
    assert len(group) == 11520
    rng = np.random.default_rng(0)
    sequence = group.sample(rng, 6)
    total = np.eye(4, dtype=complex)
    for i in sequence:
        total = group.elements[i] @ total
    residual = group.recovery(sequence) @ total
    assert abs(abs(np.trace(residual)) - 4.0) < 1e-9


def _is_identity_up_to_phase(u: np.ndarray) -> bool:
    return abs(abs(np.trace(u)) - u.shape[0]) < 1e-9


def test_single_qubit_clifford_gate_count():
    assert build_clifford_group(1).average_gate_count == pytest.approx(1.875)


def test_single_qubit_cliffords_are_closed():
    group = build_clifford_group(1)
    for i in range(len(group)):
        assert _is_identity_up_to_phase(group.elements[group.inverses[i]] @ group.elements[i])
        for j in range(len(group)):
            k = group.compose(i, j)
            product = group.elements[j] @ group.elements[i]
            assert _is_identity_up_to_phase(group.elements[k].conj().T @ product)


def test_two_qubit_cliffords_are_closed(rng):
    group = build_clifford_group(2)
    for i, j in rng.integers(len(group), size=(200, 2)):
        k = group.compose(int(i), int(j))
        product = group.elements[j] @ group.elements[i]
        assert _is_identity_up_to_phase(group.elements[k].conj().T @ product)
        assert _is_identity_up_to_phase(group.elements[group.inverses[i]] @ group.elements[i])
    assert group.index_of(CZ_GATE) >= 0
