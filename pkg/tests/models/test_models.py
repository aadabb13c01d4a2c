import math

import numpy as np
import pytest
from pydantic import ValidationError

from dtc_toolkit.models import (
    CircuitParams,
    DistortionModel,
    FitResult,
    FluxNoiseParams,
    KrausSet,
    LeakageErrorModel,
    NoiseParams,
    RBDataset,
    SlepianConfig,
    Waveform,
)


def test_circuit_params_from_table_is_symmetric():
    params = CircuitParams.from_table(
        [90.0, 91.0, 110.0, 106.0], {"C13": 5.7, "C34": 1.7}, [26.0, 32.0, 48.0, 48.0, 10.0]
    )
    assert params.mutual(1, 3) == params.mutual(3, 1) == 5.7
    assert params.mutual(1, 2) == 0.0


def test_circuit_params_validation():
    with pytest.raises(ValidationError):
        CircuitParams(cap_matrix=np.eye(3), critical_currents=[1.0] * 5)
    with pytest.raises(ValidationError):
        CircuitParams(cap_matrix=np.eye(4), critical_currents=[1.0, 1.0, 1.0, 1.0, 0.0])
    cap = np.eye(4)
    cap[0, 1] = 0.5
    with pytest.raises(ValidationError):
        CircuitParams(cap_matrix=cap, critical_currents=[1.0] * 5)


def test_circuit_params_replace_keeps_original():
    params = CircuitParams(cap_matrix=np.eye(4) * 90.0, critical_currents=[30.0] * 5)
    changed = params.replace(mutual_caps={"C34": 2.0}, currents={5: 10.0})
    assert changed.mutual(4, 3) == 2.0
    assert changed.critical_currents[4] == 10.0
    assert params.mutual(3, 4) == 0.0


def test_waveform_properties():
    w = Waveform(samples=[0.0, 1.0, 1.0, 0.0], dt=0.5, pad_samples=1)
    assert w.duration == 1.5
    assert w.peak == 1.0
    assert w.area == pytest.approx(1.0)
    assert list(w.core) == [1.0, 1.0]
    assert w.scaled(-2.0).peak == 2.0
    with pytest.raises(ValidationError):
        Waveform(samples=[0.0, 1.0], pad_samples=1)
    with pytest.raises(ValidationError):
        Waveform(samples=[0.0, math.nan, 0.0])


def test_waveform_concat():
    first = Waveform(samples=[0.0, 1.0], dt=0.5)
    second = Waveform(samples=[1.0, 0.0], dt=0.5)
    joined = first.concat(second)
    assert list(joined.samples) == [0.0, 1.0, 0.0]
    with pytest.raises(ValueError):
        first.concat(Waveform(samples=[0.5, 0.0], dt=0.5))


def test_slepian_config_validation():
    assert SlepianConfig().core_intervals == 96
    with pytest.raises(ValidationError):
        SlepianConfig(duration=48.25, dt=0.5)
    with pytest.raises(ValidationError):
        SlepianConfig(theta_initial=1.0, theta_final=0.5)
    assert SlepianConfig().with_duration(40.0).core_intervals == 80


def test_distortion_model_step_response():
    model = DistortionModel.from_dict({"terms": [{"a": -0.1, "tau_ns": 10.0}], "label": "x"})
    response = model.step_response(np.array([0.0, 1e6]))
    assert response[0] == pytest.approx(0.9)
    assert response[1] == pytest.approx(1.0)
    assert model.max_tau == 10.0
    assert DistortionModel.from_dict(model.to_dict()) == model


def test_kraus_set_identity():
    channel = KrausSet(operators=[np.eye(4)])
    assert channel.dimension == 4
    assert channel.completeness_error == pytest.approx(0.0)
    rho = np.diag([0.5, 0.5, 0.0, 0.0])
    assert np.allclose(channel.apply(rho), rho)
    with pytest.raises(ValidationError):
        KrausSet(operators=[np.eye(2), np.eye(4)])


def test_noise_params_validation():
    noise = NoiseParams(t1=(100.0, 100.0), t_phi=(200.0, 200.0), gate_time=48.0)
    assert noise.t_cz == math.inf
    with pytest.raises(ValidationError):
        NoiseParams(t1=(0.0, 100.0), t_phi=(200.0, 200.0), gate_time=48.0)


def test_flux_noise_offset_std():
    fn = FluxNoiseParams(amplitude=4.84, f_low=1.0, f_high=1.0e7)
    expected = math.sqrt(2.0 * (4.84e-6) ** 2 * math.log(1.0e7))
    assert fn.offset_std == pytest.approx(expected)
    assert FluxNoiseParams(f_low=10.0, f_high=1.0).offset_std == 0.0


def test_leakage_error_model_rates():
    model = LeakageErrorModel(l1=2e-3, l2=3e-4, p_d=1.5e-3)
    assert model.lambda_l == pytest.approx(1.0 - 2.3e-3)
    assert model.lambda_r == pytest.approx((1.0 - 2e-3) * (1.0 - 1.5e-3))
    with pytest.raises(ValidationError):
        LeakageErrorModel(l1=0.8, l2=0.3)
    with pytest.raises(ValidationError):
        LeakageErrorModel(p_id0=1.0, p_x1_0=0.9)


def test_leakage_error_model_compose_multiplies_decays():
    first = LeakageErrorModel(l1=2e-3, l2=3e-4, p_d=1.5e-3)
    second = LeakageErrorModel(l1=1e-3, l2=2e-4, p_d=5e-4)
    composed = first.compose(second)
    assert composed.lambda_l == pytest.approx(first.lambda_l * second.lambda_l)
    assert composed.lambda_r == pytest.approx(first.lambda_r * second.lambda_r)


def test_rb_dataset_validation():
    data = RBDataset(m_values=[1, 5], p_id=[0.9, 0.8], p_x1=[0.99, 0.98])
    assert data.n_sequences == 1
    assert data.p_id.shape == (2, 1)
    rows = list(data.csv_rows())
    assert rows[0] == ("SRB", 1, 0, 0.9, 0.99)
    with pytest.raises(ValidationError):
        RBDataset(m_values=[5, 1], p_id=[0.9, 0.8], p_x1=[0.99, 0.98])
    with pytest.raises(ValidationError):
        RBDataset(m_values=[1, 5], p_id=[0.9, 1.2], p_x1=[0.99, 0.98])


def test_fit_result_rates():
    fit = FitResult(lambda_l=0.99, a_m=0.5, b_m=0.5, lambda_r=0.98, c_m=0.7, d_m=0.05)
    assert fit.leakage_rate == pytest.approx(0.005)
    assert fit.error_rate == pytest.approx(0.015)
