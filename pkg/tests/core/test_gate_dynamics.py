import math

import numpy as np
import pytest

from dtc_toolkit.config import get_default_config
from dtc_toolkit.core.circuit_model import build_hamiltonian
from dtc_toolkit.core.gate_dynamics import (
    CZ,
    apply_vz,
    average_gate_fidelity,
    cphase_angles,
    cz_fidelity,
    evolve,
    gate_report,
    leakage_of,
    vz_correction,
    wrap_phase,
)
from dtc_toolkit.core.pulse_shaping import slepian_unit_pulse
from dtc_toolkit.exceptions import DomainError, NonAdiabaticError
from dtc_toolkit.models import BasisConfig, CircuitParams, HamiltonianOperator, Propagator, Waveform

IDLE_FLUX = 0.25
PULSE = Waveform(samples=np.concatenate([[0.0], np.full(40, 0.1), [0.0]]), dt=0.5)


def _phase_integral(waveform: Waveform, substeps: int = 4) -> float:
    samples = waveform.samples
    step = waveform.dt / substeps
    total = 0.0
    for j in range(samples.size - 1):
        for frac in (np.arange(substeps) + 0.5) / substeps:
            x = samples[j] + frac * (samples[j + 1] - samples[j])
            total += math.sin(2.0 * math.pi * x) * step
    return total


def _diagonal_hamiltonian(c: float) -> HamiltonianOperator:
    return HamiltonianOperator(
        h0=np.diag([0.0, 5.0, 5.5, 10.5]).astype(complex),
        a=np.diag([0.0, 0.0, 0.0, c]).astype(complex),
        b=np.zeros((4, 4), dtype=complex),
    )


def test_wrap_phase():
    assert wrap_phase(math.pi) == pytest.approx(math.pi)
    assert wrap_phase(-math.pi) == pytest.approx(math.pi)
    assert wrap_phase(3 * math.pi / 2) == pytest.approx(-math.pi / 2)
    assert wrap_phase(0.3 + 4 * math.pi) == pytest.approx(0.3)


def test_cphase_angles_of_cz():
    phases = cphase_angles(CZ)
    assert abs(phases.theta_cz) == pytest.approx(math.pi)
    assert phases.theta1 == pytest.approx(0.0)
    assert phases.theta2 == pytest.approx(0.0)
    assert phases.cz_error_deg == pytest.approx(0.0, abs=1e-9)


def test_cphase_angles_rejects_swap_like_block():
    swap = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    with pytest.raises(NonAdiabaticError):
        cphase_angles(swap)


def test_leakage_of_block():
    u = np.eye(5, dtype=complex)
    c, s = math.cos(0.1), math.sin(0.1)
    u[3, 3], u[4, 3], u[3, 4], u[4, 4] = c, s, -s, c
    report = leakage_of(u)
    assert report.per_state[3] == pytest.approx(s**2)
    assert report.l1 == pytest.approx(s**2 / 4)


def test_vz_correction_removes_local_phases():
    theta1, theta2 = 0.4, -1.1
    u = np.diag([1.0, np.exp(1j * theta2), np.exp(1j * theta1), -np.exp(1j * (theta1 + theta2))])
    assert np.allclose(vz_correction(theta1, theta2) @ u, CZ)
    assert np.allclose(apply_vz(u * np.exp(0.7j), theta1, theta2), CZ)
    assert cz_fidelity(u) == pytest.approx(1.0)


def test_average_gate_fidelity():
    assert average_gate_fidelity(CZ, CZ) == pytest.approx(1.0)
    assert average_gate_fidelity(np.eye(4), CZ) == pytest.approx((4 + 4) / 20)
    assert average_gate_fidelity(np.sqrt(0.9) * np.eye(4)) == pytest.approx(0.9 * 20 / 20)
    with pytest.raises(DomainError):
        average_gate_fidelity(2.0 * np.eye(4))


def test_evolve_diagonal_hamiltonian_accumulates_conditional_phase():
    c = 0.5 / _phase_integral(PULSE)
    u = evolve(None, None, PULSE, IDLE_FLUX, hamiltonian=_diagonal_hamiltonian(c))
    assert u.comp_indices == (0, 1, 2, 3)
    assert u.unitarity_error < 1e-10
    assert u.steps == 41 * 4
    assert u.duration == pytest.approx(20.5)

    phases = cphase_angles(u)
    assert abs(phases.theta_cz) == pytest.approx(math.pi, abs=1e-9)
    assert phases.theta1 == pytest.approx(0.0, abs=1e-9)
    assert leakage_of(u).l1 == pytest.approx(0.0, abs=1e-12)
    assert cz_fidelity(u) == pytest.approx(1.0, abs=1e-12)


def test_evolve_with_flux_offset_changes_phase():
    c = 0.5 / _phase_integral(PULSE)
    ham = _diagonal_hamiltonian(c)
    nominal = cphase_angles(evolve(None, None, PULSE, IDLE_FLUX, hamiltonian=ham))
    shifted = cphase_angles(
        evolve(None, None, PULSE, IDLE_FLUX, hamiltonian=ham, flux_offset=1e-3)
    )
    assert abs(wrap_phase(shifted.theta_cz - nominal.theta_cz)) > 1e-4


def test_evolve_rejects_bad_waveforms():
    ham = _diagonal_hamiltonian(0.1)
    with pytest.raises(DomainError):
        evolve(None, None, PULSE.scaled(3.0), IDLE_FLUX, hamiltonian=ham)
    open_ended = Waveform(samples=[0.0, 0.1, 0.1], dt=0.5)
    with pytest.raises(DomainError):
        evolve(None, None, open_ended, IDLE_FLUX, hamiltonian=ham)
    with pytest.raises(DomainError):
        evolve(None, None, PULSE, IDLE_FLUX, hamiltonian=ham, substeps=0)


def test_gate_report():
    u = Propagator.from_block(CZ)
    report = gate_report(u)
    assert report["fidelity"] == pytest.approx(1.0)
    assert report["leakage_l1"] == pytest.approx(0.0)
    assert abs(report["theta_cz_rad"]) == pytest.approx(math.pi)

    detuned = gate_report(u, theta1=0.1, theta2=0.0)
    assert detuned["theta1_rad"] == 0.1
    assert detuned["fidelity"] < 1.0


def test_time_reversed_pulse_gives_phase_diagonal_product():
    s = np.linspace(0.0, 1.0, 81)
    samples = 0.1 * np.sin(np.pi * s) ** 2 * (1.0 + 0.5 * s)
    forward = Waveform(samples=samples, dt=0.5)
    backward = Waveform(samples=samples[::-1].copy(), dt=0.5)

    c = (1.0 / 6.0) / _phase_integral(forward)
    g = 0.002
    a = np.diag([0.0, 0.0, 0.0, c, 0.0]).astype(complex)
    a[3, 4] = a[4, 3] = g
    ham = HamiltonianOperator(
        h0=np.diag([0.0, 5.0, 5.5, 10.5, 11.0]).astype(complex),
        a=a,
        b=np.zeros((5, 5), dtype=complex),
    )

    u = evolve(None, None, forward, idle_flux=IDLE_FLUX, hamiltonian=ham)
    u_rev = evolve(None, None, backward, idle_flux=IDLE_FLUX, hamiltonian=ham)
    assert leakage_of(u).l1 < 1e-6
    assert leakage_of(u_rev).l1 < 1e-6

    product = (u_rev.matrix @ u.matrix)[:4, :4]
    off_diagonal = product - np.diag(np.diag(product))
    assert np.max(np.abs(off_diagonal)) < 1e-4
    assert np.allclose(np.abs(np.diag(product)), 1.0, atol=1e-5)

    theta = cphase_angles(u).theta_cz
    assert abs(theta) > 0.5
    assert wrap_phase(cphase_angles(u_rev).theta_cz - theta) == pytest.approx(0.0, abs=1e-5)
    assert wrap_phase(cphase_angles(product).theta_cz - 2 * theta) == pytest.approx(0.0, abs=1e-5)


@pytest.mark.slow
def test_conditional_phase_converges_in_kept_states():
    block = get_default_config()["device"]
    device = CircuitParams.from_table(
        block["node_caps"], block["mutual_caps"], block["critical_currents"]
    )
    basis = BasisConfig(**get_default_config()["basis"])
    ham = build_hamiltonian(device, basis)
    pulse = slepian_unit_pulse().scaled(0.161)

    small = evolve(device, basis, pulse, hamiltonian=ham, kept_total=60)
    large = evolve(device, basis, pulse, hamiltonian=ham, kept_total=80)
    difference = wrap_phase(cphase_angles(large).theta_cz - cphase_angles(small).theta_cz)
    assert abs(difference) < 1e-5
