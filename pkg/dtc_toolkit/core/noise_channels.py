"""
Incoherent error channels.

This module builds Kraus-operator channels for relaxation, pure dephasing,
correlated CZ dephasing and global depolarizing noise on the two-qubit
computational space, evaluates their average fidelity in closed form and
by brute force over stabilizer states, and estimates the error induced by
quasi-static 1/f flux noise by Monte Carlo.

Units: coherence times in microseconds, gate times in nanoseconds, echo
dephasing rates in 1/us.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from dtc_toolkit.core.circuit_model import build_hamiltonian
from dtc_toolkit.core.clifford import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    build_clifford_group,
    canonical_key,
)
from dtc_toolkit.core.gate_dynamics import CZ, apply_vz, average_gate_fidelity, cphase_angles, evolve
from dtc_toolkit.exceptions import ChannelError, DomainError
from dtc_toolkit.models.circuit import BasisConfig, CircuitParams, HamiltonianOperator
from dtc_toolkit.models.noise import (
    ErrorBudget,
    FluxNoiseParams,
    FluxNoiseResult,
    IncoherentEstimate,
    KrausSet,
    NoiseParams,
)
from dtc_toolkit.models.pulse import Waveform

# Setup logging
logger = logging.getLogger(__name__)

COMPLETENESS_TOLERANCE = 1e-9


def _check_probability(name: str, p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1]", parameter=name, value=p)


def _embed(op: np.ndarray, qubit: Optional[int]) -> np.ndarray:
    if qubit is None:
        return op
    if qubit == 1:
        return np.kron(op, IDENTITY_2)
    if qubit == 2:
        return np.kron(IDENTITY_2, op)
    raise DomainError("qubit must be 1, 2 or None", parameter="qubit", value=qubit)


def _kraus(operators: Sequence[np.ndarray], label: str) -> KrausSet:
    kept = [k for k in operators if np.any(np.abs(k) > 0)]
    return KrausSet(operators=kept, label=label)


def relaxation_kraus(qubit: Optional[int], p1: float) -> KrausSet:
    """
    Amplitude damping of one qubit with probability p1.

    Args:
        qubit: 1 or 2 for the two-qubit embedding, None for a single qubit
        p1: Damping probability, 1 - exp(-t / T1)
    """
    _check_probability("p1", p1)
    k0 = np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - p1)]], dtype=complex)
    k1 = np.array([[0.0, math.sqrt(p1)], [0.0, 0.0]], dtype=complex)
    label = f"relaxation_q{qubit}" if qubit else "relaxation"
    return _kraus([_embed(k0, qubit), _embed(k1, qubit)], label)


def dephasing_kraus(qubit: Optional[int], p_phi: float) -> KrausSet:
    """Phase flip of one qubit with probability p_phi = (1 - exp(-t / T_phi)) / 2."""
    _check_probability("p_phi", p_phi)
    k0 = math.sqrt(1.0 - p_phi) * IDENTITY_2
    k1 = math.sqrt(p_phi) * PAULI_Z
    label = f"dephasing_q{qubit}" if qubit else "dephasing"
    return _kraus([_embed(k0, qubit), _embed(k1, qubit)], label)


def cz_dephasing_kraus(p_cz: float) -> KrausSet:
    """Correlated dephasing of |11> against the other computational states."""
    _check_probability("p_cz", p_cz)
    k0 = math.sqrt(1.0 - p_cz) * np.eye(4, dtype=complex)
    k1 = math.sqrt(p_cz) * CZ
    return _kraus([k0, k1], "cz_dephasing")


def depolarizing_kraus(p: float, n_qubits: int = 2) -> KrausSet:
    """Global depolarizing rho -> (1 - p) rho + p I / d in the Pauli representation."""
    _check_probability("p", p)
    paulis = [IDENTITY_2, PAULI_X, PAULI_Y, PAULI_Z]
    ops = []
    for combo in product(paulis, repeat=n_qubits):
        op = combo[0]
        for factor in combo[1:]:
            op = np.kron(op, factor)
        ops.append(op)
    n = len(ops)
    weights = [1.0 - (n - 1) * p / n] + [p / n] * (n - 1)
    return _kraus([math.sqrt(w) * op for w, op in zip(weights, ops)], "depolarizing")


def compose(second: KrausSet, first: KrausSet) -> KrausSet:
    """Channel applying ``first`` and then ``second``."""
    if second.dimension != first.dimension:
        raise DomainError("Kraus sets act on different dimensions", parameter="dimension")
    ops = [b @ a for b in second.operators for a in first.operators]
    return _kraus(ops, f"{second.label}*{first.label}")


def average_fidelity_of(kraus: KrausSet) -> float:
    """
    Average fidelity sum_k [Tr(K^dagger K) + |Tr K|^2] / (d (d + 1)).

    Raises:
        ChannelError: If the Kraus set is not complete to 1e-9
    """
    error = kraus.completeness_error
    if error > COMPLETENESS_TOLERANCE:
        raise ChannelError(
            f"Kraus set '{kraus.label}' violates completeness by {error:.3g}",
            completeness_error=error,
        )
    d = kraus.dimension
    total = sum(np.trace(k.conj().T @ k).real + abs(np.trace(k)) ** 2 for k in kraus.operators)
    return float(total / (d * (d + 1)))


@lru_cache(maxsize=2)
def stabilizer_states(n_qubits: int = 2) -> np.ndarray:
    """
    Stabilizer states as the Clifford orbit of |0...0>.

    Returns 6 states for one qubit and 60 for two.
    """
    group = build_clifford_group(n_qubits)
    ground = np.zeros(group.dimension, dtype=complex)
    ground[0] = 1.0
    states: Dict[bytes, np.ndarray] = {}
    for u in group.elements:
        psi = u @ ground
        states.setdefault(canonical_key(psi), psi)
    return np.array(list(states.values()))


def state_averaged_fidelity(kraus: KrausSet) -> float:
    """Mean of <psi| E(|psi><psi|) |psi> over all stabilizer states."""
    n_qubits = {2: 1, 4: 2}.get(kraus.dimension)
    if n_qubits is None:
        raise DomainError("Stabilizer averages need dimension 2 or 4", parameter="dimension")
    values = []
    for psi in stabilizer_states(n_qubits):
        rho = np.outer(psi, psi.conj())
        values.append(np.real(psi.conj() @ kraus.apply(rho) @ psi))
    return float(np.mean(values))


def damping_probability(gate_time_ns: float, t1_us: float) -> float:
    """p1 = 1 - exp(-t / T1)."""
    return float(-math.expm1(-gate_time_ns * 1e-3 / t1_us)) if math.isfinite(t1_us) else 0.0


def phase_flip_probability(gate_time_ns: float, t_us: float) -> float:
    """(1 - exp(-t / T)) / 2, used for both T_phi and T_CZ."""
    return float(-math.expm1(-gate_time_ns * 1e-3 / t_us) / 2) if math.isfinite(t_us) else 0.0


def dephasing_time_from_echo(t1_us: float, t2_echo_us: float) -> float:
    """
    Pure dephasing time from 1 / T_phi = 1 / T2E - 1 / (2 T1).

    Raises:
        DomainError: If T2E exceeds 2 T1
    """
    rate = 1.0 / t2_echo_us - 1.0 / (2.0 * t1_us)
    if rate < -1e-15:
        raise DomainError("T2E cannot exceed 2 T1", parameter="t2_echo", value=t2_echo_us)
    return math.inf if rate <= 0 else 1.0 / rate


def incoherent_error_estimate(noise: NoiseParams) -> IncoherentEstimate:
    """
    Linear incoherent CZ error and its effective coherence time.

    error = (2/5) t (1/T1 + 1/T1' + 1/T_phi + 1/T_phi') + (3/10) t / T_CZ
          = (2/5) t / T_eff
    """
    t = noise.gate_time * 1e-3
    terms = {
        "relaxation_q1": 0.4 * t / noise.t1[0],
        "relaxation_q2": 0.4 * t / noise.t1[1],
        "dephasing_q1": 0.4 * t / noise.t_phi[0],
        "dephasing_q2": 0.4 * t / noise.t_phi[1],
        "cz_dephasing": 0.3 * t / noise.t_cz,
    }
    total = sum(terms.values())
    t_eff = 0.4 * t / total if total > 0 else math.inf
    return IncoherentEstimate(terms=terms, total=total, t_eff=t_eff)


def single_qubit_incoherent(gate_time_ns: float, t1_us: float, t_phi_us: float) -> float:
    """Single-qubit incoherent error (t / 3)(1 / T1 + 1 / T_phi)."""
    if not (t1_us > 0 and t_phi_us > 0):
        raise DomainError("coherence times must be positive", parameter="t1/t_phi")
    return gate_time_ns * 1e-3 / 3.0 * (1.0 / t1_us + 1.0 / t_phi_us)


def noise_channels(noise: NoiseParams) -> List[KrausSet]:
    """The five incoherent channels of a CZ gate in application order."""
    t = noise.gate_time
    return [
        relaxation_kraus(1, damping_probability(t, noise.t1[0])),
        relaxation_kraus(2, damping_probability(t, noise.t1[1])),
        dephasing_kraus(1, phase_flip_probability(t, noise.t_phi[0])),
        dephasing_kraus(2, phase_flip_probability(t, noise.t_phi[1])),
        cz_dephasing_kraus(phase_flip_probability(t, noise.t_cz)),
    ]


def error_budget(noise: NoiseParams) -> ErrorBudget:
    """Exact per-channel errors, their composition and the linear estimate."""
    channels = noise_channels(noise)
    contributions = {k.label: 1.0 - average_fidelity_of(k) for k in channels}
    total = channels[0]
    for k in channels[1:]:
        total = compose(k, total)
    estimate = incoherent_error_estimate(noise)
    return ErrorBudget(
        contributions=contributions,
        linear_total=estimate.total,
        composed_total=1.0 - average_fidelity_of(total),
        t_eff=estimate.t_eff,
    )


def echo_dephasing_rate(amplitude_uphi0: float, sensitivity: float) -> float:
    """
    Echo dephasing rate induced by 1/f flux noise.

    Gamma = (2 pi)^2 sqrt(A_Phi ln 2) |df / d phi_ex|, with sqrt(A_Phi) in
    flux quanta and the sensitivity in GHz per radian of loop phase.

    Args:
        amplitude_uphi0: sqrt(A_Phi) in micro flux quanta
        sensitivity: df / d phi_ex (GHz/rad)

    Returns:
        Rate in 1/us
    """
    return (
        (2 * math.pi) ** 2
        * amplitude_uphi0
        * 1e-6
        * math.sqrt(math.log(2))
        * abs(sensitivity)
        * 1e3
    )


def fit_flux_noise_amplitude(sensitivities: Sequence[float], rates: Sequence[float]) -> float:
    """sqrt(A_Phi) in micro flux quanta from a fit of echo rates through the origin."""
    s = np.abs(np.asarray(sensitivities, dtype=float))
    g = np.asarray(rates, dtype=float)
    denominator = float(s @ s)
    if denominator == 0:
        raise DomainError("sensitivities must not all vanish", parameter="sensitivities")
    slope = float(s @ g) / denominator
    return slope / echo_dephasing_rate(1.0, 1.0)


def _vz_phases(
    ham: HamiltonianOperator, waveform: Waveform, idle_flux: float
) -> Tuple[float, float]:
    phases = cphase_angles(evolve(None, None, waveform, idle_flux, hamiltonian=ham))
    return phases.theta1, phases.theta2


def _infidelity_at_offset(
    ham: HamiltonianOperator,
    waveform: Waveform,
    idle_flux: float,
    offset: float,
    phases: Tuple[float, float],
) -> float:
    """CZ infidelity with a quasi-static flux offset and fixed VZ phases."""
    u = evolve(None, None, waveform, idle_flux, hamiltonian=ham, flux_offset=offset)
    return 1.0 - average_gate_fidelity(apply_vz(u, *phases), CZ)


def flux_noise_mc(
    params: Optional[CircuitParams],
    basis: Optional[BasisConfig],
    waveform: Waveform,
    fn: FluxNoiseParams,
    idle_flux: float = 0.309,
    hamiltonian: Optional[HamiltonianOperator] = None,
    vz: Optional[Tuple[float, float]] = None,
) -> FluxNoiseResult:
    """
    Error induced by quasi-static 1/f flux noise.

    Each sample adds one Gaussian offset, with the variance of the 1/f
    spectrum integrated over [f_low, f_high], to the whole pulse. The
    virtual-Z phases stay at their nominal values.

    Args:
        params: Circuit parameters (unused when hamiltonian is given)
        basis: Truncation settings
        waveform: Optimized pulse
        fn: Noise amplitude, band, sample count and seed
        idle_flux: Idle reduced flux
        hamiltonian: Prebuilt operator
        vz: Nominal (theta1, theta2); read from the ideal propagator by default

    Returns:
        Per-sample offsets and induced errors with their mean and spread
    """
    std = fn.offset_std
    offsets = np.array(
        [
            np.random.default_rng(np.random.SeedSequence(fn.seed, spawn_key=(i,))).normal(0.0, std)
            if std > 0
            else 0.0
            for i in range(fn.samples)
        ]
    )
    ham = hamiltonian or build_hamiltonian(params, basis)
    phases = vz if vz is not None else _vz_phases(ham, waveform, idle_flux)
    nominal = _infidelity_at_offset(ham, waveform, idle_flux, 0.0, phases)

    def induced(offset: float) -> float:
        return _infidelity_at_offset(ham, waveform, idle_flux, float(offset), phases) - nominal

    if fn.max_workers > 1:
        with ThreadPoolExecutor(max_workers=fn.max_workers) as pool:
            errors = np.array(list(pool.map(induced, offsets)))
    else:
        errors = np.array([induced(o) for o in offsets])

    logger.info(
        f"Flux-noise Monte Carlo: {fn.samples} samples, offset std {std:.3g}, "
        f"mean induced error {errors.mean():.3g}"
    )
    return FluxNoiseResult(
        offsets=offsets,
        errors=errors,
        mean=float(errors.mean()),
        std=float(errors.std()),
        nominal_infidelity=nominal,
    )
