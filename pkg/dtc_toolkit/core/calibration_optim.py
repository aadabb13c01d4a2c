"""
Calibration sequences and pulse optimization.

This module simulates the JAZZ family of ZZ and CPHASE calibration
measurements, optimizes flux pulses through a pluggable derivative-free
optimizer, and calibrates the virtual-Z phases and the pulse amplitude of a
CZ gate. Single-qubit gates inside sequences are ideal rotations acting on
the computational states and as the identity on leaked states.
"""

import logging
import math
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import curve_fit

from dtc_toolkit.core.base import Optimizer, WaveformObjective
from dtc_toolkit.core.circuit_model import build_hamiltonian
from dtc_toolkit.core.clifford import build_clifford_group, rx
from dtc_toolkit.core.gate_dynamics import (
    apply_vz,
    cphase_angles,
    cz_fidelity,
    evolve,
)
from dtc_toolkit.core.optimizer import EvolutionStrategy, best_per_epoch
from dtc_toolkit.core.pulse_shaping import controls_from_waveform, waveform_from_controls
from dtc_toolkit.exceptions import DTCError, DomainError, FitError, PhaseUnwrapError
from dtc_toolkit.models.circuit import BasisConfig, CircuitParams, HamiltonianOperator
from dtc_toolkit.models.gate import (
    JazzFit,
    JazzModel,
    OptimizationResult,
    OptimizerConfig,
    Propagator,
    TraceEntry,
    VZCalibration,
)
from dtc_toolkit.models.pulse import Waveform

# Setup logging
logger = logging.getLogger(__name__)

RAMSEY_REPETITIONS = 8
UNWRAP_LIMIT = 0.95 * math.pi
PHASE_RESIDUAL_LIMIT = 0.1
AMPLITUDE_KS = (0, 2, 10, 25)

VZ_REFINE_CONFIG = OptimizerConfig(
    population=12,
    parents=3,
    epochs=40,
    sigma0=math.radians(2.0),
    sigma_decay=0.9,
    sigma_min=1e-6,
    target=1.0 - 1e-12,
)


def simulate_jazz(model: JazzModel) -> np.ndarray:
    """
    Ground-state population of the JAZZ sequence over the duration grid.

    P0(t) = (1 - cos(2 pi (zeta / 2 + omega_b) t + phi0)) / 2
    """
    t_us = np.asarray(model.durations, dtype=float) * 1e-3
    return (1.0 - np.cos(2.0 * math.pi * model.oscillation_mhz * t_us + model.phi0)) / 2.0


def _jazz_curve(t_ns: np.ndarray, frequency_mhz: float, phi0: float) -> np.ndarray:
    return (1.0 - np.cos(2.0 * math.pi * frequency_mhz * t_ns * 1e-3 + phi0)) / 2.0


def fit_jazz(
    durations: Sequence[float], populations: Sequence[float], baseline_mhz: float = 0.0
) -> JazzFit:
    """
    Oscillation frequency and phase of JAZZ data.

    The frequency is seeded from the peak of a zero-padded FFT and refined
    by least squares; zeta = 2 (omega_m - omega_b).

    Raises:
        FitError: If the fit does not converge
    """
    t = np.asarray(durations, dtype=float)
    p = np.asarray(populations, dtype=float)
    if t.size < 4:
        raise FitError("JAZZ fit needs at least 4 points")

    grid = np.linspace(t.min(), t.max(), t.size)
    uniform = np.interp(grid, t, p)
    n_fft = 16 * grid.size
    spectrum = np.abs(np.fft.rfft(uniform - uniform.mean(), n=n_fft))
    freqs = np.fft.rfftfreq(n_fft, d=grid[1] - grid[0]) * 1e3
    seed = float(freqs[1:][np.argmax(spectrum[1:])])

    best = None
    for phi_seed in np.linspace(-math.pi, math.pi, 8, endpoint=False):
        try:
            popt, _ = curve_fit(_jazz_curve, t, p, p0=[seed, phi_seed], maxfev=20000)
        except RuntimeError:
            continue
        rms = float(np.sqrt(np.mean((_jazz_curve(t, *popt) - p) ** 2)))
        if best is None or rms < best[1]:
            best = (popt, rms)
    if best is None:
        raise FitError("JAZZ fit did not converge", residuals=p - p.mean())

    (frequency, phi0), rms = best
    if frequency < 0:
        frequency, phi0 = -frequency, -phi0
    phi0 = math.remainder(phi0, 2.0 * math.pi)
    return JazzFit(
        oscillation_mhz=float(frequency),
        zeta_mhz=2.0 * (float(frequency) - baseline_mhz),
        phi0=float(phi0),
        residual_rms=rms,
    )


def jazz_n_fidelity(theta_cz: float, k: int) -> float:
    """
    JAZZ-N sequence fidelity (1 - cos((2k + 1) theta_cz)) / 2.

    Raises:
        DomainError: If k is negative
    """
    if k < 0:
        raise DomainError("k must be non-negative", parameter="k", value=k)
    return (1.0 - math.cos((2 * k + 1) * theta_cz)) / 2.0


def _local_gate(block: np.ndarray, dim: int, comp: Sequence[int]) -> np.ndarray:
    gate = np.eye(dim, dtype=complex)
    idx = np.asarray(comp)
    gate[np.ix_(idx, idx)] = block
    return gate


def jazz2_sequence_fidelity(u: Union[Propagator, np.ndarray], k: int) -> float:
    """
    Ground-state population after the JAZZ2-N sequence.

    X/2 on both qubits, then 2k + 1 blocks of (Z pulse, X on both, Z pulse),
    then -X/2 on both. For a diagonal CPHASE this equals
    jazz_n_fidelity(theta_cz, k).
    """
    if k < 0:
        raise DomainError("k must be non-negative", parameter="k", value=k)
    if isinstance(u, Propagator):
        matrix, comp = u.matrix, u.comp_indices
    else:
        matrix, comp = np.asarray(u, dtype=complex), (0, 1, 2, 3)
    dim = matrix.shape[0]

    half = _local_gate(np.kron(rx(math.pi / 2), rx(math.pi / 2)), dim, comp)
    flip = _local_gate(np.kron(rx(math.pi), rx(math.pi)), dim, comp)
    unhalf = _local_gate(np.kron(rx(-math.pi / 2), rx(-math.pi / 2)), dim, comp)
    block = matrix @ flip @ matrix

    psi = np.zeros(dim, dtype=complex)
    psi[comp[0]] = 1.0
    psi = half @ psi
    for _ in range(2 * k + 1):
        psi = block @ psi
    psi = unhalf @ psi
    return float(abs(psi[comp[0]]) ** 2)


class CZFidelityObjective(WaveformObjective):
    """Average CZ fidelity after optimal virtual-Z correction."""

    def __init__(
        self,
        params: Optional[CircuitParams],
        basis: Optional[BasisConfig],
        idle_flux: float = 0.309,
        hamiltonian: Optional[HamiltonianOperator] = None,
        substeps: int = 4,
    ):
        """
        Initialize the objective.

        Args:
            params: Circuit parameters (unused when hamiltonian is given)
            basis: Truncation settings
            idle_flux: Idle reduced flux
            hamiltonian: Prebuilt operator shared by every evaluation
            substeps: Integrator sub-steps per sample interval
        """
        self.basis = basis
        self.idle_flux = idle_flux
        self.substeps = substeps
        self.hamiltonian = hamiltonian or build_hamiltonian(params, basis)

    def propagate(self, waveform: Waveform) -> Propagator:
        return evolve(
            None,
            self.basis,
            waveform,
            self.idle_flux,
            hamiltonian=self.hamiltonian,
            substeps=self.substeps,
        )

    def __call__(self, waveform: Waveform) -> float:
        return cz_fidelity(self.propagate(waveform))


class Jazz2Objective(CZFidelityObjective):
    """JAZZ2-N ground-state population for a fixed repetition index k."""

    def __init__(self, *args, k: int = 9, **kwargs):
        super().__init__(*args, **kwargs)
        self.k = k

    def __call__(self, waveform: Waveform) -> float:
        return jazz2_sequence_fidelity(self.propagate(waveform), self.k)


def jazz2_n_objective(
    params: Optional[CircuitParams],
    basis: Optional[BasisConfig],
    waveform: Waveform,
    k: int,
    idle_flux: float = 0.309,
    hamiltonian: Optional[HamiltonianOperator] = None,
) -> float:
    """Simulated JAZZ2-N ground-state population of a flux pulse."""
    return Jazz2Objective(params, basis, idle_flux, hamiltonian, k=k)(waveform)


def _scored(objective: Callable[[Waveform], float], waveform: Waveform) -> float:
    try:
        return float(objective(waveform))
    except DTCError as e:
        logger.debug(f"Candidate rejected: {e}")
        return 0.0


def optimize_pulse(
    initial: Waveform,
    objective: Callable[[Waveform], float],
    cfg: Optional[OptimizerConfig] = None,
    optimizer: Optional[Optimizer] = None,
) -> OptimizationResult:
    """
    Optimize the control points of a flux pulse.

    Candidates are the cubic interpolation of ``cfg.n_control`` interior
    control points onto the core of the initial waveform. Candidates that
    raise a toolkit error score 0. The initial waveform itself competes as
    best-seen.

    Args:
        initial: Starting pulse; fixes sampling and padding
        objective: Maps a waveform to [0, 1]
        cfg: Optimizer settings
        optimizer: Search algorithm; a seeded evolution strategy by default

    Returns:
        Best-seen waveform with its trace
    """
    cfg = cfg or OptimizerConfig()
    controls0 = controls_from_waveform(initial, cfg.n_control)
    f0 = _scored(objective, initial)
    if f0 >= cfg.target:
        logger.info(f"Initial objective {f0:.6f} already meets target {cfg.target}")
        return OptimizationResult(
            waveform=initial, best_objective=f0, controls=controls0, reached_target=True
        )

    def score(controls: np.ndarray) -> float:
        return _scored(objective, waveform_from_controls(controls, initial))

    optimizer = optimizer or EvolutionStrategy(cfg)
    best_x, best_f, trace = optimizer.maximize(score, controls0, f0)

    if best_f <= f0:
        waveform, best_x, best_f = initial, controls0, f0
    else:
        waveform = waveform_from_controls(best_x, initial)
    logger.info(f"Pulse optimization: {f0:.6f} -> {best_f:.6f} over {len(trace)} evaluations")
    return OptimizationResult(
        waveform=waveform,
        best_objective=best_f,
        controls=best_x,
        trace=[TraceEntry(epoch=e, candidate=c, objective=f) for e, c, f in trace],
        best_per_epoch=best_per_epoch(trace, f0),
        reached_target=best_f >= cfg.target,
    )


def fit_phase_per_cycle(repetitions: Sequence[int], phases: Sequence[float]) -> float:
    """
    Phase per pulse from a linear fit of unwrapped repeated-pulse phases.

    Raises:
        PhaseUnwrapError: If the per-cycle phase is too close to pi or the
            unwrapped phases are not linear
    """
    n = np.asarray(repetitions, dtype=float)
    unwrapped = np.unwrap(np.asarray(phases, dtype=float))
    slope, intercept = np.polyfit(n, unwrapped, 1)
    residual = float(np.max(np.abs(unwrapped - (slope * n + intercept))))
    if abs(slope) >= UNWRAP_LIMIT or residual > PHASE_RESIDUAL_LIMIT:
        raise PhaseUnwrapError(
            "Repeated-pulse phases cannot be unwrapped; use a shorter test pulse",
            phase_per_cycle=float(slope),
        )
    return float(slope)


def ramsey_phases(u: Propagator, qubit: int, repetitions: Sequence[int]) -> np.ndarray:
    """
    Relative phase of the target qubit after N repeated pulses.

    The target qubit starts in an equal superposition and the spectator in
    |0>.
    """
    comp = u.comp_indices
    ground, excited = (comp[0], comp[2]) if qubit == 1 else (comp[0], comp[1])
    psi0 = np.zeros(u.dimension, dtype=complex)
    psi0[[ground, excited]] = 1.0 / math.sqrt(2.0)
    phases = []
    for n in repetitions:
        psi = np.linalg.matrix_power(u.matrix, int(n)) @ psi0
        phases.append(float(np.angle(psi[excited]) - np.angle(psi[ground])))
    return np.asarray(phases)


def _vz_rb_objective(
    block: np.ndarray,
    theta_cz: float,
    n_sequences: int,
    length: int,
    seed: int,
) -> Callable[[np.ndarray], float]:
    group = build_clifford_group(2)
    rng = np.random.default_rng(seed)
    sequences = [group.sample(rng, length) for _ in range(n_sequences)]
    ideal = np.diag([1.0, 1.0, 1.0, np.exp(1j * theta_cz)])
    recoveries = [group.recovery(s, ideal) for s in sequences]

    def objective(theta: np.ndarray) -> float:
        gate = apply_vz(block, theta[0], theta[1])
        survival = 0.0
        for sequence, recovery in zip(sequences, recoveries):
            psi = np.zeros(4, dtype=complex)
            psi[0] = 1.0
            for i in sequence:
                psi = gate @ (group.elements[i] @ psi)
            survival += abs((recovery @ psi)[0]) ** 2
        return survival / n_sequences

    return objective


def calibrate_vz_from_propagator(
    u: Propagator,
    refine: bool = True,
    n_sequences: int = 10,
    sequence_length: int = 4,
    seed: int = 0,
    cfg: Optional[OptimizerConfig] = None,
) -> VZCalibration:
    """
    Virtual-Z phases of a gate propagator.

    Repeated-pulse Ramsey phases for N = 1..8 are fitted per qubit, then
    refined by maximizing the survival of short Clifford sequences
    interleaved with the corrected gate.

    Raises:
        PhaseUnwrapError: If a per-cycle phase cannot be unwrapped
    """
    repetitions = np.arange(1, RAMSEY_REPETITIONS + 1)
    theta1 = fit_phase_per_cycle(repetitions, ramsey_phases(u, 1, repetitions))
    theta2 = fit_phase_per_cycle(repetitions, ramsey_phases(u, 2, repetitions))
    logger.debug(
        f"Ramsey VZ phases: {math.degrees(theta1):.3f} deg, {math.degrees(theta2):.3f} deg"
    )

    refined = np.array([theta1, theta2])
    score = float("nan")
    if refine:
        theta_cz = cphase_angles(u).theta_cz
        objective = _vz_rb_objective(u.comp_block, theta_cz, n_sequences, sequence_length, seed)
        cfg = cfg or VZ_REFINE_CONFIG.model_copy(update={"seed": seed})
        refined, score, _ = EvolutionStrategy(cfg).maximize(objective, refined, objective(refined))

    return VZCalibration(
        theta1=float(refined[0]),
        theta2=float(refined[1]),
        ramsey_theta1=theta1,
        ramsey_theta2=theta2,
        refined_objective=float(score),
    )


def calibrate_vz(
    params: Optional[CircuitParams],
    basis: Optional[BasisConfig],
    waveform: Waveform,
    idle_flux: float = 0.309,
    hamiltonian: Optional[HamiltonianOperator] = None,
    **kwargs: Any,
) -> VZCalibration:
    """Evolve a fixed waveform and calibrate its virtual-Z phases."""
    u = evolve(params, basis, waveform, idle_flux, hamiltonian=hamiltonian)
    return calibrate_vz_from_propagator(u, **kwargs)


def _theta_cz_at_amplitude(
    amplitude: float,
    template: Waveform,
    hamiltonian: HamiltonianOperator,
    basis: Optional[BasisConfig],
    idle_flux: float,
) -> float:
    u = evolve(None, basis, template.scaled(amplitude), idle_flux, hamiltonian=hamiltonian)
    return cphase_angles(u).theta_cz


def calibrate_amplitude(
    params: Optional[CircuitParams],
    basis: Optional[BasisConfig],
    template: Waveform,
    amplitude_range: Tuple[float, float],
    idle_flux: float = 0.309,
    k_values: Sequence[int] = AMPLITUDE_KS,
    points: int = 21,
    hamiltonian: Optional[HamiltonianOperator] = None,
) -> Tuple[float, List[Dict[str, float]]]:
    """
    JAZZ-N amplitude calibration with successive narrowing.

    For each k the amplitude range is scanned, the maximum of
    jazz_n_fidelity(theta_cz(amplitude), k) is kept and the range shrinks
    to two grid steps around it.

    Args:
        params: Circuit parameters (unused when hamiltonian is given)
        basis: Truncation settings
        template: Unit-peak pulse shape
        amplitude_range: Initial (low, high) peak excursion
        idle_flux: Idle reduced flux
        k_values: Repetition indices, coarse to fine
        points: Scan points per stage
        hamiltonian: Prebuilt operator

    Returns:
        Calibrated amplitude and the scan rows (k, amplitude, theta_cz, fidelity)
    """
    low, high = amplitude_range
    if not 0 < low < high:
        raise DomainError("amplitude range must satisfy 0 < low < high", parameter="amplitude_range")
    ham = hamiltonian or build_hamiltonian(params, basis)

    rows: List[Dict[str, float]] = []
    best = (low + high) / 2
    for k in k_values:
        grid = np.linspace(low, high, points)
        scores = []
        for amplitude in grid:
            try:
                theta = _theta_cz_at_amplitude(float(amplitude), template, ham, basis, idle_flux)
                fidelity = jazz_n_fidelity(theta, k)
            except DTCError as e:
                logger.debug(f"Amplitude {amplitude:.5f} rejected: {e}")
                theta, fidelity = float("nan"), 0.0
            scores.append(fidelity)
            rows.append({"k": k, "amplitude": float(amplitude), "theta_cz": theta, "fidelity": fidelity})
        best = float(grid[int(np.argmax(scores))])
        step = grid[1] - grid[0]
        low, high = max(best - 2 * step, 1e-12), best + 2 * step
        logger.debug(f"JAZZ-N k={k}: amplitude {best:.6f}, fidelity {max(scores):.6f}")

    logger.info(f"Calibrated amplitude {best:.6f}")
    return best, rows
