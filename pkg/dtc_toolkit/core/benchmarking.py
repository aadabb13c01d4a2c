"""
Randomized benchmarking with leakage.

This module evaluates the isotropic leakage/depolarizing error model in
closed form, simulates standard and interleaved RB sequences (density
matrix, shot-sampled and full-propagator modes), fits the leakage and
survival decays and extracts CZ-gate metrics and gate-length trends.
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import linregress

from dtc_toolkit.core.clifford import CZ_GATE, CliffordGroup, build_clifford_group
from dtc_toolkit.core.gate_dynamics import vz_correction
from dtc_toolkit.exceptions import DomainError, FitError
from dtc_toolkit.models.benchmarking import (
    CZMetrics,
    FitResult,
    GateLengthRow,
    GateLengthStudy,
    LeakageErrorModel,
    RBDataset,
)
from dtc_toolkit.models.gate import Propagator
from dtc_toolkit.models.noise import KrausSet

# Setup logging
logger = logging.getLogger(__name__)

DEFAULT_SEQUENCES = 10
SINGLE_QUBIT_GATES_PER_CLIFFORD = 1.875
OUTLIER_Z = 3.0


def _exponential(m, a, b, lam):
    return a + b * np.power(lam, m)


def _apply_spam(
    model: LeakageErrorModel, p_x1: np.ndarray, p_id: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    measured_x1 = p_x1 + model.l20 * (1.0 - p_x1)
    measured_id = p_id + model.l20 * (1.0 - p_x1) + model.gamma * (p_x1 - p_id)
    return measured_x1, measured_id


def recursion_survival(
    model: LeakageErrorModel, m_values: Sequence[int]
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Measured survival probabilities of the leakage error model.

    P_X1(m) = A + B lambda_L^m and P_id(m) - P_X1(m)/d = C lambda_r^m,
    followed by the state-dependent SPAM bias.

    Returns:
        (P_X1^M, P_id^M) over m_values
    """
    m = np.asarray(m_values, dtype=float)
    d = model.dim
    rate = model.l1 + model.l2
    a = model.l2 / rate if rate > 0 else 0.0
    b = model.p_x1_0 - a
    c = model.p_id0 - model.p_x1_0 / d
    p_x1 = a + b * np.power(model.lambda_l, m)
    p_id = p_x1 / d + c * np.power(model.lambda_r, m)
    return _apply_spam(model, p_x1, p_id)


def _error_step(rho: np.ndarray, model: LeakageErrorModel) -> np.ndarray:
    d = rho.shape[0]
    trace = float(np.trace(rho).real)
    mixed = np.eye(d) / d
    return (1.0 - model.l1) * ((1.0 - model.p_d) * rho + model.p_d * trace * mixed) + (
        model.l2 * (1.0 - trace) * mixed
    )


def _prepared_state(model: LeakageErrorModel) -> np.ndarray:
    d = model.dim
    ground = np.zeros((d, d), dtype=complex)
    ground[0, 0] = 1.0
    rest = (np.eye(d) - ground) / (d - 1)
    return model.p_id0 * ground + (model.p_x1_0 - model.p_id0) * rest


def _sequence_rng(seed: int, i_m: int, s: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i_m, s)))


def _sampled(rng: np.random.Generator, p: float, shots: int) -> float:
    if shots <= 0:
        return p
    return rng.binomial(shots, min(max(p, 0.0), 1.0)) / shots


def simulate_rb(
    model: LeakageErrorModel,
    m_values: Sequence[int],
    n_sequences: int = DEFAULT_SEQUENCES,
    shots: int = 0,
    interleave: Optional[LeakageErrorModel] = None,
    seed: int = 0,
    group: Optional[CliffordGroup] = None,
) -> RBDataset:
    """
    Density-matrix RB under the isotropic error model.

    Every Clifford is followed by the model's error step; in interleaved
    mode each Clifford is followed by an ideal CZ and the interleaved error
    step. The sequence ends with the ideal inverse. With ``shots`` > 0 the
    probabilities are replaced by binomial estimates.

    Args:
        model: Per-Clifford error and SPAM model
        m_values: Strictly increasing sequence lengths
        n_sequences: Random sequences per length
        shots: Shots per sequence; 0 for exact probabilities
        interleave: Error model of the interleaved CZ, None for SRB
        seed: Root seed; each (length, sequence) pair draws its own stream
        group: Clifford group; the two-qubit group by default

    Returns:
        Dataset of per-sequence P_id^M and P_X1^M
    """
    group = group or build_clifford_group(2)
    if group.dimension != model.dim:
        raise DomainError("Clifford group and model dimensions differ", parameter="dim")
    gate = CZ_GATE if interleave is not None else None

    p_id = np.zeros((len(m_values), n_sequences))
    p_x1 = np.zeros_like(p_id)
    for i_m, m in enumerate(m_values):
        for s in range(n_sequences):
            rng = _sequence_rng(seed, i_m, s)
            sequence = group.sample(rng, int(m))
            rho = _prepared_state(model)
            for i in sequence:
                c = group.elements[i]
                rho = _error_step(c @ rho @ c.conj().T, model)
                if gate is not None:
                    rho = _error_step(gate @ rho @ gate.conj().T, interleave)
            r = group.recovery(sequence, gate)
            rho = r @ rho @ r.conj().T
            x1, ident = _apply_spam(model, np.trace(rho).real, rho[0, 0].real)
            p_x1[i_m, s] = _sampled(rng, float(x1), shots)
            p_id[i_m, s] = _sampled(rng, float(ident), shots)
        logger.debug(f"RB m={m}: mean P_id {p_id[i_m].mean():.6f}")

    return RBDataset(
        m_values=np.asarray(m_values, dtype=int),
        p_id=np.clip(p_id, 0.0, 1.0),
        p_x1=np.clip(p_x1, 0.0, 1.0),
        variant="IRB" if interleave is not None else "SRB",
        shots=shots,
        dim=model.dim,
    )


def _embedded(block: np.ndarray, dim: int, comp: np.ndarray) -> np.ndarray:
    full = np.eye(dim, dtype=complex)
    full[np.ix_(comp, comp)] = block
    return full


def _noisy_block(rho: np.ndarray, comp: np.ndarray, noise: KrausSet) -> np.ndarray:
    """Remove computational/leaked coherences and apply the noise to the computational block."""
    leaked = np.setdiff1d(np.arange(rho.shape[0]), comp)
    out = np.zeros_like(rho)
    out[np.ix_(leaked, leaked)] = rho[np.ix_(leaked, leaked)]
    out[np.ix_(comp, comp)] = noise.apply(rho[np.ix_(comp, comp)])
    return out


def simulate_rb_unitary(
    u: Propagator,
    m_values: Sequence[int],
    n_sequences: int = DEFAULT_SEQUENCES,
    vz: Optional[Tuple[float, float]] = None,
    noise: Optional[KrausSet] = None,
    interleave: bool = True,
    shots: int = 0,
    seed: int = 0,
) -> RBDataset:
    """
    RB with a gate propagator over the full retained basis.

    Cliffords act ideally on the computational states and as the identity
    on leaked states. In interleaved mode the VZ-corrected propagator
    follows every Clifford, then the optional computational-block noise;
    the recovery inverts the ideal CZ sequence.
    """
    group = build_clifford_group(2)
    dim = u.dimension
    comp = np.asarray(u.comp_indices)
    gate = None
    if interleave:
        theta1, theta2 = vz if vz is not None else (0.0, 0.0)
        gate = _embedded(vz_correction(theta1, theta2), dim, comp) @ u.matrix
    ideal = CZ_GATE if interleave else None

    p_id = np.zeros((len(m_values), n_sequences))
    p_x1 = np.zeros_like(p_id)
    for i_m, m in enumerate(m_values):
        for s in range(n_sequences):
            rng = _sequence_rng(seed, i_m, s)
            sequence = group.sample(rng, int(m))
            rho = np.zeros((dim, dim), dtype=complex)
            rho[comp[0], comp[0]] = 1.0
            for i in sequence:
                c = group.elements[i]
                rho[comp, :] = c @ rho[comp, :]
                rho[:, comp] = rho[:, comp] @ c.conj().T
                if gate is not None:
                    rho = gate @ rho @ gate.conj().T
                    if noise is not None:
                        rho = _noisy_block(rho, comp, noise)
            r = group.recovery(sequence, ideal)
            block = r @ rho[np.ix_(comp, comp)] @ r.conj().T
            p_x1[i_m, s] = _sampled(rng, float(np.trace(block).real), shots)
            p_id[i_m, s] = _sampled(rng, float(block[0, 0].real), shots)

    return RBDataset(
        m_values=np.asarray(m_values, dtype=int),
        p_id=np.clip(p_id, 0.0, 1.0),
        p_x1=np.clip(p_x1, 0.0, 1.0),
        variant="IRB" if interleave else "SRB",
        shots=shots,
    )


def _log_linear_guess(m: np.ndarray, y: np.ndarray) -> Tuple[float, float, float]:
    sign = 1.0 if y[0] >= y[-1] else -1.0
    tail = y[-1] - 0.1 * (y[0] - y[-1])
    z = sign * (y - tail)
    mask = z > 0
    if mask.sum() >= 2:
        slope, intercept = np.polyfit(m[mask], np.log(z[mask]), 1)
        lam = float(np.clip(np.exp(slope), 1e-3, 1.0 - 1e-9))
        return float(tail), sign * float(np.exp(intercept)), lam
    return float(tail), float(y[0] - tail), 0.99


def _fit_exponential(
    m: np.ndarray, y: np.ndarray, sigma: Optional[np.ndarray]
) -> Tuple[float, float, float, Dict[str, float], bool]:
    if np.ptp(y) < 1e-12:
        return float(y.mean()), 0.0, 1.0, {}, True
    p0 = _log_linear_guess(m, y)
    try:
        popt, pcov = curve_fit(_exponential, m, y, p0=p0, sigma=sigma, maxfev=20000)
    except (RuntimeError, ValueError) as e:
        raise FitError(f"Exponential fit did not converge: {e}", residuals=y - _exponential(m, *p0), cause=e)
    with np.errstate(invalid="ignore"):
        errors = np.sqrt(np.diag(pcov))
    stderr = {name: float(v) for name, v in zip(("offset", "amplitude", "lambda"), errors)}
    return float(popt[0]), float(popt[1]), float(popt[2]), stderr, False


def fit_lrb(dataset: RBDataset) -> FitResult:
    """
    Fit P_X1^M = A + B lambda_L^m and P_id^M - P_X1^M/d = C lambda_r^m + D.

    A constant P_X1 leaves lambda_L unidentifiable; it is reported as 1
    with B = 0 and flagged degenerate.

    Raises:
        DomainError: With fewer than 4 distinct lengths
        FitError: If a fit does not converge
    """
    m = dataset.m_values.astype(float)
    if np.unique(m).size < 4:
        raise DomainError("LRB fit needs at least 4 distinct lengths", parameter="m_values")
    d = dataset.dim
    x1 = dataset.p_x1_mean
    rel = dataset.p_id_mean - x1 / d

    def weights(values: np.ndarray) -> Optional[np.ndarray]:
        if dataset.n_sequences < 2:
            return None
        spread = values.std(axis=1)
        return spread if np.all(spread > 0) else None

    a, b, lam_l, err_l, degenerate = _fit_exponential(m, x1, weights(dataset.p_x1))
    d_m, c_m, lam_r, err_r, _ = _fit_exponential(
        m, rel, weights(dataset.p_id - dataset.p_x1 / d)
    )
    if degenerate:
        logger.warning("P_X1 is constant; leakage decay is unidentifiable")
    stderr = {f"{k}_leakage": v for k, v in err_l.items()}
    stderr.update({f"{k}_survival": v for k, v in err_r.items()})
    return FitResult(
        lambda_l=lam_l,
        a_m=a,
        b_m=b,
        lambda_r=lam_r,
        c_m=c_m,
        d_m=d_m,
        stderr=stderr,
        degenerate_leakage=degenerate,
        dim=d,
    )


def cz_metrics(srb: FitResult, irb: FitResult) -> CZMetrics:
    """CZ leakage, error, depolarizing error and average fidelity from SRB and IRB fits."""
    d = srb.dim
    l1_cz = 1.0 - (1.0 - irb.leakage_rate) / (1.0 - srb.leakage_rate)
    lambda_r_cz = irb.lambda_r / srb.lambda_r
    r_cz = 1.0 - (1.0 - irb.error_rate) / (1.0 - srb.error_rate)
    p_d_cz = 1.0 - lambda_r_cz / (1.0 - l1_cz)
    return CZMetrics(
        l1_cz=l1_cz,
        lambda_r_cz=lambda_r_cz,
        r_cz=r_cz,
        p_d_cz=p_d_cz,
        r_d_cz=r_cz - (d - 1) / d * l1_cz,
        f_bar=(d - 1) / d * lambda_r_cz + (1.0 - l1_cz) / d,
        f_bar_from_errors=1.0 - l1_cz / d - r_cz,
    )


def cz_metrics_from_errors(l1_cz: float, r_cz: float, dim: int = 4) -> CZMetrics:
    """CZ metrics from a directly known leakage and gate error."""
    lambda_r_cz = 1.0 - r_cz * dim / (dim - 1)
    return CZMetrics(
        l1_cz=l1_cz,
        lambda_r_cz=lambda_r_cz,
        r_cz=r_cz,
        p_d_cz=1.0 - lambda_r_cz / (1.0 - l1_cz),
        r_d_cz=r_cz - (dim - 1) / dim * l1_cz,
        f_bar=(dim - 1) / dim * lambda_r_cz + (1.0 - l1_cz) / dim,
        f_bar_from_errors=1.0 - l1_cz / dim - r_cz,
    )


def single_qubit_rb_error(p: float) -> Tuple[float, float]:
    """
    Error per Clifford r = (1 - p)(1 - 1/2) and per physical gate r / 1.875.

    Raises:
        DomainError: If p is outside (0, 1]
    """
    if not 0.0 < p <= 1.0:
        raise DomainError("p must lie in (0, 1]", parameter="p", value=p)
    r = (1.0 - p) / 2.0
    return r, r / SINGLE_QUBIT_GATES_PER_CLIFFORD


def fit_rb_decay(m_values: Sequence[int], survival: Sequence[float]) -> Tuple[float, float, float]:
    """
    Fit A p^m + B to single-qubit RB data.

    Returns:
        (A, p, B)
    """
    m = np.asarray(m_values, dtype=float)
    y = np.asarray(survival, dtype=float)
    b, a, p, _, _ = _fit_exponential(m, y, None)
    return a, p, b


def _line(x: np.ndarray, y: np.ndarray, w: Optional[np.ndarray]) -> Tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1, w=w)
    return float(slope), float(intercept)


def gate_length_study(
    lengths: Sequence[float],
    metrics: Sequence[CZMetrics],
    weights: Optional[Sequence[float]] = None,
) -> GateLengthStudy:
    """
    Depolarizing CZ error against gate length.

    r_D = (2/5) t / T_eff + r0 is fitted to the points not flagged as
    outliers; a point is an outlier when its leave-one-out residual exceeds
    three standard deviations of the other points' residuals.

    Args:
        lengths: Gate lengths (ns)
        metrics: CZ metrics per length
        weights: Optional fit weights, e.g. inverse standard errors

    Raises:
        DomainError: With fewer than 3 lengths
    """
    x = np.asarray(lengths, dtype=float)
    if x.size < 3 or x.size != len(metrics):
        raise DomainError("gate-length study needs >= 3 lengths with metrics", parameter="lengths")
    y = np.array([mt.r_d_cz for mt in metrics])
    w = np.asarray(weights, dtype=float) if weights is not None else None

    outlier = np.zeros(x.size, dtype=bool)
    if x.size >= 4:
        scale = max(float(np.max(np.abs(y))), 1e-12)
        for i in range(x.size):
            keep = np.arange(x.size) != i
            slope, intercept = _line(x[keep], y[keep], None if w is None else w[keep])
            others = y[keep] - (slope * x[keep] + intercept)
            spread = max(float(others.std(ddof=1)), 1e-9 * scale)
            outlier[i] = abs(y[i] - (slope * x[i] + intercept)) / spread > OUTLIER_Z

    inliers = ~outlier
    slope, intercept = _line(x[inliers], y[inliers], None if w is None else w[inliers])
    pearson = 0.0 if np.ptp(y) == 0 else float(linregress(x, y).rvalue)
    t_eff = 0.4 / slope * 1e-3 if slope > 0 else math.inf
    if outlier.any():
        logger.warning(f"Gate lengths flagged as outliers: {x[outlier].tolist()}")

    rows = [
        GateLengthRow(
            length_ns=float(t),
            r_cz=mt.r_cz,
            l1_cz=mt.l1_cz,
            r_d_cz=mt.r_d_cz,
            outlier=bool(flag),
        )
        for t, mt, flag in zip(x, metrics, outlier)
    ]
    return GateLengthStudy(
        rows=rows,
        slope_per_ns=slope,
        intercept=intercept,
        t_eff_us=t_eff,
        pearson_r=pearson,
        outliers=x[outlier].tolist(),
    )
