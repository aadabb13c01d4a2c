"""
Flux-pulse synthesis and Z-pulse distortion.

This module synthesizes the Slepian-based adiabatic unit pulse, maps
waveforms to and from the cubic control-point representation used by the
optimizers, and applies or inverts the multi-exponential step response of
the flux line with exact one-pole recursive filters.
"""

import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import CubicSpline, PchipInterpolator
from scipy.optimize import curve_fit
from scipy.signal import lfilter
from scipy.signal.windows import dpss

from dtc_toolkit.exceptions import DomainError, FitError, ModelError
from dtc_toolkit.models.pulse import DistortionModel, DistortionTerm, SlepianConfig, Waveform

# Setup logging
logger = logging.getLogger(__name__)

TAIL_FACTOR = 5.0


def _rise_profile(cfg: SlepianConfig) -> PchipInterpolator:
    """Normalized cumulative Slepian window F(s) on s in [0, 1]."""
    window = np.abs(dpss(cfg.window_points, cfg.bandwidth))
    s = np.linspace(0.0, 1.0, cfg.window_points)
    cumulative = cumulative_trapezoid(window, s, initial=0.0)
    return PchipInterpolator(s, cumulative / cumulative[-1])


def slepian_unit_pulse(cfg: Optional[SlepianConfig] = None) -> Waveform:
    """
    Adiabatic unit pulse with zero endpoints and unit peak.

    The control angle rises from theta_initial at the edges to
    theta_final at the midpoint along the cumulative Slepian window; the
    flux excursion follows sqrt(cot theta), normalized so that the edges
    are 0 and the midpoint is 1.

    Args:
        cfg: Pulse configuration (defaults: 48 ns core, 2 ns pads, 0.5 ns)

    Returns:
        Symmetric, non-negative, unimodal waveform
    """
    cfg = cfg or SlepianConfig()
    n = cfg.core_intervals
    profile = _rise_profile(cfg)

    j = np.arange(n + 1)
    s = 2.0 * np.minimum(j, n - j) / n
    theta = cfg.theta_initial + (cfg.theta_final - cfg.theta_initial) * np.clip(profile(s), 0.0, 1.0)
    raw = np.sqrt(1.0 / np.tan(theta))
    edge = math.sqrt(1.0 / math.tan(cfg.theta_initial))
    top = math.sqrt(1.0 / math.tan(cfg.theta_final))
    core = (edge - raw) / (edge - top)
    core[0] = core[-1] = 0.0
    core = core / core.max()

    pad = np.zeros(cfg.pad_samples)
    samples = np.concatenate([pad, core, pad])
    logger.debug(f"Slepian pulse: {samples.size} samples over {(samples.size - 1) * cfg.dt} ns")
    return Waveform(samples=samples, dt=cfg.dt, pad_samples=cfg.pad_samples)


def square_pulse(
    duration: float, dt: float = 0.5, pad: float = 2.0, amplitude: float = 1.0
) -> Waveform:
    """Flat pulse with single-sample edges, zero endpoints and zero pads."""
    n = int(round(duration / dt))
    pad_samples = int(round(pad / dt))
    core = np.full(n + 1, amplitude)
    core[0] = core[-1] = 0.0
    samples = np.concatenate([np.zeros(pad_samples), core, np.zeros(pad_samples)])
    return Waveform(samples=samples, dt=dt, pad_samples=pad_samples)


def equal_area_square(reference: Waveform) -> Waveform:
    """Square pulse matching the duration, padding and area of reference."""
    duration = (reference.core.size - 1) * reference.dt
    unit = square_pulse(duration, reference.dt, reference.pad_samples * reference.dt)
    return unit.scaled(reference.area / unit.area)


def _knots(n_control: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, n_control + 2)


def waveform_from_controls(controls: Sequence[float], template: Waveform) -> Waveform:
    """
    Cubic interpolation of control points onto the core of template.

    The spline passes through (0, 0), the interior control points at
    equally spaced fractions of the core, and (1, 0).
    """
    controls = np.asarray(controls, dtype=float)
    spline = CubicSpline(_knots(controls.size), np.concatenate([[0.0], controls, [0.0]]))
    core_size = template.core.size
    core = spline(np.linspace(0.0, 1.0, core_size))
    core[0] = core[-1] = 0.0
    pad = np.zeros(template.pad_samples)
    return Waveform(
        samples=np.concatenate([pad, core, pad]), dt=template.dt, pad_samples=template.pad_samples
    )


def controls_from_waveform(waveform: Waveform, n_control: int = 20) -> np.ndarray:
    """Sample the core of a waveform at the interior control fractions."""
    core = waveform.core
    x = np.linspace(0.0, 1.0, core.size)
    return np.interp(_knots(n_control)[1:-1], x, core)


def _tail_samples(model: DistortionModel, dt: float, tail: Optional[float]) -> int:
    if tail is None:
        tail = TAIL_FACTOR * model.max_tau
    return int(math.ceil(tail / dt)) if tail > 0 else 0


def _extended(waveform: Waveform, extra: int) -> np.ndarray:
    return np.concatenate([waveform.samples, np.zeros(extra)])


def apply_distortion(
    waveform: Waveform, model: DistortionModel, tail: Optional[float] = None
) -> Waveform:
    """
    Pass a waveform through the flux-line step response.

    Each term contributes a one-pole filter driven by the sample
    differences, which reproduces s(t) = 1 + sum a_k exp(-t / tau_k)
    exactly at the sample times.

    Args:
        waveform: Input pulse
        model: Step-response model
        tail: Extra time (ns) appended after the pulse; 5 * max(tau) by default
    """
    x = _extended(waveform, _tail_samples(model, waveform.dt, tail))
    dx = np.diff(x, prepend=0.0)
    y = x.copy()
    for term in model.terms:
        r = math.exp(-waveform.dt / term.tau_ns)
        y = y + term.a * lfilter([1.0], [1.0, -r], dx)
    return Waveform(samples=y, dt=waveform.dt, pad_samples=0)


def check_invertible(model: DistortionModel) -> None:
    """
    Raises:
        ModelError: If the step response reaches zero or below
    """
    if not model.terms:
        return
    taus = np.array([t.tau_ns for t in model.terms])
    t = np.concatenate([[0.0], np.geomspace(taus.min() * 1e-3, taus.max() * 50.0, 4000)])
    if np.min(model.step_response(t)) <= 0.0:
        raise ModelError(
            "Step response is not positive; the distortion model cannot be inverted",
            terms=[term.model_dump() for term in model.terms],
        )


def inverse_filter_poles(model: DistortionModel, dt: float) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Gain, poles r_k and zeros q_k of the distortion filter.

    H(z) = G prod (z - q_k) / prod (z - r_k) with G = 1 + sum a_k. The
    zeros are found as q = 1 - eps from a polynomial in eps scaled by the
    largest 1 - r_k, which stays well conditioned when the poles crowd
    towards 1.

    Raises:
        ModelError: If a zero is complex or outside the stable region
    """
    a = np.array([t.a for t in model.terms])
    r = np.exp(-dt / np.array([t.tau_ns for t in model.terms]))
    delta = -np.expm1(-dt / np.array([t.tau_ns for t in model.terms]))
    scale = delta.max()
    d = delta / scale

    # prod(d_k - u) - sum_k a_k u prod_{j != k}(d_j - u), u = eps / scale
    poly = np.poly1d([1.0])
    for dk in d:
        poly = poly * np.poly1d([-1.0, dk])
    for k, ak in enumerate(a):
        term = np.poly1d([ak, 0.0])
        for j, dj in enumerate(d):
            if j != k:
                term = term * np.poly1d([-1.0, dj])
        poly = poly - term
    roots = np.roots(poly.coeffs)

    details = [term.model_dump() for term in model.terms]
    if np.any(np.abs(roots.imag) > 1e-9 * np.maximum(np.abs(roots), 1e-300)):
        raise ModelError("Distortion filter has complex zeros", terms=details)
    eps = np.sort(roots.real) * scale
    if np.any(eps <= 0.0) or np.any(eps >= 2.0):
        raise ModelError("Distortion filter zeros lie outside the stable region", terms=details)
    gain = 1.0 + a.sum()
    return gain, r, 1.0 - eps


def predistort(
    waveform: Waveform, model: DistortionModel, tail: Optional[float] = None
) -> Waveform:
    """
    Exact inverse of apply_distortion.

    Args:
        waveform: Target pulse at the device
        model: Step-response model
        tail: Extra time (ns) appended after the pulse; 5 * max(tau) by default

    Raises:
        ModelError: If the model is not invertible
    """
    x = _extended(waveform, _tail_samples(model, waveform.dt, tail))
    if not model.terms:
        return Waveform(samples=x, dt=waveform.dt, pad_samples=0)

    check_invertible(model)
    gain, poles, zeros = inverse_filter_poles(model, waveform.dt)
    y = x / gain
    for r in poles:
        y = lfilter([1.0, -r], [1.0], y)
    for q in np.sort(zeros):
        y = lfilter([1.0], [1.0, -q], y)
    logger.debug(f"Predistorted {waveform.samples.size} samples with {len(model.terms)} terms")
    return Waveform(samples=y, dt=waveform.dt, pad_samples=0)


def transient_phase(
    pulse_duration: float,
    model: DistortionModel,
    sensitivity: float,
    t_grid: Sequence[float],
) -> np.ndarray:
    """
    Phase left by the distortion tail after a pulse of given duration.

    phi(t) = phi0 * sum_k a_k (exp(-t / tau_k) - exp(-(t + T) / tau_k))

    Raises:
        DomainError: If the sensitivity is not finite
    """
    if not math.isfinite(sensitivity):
        raise DomainError("sensitivity must be finite", parameter="sensitivity", value=sensitivity)
    t = np.asarray(t_grid, dtype=float)
    phase = np.zeros_like(t)
    for term in model.terms:
        phase += term.a * (np.exp(-t / term.tau_ns) - np.exp(-(t + pulse_duration) / term.tau_ns))
    return sensitivity * phase


def fit_transient(
    t_grid: Sequence[float],
    phase: Sequence[float],
    pulse_duration: float,
    sensitivity: float,
    initial: DistortionModel,
) -> DistortionModel:
    """
    Fit amplitudes and time constants of the transient-phase form.

    Args:
        t_grid: Delay after the pulse (ns)
        phase: Measured phase (rad)
        pulse_duration: Duration of the distorting pulse (ns)
        sensitivity: Phase per unit flux offset, phi0
        initial: Starting guess; its term count fixes the model order

    Raises:
        FitError: If the least-squares fit does not converge
    """
    t = np.asarray(t_grid, dtype=float)
    y = np.asarray(phase, dtype=float)
    n_terms = len(initial.terms)

    def model(t_values, *theta):
        terms = [
            DistortionTerm(a=theta[2 * k], tau_ns=abs(theta[2 * k + 1]) + 1e-12)
            for k in range(n_terms)
        ]
        return transient_phase(pulse_duration, DistortionModel(terms=terms), sensitivity, t_values)

    p0 = [v for term in initial.terms for v in (term.a, term.tau_ns)]
    try:
        popt, _ = curve_fit(model, t, y, p0=p0, maxfev=20000)
    except (RuntimeError, ValueError) as e:
        raise FitError(f"Transient fit did not converge: {e}", cause=e)

    terms = [DistortionTerm(a=popt[2 * k], tau_ns=abs(popt[2 * k + 1])) for k in range(n_terms)]
    return DistortionModel(terms=terms, label=initial.label)
