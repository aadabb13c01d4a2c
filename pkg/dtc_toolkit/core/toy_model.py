"""
p/m-mode toy model of the double-transmon coupler.

This module reduces the coupler to its symmetric (p) and antisymmetric (m)
modes, evaluates the effective qubit-qubit coupling of the dispersive
model, predicts the idle point from the junction ratio alpha = E_J5 / E_J
and compares the exact and separable coupler potentials.
"""

import logging
import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import brentq, minimize_scalar

from dtc_toolkit.core.circuit_model import (
    EC_PER_INVERSE_FF,
    ej_from_current,
    transmon_levels,
)
from dtc_toolkit.exceptions import DomainError, ResonanceError
from dtc_toolkit.models.circuit import CircuitParams, PotentialSurface, ToyParams

# Setup logging
logger = logging.getLogger(__name__)

HO_LEVELS = 40
QUBIT_CUTOFF = 20
ASYMMETRY_WARNING = 0.10


def _m_potential(phi_m, alpha: float, phi_ex: float):
    """m-mode potential in units of E_J: -2 cos(phi_m) - alpha cos(2 phi_m + phi_ex)."""
    return -2.0 * np.cos(phi_m) - alpha * np.cos(2.0 * phi_m + phi_ex)


def _minimum_condition(phi_m: float, alpha: float, phi_ex: float) -> float:
    return math.sin(phi_m) + alpha * math.sin(2.0 * phi_m + phi_ex)


def potential_minimum(alpha: float, phi_ex: float) -> Tuple[float, float]:
    """
    Constrained minimum of the m-mode potential.

    The bounded minimizer locates the well; the stationarity condition
    sin(phi_m) + alpha sin(2 phi_m + phi_ex) = 0 is then solved by
    root-finding around it.

    Args:
        alpha: Junction ratio E_J5 / E_J in [0, 1)
        phi_ex: External flux (radians)

    Returns:
        phi_m at the minimum and the residual of the stationarity condition

    Raises:
        DomainError: If alpha is outside [0, 1)
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)", parameter="alpha", value=alpha)

    result = minimize_scalar(
        _m_potential,
        bounds=(-math.pi / 2, math.pi / 2),
        args=(alpha, phi_ex),
        method="bounded",
        options={"xatol": 1e-12},
    )
    phi_m = float(result.x)
    lo, hi = phi_m - 0.1, phi_m + 0.1
    if _minimum_condition(lo, alpha, phi_ex) * _minimum_condition(hi, alpha, phi_ex) < 0:
        phi_m = brentq(_minimum_condition, lo, hi, args=(alpha, phi_ex), xtol=1e-15, rtol=4 * np.finfo(float).eps)
    return phi_m, _minimum_condition(phi_m, alpha, phi_ex)


def idle_point_solution(alpha: float) -> Tuple[float, float]:
    """
    Idle flux and the matching phi_m.

    The idle condition 2 phi_m + phi_ex = pi/2 with sin(phi_m) = -alpha
    gives phi_ex / 2pi = 1/4 + arcsin(alpha) / pi; solutions beyond 0.5 are
    folded to 1 - x together with phi_m -> -phi_m.

    Returns:
        (phi_ex / 2pi, phi_m)

    Raises:
        DomainError: If alpha is outside [0, 1)
    """
    if not 0.0 <= alpha < 1.0:
        raise DomainError("alpha must lie in [0, 1)", parameter="alpha", value=alpha)
    phi_m = -math.asin(alpha)
    flux = 0.25 + math.asin(alpha) / math.pi
    if flux > 0.5:
        return 1.0 - flux, -phi_m
    return flux, phi_m


def idle_point_estimate(alpha: float) -> float:
    """
    Toy-model idle flux phi_ex / 2pi for junction ratio alpha.

    Raises:
        DomainError: If alpha is outside [0, 1)
    """
    return idle_point_solution(alpha)[0]


def _ho_mode_frequency(ec: float, potential, phi0: float, levels: int = HO_LEVELS) -> float:
    """
    First transition of H = 4 E_C n^2 + V(phi) in a harmonic-oscillator basis.

    V is expanded around its minimum phi0 through the eigen-decomposition of
    the truncated position operator.
    """
    h = 1e-4
    curvature = (potential(phi0 + h) - 2.0 * potential(phi0) + potential(phi0 - h)) / h**2
    if curvature <= 0:
        raise DomainError("Potential has no well at the given point", parameter="curvature", value=curvature)

    phi_zpf = (2.0 * ec / curvature) ** 0.25
    n_zpf = 0.5 / phi_zpf
    lower = np.diag(np.sqrt(np.arange(1, levels)), k=1)
    x = phi_zpf * (lower + lower.T)
    p = 1j * n_zpf * (lower.T - lower)

    grid, modes = scipy.linalg.eigh(x)
    v = modes @ np.diag(potential(phi0 + grid)) @ modes.T
    hamiltonian = 4.0 * ec * (p @ p) + v
    energies = scipy.linalg.eigh(hamiltonian, eigvals_only=True, subset_by_index=[0, 1])
    return float(energies[1] - energies[0])


def _symmetrized(params: CircuitParams) -> Dict[str, float]:
    cap = params.cap_matrix
    ic = params.critical_currents
    c_c = 0.5 * (cap[2, 2] + cap[3, 3])
    i_c = 0.5 * (ic[2] + ic[3])
    c_g = (cap[0, 2], cap[1, 3])
    asymmetry = max(
        abs(cap[2, 2] - cap[3, 3]) / c_c,
        abs(ic[2] - ic[3]) / i_c,
        abs(c_g[0] - c_g[1]) / (0.5 * (c_g[0] + c_g[1])),
    )
    return {
        "c_c": c_c,
        "c_g_mean": 0.5 * (c_g[0] + c_g[1]),
        "c_g1": c_g[0],
        "c_g2": c_g[1],
        "c_34": cap[2, 3],
        "e_j": float(ej_from_current(i_c)),
        "alpha": ic[4] / i_c,
        "asymmetry": asymmetry,
    }


def _mode_frequencies(
    e_j: float, alpha: float, c_p: float, c_m: float, flux: float
) -> Tuple[float, float]:
    ec_p = EC_PER_INVERSE_FF / c_p
    ec_m = EC_PER_INVERSE_FF / c_m
    phi_ex = 2.0 * math.pi * flux
    omega_p = _ho_mode_frequency(ec_p, lambda phi: -2.0 * e_j * np.cos(phi), 0.0)
    phi_m0, _ = potential_minimum(alpha, phi_ex)
    omega_m = _ho_mode_frequency(
        ec_m, lambda phi: e_j * _m_potential(phi, alpha, phi_ex), phi_m0
    )
    return omega_p, omega_m


def _coupling(omega_i: float, omega_mode: float, c_g: float, c_q: float, c_mode: float) -> float:
    return math.sqrt(omega_i * omega_mode) * c_g / (2.0 * math.sqrt((c_q + c_g) * c_mode))


def derive_toy_params(params: CircuitParams, flux: Optional[float] = None) -> ToyParams:
    """
    Reduce the circuit to the p/m-mode toy model.

    Coupler capacitances and junctions are symmetrized by averaging; the
    largest relative asymmetry is recorded and a warning is logged above
    10%.

    Args:
        params: Circuit parameters
        flux: Reduced flux for omega_m; defaults to the toy idle estimate

    Returns:
        ToyParams with mode frequencies and coupling magnitudes
    """
    sym = _symmetrized(params)
    if sym["asymmetry"] > ASYMMETRY_WARNING:
        logger.warning(
            f"Coupler asymmetry {sym['asymmetry']:.1%} exceeds the symmetric-design assumption"
        )
    alpha = sym["alpha"]
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must lie in (0, 1)", parameter="alpha", value=alpha)
    if flux is None:
        flux = idle_point_estimate(alpha)

    c_c, c_34 = sym["c_c"], sym["c_34"]
    c_g = sym["c_g_mean"]
    c_p = 2.0 * (c_c + c_g)
    c_m = 2.0 * (c_c + 2.0 * c_34 + c_g)

    c_q = (params.cap_matrix[0, 0], params.cap_matrix[1, 1])
    c_gi = (sym["c_g1"], sym["c_g2"])
    ej = ej_from_current(params.critical_currents)
    freqs, anharm = [], []
    for i in (0, 1):
        ec = EC_PER_INVERSE_FF / (c_q[i] + c_gi[i])
        energies, _, _ = transmon_levels(ej[i], ec, QUBIT_CUTOFF, 3)
        freqs.append(float(energies[1] - energies[0]))
        anharm.append(float(energies[2] - 2.0 * energies[1] + energies[0]))

    omega_p, omega_m = _mode_frequencies(sym["e_j"], alpha, c_p, c_m, flux)
    toy = ToyParams(
        qubit_freqs=(freqs[0], freqs[1]),
        anharmonicities=(anharm[0], anharm[1]),
        omega_p=omega_p,
        omega_m=omega_m,
        g_1p=_coupling(freqs[0], omega_p, c_gi[0], c_q[0], c_c + c_gi[0]),
        g_2p=_coupling(freqs[1], omega_p, c_gi[1], c_q[1], c_c + c_gi[1]),
        g_1m=_coupling(freqs[0], omega_m, c_gi[0], c_q[0], c_c + 2.0 * c_34 + c_gi[0]),
        g_2m=_coupling(freqs[1], omega_m, c_gi[1], c_q[1], c_c + 2.0 * c_34 + c_gi[1]),
        c_q=c_q,
        c_g=c_gi,
        c_c=c_c,
        c_34=c_34,
        c_p=c_p,
        c_m=c_m,
        c_gp=c_g / 2.0,
        c_gm=c_g / 2.0,
        e_j=sym["e_j"],
        alpha=alpha,
        flux=flux,
        asymmetry=sym["asymmetry"],
    )
    logger.debug(f"Toy model: omega_p={omega_p:.4f} GHz, omega_m={omega_m:.4f} GHz at flux {flux:.4f}")
    return toy


def at_flux(toy: ToyParams, flux: float) -> ToyParams:
    """Re-evaluate omega_m and the m-mode couplings at another flux."""
    _, omega_m = _mode_frequencies(toy.e_j, toy.alpha, toy.c_p, toy.c_m, flux)
    scale = math.sqrt(omega_m / toy.omega_m)
    return toy.model_copy(
        update={
            "omega_m": omega_m,
            "g_1m": toy.g_1m * scale,
            "g_2m": toy.g_2m * scale,
            "flux": flux,
        }
    )


def mode_frequency_curve(params: CircuitParams, flux_grid: Sequence[float]) -> np.ndarray:
    """omega_m (GHz) of the toy model over a reduced-flux grid."""
    toy = derive_toy_params(params)
    return np.array([at_flux(toy, float(f)).omega_m for f in flux_grid])


def effective_coupling(toy: ToyParams, flux: Optional[float] = None) -> Tuple[float, bool]:
    """
    Effective qubit-qubit coupling g_eff (GHz) of the dispersive model.

    Args:
        toy: Toy parameters
        flux: Reduced flux; toy.flux when omitted

    Returns:
        g_eff and whether every pair satisfies |Delta| > 3 g

    Raises:
        ResonanceError: If a qubit is exactly resonant with a mode
    """
    if flux is not None and flux != toy.flux:
        toy = at_flux(toy, flux)

    pairs = {
        "Q1-p": (toy.qubit_freqs[0] - toy.omega_p, toy.g_1p),
        "Q2-p": (toy.qubit_freqs[1] - toy.omega_p, toy.g_2p),
        "Q1-m": (toy.qubit_freqs[0] - toy.omega_m, toy.g_1m),
        "Q2-m": (toy.qubit_freqs[1] - toy.omega_m, toy.g_2m),
    }
    for name, (detuning, _) in pairs.items():
        if detuning == 0.0:
            raise ResonanceError(f"Exact resonance in pair {name}", pair=name)

    dispersive = all(abs(d) > 3.0 * g for d, g in pairs.values())
    d1p, d2p = pairs["Q1-p"][0], pairs["Q2-p"][0]
    d1m, d2m = pairs["Q1-m"][0], pairs["Q2-m"][0]
    g_eff = 0.5 * toy.g_1p * toy.g_2p * (1.0 / d1p + 1.0 / d2p) - 0.5 * toy.g_1m * toy.g_2m * (
        1.0 / d1m + 1.0 / d2m
    )
    return g_eff, dispersive


def potential_surface(
    params: CircuitParams, flux: float, grid: Sequence[float]
) -> PotentialSurface:
    """
    Exact and separable coupler potentials (GHz) over a (phi_p, phi_m) grid.

    V_exact = -2 E_J cos(phi_p) cos(phi_m) - alpha E_J cos(2 phi_m + phi_ex)
    V_approx = -2 E_J cos(phi_p) - 2 E_J cos(phi_m) - alpha E_J cos(2 phi_m + phi_ex)
    Each surface is offset to zero at its own grid minimum.

    Raises:
        DomainError: If the grid does not cover [-pi/2, pi/2]
    """
    axis = np.asarray(grid, dtype=float)
    if axis.min() > -math.pi / 2 + 1e-12 or axis.max() < math.pi / 2 - 1e-12:
        raise DomainError("grid must cover [-pi/2, pi/2]", parameter="grid")

    sym = _symmetrized(params)
    e_j, alpha = sym["e_j"], sym["alpha"]
    phi_ex = 2.0 * math.pi * flux
    p, m = np.meshgrid(axis, axis, indexing="ij")
    junction5 = -alpha * e_j * np.cos(2.0 * m + phi_ex)
    exact = -2.0 * e_j * np.cos(p) * np.cos(m) + junction5
    approx = -2.0 * e_j * np.cos(p) - 2.0 * e_j * np.cos(m) + junction5
    return PotentialSurface(
        phi_p=axis,
        phi_m=axis,
        v_exact=exact - exact.min(),
        v_approx=approx - approx.min(),
    )
