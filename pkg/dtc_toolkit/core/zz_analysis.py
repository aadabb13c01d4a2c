"""
ZZ-interaction analysis.

This module evaluates the static ZZ interaction
zeta = E(1100) + E(0000) - E(1000) - E(0100) from the labeled circuit
spectrum, scans it over flux, locates the idle point and runs the staged
grid search over coupler design parameters.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from dtc_toolkit.core.circuit_model import (
    EJ_PER_NA,
    build_hamiltonian,
    energy_of,
    labeled_energies,
)
from dtc_toolkit.exceptions import DTCError, DomainError, SearchError
from dtc_toolkit.models.circuit import (
    BasisConfig,
    CircuitParams,
    HamiltonianOperator,
    SearchCell,
    SearchResult,
    SearchSpec,
    ZZCurve,
)

# Setup logging
logger = logging.getLogger(__name__)

ZZ_STATES = 16
COARSE_POINTS = 11
MAX_NEAREST_MISSES = 5
ALPHA_SOFT_LIMIT = 0.25


def zz_from_energies(e0000: float, e1000: float, e0100: float, e1100: float) -> float:
    """zeta in MHz from the four computational energies in GHz."""
    return (e1100 + e0000 - e1000 - e0100) * 1e3


def zz_at(
    params: CircuitParams,
    basis: Optional[BasisConfig],
    flux: float,
    hamiltonian: Optional[HamiltonianOperator] = None,
    n_states: int = ZZ_STATES,
) -> float:
    """
    Signed ZZ interaction zeta / 2pi in MHz at reduced flux.

    Raises:
        LabelingError: If a computational state cannot be identified
    """
    ham = hamiltonian or build_hamiltonian(params, basis)
    energies, labels = labeled_energies(ham, flux, min(n_states, ham.dimension))
    values = [
        energy_of(energies, labels, label, flux)
        for label in ((0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (1, 1, 0, 0))
    ]
    return zz_from_energies(*values)


def zz_scan(
    params: CircuitParams,
    basis: Optional[BasisConfig],
    flux_grid: Sequence[float],
    hamiltonian: Optional[HamiltonianOperator] = None,
    max_workers: int = 1,
) -> ZZCurve:
    """
    ZZ interaction over a reduced-flux grid.

    Raises:
        DomainError: If the grid is empty or leaves [0, 0.5]
    """
    grid = np.asarray(flux_grid, dtype=float)
    if grid.size == 0 or grid.min() < 0.0 or grid.max() > 0.5:
        raise DomainError("flux grid must be non-empty and within [0, 0.5]", parameter="flux_grid")

    ham = hamiltonian or build_hamiltonian(params, basis)

    def evaluate(flux: float) -> float:
        return zz_at(params, basis, float(flux), hamiltonian=ham)

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            zeta = list(pool.map(evaluate, grid))
    else:
        zeta = [evaluate(flux) for flux in grid]

    curve = ZZCurve(flux_points=grid, zeta=np.asarray(zeta))
    logger.info(
        f"ZZ scan: idle {curve.idle_point:.4f}, max {curve.max_point:.4f}, "
        f"on-off ratio {curve.onoff_ratio:.3g}"
    )
    return curve


def find_idle_point(
    params: CircuitParams,
    basis: Optional[BasisConfig],
    bracket: Tuple[float, float] = (0.25, 0.35),
    tol: float = 1e-4,
    hamiltonian: Optional[HamiltonianOperator] = None,
) -> float:
    """
    Reduced flux of minimal |zeta| inside a bracket.

    A coarse scan looks for a sign change, refined by bisection; without
    one, |zeta| is minimized by bounded Brent search.

    Args:
        params: Circuit parameters
        basis: Truncation settings
        bracket: (low, high) reduced flux
        tol: Absolute tolerance on the flux
        hamiltonian: Prebuilt operator

    Raises:
        SearchError: If |zeta| has no interior minimum in the bracket
    """
    low, high = bracket
    if not low < high:
        raise SearchError("Bracket must satisfy low < high", bracket=bracket)

    ham = hamiltonian or build_hamiltonian(params, basis)

    def zeta(flux: float) -> float:
        return zz_at(params, basis, flux, hamiltonian=ham)

    grid = np.linspace(low, high, COARSE_POINTS)
    values = np.array([zeta(f) for f in grid])
    logger.debug(f"Coarse idle scan: {dict(zip(np.round(grid, 5), values))}")

    for i, value in enumerate(values):
        if value == 0.0:
            return float(grid[i])
    for i in range(COARSE_POINTS - 1):
        if values[i] * values[i + 1] < 0:
            return float(brentq(zeta, grid[i], grid[i + 1], xtol=tol / 10))

    result = minimize_scalar(
        lambda f: abs(zeta(f)), bounds=(low, high), method="bounded", options={"xatol": tol / 10}
    )
    idle = float(result.x)
    if idle - low < tol or high - idle < tol:
        raise SearchError(
            f"|zeta| has no interior minimum in [{low}, {high}]", bracket=bracket
        )
    return idle


def _cell_params(spec: SearchSpec, c_c: float, e_jc: float, alpha: float) -> CircuitParams:
    current = e_jc / EJ_PER_NA
    mutual = {"C13": spec.c_g, "C24": spec.c_g, **spec.stray_caps}
    return spec.base.replace(
        node_caps={3: c_c, 4: c_c},
        mutual_caps=mutual,
        currents={3: current, 4: current, 5: alpha * current},
    )


def _evaluate_cell(
    params: CircuitParams, basis: Optional[BasisConfig], spec: SearchSpec
) -> Tuple[float, float]:
    """
    zeta at the idle point (kHz) and at its largest magnitude (MHz) for one cell.
    """
    ham = build_hamiltonian(params, basis)
    curve = zz_scan(params, basis, spec.flux_grid, hamiltonian=ham)
    zeta_min = float(curve.zeta[curve.idle_index])
    idx = curve.idle_index
    if 0 < idx < len(spec.flux_grid) - 1:
        bracket = (spec.flux_grid[idx - 1], spec.flux_grid[idx + 1])
        try:
            idle = find_idle_point(params, basis, bracket, hamiltonian=ham)
            zeta_min = zz_at(params, basis, idle, hamiltonian=ham)
        except SearchError:
            logger.debug("Idle refinement failed; keeping the grid minimum")
    return zeta_min * 1e3, float(curve.zeta[curve.max_index])


def _violation(zeta_min_khz: float, zeta_max_mhz: float, spec: SearchSpec) -> float:
    if not np.isfinite(zeta_min_khz) or not np.isfinite(zeta_max_mhz):
        return float("inf")
    excess = max(0.0, abs(zeta_min_khz) / spec.max_zeta_min_khz - 1.0)
    shortfall = max(0.0, 1.0 - abs(zeta_max_mhz) / spec.min_zeta_max_mhz)
    return excess + shortfall


def _score(zeta_min_khz: float, zeta_max_mhz: float, spec: SearchSpec) -> float:
    """Lower is better: idle residue penalized, operating strength rewarded."""
    return abs(zeta_min_khz) / spec.max_zeta_min_khz - abs(zeta_max_mhz) / spec.min_zeta_max_mhz


def _run_stage(
    stage: int,
    cells: List[Tuple[float, float, float]],
    spec: SearchSpec,
    basis: Optional[BasisConfig],
    max_workers: int,
) -> List[SearchCell]:
    def evaluate(cell: Tuple[float, float, float]) -> SearchCell:
        c_c, e_jc, alpha = cell
        try:
            zeta_min, zeta_max = _evaluate_cell(_cell_params(spec, c_c, e_jc, alpha), basis, spec)
        except DTCError as e:
            logger.warning(f"Cell C_c={c_c}, E_Jc={e_jc}, alpha={alpha} failed: {e}")
            zeta_min, zeta_max = float("nan"), float("nan")
        violation = _violation(zeta_min, zeta_max, spec)
        feasible = violation == 0.0
        return SearchCell(
            stage=stage,
            c_g=spec.c_g,
            c_c=c_c,
            e_jc=e_jc,
            alpha=alpha,
            zeta_min_khz=zeta_min,
            zeta_max_mhz=zeta_max,
            feasible=feasible,
            score=_score(zeta_min, zeta_max, spec) if feasible else violation,
        )

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(evaluate, cells))
    return [evaluate(cell) for cell in cells]


def parameter_search(
    spec: SearchSpec, basis: Optional[BasisConfig] = None, max_workers: int = 1
) -> SearchResult:
    """
    Two-stage grid search over the coupler design.

    Stage one maps (C_c, E_Jc) at fixed alpha; stage two maps (E_Jc, alpha)
    at the best C_c of stage one. Feasible cells of both stages are ranked
    by score; when none is feasible the closest cells are reported.
    """
    large = [a for a in spec.alpha_values if a >= ALPHA_SOFT_LIMIT]
    if large:
        logger.warning(f"alpha values {large} exceed the usual limit of {ALPHA_SOFT_LIMIT}")
    stage_one_cells = [
        (c_c, e_jc, spec.alpha_fixed) for c_c in spec.c_c_values for e_jc in spec.e_jc_values
    ]
    stage_one = _run_stage(1, stage_one_cells, spec, basis, max_workers)

    def rank_key(cell: SearchCell):
        return (not cell.feasible, cell.score if np.isfinite(cell.score) else np.inf)

    best_c_c = min(stage_one, key=rank_key).c_c
    logger.info(f"Stage one selects C_c = {best_c_c} fF")

    stage_two_cells = [
        (best_c_c, e_jc, alpha) for e_jc in spec.e_jc_values for alpha in spec.alpha_values
    ]
    stage_two = _run_stage(2, stage_two_cells, spec, basis, max_workers)

    everything = stage_one + stage_two
    candidates = sorted((c for c in everything if c.feasible), key=lambda c: c.score)
    misses: List[SearchCell] = []
    if not candidates:
        misses = sorted(
            (c for c in everything if np.isfinite(c.score)), key=lambda c: c.score
        )[:MAX_NEAREST_MISSES]
        logger.warning(
            f"No feasible design among {len(everything)} cells; "
            f"{len(misses)} nearest misses reported"
        )
    return SearchResult(
        stage_one=stage_one,
        stage_two=stage_two,
        candidates=candidates,
        nearest_misses=misses,
        best_c_c=best_c_c,
    )


def search_map_rows(cells: Sequence[SearchCell], stage: int) -> List[Tuple[float, float, float, float]]:
    """CSV rows (x, y, zeta_min_khz, zeta_max_mhz); x is C_c for stage one, E_Jc for stage two."""
    rows = []
    for cell in cells:
        if stage == 1:
            rows.append((cell.c_c, cell.e_jc, cell.zeta_min_khz, cell.zeta_max_mhz))
        else:
            rows.append((cell.e_jc, cell.alpha, cell.zeta_min_khz, cell.zeta_max_mhz))
    return rows


def nearest_miss_details(misses: Sequence[SearchCell]) -> List[Dict[str, float]]:
    return [m.model_dump() for m in misses]
