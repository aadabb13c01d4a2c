"""
Derivative-free optimizer for the DTC toolkit.

This module provides a seeded (mu + lambda) evolution strategy with
Gaussian perturbations and a geometric scale schedule. Candidate noise is
drawn from a generator keyed by (seed, epoch, candidate), so results do
not depend on evaluation order or worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Tuple

import numpy as np

from dtc_toolkit.core.base import Optimizer, TraceRow
from dtc_toolkit.models.gate import OptimizerConfig

# Setup logging
logger = logging.getLogger(__name__)


class EvolutionStrategy(Optimizer):
    """
    Elitist (mu + lambda) evolution strategy.

    Each epoch draws ``population`` offspring around the current parents,
    cycling through them, and keeps the best ``parents`` of parents and
    offspring together. The best objective is therefore non-decreasing.
    """

    def __init__(self, cfg: Optional[OptimizerConfig] = None):
        """
        Initialize the strategy.

        Args:
            cfg: Population, schedule, budget and seed settings
        """
        self.cfg = cfg or OptimizerConfig()

    def _candidate(self, parent: np.ndarray, sigma: float, epoch: int, index: int) -> np.ndarray:
        rng = np.random.default_rng(np.random.SeedSequence(self.cfg.seed, spawn_key=(epoch, index)))
        return parent + sigma * rng.standard_normal(parent.size)

    @staticmethod
    def _safe(objective: Callable[[np.ndarray], float], x: np.ndarray) -> float:
        value = float(objective(x))
        return value if np.isfinite(value) else -np.inf

    def maximize(
        self,
        objective: Callable[[np.ndarray], float],
        x0: np.ndarray,
        f0: float,
    ) -> Tuple[np.ndarray, float, List[TraceRow]]:
        """
        Maximize an objective starting from x0.

        Args:
            objective: Function of a parameter vector; non-finite values rank last
            x0: Starting point
            f0: Objective value at x0

        Returns:
            Best-seen point, its value and the (epoch, candidate, objective) trace
        """
        cfg = self.cfg
        x0 = np.asarray(x0, dtype=float)
        parents: List[Tuple[np.ndarray, float]] = [(x0, float(f0))]
        trace: List[TraceRow] = []

        for epoch in range(cfg.epochs):
            if parents[0][1] >= cfg.target:
                logger.debug(f"Target {cfg.target} reached before epoch {epoch}")
                break

            sigma = cfg.sigma_at(epoch)
            offspring = [
                self._candidate(parents[c % len(parents)][0], sigma, epoch, c)
                for c in range(cfg.population)
            ]

            if cfg.max_workers > 1:
                with ThreadPoolExecutor(max_workers=cfg.max_workers) as pool:
                    scores = list(pool.map(lambda x: self._safe(objective, x), offspring))
            else:
                scores = [self._safe(objective, x) for x in offspring]

            trace.extend((epoch, c, f) for c, f in enumerate(scores))

            everyone = parents + list(zip(offspring, scores))
            order = sorted(range(len(everyone)), key=lambda i: -everyone[i][1])
            parents = [everyone[i] for i in order[: cfg.parents]]
            logger.debug(f"Epoch {epoch}: sigma {sigma:.3g}, best {parents[0][1]:.8f}")
        else:
            if parents[0][1] < cfg.target:
                logger.warning(
                    f"Budget of {cfg.epochs} epochs exhausted at {parents[0][1]:.6f} "
                    f"below target {cfg.target}"
                )

        best_x, best_f = parents[0]
        return best_x, best_f, trace


def best_per_epoch(trace: List[TraceRow], f0: float) -> List[float]:
    """Running maximum of the objective at the end of each epoch, starting from f0."""
    best = f0
    result: List[float] = []
    current = None
    for epoch, _, value in trace:
        if current is not None and epoch != current:
            result.append(best)
        current = epoch
        best = max(best, value)
    if current is not None:
        result.append(best)
    return result
