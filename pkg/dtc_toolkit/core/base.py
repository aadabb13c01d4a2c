"""
Abstract base classes for the DTC toolkit core components.

This module defines the interfaces that separate pulse objectives from the
optimizers that drive them, so that a different search algorithm can be
used without touching the physics.
"""

import logging
from abc import ABC, abstractmethod
from typing import Callable, List, Tuple

import numpy as np

from dtc_toolkit.models.pulse import Waveform

# Setup logging
logger = logging.getLogger(__name__)

# (epoch, candidate, objective)
TraceRow = Tuple[int, int, float]


class WaveformObjective(ABC):
    """
    Abstract interface for pulse objectives.

    An objective maps a waveform to a score in [0, 1]; larger is better.
    """

    @abstractmethod
    def __call__(self, waveform: Waveform) -> float:
        """
        Score a waveform.

        Args:
            waveform: Candidate flux pulse

        Returns:
            Objective value in [0, 1]
        """
        pass


class Optimizer(ABC):
    """
    Abstract interface for derivative-free maximizers over real vectors.
    """

    @abstractmethod
    def maximize(
        self,
        objective: Callable[[np.ndarray], float],
        x0: np.ndarray,
        f0: float,
    ) -> Tuple[np.ndarray, float, List[TraceRow]]:
        """
        Maximize an objective starting from x0.

        Args:
            objective: Function of a parameter vector
            x0: Starting point
            f0: Objective value at x0

        Returns:
            Best point, its objective value and the evaluation trace
        """
        pass
