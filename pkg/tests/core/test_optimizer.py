import numpy as np
import pytest

from dtc_toolkit.core.base import Optimizer
from dtc_toolkit.core.optimizer import EvolutionStrategy, best_per_epoch
from dtc_toolkit.models import OptimizerConfig

TARGET = np.array([0.3, -0.2, 0.1])


def _objective(x: np.ndarray) -> float:
    return 1.0 - float(np.sum((x - TARGET) ** 2))


def _config(**overrides) -> OptimizerConfig:
    values = dict(
        population=10, parents=3, epochs=30, sigma0=0.1, sigma_decay=0.9, seed=5, target=1.0
    )
    values.update(overrides)
    return OptimizerConfig(**values)


def test_is_an_optimizer():
    assert isinstance(EvolutionStrategy(), Optimizer)


def test_maximize_improves_quadratic():
    x0 = np.zeros(3)
    f0 = _objective(x0)
    best_x, best_f, trace = EvolutionStrategy(_config()).maximize(_objective, x0, f0)
    assert best_f > f0
    assert best_f == pytest.approx(_objective(best_x))
    assert np.linalg.norm(best_x - TARGET) < np.linalg.norm(x0 - TARGET)
    assert len(trace) == 30 * 10
    assert trace[0][:2] == (0, 0)


def test_best_is_monotone():
    x0 = np.zeros(3)
    f0 = _objective(x0)
    _, _, trace = EvolutionStrategy(_config()).maximize(_objective, x0, f0)
    curve = best_per_epoch(trace, f0)
    assert len(curve) == 30
    assert all(b >= a for a, b in zip(curve, curve[1:]))
    assert curve[0] >= f0


def test_seeded_runs_are_reproducible():
    x0 = np.zeros(3)
    first = EvolutionStrategy(_config()).maximize(_objective, x0, _objective(x0))
    again = EvolutionStrategy(_config(max_workers=4)).maximize(_objective, x0, _objective(x0))
    other = EvolutionStrategy(_config(seed=6)).maximize(_objective, x0, _objective(x0))
    assert np.array_equal(first[0], again[0])
    assert first[2] == again[2]
    assert not np.array_equal(first[0], other[0])


def test_stops_when_target_reached():
    x0 = TARGET.copy()
    best_x, best_f, trace = EvolutionStrategy(_config(target=0.999)).maximize(_objective, x0, 1.0)
    assert trace == []
    assert best_f == 1.0
    assert np.array_equal(best_x, x0)


def test_non_finite_values_rank_last():
    def objective(x: np.ndarray) -> float:
        return float("nan") if x[0] > 0 else -abs(x[0])

    best_x, best_f, _ = EvolutionStrategy(_config(epochs=5)).maximize(objective, np.array([-1.0]), -1.0)
    assert np.isfinite(best_f)
    assert best_x[0] <= 0


def test_best_per_epoch_of_empty_trace():
    assert best_per_epoch([], 0.5) == []
    assert best_per_epoch([(0, 0, 0.1), (0, 1, 0.7), (1, 0, 0.2)], 0.5) == [0.7, 0.7]
