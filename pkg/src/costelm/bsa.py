"""Backtracking search optimization (BSA) over box-bounded vectors.

Each generation runs selection-I (maybe overwrite the historical population
with the current one, then shuffle its rows), recombination (mutate toward
the shuffled history through a random 0/1 mapping matrix, resample anything
that left the box) and selection-II (greedy per-row replacement).

Random draws within a generation happen in a fixed order on the caller's
generator: the two selection-I coins, the row shuffle, the scale factor,
the mapping matrix, then boundary resamples. Objective evaluations consume
no randomness, so evaluating rows in parallel cannot change a run.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidBoundsError
from .numerics import Rng

Objective = Callable[[np.ndarray], float]


@dataclass
class BsaConfig:
    population_size: int
    dim: int
    low: np.ndarray | float = -1.0
    high: np.ndarray | float = 1.0
    epochs: int = 100
    mixrate: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be at least 1")
        if self.dim < 1:
            raise ValueError("dim must be at least 1")
        if self.epochs < 0:
            raise ValueError("epochs must be non-negative")
        if not 0 < self.mixrate <= 1:
            raise ValueError("mixrate must lie in (0, 1]")
        self.low = np.broadcast_to(np.asarray(self.low, dtype=float), (self.dim,)).copy()
        self.high = np.broadcast_to(np.asarray(self.high, dtype=float), (self.dim,)).copy()
        if np.any(self.low > self.high):
            raise InvalidBoundsError("low bound exceeds high bound")


@dataclass
class BsaState:
    P: np.ndarray
    Q: np.ndarray
    F: np.ndarray
    best_fitness: float
    best_solution: np.ndarray
    epoch: int = 0


@dataclass
class BsaResult:
    best_solution: np.ndarray
    best_fitness: float
    history: list[float]
    state: BsaState = field(repr=False)


def evaluate(objective: Objective, P: np.ndarray, workers: int = 1) -> np.ndarray:
    """Objective per row; NaN is mapped to +inf so it can never win."""
    if workers > 1 and len(P) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(objective, P))
    else:
        vals = [objective(row) for row in P]
    F = np.asarray(vals, dtype=float)
    F[np.isnan(F)] = np.inf
    return F


def initialize(config: BsaConfig, objective: Objective, rng: Rng, seeds=None) -> BsaState:
    """Random population and history inside the box, evaluated.

    ``seeds`` (k x dim) overwrite the first k individuals after the draws,
    so injecting known candidates does not shift the random stream.
    """
    shape = (config.population_size, config.dim)
    P = rng.uniform(config.low, config.high, size=shape)
    Q = rng.uniform(config.low, config.high, size=shape)
    if seeds is not None:
        seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
        k = min(len(seeds), config.population_size)
        P[:k] = np.clip(seeds[:k], config.low, config.high)
    F = evaluate(objective, P, config.workers)
    i = int(np.argmin(F))
    if not np.isfinite(F[i]):
        warnings.warn("every initial individual has non-finite fitness", RuntimeWarning, stacklevel=2)
    return BsaState(P=P, Q=Q, F=F, best_fitness=float(F[i]), best_solution=P[i].copy())


def selection_one(state: BsaState, rng: Rng, *, force_update: bool | None = None) -> np.ndarray:
    """Refresh the historical population and return it row-shuffled.

    ``force_update`` overrides the coin comparison; the coins are still
    drawn so the stream stays aligned.
    """
    a, b = rng.random(), rng.random()
    update = a < b if force_update is None else force_update
    if update:
        state.Q = state.P.copy()
    state.Q = state.Q[rng.permutation(len(state.Q))]
    return state.Q


def mapping_matrix(population_size: int, dim: int, mixrate: float, rng: Rng) -> np.ndarray:
    """0/1 crossover map, one row per individual.

    Each row flips a fair coin: heads switches on a random subset of
    ``ceil(mixrate * rand * dim)`` positions, tails switches on exactly one.
    """
    C = np.zeros((population_size, dim))
    for i in range(population_size):
        if rng.random() < 0.5:
            k = max(1, math.ceil(mixrate * rng.random() * dim))
            C[i, rng.permutation(dim)[:k]] = 1.0
        else:
            C[i, rng.integers(dim)] = 1.0
    return C


def boundary_control(P_new: np.ndarray, config: BsaConfig, rng: Rng) -> np.ndarray:
    """Resample out-of-box entries uniformly inside their bounds, row-major."""
    out = (P_new < config.low) | (P_new > config.high)
    if not out.any():
        return P_new
    P_new = P_new.copy()
    rows, cols = np.nonzero(out)
    P_new[rows, cols] = rng.uniform(config.low[cols], config.high[cols], size=len(cols))
    return P_new


def recombine(
    state: BsaState,
    Q_shuffled: np.ndarray,
    config: BsaConfig,
    rng: Rng,
    *,
    mapping: np.ndarray | None = None,
    scale: float | None = None,
) -> np.ndarray:
    """Trial population ``P + 3r * C * (Q' - P)`` pulled back into the box."""
    r = rng.normal()
    if mapping is None:
        mapping = mapping_matrix(config.population_size, config.dim, config.mixrate, rng)
    F = 3.0 * r if scale is None else scale
    trial = state.P + F * mapping * (Q_shuffled - state.P)
    return boundary_control(trial, config, rng)


def selection_two(state: BsaState, P_new: np.ndarray, F_new: np.ndarray) -> BsaState:
    # Strict improvement only; ties keep the incumbent.
    better = F_new < state.F
    state.P = np.where(better[:, None], P_new, state.P)
    state.F = np.where(better, F_new, state.F)
    i = int(np.argmin(state.F))
    if state.F[i] < state.best_fitness:
        state.best_fitness = float(state.F[i])
        state.best_solution = state.P[i].copy()
    state.epoch += 1
    return state


def optimize(
    objective: Objective,
    config: BsaConfig,
    rng: Rng,
    *,
    seeds=None,
    callback: Callable[[BsaState], None] | None = None,
) -> BsaResult:
    """Minimize ``objective`` over the box; history[0] is the initial best."""
    state = initialize(config, objective, rng, seeds=seeds)
    history = [state.best_fitness]
    for _ in range(config.epochs):
        Q_shuffled = selection_one(state, rng)
        trial = recombine(state, Q_shuffled, config, rng)
        F_trial = evaluate(objective, trial, config.workers)
        selection_two(state, trial, F_trial)
        history.append(state.best_fitness)
        if callback is not None:
            callback(state)
    return BsaResult(state.best_solution.copy(), state.best_fitness, history, state)


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x * x))


def rosenbrock(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


BENCHMARKS: dict[str, tuple[Objective, float, float]] = {
    "sphere": (sphere, -5.12, 5.12),
    "rosenbrock": (rosenbrock, -2.048, 2.048),
    "rastrigin": (rastrigin, -5.12, 5.12),
}
