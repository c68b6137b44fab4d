"""Discriminant subspaces: LDA, cost-weighted LDA, ECSLDA, PCA and a 1-NN rule."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .bsa import BsaConfig, optimize
from .errors import CostElmError, InvalidDatasetError, InvalidDimensionError, ShapeError
from .numerics import Rng, sym_generalized_eig


@dataclass(frozen=True)
class Projection:
    W: np.ndarray  # D x d, unit-norm columns
    eigenvalues: np.ndarray
    degenerate: bool = False

    @property
    def d(self) -> int:
        return self.W.shape[1]

    def transform(self, X) -> np.ndarray:
        return np.atleast_2d(np.asarray(X, dtype=float)) @ self.W


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # n x d
    explained_variance: np.ndarray

    def transform(self, X) -> np.ndarray:
        return (np.atleast_2d(np.asarray(X, dtype=float)) - self.mean) @ self.components

    def inverse_transform(self, Z) -> np.ndarray:
        return Z @ self.components.T + self.mean


def class_means(X, labels, n_classes: int):
    X = np.atleast_2d(np.asarray(X, dtype=float))
    labels = np.asarray(labels).astype(int)
    if labels.shape[0] != X.shape[0]:
        raise ShapeError("X and labels disagree on sample count")
    counts = np.bincount(labels - 1, minlength=n_classes)[:n_classes]
    if np.any(counts == 0):
        raise InvalidDatasetError(f"empty class(es): {list(np.flatnonzero(counts == 0) + 1)}")
    sums = np.zeros((n_classes, X.shape[1]))
    np.add.at(sums, labels - 1, X)
    return sums / counts[:, None], counts


def _between(means, weights) -> np.ndarray:
    # sum_{k,l} weights[k,l] (m_k - m_l)(m_k - m_l)^T over ordered pairs
    c, D = means.shape
    Sb = np.zeros((D, D))
    for k in range(c):
        diff = means[k] - means
        Sb += (diff * weights[k][:, None]).T @ diff
    return 0.5 * (Sb + Sb.T)


def _within(X, labels, means, class_scale) -> np.ndarray:
    centered = X - means[labels - 1]
    Sw = (centered * class_scale[labels - 1][:, None]).T @ centered
    return 0.5 * (Sw + Sw.T)


def lda_scatter(X, labels, n_classes: int):
    """Plain scatter pair; within-class terms are divided by class size."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    labels = np.asarray(labels).astype(int)
    means, counts = class_means(X, labels, n_classes)
    Sb = _between(means, np.ones((n_classes, n_classes)))
    Sw = _within(X, labels, means, 1.0 / counts)
    return Sb, Sw


def cs_scatter(X, labels, class_costs, within_class_normalize: bool = False):
    """Cost-weighted scatter pair.

    Pairs of class means are weighted by their misclassification cost and
    each class's within scatter by its total cost (row sum of the matrix).
    By default the within term carries no ``1/N_k`` factor;
    ``within_class_normalize`` puts it back.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    labels = np.asarray(labels).astype(int)
    costs = np.asarray(class_costs, dtype=float)
    c = costs.shape[0]
    if costs.shape != (c, c):
        raise ShapeError(f"class cost matrix must be square, got {costs.shape}")
    means, counts = class_means(X, labels, c)
    importance = costs.sum(axis=1)
    if within_class_normalize:
        importance = importance / counts
    return _between(means, costs), _within(X, labels, means, importance)


def regularize(Sw) -> np.ndarray:
    D = Sw.shape[0]
    eps = max(1e-6 * np.trace(Sw) / D, 1e-12)
    return Sw + eps * np.eye(D)


def solve_projection(Sb, Sw, d: int) -> Projection:
    """Leading generalized eigenvectors of ``(Sb, Sw + eps I)``."""
    vals, W = sym_generalized_eig(Sb, regularize(np.asarray(Sw, dtype=float)), d)
    scale = np.linalg.norm(Sb)
    degenerate = scale == 0 or bool(np.all(np.abs(vals) <= 1e-12 * max(scale, 1.0)))
    return Projection(W, vals, degenerate)


def nn_classify(train, train_labels, query, chunk: int = 256) -> np.ndarray:
    """1-nearest neighbour by Euclidean distance; ties pick the lowest index."""
    train = np.atleast_2d(np.asarray(train, dtype=float))
    query = np.atleast_2d(np.asarray(query, dtype=float))
    train_labels = np.asarray(train_labels)
    if train.shape[0] == 0:
        raise InvalidDatasetError("empty training set")
    if train.shape[1] != query.shape[1]:
        raise ShapeError(f"dimension mismatch: {train.shape[1]} vs {query.shape[1]}")
    out = np.empty(query.shape[0], dtype=train_labels.dtype)
    for start in range(0, query.shape[0], chunk):
        q = query[start:start + chunk]
        dist = np.sum((q[:, None, :] - train[None, :, :]) ** 2, axis=2)
        out[start:start + chunk] = train_labels[np.argmin(dist, axis=1)]
    return out


def loo_nn_errors(Z, labels) -> int:
    """Leave-one-out 1-NN misclassification count on the rows of ``Z``."""
    dist = np.sum((Z[:, None, :] - Z[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(dist, np.inf)
    return int(np.count_nonzero(labels[np.argmin(dist, axis=1)] != labels))


def pca(X, d: int) -> PcaModel:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    N, n = X.shape
    if not 1 <= d <= min(N - 1, n):
        raise InvalidDimensionError(f"d must lie in 1..{min(N - 1, n)}, got {d}")
    mean = X.mean(axis=0)
    _, s, Vt = np.linalg.svd(X - mean, full_matrices=False)
    return PcaModel(mean, Vt[:d].T, (s[:d] ** 2) / (N - 1))


def costs_from_vector(v, n_classes: int) -> np.ndarray:
    """Inverse of ``costs_to_vector``: off-diagonal entries, row-major."""
    costs = np.zeros((n_classes, n_classes))
    costs[~np.eye(n_classes, dtype=bool)] = v
    return costs


def costs_to_vector(costs) -> np.ndarray:
    costs = np.asarray(costs, dtype=float)
    return costs[~np.eye(costs.shape[0], dtype=bool)]


@dataclass
class EcsldaConfig:
    d: int | None = None
    population_size: int = 100
    epochs: int = 100
    low: float = -1.0
    high: float = 1.0
    mixrate: float = 1.0
    within_class_normalize: bool = False
    workers: int = 1


@dataclass
class EcsldaFit:
    projection: Projection
    class_costs: np.ndarray
    objective: float
    history: list[float]
    fallback: bool = False


class EcsldaObjective:
    """Leave-one-out 1-NN training errors in the subspace a cost matrix induces."""

    def __init__(self, X, labels, n_classes: int, d: int, within_class_normalize: bool = False):
        self.X = np.atleast_2d(np.asarray(X, dtype=float))
        self.labels = np.asarray(labels).astype(int)
        self.n_classes = n_classes
        self.d = d
        self.within_class_normalize = within_class_normalize
        self.means, _ = class_means(self.X, self.labels, n_classes)

    def projection(self, costs) -> Projection:
        Sb, Sw = cs_scatter(self.X, self.labels, costs, self.within_class_normalize)
        return solve_projection(Sb, Sw, self.d)

    def __call__(self, v) -> float:
        try:
            proj = self.projection(costs_from_vector(v, self.n_classes))
        except CostElmError:
            return np.inf
        if proj.degenerate:
            return np.inf
        return float(loo_nn_errors(proj.transform(self.X), self.labels))


def ecslda_fit(X, labels, n_classes: int, config: EcsldaConfig, rng: Rng) -> EcsldaFit:
    """Search the class cost matrix with BSA, then re-solve the projection at the optimum.

    The uniform matrix (all ones off the diagonal) seeds the first
    individual, so the result never does worse than uniform-cost LDA on the
    search loss.
    """
    if n_classes < 2:
        raise InvalidDatasetError("ECSLDA needs at least two classes")
    X = np.atleast_2d(np.asarray(X, dtype=float))
    D = X.shape[1]
    d = config.d or min(n_classes - 1, D)
    objective = EcsldaObjective(X, labels, n_classes, d, config.within_class_normalize)
    dim = n_classes * (n_classes - 1)
    uniform = np.ones(dim)
    bsa_config = BsaConfig(config.population_size, dim, config.low, config.high,
                           config.epochs, config.mixrate, config.workers)
    result = optimize(objective, bsa_config, rng, seeds=uniform[None, :])
    if not np.isfinite(result.best_fitness):
        warnings.warn("every candidate cost matrix was degenerate; using uniform costs",
                      RuntimeWarning, stacklevel=2)
        costs = costs_from_vector(uniform, n_classes)
        return EcsldaFit(objective.projection(costs), costs, result.best_fitness, result.history, True)
    costs = costs_from_vector(result.best_solution, n_classes)
    return EcsldaFit(objective.projection(costs), costs, result.best_fitness, result.history)
