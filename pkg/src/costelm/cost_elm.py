"""Cost-sensitive ELM and its evolutionary variant.

CSELM reweights each sample's squared error by an entry of the cost
information vector ``B``; ECSELM searches ``B`` with BSA against a training
loss while the hidden layer output matrix stays fixed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import elm
from .bsa import BsaConfig, optimize
from .elm import ElmModel, HiddenLayer, KernelSpec
from .errors import CostElmError, InvalidLabelError, ShapeError
from .numerics import Rng, solve_linear

ObjectiveMode = Literal["classification01", "classificationCost", "regressionSSE"]


def cost_info_vector(weights, M) -> np.ndarray:
    """``B_i = W_ii * sum_j M_ij`` for diagonal W given as a vector."""
    w = np.asarray(weights, dtype=float)
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape != (w.size, w.size):
        raise ShapeError(f"M must be {w.size}x{w.size}, got {M.shape}")
    return w * M.sum(axis=1)


def uniform_class_costs(n_classes: int) -> np.ndarray:
    return np.ones((n_classes, n_classes)) - np.eye(n_classes)


def expand_class_costs(class_costs, labels) -> np.ndarray:
    """Sample-level cost matrix with ``M_ij = costs[class(i), class(j)]``."""
    costs = np.asarray(class_costs, dtype=float)
    labels = np.asarray(labels).astype(int)
    c = costs.shape[0]
    if labels.size and (labels.min() < 1 or labels.max() > c):
        raise InvalidLabelError(f"labels must lie in 1..{c}")
    idx = labels - 1
    return costs[np.ix_(idx, idx)]


def train_cselm(H, T, C: float, B) -> np.ndarray:
    """Output weights with per-sample error weights ``C * B_i``."""
    H = np.asarray(H, dtype=float)
    T = np.asarray(T, dtype=float)
    if T.ndim == 1:
        T = T[:, None]
    B = np.asarray(B, dtype=float)
    N, L = H.shape
    if T.shape[0] != N or B.shape != (N,):
        raise ShapeError(f"H is {H.shape}, T is {T.shape}, B is {B.shape}")
    if not C > 0:
        raise ValueError("C must be positive")
    BT = B[:, None] * T
    if N < L:
        A = np.eye(N) / C + B[:, None] * (H @ H.T)
        return H.T @ solve_linear(A, BT)
    A = np.eye(L) / C + H.T @ (B[:, None] * H)
    return solve_linear(A, H.T @ BT)


def train_kernel_cselm(omega, T, C: float, B) -> np.ndarray:
    """Kernel-form coefficients ``(I/C + diag(B) Omega)^-1 diag(B) T``."""
    omega = np.asarray(omega, dtype=float)
    T = np.asarray(T, dtype=float)
    if T.ndim == 1:
        T = T[:, None]
    B = np.asarray(B, dtype=float)
    N = omega.shape[0]
    return solve_linear(np.eye(N) / C + B[:, None] * omega, B[:, None] * T)


def train_weighted_elm(H, labels, C: float, scheme: Literal["W1", "W2"] = "W1", n_classes=None):
    """Weighted ELM, solved as CSELM with B set to the class weights."""
    labels = np.asarray(labels).astype(int)
    n_classes = n_classes or int(labels.max())
    B = elm.class_weights(labels, scheme, n_classes)
    return train_cselm(H, elm.encode_targets(labels, n_classes), C, B)


def prediction_loss(scores, T, mode: ObjectiveMode, class_costs=None) -> float:
    """0/1 error count, total misclassification cost, or sum of squared errors."""
    if mode == "regressionSSE":
        return float(np.sum((scores - T) ** 2))
    pred, truth = np.argmax(scores, axis=1), np.argmax(T, axis=1)
    if mode == "classificationCost":
        return float(np.sum(class_costs[truth, pred]))
    return float(np.count_nonzero(pred != truth))


class CselmObjective:
    """Training loss of CSELM as a function of ``B`` alone.

    The feature matrix (``H`` or the kernel Gram matrix) is supplied once and
    reused for every candidate. ``B`` weights the rows in ``fit_idx``; the loss
    is measured on ``eval_idx``. Singular solves score ``+inf``.
    """

    def __init__(self, features, T, C: float, mode: ObjectiveMode = "classification01",
                 fit_idx=None, eval_idx=None, kernel: bool = False, class_costs=None):
        self.features = np.asarray(features, dtype=float)
        T = np.asarray(T, dtype=float)
        self.T = T[:, None] if T.ndim == 1 else T
        self.C = C
        self.mode = mode
        self.kernel = kernel
        if mode == "classificationCost":
            if class_costs is None:
                raise ValueError("classificationCost mode needs a class cost matrix")
            class_costs = np.asarray(class_costs, dtype=float)
        self.class_costs = class_costs
        n = self.T.shape[0]
        self.fit_idx = np.arange(n) if fit_idx is None else np.asarray(fit_idx)
        self.eval_idx = self.fit_idx if eval_idx is None else np.asarray(eval_idx)
        self.n_evals = 0

    @property
    def dim(self) -> int:
        return self.fit_idx.size

    def solve(self, B) -> np.ndarray:
        f, T_fit = self.fit_idx, self.T[self.fit_idx]
        if self.kernel:
            return train_kernel_cselm(self.features[np.ix_(f, f)], T_fit, self.C, B)
        return train_cselm(self.features[f], T_fit, self.C, B)

    def scores(self, weights) -> np.ndarray:
        if self.kernel:
            return self.features[np.ix_(self.eval_idx, self.fit_idx)] @ weights
        return self.features[self.eval_idx] @ weights

    def __call__(self, B) -> float:
        self.n_evals += 1
        try:
            weights = self.solve(B)
        except CostElmError:
            return np.inf
        scores = self.scores(weights)
        if not np.all(np.isfinite(scores)):
            return np.inf
        return prediction_loss(scores, self.T[self.eval_idx], self.mode, self.class_costs)


def cselm_objective(B, H, T, C: float, eval_idx=None, mode: ObjectiveMode = "classification01") -> float:
    return CselmObjective(H, T, C, mode, eval_idx=eval_idx)(B)


@dataclass
class EcselmConfig:
    C: float = 1.0
    n_hidden: int = 100
    activation: elm.Activation = "radbas"
    population_size: int = 100
    epochs: int = 100
    low: float = -1.0
    high: float = 1.0
    mixrate: float = 1.0
    objective_mode: ObjectiveMode = "classification01"
    holdout_fraction: float = 0.0
    weighting: Literal["W1", "W2"] = "W1"
    class_costs: np.ndarray | None = None
    kernel: KernelSpec | None = None
    workers: int = 1

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not 0 <= self.holdout_fraction < 1:
            raise ValueError("holdout_fraction must lie in [0, 1)")
        if self.objective_mode not in ("classification01", "classificationCost", "regressionSSE"):
            raise ValueError(f"unknown objective mode {self.objective_mode!r}")


@dataclass
class EcselmFit:
    model: ElmModel
    cost_vector: np.ndarray
    objective: float
    history: list[float]
    fit_idx: np.ndarray
    initial_cost_vector: np.ndarray = field(repr=False, default=None)


def _holdout_split(labels, fraction: float, rng: Rng, stratify: bool):
    n = len(labels)
    if fraction == 0:
        idx = np.arange(n)
        return idx, idx
    if stratify:
        hold = []
        for k in np.unique(labels):
            members = np.flatnonzero(labels == k)
            members = members[rng.permutation(members.size)]
            hold.extend(members[: int(np.floor(fraction * members.size))])
        hold = np.sort(np.asarray(hold, dtype=int))
    else:
        hold = np.sort(rng.permutation(n)[: int(np.floor(fraction * n))])
    fit = np.setdiff1d(np.arange(n), hold)
    if hold.size == 0 or fit.size == 0:
        idx = np.arange(n)
        return idx, idx
    return fit, hold


def ecselm_fit(X, y, config: EcselmConfig, rng: Rng, n_classes: int | None = None) -> EcselmFit:
    """Learn the cost information vector and the matching output weights.

    Classification for the ``classification01`` and ``classificationCost``
    modes (``y`` holds labels 1..c), regression for ``regressionSSE``.
    ``classificationCost`` scores a candidate by its total misclassification
    cost under ``config.class_costs`` (unit costs when absent).

    Draws: hidden layer (explicit form only), holdout split, then BSA. The
    all-ones vector and the cost-informed start ``W * rowsum(M)`` (scaled
    into the box) seed the first two individuals, so the result is never
    worse on the search loss than plain ELM or CSELM with the given costs.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y)
    classify = config.objective_mode != "regressionSSE"
    if classify:
        labels = y.astype(int)
        n_classes = n_classes or int(labels.max())
        T = elm.encode_targets(labels, n_classes)
        weights = elm.class_weights(labels, config.weighting, n_classes)
    else:
        labels = None
        T = np.asarray(y, dtype=float).reshape(len(y), -1)

    hidden: HiddenLayer | None = None
    if config.kernel is None:
        hidden = elm.init_hidden_layer(X.shape[1], config.n_hidden, config.activation, rng)
        features = elm.hidden_output(X, hidden)
    else:
        features = elm.kernel_matrix(X, X, config.kernel)

    costs = None
    if classify:
        costs = uniform_class_costs(n_classes) if config.class_costs is None else np.asarray(
            config.class_costs, dtype=float)

    fit_idx, eval_idx = _holdout_split(
        labels if classify else np.zeros(len(y)), config.holdout_fraction, rng, classify
    )
    objective = CselmObjective(features, T, config.C, config.objective_mode,
                               fit_idx, eval_idx, kernel=config.kernel is not None,
                               class_costs=costs)

    seeds = [np.ones(fit_idx.size)]
    if classify:
        sub = labels[fit_idx]
        B0 = cost_info_vector(weights[fit_idx], expand_class_costs(costs, sub))
        peak = np.max(np.abs(B0))
        if peak > 0 and config.high > 0:
            seeds.append(B0 * (config.high / peak))
    else:
        B0 = np.ones(fit_idx.size)

    bsa_config = BsaConfig(config.population_size, fit_idx.size, config.low, config.high,
                           config.epochs, config.mixrate, config.workers)
    result = optimize(objective, bsa_config, rng, seeds=np.asarray(seeds))
    B_star = result.best_solution
    if not np.isfinite(result.best_fitness):
        warnings.warn("no candidate cost vector gave a solvable system; using B = 1",
                      RuntimeWarning, stacklevel=2)
        B_star = np.ones(fit_idx.size)

    out = objective.solve(B_star)
    if config.kernel is None:
        model = ElmModel(C=config.C, hidden=hidden, beta=out)
    else:
        model = ElmModel(C=config.C, kernel=config.kernel, X_train=X[fit_idx], coef=out)
    return EcselmFit(model, B_star, result.best_fitness, result.history, fit_idx, B0)


def predict_ecselm(model: ElmModel, Y, classify: bool = True) -> np.ndarray:
    scores = elm.predict_scores(model, Y)
    if not classify:
        return scores
    return elm.decide(scores)
