"""Extreme learning machine building blocks.

Random hidden layer, closed-form ridge output weights, the kernel form and
the class-count weighting schemes used by weighted ELM.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import InvalidDatasetError, InvalidLabelError, ShapeError
from .numerics import Rng, solve_linear

Activation = Literal["radbas", "sigmoid"]
ACTIVATIONS = ("radbas", "sigmoid")


@dataclass(frozen=True)
class HiddenLayer:
    weights: np.ndarray  # L x n
    biases: np.ndarray  # L
    activation: Activation = "radbas"

    @property
    def n_hidden(self) -> int:
        return self.weights.shape[0]

    @property
    def n_inputs(self) -> int:
        return self.weights.shape[1]


@dataclass(frozen=True)
class KernelSpec:
    kind: Literal["rbf", "linear"] = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel {self.kind!r}")
        if self.kind == "rbf" and not self.gamma > 0:
            raise ValueError("rbf kernel needs gamma > 0")


@dataclass(frozen=True)
class ElmModel:
    """Trained network, either explicit (hidden + beta) or kernel form.

    The kernel form keeps the training inputs and the coefficient matrix
    ``A`` so that scores for ``Y`` are ``K(Y, X_train) @ A``.
    """

    C: float
    hidden: HiddenLayer | None = None
    beta: np.ndarray | None = None
    kernel: KernelSpec | None = None
    X_train: np.ndarray | None = None
    coef: np.ndarray | None = None

    def __post_init__(self):
        explicit = self.hidden is not None and self.beta is not None
        kernel = self.kernel is not None and self.coef is not None and self.X_train is not None
        if explicit == kernel:
            raise ValueError("exactly one of explicit or kernel form must be populated")
        if not self.C > 0:
            raise ValueError("C must be positive")

    @property
    def is_kernel(self) -> bool:
        return self.kernel is not None


def encode_targets(labels, n_classes: int) -> np.ndarray:
    """Signed one-hot targets: +1 at the label's column, -1 elsewhere."""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise ShapeError("labels must be one-dimensional")
    if labels.size and (labels.min() < 1 or labels.max() > n_classes):
        raise InvalidLabelError(f"labels must lie in 1..{n_classes}")
    if not np.all(labels == np.round(labels)):
        raise InvalidLabelError("labels must be integers")
    T = -np.ones((labels.size, n_classes))
    T[np.arange(labels.size), labels.astype(int) - 1] = 1.0
    return T


def init_hidden_layer(n_inputs: int, n_hidden: int, activation: Activation, rng: Rng) -> HiddenLayer:
    # Draw order is fixed: all weights row-major, then biases.
    if n_inputs < 1 or n_hidden < 1:
        raise ShapeError("need at least one input and one hidden node")
    if activation not in ACTIVATIONS:
        raise ValueError(f"unknown activation {activation!r}")
    W = rng.uniform(-1.0, 1.0, size=(n_hidden, n_inputs))
    b = rng.uniform(-1.0, 1.0, size=n_hidden)
    return HiddenLayer(W, b, activation)


def hidden_output(X, layer: HiddenLayer) -> np.ndarray:
    """Hidden layer output matrix, N x L."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != layer.n_inputs:
        raise ShapeError(f"X has {X.shape[1]} features, layer expects {layer.n_inputs}")
    Z = X @ layer.weights.T + layer.biases
    if layer.activation == "radbas":
        return np.exp(-(Z**2))
    # Numerically safe logistic.
    return 0.5 * (1.0 + np.tanh(0.5 * Z))


def train_elm(H, T, C: float) -> np.ndarray:
    """Ridge output weights; the N x N system when N < L, else the L x L one."""
    H = np.asarray(H, dtype=float)
    T = _as_2d_targets(T)
    N, L = H.shape
    if T.shape[0] != N:
        raise ShapeError(f"H has {N} rows, T has {T.shape[0]}")
    if not C > 0:
        raise ValueError("C must be positive")
    if N < L:
        return H.T @ solve_linear(np.eye(N) / C + H @ H.T, T)
    return solve_linear(np.eye(L) / C + H.T @ H, H.T @ T)


def kernel_matrix(XA, XB, spec: KernelSpec) -> np.ndarray:
    XA = np.atleast_2d(np.asarray(XA, dtype=float))
    XB = np.atleast_2d(np.asarray(XB, dtype=float))
    if XA.shape[1] != XB.shape[1]:
        raise ShapeError(f"feature dimension mismatch: {XA.shape[1]} vs {XB.shape[1]}")
    G = XA @ XB.T
    if spec.kind == "linear":
        return G
    sq = np.sum(XA**2, axis=1)[:, None] + np.sum(XB**2, axis=1)[None, :] - 2.0 * G
    return np.exp(-spec.gamma * np.maximum(sq, 0.0))


def train_kernel_elm(X, T, C: float, spec: KernelSpec) -> ElmModel:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    T = _as_2d_targets(T)
    if T.shape[0] != X.shape[0]:
        raise ShapeError("X and T row counts differ")
    omega = kernel_matrix(X, X, spec)
    A = solve_linear(np.eye(X.shape[0]) / C + omega, T)
    return ElmModel(C=C, kernel=spec, X_train=X, coef=A)


def class_weights(labels, scheme: Literal["W1", "W2"] = "W1", n_classes: int | None = None) -> np.ndarray:
    """Per-sample weights from class sizes.

    W1 gives every sample ``1/#class``. W2 additionally shrinks classes larger
    than the average class size by the golden-ratio factor 0.618.
    """
    labels = np.asarray(labels).astype(int)
    if n_classes is None:
        n_classes = int(labels.max())
    counts = np.bincount(labels, minlength=n_classes + 1)[1:]
    if np.any(counts == 0):
        empty = [k + 1 for k in np.flatnonzero(counts == 0)]
        raise InvalidDatasetError(f"empty class(es): {empty}")
    per_class = 1.0 / counts
    if scheme == "W2":
        per_class = np.where(counts > counts.mean(), 0.618 / counts, per_class)
    elif scheme != "W1":
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    return per_class[labels - 1]


def predict_scores(model: ElmModel, Y) -> np.ndarray:
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if model.is_kernel:
        return kernel_matrix(Y, model.X_train, model.kernel) @ model.coef
    return hidden_output(Y, model.hidden) @ model.beta


def decide(scores) -> np.ndarray:
    """1-based argmax over columns; ties go to the lowest index."""
    scores = np.atleast_2d(np.asarray(scores, dtype=float))
    return np.argmax(scores, axis=1) + 1


def _as_2d_targets(T) -> np.ndarray:
    T = np.asarray(T, dtype=float)
    return T[:, None] if T.ndim == 1 else T
