"""Synthetic Gaussian tasks used by the experiment scripts and the test suite."""

from __future__ import annotations

import numpy as np

from .numerics import Rng


def imbalanced_gaussian(rng: Rng, n: int, minority_fraction: float = 0.1,
                        separation: float = 2.0, dim: int = 2):
    """Two unit-variance Gaussian classes; class 2 is the minority, shifted by ``separation`` per axis.

    Labels are drawn independently, so class counts vary around the target ratio.
    """
    labels = np.where(rng.uniform(0.0, 1.0, size=n) < minority_fraction, 2, 1)
    X = rng.normal(size=(n, dim))
    X[labels == 2] += separation
    return X, labels


def gaussian_classes(rng: Rng, counts, means, scale: float = 1.0):
    """Isotropic Gaussian blobs, one per entry of ``means``, with the given class sizes."""
    means = np.asarray(means, dtype=float)
    X = np.vstack([m + scale * rng.normal(size=(c, means.shape[1])) for c, m in zip(counts, means)])
    labels = np.repeat(np.arange(1, len(counts) + 1), counts)
    return X, labels


COST_TASK_COSTS = np.array([[0.0, 1.0], [10.0, 0.0]])  # missing the minority class costs 10


def cost_task(seed: int, n_train: int = 200, n_test: int = 200, separation: float = 2.0):
    """Train/test halves of a 90/10 ``imbalanced_gaussian`` draw, for cost-sensitive comparisons."""
    X, y = imbalanced_gaussian(Rng(seed), n_train + n_test, minority_fraction=0.1, separation=separation)
    return X[:n_train], y[:n_train], X[n_train:], y[n_train:]
