"""Metrics and train/test splitting for the experiment harness."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import EmptyInputError, InvalidLabelError, InvalidSplitError
from .numerics import Rng


def _pair(predicted, truth):
    p = np.asarray(predicted)
    t = np.asarray(truth)
    if p.shape != t.shape:
        raise ValueError(f"predicted {p.shape} and truth {t.shape} differ in shape")
    if p.size == 0:
        raise EmptyInputError("no predictions")
    return p, t


def rank1_accuracy(predicted, truth) -> float:
    p, t = _pair(predicted, truth)
    return float(np.mean(p == t))


def cum_score(predicted, truth, max_level: int) -> np.ndarray:
    """Percentage of predictions within ``level`` of the truth, for level = 0..max_level."""
    p, t = _pair(predicted, truth)
    err = np.abs(p.astype(float) - t.astype(float))
    levels = np.arange(max_level + 1)
    # 100 * (k / N) rather than 100 * k / N keeps level 0 bit-identical to 100 * rank1.
    return np.array([100.0 * (np.count_nonzero(err <= lv) / err.size) for lv in levels])


def mae(predicted, truth) -> float:
    p, t = _pair(predicted, truth)
    return float(np.mean(np.abs(p.astype(float) - t.astype(float))))


def arr_trr(predicted, truth, n_classes: int) -> tuple[float, float]:
    """Average of per-class recall (ARR) and overall accuracy (TRR)."""
    p, t = _pair(predicted, truth)
    rates = []
    for k in range(1, n_classes + 1):
        members = t == k
        if not members.any():
            raise InvalidLabelError(f"class {k} has no test samples")
        rates.append(np.mean(p[members] == k))
    return float(np.mean(rates)), float(np.mean(p == t))


def total_cost(predicted, truth, class_costs) -> float:
    p, t = _pair(predicted, truth)
    costs = np.asarray(class_costs, dtype=float)
    c = costs.shape[0]
    p, t = p.astype(int), t.astype(int)
    if min(p.min(), t.min()) < 1 or max(p.max(), t.max()) > c:
        raise InvalidLabelError(f"labels must lie in 1..{c}")
    return float(np.sum(costs[t - 1, p - 1]))


@dataclass(frozen=True)
class SplitSpec:
    kind: Literal["holdout", "kfold", "fixed"] = "holdout"
    train_fraction: float = 2 / 3
    k: int = 10
    train_count: int | None = None
    stratified: bool = True

    def __post_init__(self):
        if self.kind not in ("holdout", "kfold", "fixed"):
            raise InvalidSplitError(f"unknown split kind {self.kind!r}")
        if self.kind == "holdout" and not 0 < self.train_fraction < 1:
            raise InvalidSplitError("train_fraction must lie in (0, 1)")
        if self.kind == "kfold" and self.k < 2:
            raise InvalidSplitError("k must be at least 2")
        if self.kind == "fixed" and (self.train_count is None or self.train_count < 1):
            raise InvalidSplitError("fixed split needs a positive train_count")


def make_splits(labels, spec: SplitSpec, rng: Rng) -> list[tuple[np.ndarray, np.ndarray]]:
    """Train/test index pairs: one for holdout and fixed, k for kfold.

    ``fixed`` takes the first ``train_count`` rows as training data and
    draws nothing from ``rng``.
    """
    labels = np.asarray(labels)
    N = labels.size
    if N < 2:
        raise InvalidSplitError("need at least two samples to split")
    if spec.kind == "fixed":
        if spec.train_count >= N:
            raise InvalidSplitError(f"train_count must be below {N}")
        return [(np.arange(spec.train_count), np.arange(spec.train_count, N))]
    if spec.kind == "holdout":
        return [_holdout(labels, spec, rng)]
    return _kfold(labels, spec, rng)


def _holdout(labels, spec: SplitSpec, rng: Rng):
    N = labels.size
    if spec.stratified:
        train = []
        for k in np.unique(labels):
            members = np.flatnonzero(labels == k)
            members = members[rng.permutation(members.size)]
            n_train = int(np.floor(spec.train_fraction * members.size + 0.5))
            train.extend(members[:n_train])
        train = np.sort(np.asarray(train, dtype=int))
        if train.size in (0, N):
            # Rounding per class emptied one side; fall back to an unstratified cut.
            return _holdout(labels, SplitSpec("holdout", spec.train_fraction, stratified=False), rng)
    else:
        n_train = min(max(int(np.floor(spec.train_fraction * N)), 1), N - 1)
        train = np.sort(rng.permutation(N)[:n_train])
    test = np.setdiff1d(np.arange(N), train)
    return train, test


def _kfold(labels, spec: SplitSpec, rng: Rng):
    N = labels.size
    if spec.k > N:
        raise InvalidSplitError(f"k={spec.k} exceeds sample count {N}")
    fold_of = np.empty(N, dtype=int)
    if spec.stratified:
        offset = 0
        for k in np.unique(labels):
            members = np.flatnonzero(labels == k)
            if members.size < spec.k:
                raise InvalidSplitError(f"class {k} has {members.size} samples, fewer than k={spec.k}")
            members = members[rng.permutation(members.size)]
            # Deal round-robin, continuing where the previous class stopped.
            fold_of[members] = (offset + np.arange(members.size)) % spec.k
            offset = (offset + members.size) % spec.k
    else:
        fold_of[rng.permutation(N)] = np.arange(N) % spec.k
    idx = np.arange(N)
    return [(idx[fold_of != f], idx[fold_of == f]) for f in range(spec.k)]
