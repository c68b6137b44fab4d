"""Delimited-text dataset loading."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    n_classes: int | None  # None for regression
    header: tuple[str, ...] | None = None

    @property
    def n_samples(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_dataset(path: str | Path, mode: str = "classification", delimiter: str = ",") -> Dataset:
    """Read features plus a final label/target column.

    A first line containing any non-numeric field is taken as a header.
    Classification labels must be integers >= 1; the class count is the
    largest label seen.
    """
    path = Path(path)
    try:
        handle = path.open(newline="")
    except OSError as exc:
        raise ParseError(f"cannot open {path}: {exc.strerror}") from None
    rows: list[list[float]] = []
    header = None
    width = None
    with handle:
        for lineno, fields in enumerate(csv.reader(handle, delimiter=delimiter), start=1):
            fields = [f.strip() for f in fields]
            if not fields or all(f == "" for f in fields):
                continue
            if header is None and not rows and not all(_is_number(f) for f in fields):
                header = tuple(fields)
                width = len(fields)
                continue
            if width is None:
                width = len(fields)
            if len(fields) != width:
                raise ParseError(f"expected {width} fields, found {len(fields)}", lineno)
            if width < 2:
                raise ParseError("need at least one feature column and a label column", lineno)
            try:
                values = [float(f) for f in fields]
            except ValueError:
                bad = next(f for f in fields if not _is_number(f))
                raise ParseError(f"non-numeric field {bad!r}", lineno) from None
            if not all(np.isfinite(values)):
                raise ParseError("non-finite value", lineno)
            if mode == "classification":
                label = values[-1]
                if label != int(label) or label < 1:
                    raise ParseError(f"label {fields[-1]!r} is not an integer >= 1", lineno)
            rows.append(values)
    if not rows:
        raise ParseError(f"{path} contains no data rows")
    data = np.asarray(rows, dtype=float)
    X, y = data[:, :-1], data[:, -1]
    if mode == "classification":
        y = y.astype(int)
        return Dataset(X, y, int(y.max()), header)
    if mode != "regression":
        raise ValueError(f"unknown mode {mode!r}")
    return Dataset(X, y, None, header)
