"""Run configuration: ``key = value`` text files with ``#`` comments.

Lists are comma separated. Numbers may be written as powers of two
(``2^10``). Every key can be overridden from the command line.
"""

from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ConfigError

METHODS = ("elm", "kelm", "welm1", "welm2", "cselm", "ecselm", "lda", "ecslda", "pca-nn")
METRICS = ("rank1", "cumscore", "mae", "arr", "trr", "total_cost")
OBJECTIVES = {"01": "classification01", "cost": "classificationCost", "sse": "regressionSSE"}


@dataclass
class RunConfig:
    method: str = "elm"
    mode: str = "classification"
    C: tuple[float, ...] = (1.0,)
    L: tuple[int, ...] = (100,)
    activation: str = "radbas"
    kernel: str = "rbf"
    gamma: float = 1.0
    population: int = 100
    epochs: int = 100
    low: float = -1.0
    high: float = 1.0
    mixrate: float = 1.0
    objective: str = "01"
    objective_holdout: float = 0.0
    weighting: str = "W1"
    cselm_b: str = "costinfo"
    cost_matrix: tuple[tuple[float, ...], ...] | None = None
    split: str = "holdout"
    train_fraction: float = 2 / 3
    folds: int = 10
    train_count: int = 0
    stratified: bool = True
    seed: int = 0
    repetitions: int = 10
    metrics: tuple[str, ...] = ("rank1", "cumscore", "mae", "arr", "trr", "total_cost")
    subspace_dim: int = 0
    pca_dim: int = 0
    within_class_normalize: bool = False
    keep_predictions: bool = True

    def validate(self) -> "RunConfig":
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.method in METHODS, f"method must be one of {', '.join(METHODS)}")
        need(self.mode in ("classification", "regression"), "mode must be classification or regression")
        if self.mode == "regression":
            need(self.method in ("elm", "kelm", "cselm", "ecselm"),
                 f"method {self.method} does not support regression")
        need(len(self.C) > 0 and all(c > 0 for c in self.C), "C values must be positive")
        need(len(self.L) > 0 and all(n >= 1 for n in self.L), "L values must be at least 1")
        need(self.activation in ("radbas", "sigmoid"), "activation must be radbas or sigmoid")
        need(self.kernel in ("rbf", "linear"), "kernel must be rbf or linear")
        need(self.gamma > 0, "gamma must be positive")
        need(self.population >= 1, "population must be at least 1")
        need(self.epochs >= 0, "epochs must be non-negative")
        need(self.low <= self.high, "low must not exceed high")
        need(0 < self.mixrate <= 1, "mixrate must lie in (0, 1]")
        need(self.objective in OBJECTIVES, f"objective must be one of {', '.join(OBJECTIVES)}")
        need((self.objective == "sse") == (self.mode == "regression"),
             "objective sse goes with mode regression and only with it")
        need(0 <= self.objective_holdout < 1, "objective_holdout must lie in [0, 1)")
        need(self.weighting in ("W1", "W2"), "weighting must be W1 or W2")
        need(self.cselm_b in ("ones", "costinfo"), "cselm_b must be ones or costinfo")
        need(self.split in ("holdout", "kfold", "fixed"), "split must be holdout, kfold or fixed")
        need(0 < self.train_fraction < 1, "train_fraction must lie in (0, 1)")
        need(self.folds >= 2, "folds must be at least 2")
        need(self.split != "fixed" or self.train_count >= 1, "fixed split needs train_count >= 1")
        need(0 <= self.seed < 2**64, "seed must be a 64-bit unsigned integer")
        need(self.repetitions >= 1, "repetitions must be at least 1")
        need(all(m in METRICS for m in self.metrics), f"metrics must be drawn from {', '.join(METRICS)}")
        need(self.subspace_dim >= 0 and self.pca_dim >= 0, "dimensions must be non-negative")
        if self.cost_matrix is not None:
            m = np.asarray(self.cost_matrix, dtype=float)
            need(m.ndim == 2 and m.shape[0] == m.shape[1], "cost_matrix must be square")
            need(np.all(np.diag(m) == 0), "cost_matrix must have a zero diagonal")
        return self

    @property
    def objective_mode(self) -> str:
        return OBJECTIVES[self.objective]

    def class_costs(self, n_classes: int) -> np.ndarray:
        if self.cost_matrix is None:
            return np.ones((n_classes, n_classes)) - np.eye(n_classes)
        m = np.asarray(self.cost_matrix, dtype=float)
        if m.shape != (n_classes, n_classes):
            raise ConfigError(f"cost_matrix is {m.shape[0]}x{m.shape[1]} but data has {n_classes} classes")
        return m

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = [list(x) if isinstance(x, tuple) else x for x in v]
        return out


_FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}
_POW = re.compile(r"^\s*([-+]?\d+(?:\.\d*)?)\s*\^\s*([-+]?\d+)\s*$")


def parse_number(text: str) -> float:
    m = _POW.match(text)
    if m:
        return float(m.group(1)) ** int(m.group(2))
    return float(text)


def _parse_int(text: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        pass
    value = parse_number(text)
    if value != int(value):
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _parse_bool(text: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _split_list(text: str) -> list[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def _parse_matrix(text: str):
    if text.strip().lower() in ("", "none", "uniform"):
        return None
    return tuple(tuple(parse_number(x) for x in _split_list(row)) for row in text.split(";"))


_PARSERS = {
    "C": lambda s: tuple(parse_number(x) for x in _split_list(s)),
    "L": lambda s: tuple(_parse_int(x) for x in _split_list(s)),
    "metrics": lambda s: tuple(_split_list(s)),
    "cost_matrix": _parse_matrix,
}


def set_value(values: dict, key: str, text: str, where: str = "") -> None:
    key = key.strip().replace("-", "_")
    if key not in _FIELDS:
        raise ConfigError(f"{where}unknown key {key!r}")
    default = _FIELDS[key].default
    try:
        if key in _PARSERS:
            values[key] = _PARSERS[key](text)
        elif isinstance(default, bool):
            values[key] = _parse_bool(text)
        elif isinstance(default, int):
            values[key] = _parse_int(text)
        elif isinstance(default, float):
            values[key] = parse_number(text)
        else:
            values[key] = text.strip()
    except ValueError as exc:
        raise ConfigError(f"{where}bad value for {key}: {exc}") from None


def parse_config_text(text: str, source: str = "<config>") -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        set_value(values, key, value, where=f"{source}:{lineno}: ")
    return values


def load_config(path: str | Path | None = None, overrides: dict[str, str] | None = None,
                *, defaults: bool = False) -> RunConfig:
    """Build a validated config from an optional file plus string overrides.

    With ``defaults`` the shipped default file is applied first.
    """
    values: dict = parse_config_text(default_config_text(), "default.cfg") if defaults else {}
    if path is not None:
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        values.update(parse_config_text(text, str(path)))
    for key, text in (overrides or {}).items():
        set_value(values, key, text, where="override: ")
    return RunConfig(**values).validate()


def default_config_text() -> str:
    return resources.files("costelm").joinpath("data/default.cfg").read_text()


def load_default_config() -> RunConfig:
    return RunConfig(**parse_config_text(default_config_text(), "default.cfg")).validate()
