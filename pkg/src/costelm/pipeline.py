"""Repeated split / fit / evaluate runs over a C x L grid, producing a report dict."""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import cost_elm, elm, evalkit, subspace
from .config import RunConfig
from .dataset import Dataset
from .numerics import Rng

REPORT_FORMAT = "costelm-report"
REPORT_VERSION = 1

USES_C = {"elm", "kelm", "welm1", "welm2", "cselm", "ecselm"}
USES_L = {"elm", "welm1", "welm2", "cselm", "ecselm"}


@dataclass
class FitOutcome:
    predicted: np.ndarray
    learned: dict = field(default_factory=dict)


def _targets(y, cfg: RunConfig, n_classes):
    if cfg.mode == "classification":
        return elm.encode_targets(y, n_classes)
    return np.asarray(y, dtype=float)[:, None]


def _finish(scores, cfg: RunConfig) -> np.ndarray:
    return elm.decide(scores) if cfg.mode == "classification" else scores[:, 0]


def _reduce(X_tr, X_te, cfg: RunConfig):
    if cfg.pca_dim:
        model = subspace.pca(X_tr, cfg.pca_dim)
        return model.transform(X_tr), model.transform(X_te)
    return X_tr, X_te


def fit_predict(cfg: RunConfig, C: float, L: int, X_tr, y_tr, X_te, n_classes, rng: Rng) -> FitOutcome:
    """Train one method on a training split and predict the test rows."""
    method = cfg.method
    if method in ("elm", "welm1", "welm2", "cselm"):
        hidden = elm.init_hidden_layer(X_tr.shape[1], L, cfg.activation, rng)
        H = elm.hidden_output(X_tr, hidden)
        T = _targets(y_tr, cfg, n_classes)
        if method == "elm":
            beta = elm.train_elm(H, T, C)
        elif method in ("welm1", "welm2"):
            beta = cost_elm.train_weighted_elm(H, y_tr, C, "W1" if method == "welm1" else "W2", n_classes)
        else:
            if cfg.cselm_b == "ones" or cfg.mode == "regression":
                B = np.ones(len(y_tr))
            else:
                W = elm.class_weights(y_tr, cfg.weighting, n_classes)
                B = cost_elm.cost_info_vector(W, cost_elm.expand_class_costs(cfg.class_costs(n_classes), y_tr))
            beta = cost_elm.train_cselm(H, T, C, B)
        return FitOutcome(_finish(elm.hidden_output(X_te, hidden) @ beta, cfg))

    if method == "kelm":
        model = elm.train_kernel_elm(X_tr, _targets(y_tr, cfg, n_classes), C, elm.KernelSpec(cfg.kernel, cfg.gamma))
        return FitOutcome(_finish(elm.predict_scores(model, X_te), cfg))

    if method == "ecselm":
        ecfg = cost_elm.EcselmConfig(
            C=C, n_hidden=L, activation=cfg.activation, population_size=cfg.population,
            epochs=cfg.epochs, low=cfg.low, high=cfg.high, mixrate=cfg.mixrate,
            objective_mode=cfg.objective_mode, holdout_fraction=cfg.objective_holdout,
            weighting=cfg.weighting,
            class_costs=cfg.class_costs(n_classes) if cfg.mode == "classification" else None,
        )
        fit = cost_elm.ecselm_fit(X_tr, y_tr, ecfg, rng, n_classes)
        pred = _finish(elm.predict_scores(fit.model, X_te), cfg)
        return FitOutcome(pred, {"cost_vector": fit.cost_vector, "objective": fit.objective,
                                 "history": fit.history})

    X_tr, X_te = _reduce(X_tr, X_te, cfg)
    if method == "pca-nn":
        if not cfg.pca_dim:
            model = subspace.pca(X_tr, min(X_tr.shape[0] - 1, X_tr.shape[1]))
            X_tr, X_te = model.transform(X_tr), model.transform(X_te)
        return FitOutcome(subspace.nn_classify(X_tr, y_tr, X_te))
    d = cfg.subspace_dim or min(n_classes - 1, X_tr.shape[1])
    if method == "lda":
        proj = subspace.solve_projection(*subspace.lda_scatter(X_tr, y_tr, n_classes), d)
        return FitOutcome(subspace.nn_classify(proj.transform(X_tr), y_tr, proj.transform(X_te)))
    if method == "ecslda":
        scfg = subspace.EcsldaConfig(d=d, population_size=cfg.population, epochs=cfg.epochs,
                                     low=cfg.low, high=cfg.high, mixrate=cfg.mixrate,
                                     within_class_normalize=cfg.within_class_normalize)
        fit = subspace.ecslda_fit(X_tr, y_tr, n_classes, scfg, rng)
        pred = subspace.nn_classify(fit.projection.transform(X_tr), y_tr, fit.projection.transform(X_te))
        return FitOutcome(pred, {"class_costs": fit.class_costs, "objective": fit.objective,
                                 "history": fit.history, "fallback": fit.fallback})
    raise ValueError(f"unknown method {method!r}")


def compute_metrics(pred, truth, cfg: RunConfig, n_classes) -> dict:
    out: dict = {}
    if cfg.mode == "regression":
        out["mae"] = evalkit.mae(pred, truth)
        return out
    for name in cfg.metrics:
        if name == "rank1":
            out["rank1"] = evalkit.rank1_accuracy(pred, truth)
        elif name == "cumscore":
            out["cumscore"] = evalkit.cum_score(pred, truth, n_classes - 1)
        elif name == "mae":
            out["mae"] = evalkit.mae(pred, truth)
        elif name in ("arr", "trr"):
            present = np.unique(truth).size == n_classes
            if present:
                arr, trr = evalkit.arr_trr(pred, truth, n_classes)
                out[name] = arr if name == "arr" else trr
            else:
                out[name] = None
        elif name == "total_cost":
            out["total_cost"] = evalkit.total_cost(pred, truth, cfg.class_costs(n_classes))
    return out


def run_repetition(cfg: RunConfig, data: Dataset, C, L, rep: int) -> dict:
    seed = (cfg.seed + rep) % 2**64
    rng = Rng(seed)
    spec = evalkit.SplitSpec(cfg.split, cfg.train_fraction, cfg.folds,
                             cfg.train_count or None, cfg.stratified and cfg.mode == "classification")
    splits = evalkit.make_splits(data.y, spec, rng)
    idx_all, pred_all, learned = [], [], []
    for train, test in splits:
        outcome = fit_predict(cfg, C, L, data.X[train], data.y[train], data.X[test], data.n_classes, rng)
        idx_all.append(test)
        pred_all.append(outcome.predicted)
        if outcome.learned:
            learned.append(outcome.learned)
    idx = np.concatenate(idx_all)
    pred = np.concatenate(pred_all)
    truth = data.y[idx]
    row = {
        "repetition": rep,
        "seed": seed,
        "n_test": int(idx.size),
        "metrics": compute_metrics(pred, truth, cfg, data.n_classes),
    }
    if cfg.keep_predictions:
        row["predictions"] = {"index": idx, "truth": truth, "predicted": pred}
    if learned:
        row["learned"] = learned
    return row


def summarize(rows: list[dict]) -> dict:
    """Mean and population standard deviation (ddof=0) of each metric across repetitions."""
    summary = {}
    for name in rows[0]["metrics"]:
        values = [r["metrics"][name] for r in rows]
        if any(v is None for v in values):
            summary[name] = None
            continue
        arr = np.asarray(values, dtype=float)
        summary[name] = {"mean": arr.mean(axis=0), "std": arr.std(axis=0)}
    return summary


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("COSTELM_THREADS", "1")))
    except ValueError:
        return 1


def run_experiment(cfg: RunConfig, data: Dataset, dataset_label: str = "") -> dict:
    start = time.perf_counter()
    Cs = cfg.C if cfg.method in USES_C else (None,)
    Ls = cfg.L if cfg.method in USES_L else (None,)
    grid = []
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        for C, L in itertools.product(Cs, Ls):
            rows = list(pool.map(lambda r: run_repetition(cfg, data, C, L, r), range(cfg.repetitions)))
            grid.append({"C": C, "L": L, "repetitions": rows, "summary": summarize(rows)})
    report = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "method": cfg.method,
        "mode": cfg.mode,
        "dataset": {
            "source": dataset_label,
            "n_samples": data.n_samples,
            "n_features": data.n_features,
            "n_classes": data.n_classes,
        },
        "config": cfg.to_dict(),
        "grid": grid,
        "wall_clock_seconds": time.perf_counter() - start,
    }
    return to_plain(report)


def to_plain(obj):
    """Convert numpy containers to JSON-ready Python values; non-finite floats become None."""
    if isinstance(obj, dict):
        return {k: to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if np.isfinite(obj) else None
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def cumscore_curve(report: dict, grid_index: int = 0) -> list[tuple[int, float]]:
    """Mean CumScore curve across repetitions, recomputed from stored predictions."""
    if report.get("mode") != "classification":
        raise ValueError("cumulative scores need a classification report")
    try:
        point = report["grid"][grid_index]
    except (KeyError, IndexError):
        raise ValueError(f"report has no grid point {grid_index}") from None
    c = report["dataset"]["n_classes"]
    curves = []
    for row in point["repetitions"]:
        if "predictions" not in row:
            raise ValueError("report carries no per-sample predictions")
        p = row["predictions"]
        curves.append(evalkit.cum_score(p["predicted"], p["truth"], c - 1))
    mean = np.mean(curves, axis=0)
    return [(level, float(v)) for level, v in enumerate(mean)]
