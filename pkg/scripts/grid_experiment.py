"""Compare every classifier in the package on a synthetic five-level task.

Writes one JSON report per method (same format as ``costelm train``) and
prints a mean +/- std table of rank-1 accuracy, MAE and total cost.

    python scripts/grid_experiment.py --out-dir runs/ --repetitions 5
"""

import argparse
from pathlib import Path

import numpy as np

from costelm.cli import dump_report
from costelm.config import load_config
from costelm.dataset import Dataset
from costelm.numerics import Rng
from costelm.pipeline import run_experiment
from costelm.synthetic import gaussian_classes

METHODS = ("elm", "kelm", "welm1", "welm2", "cselm", "ecselm", "lda", "ecslda", "pca-nn")


def level_task(seed, per_class=(60, 40, 30, 20, 10), dim=6):
    # Ordered levels along one axis, shrinking class sizes: neighbouring levels overlap.
    means = np.zeros((len(per_class), dim))
    means[:, 0] = 1.5 * np.arange(len(per_class))
    X, y = gaussian_classes(Rng(seed), per_class, means)
    return Dataset(X, y, len(per_class))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", type=Path)
    ap.add_argument("--repetitions", type=int, default=5)
    ap.add_argument("--population", type=int, default=20)
    ap.add_argument("--epochs", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = level_task(args.seed)
    # Cost grows with the distance between true and predicted level.
    c = data.n_classes
    costs = ";".join(",".join(str(abs(i - j)) for j in range(c)) for i in range(c))
    print(f"{'method':8s} {'rank1':>15s} {'mae':>15s} {'total_cost':>17s}")
    for method in METHODS:
        cfg = load_config(overrides={
            "method": method, "C": "2^4", "L": "60", "repetitions": str(args.repetitions),
            "population": str(args.population), "epochs": str(args.epochs), "seed": str(args.seed),
            "cost_matrix": costs, "objective": "cost",
        })
        report = run_experiment(cfg, data, "level_task")
        s = report["grid"][0]["summary"]
        print(f"{method:8s} {s['rank1']['mean']:.3f} ± {s['rank1']['std']:.3f}"
              f"   {s['mae']['mean']:.3f} ± {s['mae']['std']:.3f}"
              f"   {s['total_cost']['mean']:7.1f} ± {s['total_cost']['std']:5.1f}")
        if args.out_dir:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            (args.out_dir / f"{method}.json").write_text(dump_report(report))


if __name__ == "__main__":
    main()
