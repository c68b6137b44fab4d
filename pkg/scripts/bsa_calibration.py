"""Multi-seed BSA calibration on the sphere and Rosenbrock benchmarks.

Prints the best fitness per seed and the worst case, which is how the
acceptance thresholds (1e-5 for sphere, 1e-1 for Rosenbrock) were fixed.

    python scripts/bsa_calibration.py --seeds 10
"""

import argparse
import time

import numpy as np

from costelm import bsa
from costelm.numerics import Rng

RUNS = {
    "sphere": dict(dim=10, pop=30, epochs=500),
    "rosenbrock": dict(dim=5, pop=50, epochs=2000),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--mixrate", type=float, default=1.0)
    args = ap.parse_args()

    print("function,seed,best_fitness,seconds")
    for name, run in RUNS.items():
        f, low, high = bsa.BENCHMARKS[name]
        cfg = bsa.BsaConfig(population_size=run["pop"], dim=run["dim"], low=low, high=high,
                            epochs=run["epochs"], mixrate=args.mixrate)
        best = []
        for seed in range(args.seeds):
            start = time.perf_counter()
            res = bsa.optimize(f, cfg, Rng(seed))
            best.append(res.best_fitness)
            print(f"{name},{seed},{res.best_fitness:.3e},{time.perf_counter() - start:.2f}")
        print(f"# {name}: worst {max(best):.3e}, median {np.median(best):.3e}")


if __name__ == "__main__":
    main()
