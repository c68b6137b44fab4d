"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line (shown in the "acceptance criteria"
section of the pytest summary) and then asserts the same condition, runtime
limit included.
"""

import re
import time

import numpy as np
from scipy.linalg import subspace_angles

from costelm import bsa, cli, cost_elm, elm, evalkit, subspace
from costelm.config import load_default_config
from costelm.numerics import Rng
from costelm.synthetic import COST_TASK_COSTS, cost_task, gaussian_classes, imbalanced_gaussian


def _instance(g, n_max=120):
    N, L = int(g.integers(3, n_max)), int(g.integers(3, n_max))
    m = int(g.integers(1, 6))
    C = float(2.0 ** g.uniform(-5, 12))
    return g.normal(size=(N, L)), g.normal(size=(N, m)), C


def test_criterion_1_unit_cost_reduction(acceptance):
    start = time.perf_counter()
    g = np.random.default_rng(101)
    worst, branches = 0.0, set()
    for i in range(50):
        H, T, C = _instance(g)
        if i % 2:  # force coverage of both solve branches
            H = H[: max(3, H.shape[1] // 2)] if H.shape[0] >= H.shape[1] else H
            T = T[: H.shape[0]]
        branches.add(H.shape[0] < H.shape[1])
        a = cost_elm.train_cselm(H, T, C, np.ones(H.shape[0]))
        b = elm.train_elm(H, T, C)
        worst = max(worst, np.linalg.norm(a - b) / np.linalg.norm(b))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and branches == {True, False} and elapsed < 10
    acceptance(1, "CSELM with B=1 equals ELM", ok,
               f"max rel err {worst:.2e}, both branches {branches == {True, False}}, {elapsed:.2f}s")
    assert ok


def test_criterion_2_kkt_residual(acceptance):
    start = time.perf_counter()
    g = np.random.default_rng(202)
    worst = 0.0
    for _ in range(50):
        H, T, C = _instance(g)
        B = g.uniform(0.1, 2.0, H.shape[0])
        beta = cost_elm.train_cselm(H, T, C, B)
        xi = T - H @ beta
        alpha = C * B[:, None] * xi
        residual = np.linalg.norm(beta - H.T @ alpha) + np.linalg.norm(H @ beta - T + xi)
        worst = max(worst, residual / (1 + np.linalg.norm(T)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 10
    acceptance(2, "CSELM stationarity residual", ok, f"max residual/(1+|T|) {worst:.2e}, {elapsed:.2f}s")
    assert ok


def test_criterion_3_linear_kernel_equivalence(acceptance):
    start = time.perf_counter()
    g = np.random.default_rng(303)
    worst = 0.0
    for _ in range(20):
        N = int(g.integers(3, 40))
        L = N + int(g.integers(1, 60))
        H, T, Y = g.normal(size=(N, L)), g.normal(size=(N, 2)), g.normal(size=(10, L))
        C = float(2.0 ** g.uniform(-3, 8))
        model = elm.train_kernel_elm(H, T, C, elm.KernelSpec("linear"))
        explicit = Y @ elm.train_elm(H, T, C)
        worst = max(worst, np.max(np.abs(elm.predict_scores(model, Y) - explicit)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-8 and elapsed < 5
    acceptance(3, "linear-kernel ELM equals explicit ELM", ok, f"max abs diff {worst:.2e}, {elapsed:.2f}s")
    assert ok


def _bsa_run(name, dim, pop, epochs, seed):
    f, low, high = bsa.BENCHMARKS[name]
    cfg = bsa.BsaConfig(population_size=pop, dim=dim, low=low, high=high, epochs=epochs)
    feasible = []
    res = bsa.optimize(f, cfg, Rng(seed),
                       callback=lambda s: feasible.append(bool(np.all((s.P >= low) & (s.P <= high)))))
    monotone = all(a >= b for a, b in zip(res.history, res.history[1:]))
    return res.best_fitness, monotone and all(feasible)


def test_criterion_4_bsa_benchmarks(acceptance):
    start = time.perf_counter()
    sphere = [_bsa_run("sphere", 10, 30, 500, s) for s in range(10)]
    rosen = [_bsa_run("rosenbrock", 5, 50, 2000, s) for s in range(10)]
    elapsed = time.perf_counter() - start
    sphere_hits = sum(best <= 1e-5 for best, _ in sphere)
    rosen_hits = sum(best <= 1e-1 for best, _ in rosen)
    sound = all(flag for _, flag in sphere + rosen)
    ok = sphere_hits >= 9 and rosen_hits >= 9 and sound and elapsed < 60
    acceptance(4, "BSA on sphere and Rosenbrock", ok,
               f"sphere {sphere_hits}/10 (worst {max(b for b, _ in sphere):.1e}), "
               f"rosenbrock {rosen_hits}/10 (worst {max(b for b, _ in rosen):.1e}), "
               f"elitism+bounds {sound}, {elapsed:.1f}s")
    assert ok


def test_criterion_5_ecselm_beats_elm_on_cost_task(acceptance):
    start = time.perf_counter()
    L, C = 50, 16.0
    wins = objective_ok = 0
    rows = []
    for seed in range(10):
        X, y, Xt, yt = cost_task(1000 + seed)
        cfg = cost_elm.EcselmConfig(C=C, n_hidden=L, population_size=30, epochs=30, low=0.0, high=1.0,
                                    objective_mode="classificationCost", class_costs=COST_TASK_COSTS)
        fit = cost_elm.ecselm_fit(X, y, cfg, Rng(seed), 2)
        layer = elm.init_hidden_layer(2, L, "radbas", Rng(seed))  # same layer ECSELM drew
        H, T = elm.hidden_output(X, layer), elm.encode_targets(y, 2)
        base = elm.decide(elm.hidden_output(Xt, layer) @ elm.train_elm(H, T, C))
        unit = cost_elm.CselmObjective(H, T, C, "classificationCost", class_costs=COST_TASK_COSTS)
        ec_cost = evalkit.total_cost(cost_elm.predict_ecselm(fit.model, Xt), yt, COST_TASK_COSTS)
        elm_cost = evalkit.total_cost(base, yt, COST_TASK_COSTS)
        wins += ec_cost <= elm_cost
        objective_ok += fit.objective <= unit(np.ones(len(y)))
        rows.append(f"{ec_cost:g}/{elm_cost:g}")
    elapsed = time.perf_counter() - start
    ok = wins >= 8 and objective_ok == 10 and elapsed < 120
    acceptance(5, "ECSELM total cost vs ELM on 90/10 task", ok,
               f"test cost <= ELM on {wins}/10 seeds [ecselm/elm: {' '.join(rows)}], "
               f"train objective <= B=1 on {objective_ok}/10, {elapsed:.1f}s")
    assert ok


def test_criterion_6_uniform_cost_lda_subspace(acceptance):
    start = time.perf_counter()
    g = np.random.default_rng(606)
    ones = np.ones((3, 3)) - np.eye(3)
    results = []
    for counts, normalize in (((40, 40, 40), False), ((20, 45, 70), True)):
        X, labels = gaussian_classes(Rng(606), counts, g.normal(scale=2.0, size=(3, 10)))
        lda = subspace.solve_projection(*subspace.lda_scatter(X, labels, 3), 3)
        cs = subspace.solve_projection(*subspace.cs_scatter(X, labels, ones, normalize), 2)
        gap = (lda.eigenvalues[1] - lda.eigenvalues[2]) / abs(lda.eigenvalues[0])
        angle = np.max(subspace_angles(lda.W[:, :2], cs.W))
        results.append((gap, angle))
    elapsed = time.perf_counter() - start
    ok = all(gap > 1e-8 and angle < 1e-6 for gap, angle in results) and elapsed < 5
    detail = ", ".join(f"{name}: angle {a:.1e} gap {gp:.1e}" for name, (gp, a) in
                       zip(("balanced", "unbalanced+normalized"), results))
    acceptance(6, "all-ones cost LDA matches plain LDA", ok, f"{detail}, {elapsed:.2f}s")
    assert ok


def test_criterion_7_metric_identities(acceptance):
    start = time.perf_counter()
    checks = {}
    g = np.random.default_rng(707)
    ident = True
    for _ in range(200):
        c, n = int(g.integers(2, 7)), int(g.integers(1, 80))
        p, t = g.integers(1, c + 1, size=n), g.integers(1, c + 1, size=n)
        curve = evalkit.cum_score(p, t, c - 1)
        ident &= curve[0] == 100 * evalkit.rank1_accuracy(p, t)
        ident &= bool(np.all(np.diff(curve) >= 0)) and curve[-1] == 100.0
        ident &= evalkit.total_cost(p, t, np.ones((c, c)) - np.eye(c)) == np.count_nonzero(p != t)
    checks["identities"] = bool(ident)
    checks["rank1"] = abs(evalkit.rank1_accuracy([1, 2, 3], [1, 3, 5]) - 1 / 3) < 1e-15
    checks["cumscore"] = np.allclose(evalkit.cum_score([1, 2, 3], [1, 3, 5], 2), [100 / 3, 200 / 3, 100])
    checks["mae"] = evalkit.mae([2, 4], [1, 6]) == 1.5 and evalkit.mae([3, 4], [3, 4]) == 0
    arr, trr = evalkit.arr_trr([1, 1, 1, 1, 1, 1], [1, 1, 2, 2, 2, 2], 2)
    checks["arr_trr"] = arr == 0.5 and abs(trr - 2 / 6) < 1e-15
    checks["arr_balanced"] = evalkit.arr_trr([1, 2, 2, 1], [1, 1, 2, 2], 2) == (0.5, 0.5)
    checks["total_cost"] = evalkit.total_cost([2], [1], [[0, 5], [1, 0]]) == 5
    elapsed = time.perf_counter() - start
    ok = all(checks.values()) and elapsed < 1
    failed = [k for k, v in checks.items() if not v]
    acceptance(7, "metric identities and fixtures", ok, f"failed: {failed or 'none'}, {elapsed:.2f}s")
    assert ok


def test_criterion_8_cli_determinism(acceptance, tmp_path, monkeypatch):
    X, y = imbalanced_gaussian(Rng(808), 120, minority_fraction=0.25)
    data = tmp_path / "task.csv"
    data.write_text("".join(",".join(repr(float(v)) for v in row) + f",{lab}\n" for row, lab in zip(X, y)))
    argv = ["train", "--data", str(data), "--method", "ecselm", "--set", "C=2^0,2^5", "--set", "L=20,40",
            "--population", "10", "--epochs", "5", "--repetitions", "4", "--seed", "12345",
            "--cost_matrix", "0,1;10,0", "--objective", "cost"]
    start = time.perf_counter()
    texts = []
    for threads in ("1", "4"):  # the second run also exercises parallel repetitions
        monkeypatch.setenv("COSTELM_THREADS", threads)
        out = tmp_path / f"report_{threads}.json"
        assert cli.main(argv + ["--out", str(out)]) == 0
        texts.append(re.sub(r'"wall_clock_seconds": [^\n]*', '"wall_clock_seconds": _', out.read_text()))
    elapsed = time.perf_counter() - start
    ok = texts[0] == texts[1] and elapsed < 30
    acceptance(8, "identical train runs give identical reports", ok,
               f"{len(texts[0])} bytes, identical {texts[0] == texts[1]}, {elapsed:.1f}s")
    assert ok


def test_criterion_9_default_config(acceptance):
    start = time.perf_counter()
    cfg = load_default_config()
    ok_values = (
        cfg.population == 100 and cfg.epochs == 100 and (cfg.low, cfg.high) == (-1.0, 1.0)
        and cfg.C == tuple(2.0 ** k for k in (0, 5, 10, 20, 30))
        and cfg.L == (100, 200, 300, 400, 500)
    )
    elapsed = time.perf_counter() - start
    ok = ok_values and elapsed < 1
    acceptance(9, "shipped default config", ok,
               f"population {cfg.population}, epochs {cfg.epochs}, bounds [{cfg.low:g},{cfg.high:g}], "
               f"C {[f'{c:g}' for c in cfg.C]}, L {list(cfg.L)}, {elapsed:.3f}s")
    assert ok
