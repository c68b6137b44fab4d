import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from costelm import evalkit
from costelm.errors import EmptyInputError, InvalidLabelError, InvalidSplitError
from costelm.evalkit import SplitSpec
from costelm.numerics import Rng


def test_rank1():
    assert evalkit.rank1_accuracy([1, 2, 3], [1, 2, 3]) == 1.0
    assert evalkit.rank1_accuracy([1, 2, 3], [1, 3, 5]) == pytest.approx(1 / 3)
    assert evalkit.rank1_accuracy([2, 1], [1, 2]) == 0.0


def test_empty_inputs():
    for fn in (evalkit.rank1_accuracy, evalkit.mae):
        with pytest.raises(EmptyInputError):
            fn([], [])
    with pytest.raises(EmptyInputError):
        evalkit.cum_score([], [], 2)


def test_cum_score_fixture():
    np.testing.assert_allclose(evalkit.cum_score([1, 2, 3], [1, 3, 5], 2), [100 / 3, 200 / 3, 100.0])


def test_cum_score_full_tolerance():
    assert evalkit.cum_score([1, 5, 3, 2], [5, 1, 3, 4], 4)[-1] == 100.0


@settings(max_examples=100)
@given(seed=st.integers(0, 2**32 - 1), c=st.integers(2, 8), n=st.integers(1, 60))
def test_cum_score_properties(seed, c, n):
    g = np.random.default_rng(seed)
    p, t = g.integers(1, c + 1, size=n), g.integers(1, c + 1, size=n)
    curve = evalkit.cum_score(p, t, c - 1)
    assert curve[0] == 100 * evalkit.rank1_accuracy(p, t)
    assert np.all(np.diff(curve) >= 0)
    assert curve[np.max(np.abs(p - t))] == 100.0


def test_mae():
    assert evalkit.mae([1, 2], [1, 2]) == 0
    assert evalkit.mae([2, 4], [1, 6]) == 1.5
    assert evalkit.mae(np.arange(5) + 0.25, np.arange(5)) == pytest.approx(0.25)


def test_arr_trr():
    assert evalkit.arr_trr([1, 2, 1, 2], [1, 2, 2, 1], 2) == (0.5, 0.5)
    arr, trr = evalkit.arr_trr([1, 1, 1, 1, 1, 1], [1, 1, 2, 2, 2, 2], 2)
    assert arr == 0.5 and trr == pytest.approx(2 / 6)
    assert evalkit.arr_trr([1, 2, 3], [1, 2, 3], 3) == (1.0, 1.0)


def test_arr_missing_class():
    with pytest.raises(InvalidLabelError):
        evalkit.arr_trr([1, 1], [1, 1], 2)


def test_total_cost():
    costs = np.array([[0, 5], [1, 0]])
    assert evalkit.total_cost([1, 2], [1, 2], costs) == 0
    assert evalkit.total_cost([2], [1], costs) == 5
    with pytest.raises(InvalidLabelError):
        evalkit.total_cost([3], [1], costs)


@settings(max_examples=100)
@given(seed=st.integers(0, 2**32 - 1), c=st.integers(2, 6), n=st.integers(1, 50))
def test_unit_cost_counts_errors(seed, c, n):
    g = np.random.default_rng(seed)
    p, t = g.integers(1, c + 1, size=n), g.integers(1, c + 1, size=n)
    cost = evalkit.total_cost(p, t, np.ones((c, c)) - np.eye(c))
    assert cost == np.count_nonzero(p != t)
    assert cost == pytest.approx((1 - evalkit.rank1_accuracy(p, t)) * n)


@pytest.mark.parametrize("kw", [
    dict(kind="bogus"), dict(train_fraction=1.0), dict(train_fraction=0.0),
    dict(kind="kfold", k=1), dict(kind="fixed"),
])
def test_split_spec_validation(kw):
    with pytest.raises(InvalidSplitError):
        SplitSpec(**kw)


def _check_partition(train, test, N):
    assert np.intersect1d(train, test).size == 0
    np.testing.assert_array_equal(np.sort(np.concatenate([train, test])), np.arange(N))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), N=st.integers(2, 80), frac=st.floats(0.05, 0.95),
       strat=st.booleans())
def test_holdout_partition(seed, N, frac, strat):
    labels = np.random.default_rng(seed).integers(1, 4, size=N)
    [(train, test)] = evalkit.make_splits(labels, SplitSpec("holdout", frac, stratified=strat), Rng(seed))
    _check_partition(train, test, N)
    assert train.size >= 1 and test.size >= 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), counts=st.lists(st.integers(2, 30), min_size=2, max_size=4),
       frac=st.floats(0.2, 0.8))
def test_stratified_proportions(seed, counts, frac):
    labels = np.repeat(np.arange(1, len(counts) + 1), counts)
    [(train, _)] = evalkit.make_splits(labels, SplitSpec("holdout", frac), Rng(seed))
    for k, n in enumerate(counts, start=1):
        assert abs(np.count_nonzero(labels[train] == k) - frac * n) <= 1


def test_stratified_even_counts():
    labels = np.repeat([1, 2], 10)
    [(train, test)] = evalkit.make_splits(labels, SplitSpec("holdout", 0.5), Rng(0))
    assert np.count_nonzero(labels[train] == 1) == 5 and np.count_nonzero(labels[train] == 2) == 5


def test_holdout_near_one_fraction_keeps_test_sample():
    N = 7
    labels = np.ones(N, dtype=int)
    [(train, test)] = evalkit.make_splits(labels, SplitSpec("holdout", 1 - 1 / N), Rng(1))
    assert test.size >= 1


def test_kfold_leave_one_out():
    labels = np.array([1, 2, 1, 2, 1])
    folds = evalkit.make_splits(labels, SplitSpec("kfold", k=5, stratified=False), Rng(0))
    assert len(folds) == 5
    assert sorted(int(test[0]) for _, test in folds) == list(range(5))
    assert all(test.size == 1 and train.size == 4 for train, test in folds)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), k=st.integers(2, 6), strat=st.booleans())
def test_kfold_partitions(seed, k, strat):
    g = np.random.default_rng(seed)
    labels = np.concatenate([np.repeat([1, 2, 3], k), g.integers(1, 4, size=20)])
    folds = evalkit.make_splits(labels, SplitSpec("kfold", k=k, stratified=strat), Rng(seed))
    tests = np.concatenate([test for _, test in folds])
    np.testing.assert_array_equal(np.sort(tests), np.arange(labels.size))
    for train, test in folds:
        _check_partition(train, test, labels.size)
    sizes = [test.size for _, test in folds]
    assert max(sizes) - min(sizes) <= 1


def test_kfold_small_class():
    with pytest.raises(InvalidSplitError):
        evalkit.make_splits(np.array([1, 1, 1, 2]), SplitSpec("kfold", k=3), Rng(0))


def test_fixed_split():
    [(train, test)] = evalkit.make_splits(np.arange(10), SplitSpec("fixed", train_count=7), Rng(0))
    np.testing.assert_array_equal(train, np.arange(7))
    np.testing.assert_array_equal(test, [7, 8, 9])
    with pytest.raises(InvalidSplitError):
        evalkit.make_splits(np.arange(3), SplitSpec("fixed", train_count=3), Rng(0))


def test_splits_deterministic():
    labels = np.random.default_rng(0).integers(1, 3, size=30)
    a = evalkit.make_splits(labels, SplitSpec("kfold", k=3), Rng(5))
    b = evalkit.make_splits(labels, SplitSpec("kfold", k=3), Rng(5))
    for (ta, sa), (tb, sb) in zip(a, b):
        np.testing.assert_array_equal(ta, tb)
        np.testing.assert_array_equal(sa, sb)
