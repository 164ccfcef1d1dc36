import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsmodel.errors import InputError, UnknownFeature, ZeroVariance
from fsmodel.importance import group_labels, importance_report, sensitivity
from fsmodel.schema import Dataset
from fsmodel.synthbench import GeneratorConfig, generate

from helpers import toy_schema


def brute_force_s(x, y):
    """Var(E[Y|X]) / Var(Y) by explicit loops over distinct levels."""
    n = len(y)
    mean = sum(y) / n
    var_y = sum((v - mean) ** 2 for v in y) / n
    acc = 0.0
    for level in set(x):
        ys = [yy for xx, yy in zip(x, y) if xx == level]
        acc += len(ys) * (sum(ys) / len(ys) - mean) ** 2
    return acc / n / var_y


def test_hand_example():
    x = [0.0, 1.0] * 10
    y = [10.0 * v for v in x]
    ds = Dataset(toy_schema("x1", "x2"), np.column_stack([x, np.arange(20.0) % 3]),
                 np.array(y)[:, None])
    # V(Y) = 25, conditional means 0 and 10 -> V(E[Y|X1]) = 25
    assert sensitivity(ds, "x1", "y") == pytest.approx(1.0, abs=1e-12)


def test_independent_feature_near_zero():
    rng = np.random.default_rng(0)
    x1 = rng.integers(0, 2, 2000).astype(float)
    x2 = rng.integers(0, 5, 2000).astype(float)
    y = 10 * x1 + rng.normal(size=2000)
    ds = Dataset(toy_schema("x1", "x2"), np.column_stack([x1, x2]), y[:, None])
    assert sensitivity(ds, "x2", "y") <= 0.05


def test_zero_variance():
    ds = Dataset(toy_schema("a", "b"), [[1, 2], [2, 3], [3, 1]], [[4.0], [4.0], [4.0]])
    with pytest.raises(ZeroVariance):
        sensitivity(ds, "a", "y")


def test_unknown_feature():
    ds = Dataset(toy_schema("a", "b"), [[1, 2], [2, 3]], [[4.0], [5.0]])
    with pytest.raises(UnknownFeature):
        sensitivity(ds, "c", "y")


def test_single_dependence_exact():
    x1 = np.repeat([0.0, 1.0, 2.0, 3.0], 10)
    x2 = np.tile([0.0, 1.0], 20)
    ds = Dataset(toy_schema("x1", "x2"), np.column_stack([x1, x2]), x1[:, None])
    rep = importance_report(ds)
    assert [it.feature for it in rep.rankings["y"]] == ["x1", "x2"]
    assert rep.importance("y", "x1") == pytest.approx(1.0, abs=1e-12)
    assert rep.importance("y", "x2") == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 80))
    x = rng.integers(0, 6, n).astype(float)
    y = rng.normal(size=n) + x**2
    ds = Dataset(toy_schema("x", "z"), np.column_stack([x, rng.normal(size=n)]), y[:, None])
    assert sensitivity(ds, "x", "y") == pytest.approx(brute_force_s(list(x), list(y)), abs=1e-12)


def test_binning_for_continuous_inputs():
    x = np.linspace(0, 1, 1000)
    labels, g = group_labels(x)
    assert g.binned and g.groups == 16
    assert sum(g.sizes) == 1000
    assert max(g.sizes) - min(g.sizes) <= 2
    labels, g = group_labels(np.arange(32.0))
    assert not g.binned and g.groups == 32


def _report_invariants(rep):
    for metric, ranking in rep.rankings.items():
        vi = [it.importance for it in ranking]
        assert sum(vi) == pytest.approx(1.0, abs=1e-9)
        assert vi == sorted(vi, reverse=True)
        for it in ranking:
            assert 0.0 <= it.sensitivity <= 1.0


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.01, 100), st.floats(-1e3, 1e3))
def test_affine_and_permutation_invariance(seed, a, b):
    rng = np.random.default_rng(seed)
    n = 200
    X = np.column_stack([rng.integers(0, 4, n), rng.integers(0, 3, n), rng.normal(size=n)])
    y = X[:, 0] ** 2 + 2 * X[:, 1] + rng.normal(size=n)
    schema = toy_schema("a", "b", "c")
    base = importance_report(Dataset(schema, X, y[:, None]))
    scaled = importance_report(Dataset(schema, X, (a * y + b)[:, None]))
    perm = rng.permutation(n)
    shuffled = importance_report(Dataset(schema, X[perm], y[perm, None]))
    _report_invariants(base)
    for f in schema.feature_names:
        assert scaled.sensitivity("y", f) == pytest.approx(base.sensitivity("y", f), abs=1e-9)
        assert shuffled.sensitivity("y", f) == pytest.approx(base.sensitivity("y", f), abs=1e-12)
    assert [i.feature for i in shuffled.rankings["y"]] == [i.feature for i in base.rankings["y"]]


def test_ties_follow_schema_order():
    X = np.column_stack([np.tile([0.0, 1.0], 4), np.tile([0.0, 1.0], 4), np.repeat([0.0, 1.0], 4)])
    ds = Dataset(toy_schema("b", "a", "c"), X, X[:, 0:1])
    names = [it.feature for it in importance_report(ds).rankings["y"]]
    assert names[:2] == ["b", "a"]


def test_zero_variance_metric_is_undefined():
    X = np.column_stack([np.arange(6.0), np.arange(6.0) % 2])
    ds = Dataset(toy_schema("a", "b", metrics=("y", "flat")), X,
                 np.column_stack([np.arange(6.0), np.full(6, 2.0)]))
    rep = importance_report(ds)
    assert rep.rankings["flat"] is None
    assert rep.rankings["y"] is not None


def test_needs_two_features():
    ds = Dataset(toy_schema("a"), [[1.0], [2.0]], [[1.0], [2.0]])
    with pytest.raises(InputError):
        importance_report(ds)


def test_gluster_rand_read_split():
    ds, _ = generate(GeneratorConfig(regime="gluster", n=2000, seed=42, o_sync=False))
    rep = importance_report(ds)
    # published random-read split: 0.95 block size, 0.05 cache
    assert rep.importance("rand_read_mbps", "block_size_kb") == pytest.approx(0.95, abs=0.05)
    assert rep.importance("rand_read_mbps", "cache_size_mb") == pytest.approx(0.05, abs=0.05)
    for m in ("write_mbps", "rand_write_mbps"):
        assert rep.importance(m, "block_size_kb") >= 0.95
