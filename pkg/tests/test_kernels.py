"""The numba and numpy variants of every kernel must agree."""

import numpy as np
import pytest

from botbench import kernels
from botbench.learners.forest import grow_tree


def _entropy_gain_bruteforce(x, y):
    def h(v):
        if len(v) == 0:
            return 0.0
        p = np.mean(v)
        return 0.0 if p in (0.0, 1.0) else -(p * np.log2(p) + (1 - p) * np.log2(1 - p))

    best = (0.0, np.nan)
    found = False
    for c in np.unique(x)[:-1]:
        nxt = np.unique(x)[np.unique(x) > c][0]
        left, right = y[x <= c], y[x > c]
        g = h(y) - (len(left) * h(left) + len(right) * h(right)) / len(y)
        if not found or g > best[0]:
            best, found = (g, (c + nxt) / 2), True
    return best


@pytest.mark.parametrize("seed", range(20))
def test_best_split_variants_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 60))
    x = np.sort(rng.integers(0, 10, n).astype(np.float64))
    y = rng.integers(0, 2, n).astype(np.float64)
    g_nb, t_nb = kernels.nb_best_split(x, y)
    g_np, t_np = kernels.np_best_split(x, y)
    g_bf, t_bf = _entropy_gain_bruteforce(x, y)
    if np.isnan(t_bf):
        assert np.isnan(t_nb) and np.isnan(t_np)
    else:
        assert g_nb == pytest.approx(g_bf, abs=1e-12)
        assert g_np == pytest.approx(g_bf, abs=1e-12)
        assert t_nb == t_np == t_bf


def test_best_split_constant():
    x = np.ones(5)
    y = np.array([0, 1, 0, 1, 1.0])
    assert np.isnan(kernels.nb_best_split(x, y)[1])
    assert np.isnan(kernels.np_best_split(x, y)[1])


def test_tree_predict_variants_agree():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(120, 3))
    y = (X[:, 0] + 0.3 * rng.normal(size=120) > 0).astype(np.int64)
    tree = grow_tree(X, y, np.random.default_rng(0), 2)
    Q = rng.normal(size=(50, 3))
    a = kernels.nb_tree_predict(tree.feature, tree.threshold, tree.left, tree.right, tree.value, Q)
    b = kernels.np_tree_predict(tree.feature, tree.threshold, tree.left, tree.right, tree.value, Q)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("k", [1, 3, 7])
def test_nearest_variants_agree(k):
    rng = np.random.default_rng(k)
    train = rng.integers(0, 4, size=(40, 2)).astype(np.float64)  # many exact ties
    query = rng.integers(0, 4, size=(25, 2)).astype(np.float64)
    a = kernels.nb_nearest(train, query, k)
    b = kernels.np_nearest(train, query, k)
    assert np.array_equal(a, b)
    d = ((query[:, None, :] - train[None]) ** 2).sum(-1)
    for i in range(len(query)):
        expected = sorted(range(len(train)), key=lambda j: (d[i, j], j))[:k]
        assert list(a[i]) == expected


def test_mlp_variants_agree():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, size=(30, 3))
    t = (X[:, 0] > 0).astype(np.float64)
    init = [rng.uniform(-0.5, 0.5, size=s) for s in ((3, 3), 3, 3, 1)]
    order = rng.permutation(30).astype(np.int64)
    a = [w.copy() for w in init]
    b = [w.copy() for w in init]
    kernels.nb_mlp_sgd(X, t, *a, order, 0.3, 0.2, 50)
    kernels.np_mlp_sgd(X, t, *b, order, 0.3, 0.2, 50)
    for wa, wb in zip(a, b):
        np.testing.assert_allclose(wa, wb, rtol=1e-9, atol=1e-12)
    out = kernels.mlp_forward(X, *a)
    assert ((out >= 0.5) == (t == 1)).mean() > 0.9


def test_compiled_kernels_reject_bad_shapes():
    rng = np.random.default_rng(0)
    X = rng.uniform(-1, 1, size=(10, 4))
    t = np.zeros(10)
    order = np.arange(10, dtype=np.int64)
    with pytest.raises(ValueError):
        kernels.nb_mlp_sgd(X, t, np.zeros((4, 3)), np.zeros(3), np.zeros(3), np.zeros(1), order, 0.3, 0.2, 1)
    with pytest.raises(ValueError):
        kernels.nb_mlp_sgd(X, t, np.zeros((3, 4)), np.zeros(3), np.zeros(3), np.zeros(1), order + 1, 0.3, 0.2, 1)
    with pytest.raises(ValueError):
        kernels.nb_nearest(X, X[:, :3], 1)
    with pytest.raises(ValueError):
        kernels.nb_nearest(X, X, 11)
    tree = grow_tree(X, (X[:, 3] > 0).astype(np.int64), np.random.default_rng(0), 4)
    with pytest.raises(ValueError):
        kernels.nb_tree_predict(tree.feature, tree.threshold, tree.left, tree.right, tree.value, X[:, :2])
