"""Bagged random-split entropy trees."""

import math

import numpy as np

from .. import kernels
from .base import Algorithm, Estimator

_MIN_GAIN = 1e-12


class Tree:
    """Binary tree stored as parallel arrays; ``left == -1`` marks a leaf."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self, feature, threshold, left, right, value):
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)

    def __len__(self):
        return len(self.value)

    def predict(self, X):
        return kernels.tree_predict(self.feature, self.threshold, self.left, self.right, self.value, X)


def grow_tree(X, y, rng, max_features, max_depth=None, min_split=2):
    """Grow one unpruned tree.

    At each node ``max_features`` randomly ordered attributes are searched
    first; if none of them yields positive gain the search continues down the
    same random order until one does.  Leaves hold the BOT fraction.
    """
    d = X.shape[1]
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(idx):
        feature.append(0)
        threshold.append(0.0)
        left.append(kernels.LEAF)
        right.append(kernels.LEAF)
        value.append(float(y[idx].mean()))
        return len(value) - 1

    stack = [(np.arange(len(y)), new_node(np.arange(len(y))), 0)]
    while stack:
        idx, node, depth = stack.pop()
        ys = y[idx]
        pos = ys.sum()
        if pos == 0 or pos == len(ys) or len(ys) < min_split:
            continue
        if max_depth is not None and depth >= max_depth:
            continue
        best = None
        for rank, f in enumerate(rng.permutation(d)):
            if rank >= max_features and best is not None:
                break
            col = X[idx, f]
            order = np.argsort(col, kind="stable")
            gain, thr = kernels.best_split(col[order], ys[order].astype(np.float64))
            if gain > _MIN_GAIN and (best is None or gain > best[0]):
                best = (gain, int(f), float(thr))
        if best is None:
            continue
        _, f, thr = best
        go_left = X[idx, f] <= thr
        li, ri = idx[go_left], idx[~go_left]
        feature[node] = f
        threshold[node] = thr
        left[node] = new_node(li)
        right[node] = new_node(ri)
        stack.append((ri, right[node], depth + 1))
        stack.append((li, left[node], depth + 1))
    return Tree(feature, threshold, left, right, value)


class RandomForest(Estimator):
    algorithm = Algorithm.RANDOM_FOREST

    def fit(self, X, y, rng, seed=None):
        n, d = X.shape
        n_trees = self.params["n_trees"]
        m = self.params["max_features"] or int(math.floor(math.log2(d))) + 1
        m = min(m, d)
        if seed is None:
            seed = int(rng.integers(0, 2**63))
        self.trees_ = []
        for t in range(n_trees):
            tree_rng = np.random.default_rng(seed ^ t)
            boot = tree_rng.integers(0, n, size=n)
            self.trees_.append(
                grow_tree(X[boot], y[boot], tree_rng, m, self.params["max_depth"], self.params["min_split"])
            )
        return self

    def predict_score(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        total = np.zeros(len(X))
        for tree in self.trees_:
            total += tree.predict(X)
        return total / len(self.trees_)

    def get_state(self):
        sizes = np.array([len(t) for t in self.trees_], dtype=np.int64)
        state = {"sizes": sizes}
        for attr in Tree.__slots__:
            state[attr] = np.concatenate([getattr(t, attr) for t in self.trees_])
        return state

    @classmethod
    def from_state(cls, params, state):
        est = cls(**params)
        est.trees_ = []
        start = 0
        for size in state["sizes"]:
            parts = {a: state[a][start : start + size] for a in Tree.__slots__}
            est.trees_.append(Tree(**parts))
            start += size
        return est
