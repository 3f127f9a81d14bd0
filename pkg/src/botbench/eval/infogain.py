"""Entropy-based supervised discretisation and information-gain attribute ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..features import FeatureParams, build_combined_matrix
from ..ingest import LabeledDataset
from ..learners.base import as_label_array


def entropy(labels) -> float:
    """Class entropy in bits."""
    y = np.asarray(labels)
    if y.size == 0:
        return 0.0
    _, counts = np.unique(y, return_counts=True)
    p = counts / y.size
    return float(-(p * np.log2(p)).sum())


def _best_cut(v, y):
    """Cut index minimising the weighted entropy of the two sides (first on ties)."""
    n = len(v)
    bounds = np.flatnonzero(v[:-1] != v[1:])
    best_i, best_e = None, math.inf
    classes = np.unique(y)
    onehot = (y[:, None] == classes[None, :]).astype(np.float64)
    cum = np.cumsum(onehot, axis=0)
    total = cum[-1]
    for i in bounds:
        left = cum[i]
        right = total - left
        nl, nr = i + 1, n - i - 1
        e = (nl * _h(left / nl) + nr * _h(right / nr)) / n
        if e < best_e - 1e-15:
            best_i, best_e = int(i), e
    return best_i, best_e


def _h(p):
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def mdl_discretize(values, labels) -> list[float]:
    """Cut points from recursive entropy minimisation with the MDL acceptance test.

    A candidate cut splitting S (N instances, k classes) into S1, S2 is kept
    when ``gain > (log2(N - 1) + log2(3**k - 2) - (k*H(S) - k1*H(S1) - k2*H(S2))) / N``.
    Cuts sit halfway between adjacent distinct values.
    """
    v = np.asarray(values, dtype=np.float64)
    y = np.asarray(labels)
    if len(v) != len(y):
        raise ValueError("values and labels differ in length")
    if len(v) < 2:
        raise ValueError("need at least two instances")
    order = np.argsort(v, kind="stable")
    v, y = v[order], y[order]
    cuts: list[float] = []

    stack = [(0, len(v))]
    while stack:
        lo, hi = stack.pop()
        sv, sy = v[lo:hi], y[lo:hi]
        n = hi - lo
        if n < 2:
            continue
        i, e = _best_cut(sv, sy)
        if i is None:
            continue
        h = entropy(sy)
        gain = h - e
        left, right = sy[: i + 1], sy[i + 1 :]
        k, k1, k2 = (len(np.unique(a)) for a in (sy, left, right))
        delta = math.log2(3**k - 2) - (k * h - k1 * entropy(left) - k2 * entropy(right))
        if gain <= (math.log2(n - 1) + delta) / n:
            continue
        cut = 0.5 * (sv[i] + sv[i + 1])
        if cut >= sv[i + 1]:
            cut = sv[i]
        cuts.append(float(cut))
        stack.append((lo + i + 1, hi))
        stack.append((lo, lo + i + 1))
    return sorted(cuts)


def info_gain(values, labels, cuts=None) -> float:
    """H(class) - H(class | binned attribute), in bits."""
    v = np.asarray(values, dtype=np.float64)
    y = np.asarray(labels)
    if cuts is None:
        cuts = mdl_discretize(v, y)
    bins = np.searchsorted(np.asarray(cuts, dtype=np.float64), v, side="left")
    cond = 0.0
    for b in np.unique(bins):
        sel = y[bins == b]
        cond += len(sel) / len(y) * entropy(sel)
    return max(entropy(y) - cond, 0.0)


@dataclass(frozen=True)
class RankedFeature:
    name: str
    gain: float
    normalized: float
    cuts: tuple[float, ...]


def rank_matrix(X, labels, names) -> list[RankedFeature]:
    y = as_label_array(labels)
    if y.sum() == 0 or y.sum() == len(y):
        raise ValueError("ranking needs both BOT and HUMAN instances")
    rows = []
    for j, name in enumerate(names):
        cuts = mdl_discretize(X[:, j], y)
        rows.append((name, info_gain(X[:, j], y, cuts), tuple(cuts), j))
    top = max((r[1] for r in rows), default=0.0)
    rows.sort(key=lambda r: (-r[1], r[3]))
    return [RankedFeature(n, g, g / top if top > 0 else 0.0, c) for n, g, c, _ in rows]


def info_gain_ranking(
    dataset: LabeledDataset,
    feature_sets: Iterable,
    params: FeatureParams | None = None,
) -> list[RankedFeature]:
    """All features of the given sets, by descending gain (schema order on ties)."""
    schema, X, y = build_combined_matrix(dataset, feature_sets, params)
    return rank_matrix(X, y, schema.names)
