"""
Hot numeric kernels.

Every kernel exists twice: a loop version compiled with numba (``nb_*``) and
a vectorised numpy version (``np_*``).  The public names bound at the bottom
of the module point at one or the other depending on ``_jit.JIT_ENABLED``.
Both variants take and return plain float64/int64 arrays so that either can
be swapped in without touching callers.  Compiled code does no bounds
checking, so the ``nb_*`` kernels validate shapes up front.
"""

import numpy as np

from ._jit import JIT_ENABLED, njit

LEAF = -1


# ---------------------------------------------------------------------------
# binary entropy split search (random forest trees)
# ---------------------------------------------------------------------------


@njit
def _h2(pos, total):
    if total <= 0.0 or pos <= 0.0 or pos >= total:
        return 0.0
    q = pos / total
    return -(q * np.log2(q) + (1.0 - q) * np.log2(1.0 - q))


@njit
def nb_best_split(x_sorted, y_sorted):
    """Best information-gain threshold on one sorted feature column.

    Returns ``(gain, threshold)``; gain is 0 and threshold NaN when every
    value is identical.
    """
    n = x_sorted.shape[0]
    total_pos = 0.0
    for i in range(n):
        total_pos += y_sorted[i]
    parent = _h2(total_pos, float(n))
    best_gain = 0.0
    best_thr = np.nan
    found = False
    left_pos = 0.0
    for i in range(n - 1):
        left_pos += y_sorted[i]
        if x_sorted[i] == x_sorted[i + 1]:
            continue
        nl = float(i + 1)
        nr = float(n) - nl
        child = (nl * _h2(left_pos, nl) + nr * _h2(total_pos - left_pos, nr)) / n
        gain = parent - child
        if not found or gain > best_gain:
            found = True
            best_gain = gain
            thr = 0.5 * (x_sorted[i] + x_sorted[i + 1])
            if thr >= x_sorted[i + 1]:
                thr = x_sorted[i]
            best_thr = thr
    return best_gain, best_thr


def _h2_vec(pos, total):
    out = np.zeros_like(pos, dtype=np.float64)
    ok = (total > 0) & (pos > 0) & (pos < total)
    q = pos[ok] / total[ok]
    out[ok] = -(q * np.log2(q) + (1.0 - q) * np.log2(1.0 - q))
    return out


def np_best_split(x_sorted, y_sorted):
    n = x_sorted.shape[0]
    if n < 2:
        return 0.0, np.nan
    cum = np.cumsum(y_sorted[:-1], dtype=np.float64)
    total_pos = float(np.sum(y_sorted, dtype=np.float64))
    boundary = np.flatnonzero(x_sorted[:-1] != x_sorted[1:])
    if boundary.size == 0:
        return 0.0, np.nan
    nl = (boundary + 1).astype(np.float64)
    nr = n - nl
    lp = cum[boundary]
    child = (nl * _h2_vec(lp, nl) + nr * _h2_vec(total_pos - lp, nr)) / n
    parent = _h2_vec(np.array([total_pos]), np.array([float(n)]))[0]
    gains = parent - child
    j = int(np.argmax(gains))
    i = boundary[j]
    thr = 0.5 * (x_sorted[i] + x_sorted[i + 1])
    if thr >= x_sorted[i + 1]:
        thr = x_sorted[i]
    return float(gains[j]), float(thr)


# ---------------------------------------------------------------------------
# tree traversal
# ---------------------------------------------------------------------------


@njit
def nb_tree_predict(feature, threshold, left, right, value, X):
    n = X.shape[0]
    if feature.shape[0] == 0 or feature.max() >= X.shape[1]:
        raise ValueError("tree references a feature outside X")
    out = np.empty(n, dtype=np.float64)
    for i in range(n):
        node = 0
        while left[node] != -1:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = value[node]
    return out


def np_tree_predict(feature, threshold, left, right, value, X):
    n = X.shape[0]
    node = np.zeros(n, dtype=np.int64)
    active = left[node] != LEAF
    rows = np.arange(n)
    while active.any():
        idx = rows[active]
        cur = node[idx]
        go_left = X[idx, feature[cur]] <= threshold[cur]
        node[idx] = np.where(go_left, left[cur], right[cur])
        active = left[node] != LEAF
    return value[node].astype(np.float64)


# ---------------------------------------------------------------------------
# nearest neighbours
# ---------------------------------------------------------------------------


@njit
def nb_nearest(train, query, k):
    """Indices of the k nearest training rows; ties go to the lower index."""
    n, d = train.shape
    q = query.shape[0]
    if query.shape[1] != d:
        raise ValueError("query and train differ in width")
    if k < 1 or k > n:
        raise ValueError("k must lie in [1, n_train]")
    out = np.empty((q, k), dtype=np.int64)
    dist = np.empty(n, dtype=np.float64)
    for i in range(q):
        for j in range(n):
            s = 0.0
            for f in range(d):
                diff = query[i, f] - train[j, f]
                s += diff * diff
            dist[j] = s
        order = np.argsort(dist, kind="mergesort")
        for m in range(k):
            out[i, m] = order[m]
    return out


def np_nearest(train, query, k, chunk=512):
    q = query.shape[0]
    out = np.empty((q, k), dtype=np.int64)
    for start in range(0, q, chunk):
        block = query[start : start + chunk]
        diff = block[:, None, :] - train[None, :, :]
        dist = np.einsum("ijk,ijk->ij", diff, diff)
        out[start : start + chunk] = np.argsort(dist, axis=1, kind="stable")[:, :k]
    return out


# ---------------------------------------------------------------------------
# single-hidden-layer perceptron, per-instance backpropagation with momentum
# ---------------------------------------------------------------------------


@njit
def nb_mlp_sgd(X, t, W1, b1, w2, b2, order, lr, momentum, epochs):
    """Train in place.  ``b2`` is a length-1 array so it can be mutated."""
    n, d = X.shape
    h = W1.shape[0]
    if W1.shape[1] != d or b1.shape[0] != h or w2.shape[0] != h or b2.shape[0] != 1:
        raise ValueError("weight shapes do not match (hidden, inputs)")
    if t.shape[0] != n or (order.shape[0] > 0 and (order.min() < 0 or order.max() >= n)):
        raise ValueError("targets or order do not match X")
    dW1 = np.zeros_like(W1)
    db1 = np.zeros_like(b1)
    dw2 = np.zeros_like(w2)
    db2 = 0.0
    hid = np.empty(h, dtype=np.float64)
    dh = np.empty(h, dtype=np.float64)
    for _ in range(epochs):
        for r in range(n):
            i = order[r]
            for u in range(h):
                a = b1[u]
                for f in range(d):
                    a += W1[u, f] * X[i, f]
                hid[u] = 1.0 / (1.0 + np.exp(-a))
            a = b2[0]
            for u in range(h):
                a += w2[u] * hid[u]
            o = 1.0 / (1.0 + np.exp(-a))
            do = (t[i] - o) * o * (1.0 - o)
            for u in range(h):
                dh[u] = hid[u] * (1.0 - hid[u]) * w2[u] * do
            for u in range(h):
                dw2[u] = lr * do * hid[u] + momentum * dw2[u]
                w2[u] += dw2[u]
            db2 = lr * do + momentum * db2
            b2[0] += db2
            for u in range(h):
                for f in range(d):
                    dW1[u, f] = lr * dh[u] * X[i, f] + momentum * dW1[u, f]
                    W1[u, f] += dW1[u, f]
                db1[u] = lr * dh[u] + momentum * db1[u]
                b1[u] += db1[u]


def np_mlp_sgd(X, t, W1, b1, w2, b2, order, lr, momentum, epochs):
    dW1 = np.zeros_like(W1)
    db1 = np.zeros_like(b1)
    dw2 = np.zeros_like(w2)
    db2 = 0.0
    for _ in range(epochs):
        for i in order:
            x = X[i]
            hid = 1.0 / (1.0 + np.exp(-(W1 @ x + b1)))
            o = 1.0 / (1.0 + np.exp(-(w2 @ hid + b2[0])))
            do = (t[i] - o) * o * (1.0 - o)
            dh = hid * (1.0 - hid) * w2 * do
            dw2 = lr * do * hid + momentum * dw2
            w2 += dw2
            db2 = lr * do + momentum * db2
            b2[0] += db2
            dW1 = lr * np.outer(dh, x) + momentum * dW1
            W1 += dW1
            db1 = lr * dh + momentum * db1
            b1 += db1


def mlp_forward(X, W1, b1, w2, b2):
    hid = 1.0 / (1.0 + np.exp(-(X @ W1.T + b1)))
    return 1.0 / (1.0 + np.exp(-(hid @ w2 + b2[0])))


if JIT_ENABLED:
    best_split = nb_best_split
    tree_predict = nb_tree_predict
    nearest = nb_nearest
    mlp_sgd = nb_mlp_sgd
else:
    best_split = np_best_split
    tree_predict = np_tree_predict
    nearest = np_nearest
    mlp_sgd = np_mlp_sgd
