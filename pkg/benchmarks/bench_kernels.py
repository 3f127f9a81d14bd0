"""Compare the numba kernels with their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat N] [--quick]

Per kernel: best-of-N wall time for each variant (numba timed after a
warm-up call, so compilation is excluded and reported separately).  The
end-to-end row runs one random-forest cross-validation in a fresh
interpreter with and without BOTBENCH_DISABLE_JIT.
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from botbench import kernels
from botbench._jit import HAVE_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def split_case(rng, n):
    x = np.sort(rng.normal(size=n))
    y = (rng.random(n) < 0.4).astype(np.float64)
    return (x, y)


def tree_case(rng, n):
    from botbench.learners.forest import grow_tree

    X = rng.normal(size=(2000, 8))
    y = (X[:, 0] + X[:, 1] > 0).astype(np.int64)
    t = grow_tree(X, y, np.random.default_rng(0), 3)
    return (t.feature, t.threshold, t.left, t.right, t.value, rng.normal(size=(n, 8)))


def nearest_case(rng, n):
    return (rng.random((n, 21)), rng.random((n // 4, 21)), 1)


def mlp_case(rng, n):
    d, h = 21, 12
    X = rng.uniform(-1, 1, size=(n, d))
    t = (X[:, 0] > 0).astype(np.float64)
    weights = [rng.uniform(-0.5, 0.5, size=s) for s in ((h, d), h, h, 1)]
    order = rng.permutation(n).astype(np.int64)
    return (X, t, *weights, order, 0.3, 0.2, 20)


CASES = {
    "best_split": (kernels.nb_best_split, kernels.np_best_split, split_case, 20_000),
    "tree_predict": (kernels.nb_tree_predict, kernels.np_tree_predict, tree_case, 20_000),
    "nearest": (kernels.nb_nearest, kernels.np_nearest, nearest_case, 4_000),
    "mlp_sgd": (kernels.nb_mlp_sgd, kernels.np_mlp_sgd, mlp_case, 1_000),
}


def fresh(args):
    # mlp_sgd trains in place, so every call gets its own copies
    return tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args)


END_TO_END = """
import time, numpy as np
from botbench.eval import cross_validate_matrix
from botbench.learners import LearnerSpec
rng = np.random.default_rng(0)
X = rng.normal(size=({n}, 6)); y = (X[:, 0] + 0.5 * rng.normal(size={n}) > 0).astype(int)
cross_validate_matrix(X[:40], y[:40], LearnerSpec("random_forest", {{"n_trees": 2}}), k=2)  # compile
start = time.perf_counter()
cross_validate_matrix(X, y, LearnerSpec("random_forest", {{"n_trees": 50}}), k=10, seed=0)
print(time.perf_counter() - start)
"""


def end_to_end(n, disable):
    env = dict(os.environ)
    env.pop("BOTBENCH_DISABLE_JIT", None)
    if disable:
        env["BOTBENCH_DISABLE_JIT"] = "1"
    out = subprocess.run(
        [sys.executable, "-c", END_TO_END.format(n=n)], env=env, capture_output=True, text=True, check=True
    )
    return float(out.stdout.strip().splitlines()[-1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--quick", action="store_true", help="smaller inputs")
    args = parser.parse_args(argv)
    if not HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")

    scale = 0.1 if args.quick else 1.0
    rng = np.random.default_rng(42)
    print(f"{'kernel':<14}{'n':>8}{'compile s':>12}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for name, (nb_fn, np_fn, make, n) in CASES.items():
        n = max(int(n * scale), 16)
        case = make(rng, n)
        start = time.perf_counter()
        nb_fn(*fresh(case))
        compile_s = time.perf_counter() - start
        t_nb = best_of(lambda: nb_fn(*fresh(case)), args.repeat)
        t_np = best_of(lambda: np_fn(*fresh(case)), args.repeat)
        print(f"{name:<14}{n:>8}{compile_s:>12.3f}{t_nb:>12.5f}{t_np:>12.5f}{t_np / t_nb:>9.1f}x")

    n = 300 if args.quick else 1000
    t_nb, t_np = end_to_end(n, False), end_to_end(n, True)
    print(f"{'rf 10-fold cv':<14}{n:>8}{'':>12}{t_nb:>12.3f}{t_np:>12.3f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
