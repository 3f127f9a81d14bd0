"""
numba shim.

Set ``BOTBENCH_DISABLE_JIT=1`` to route every hot kernel through its pure
numpy twin instead of the compiled loop version (useful for debugging and
for platforms without numba).
"""

import os

_FLAG = os.environ.get("BOTBENCH_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _FLAG not in ("1", "true", "yes", "on")

try:
    from numba import njit as _numba_njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

JIT_ENABLED = JIT_REQUESTED and HAVE_NUMBA


def njit(func=None, **kwargs):
    """``numba.njit`` when numba is importable, otherwise the identity."""
    if not HAVE_NUMBA:
        if func is not None:
            return func

        def wrapper(f):
            return f

        return wrapper
    kwargs.setdefault("cache", True)
    if func is not None:
        return _numba_njit(**kwargs)(func)
    return _numba_njit(**kwargs)
