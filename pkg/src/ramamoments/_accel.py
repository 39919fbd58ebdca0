"""Backend selection for the hot kernels.

Set ``RAMA_DISABLE_NUMBA=1`` to force the pure-numpy code paths. When numba
is not importable the numpy paths are used automatically.
"""

from __future__ import annotations

import os

_FALSEY = {"", "0", "false", "no", "off"}

# avoid probing an outdated TBB runtime on import
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

HAVE_NUMBA = _numba is not None
NUMBA_DISABLED = os.environ.get("RAMA_DISABLE_NUMBA", "").strip().lower() not in _FALSEY
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED

if HAVE_NUMBA:
    njit = _numba.njit
    prange = _numba.prange
else:  # pragma: no cover

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda fn: fn

    prange = range


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


def set_workers(count: int | None) -> None:
    """Cap the numba thread pool; a no-op on the numpy backend."""
    if count is None or not HAVE_NUMBA:
        return
    count = max(1, min(int(count), _numba.config.NUMBA_NUM_THREADS))
    _numba.set_num_threads(count)
