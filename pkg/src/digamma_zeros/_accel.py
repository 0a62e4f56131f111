"""Backend selection for the hot kernels.

Set ``DIGAMMA_ZEROS_BACKEND=numpy`` to bypass numba entirely; the scalar
kernels then run as plain Python and the batch routines use their
vectorised numpy implementations.
"""
import os

BACKEND_ENV = "DIGAMMA_ZEROS_BACKEND"

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_requested = os.environ.get(BACKEND_ENV, "numba").strip().lower()
USE_NUMBA = numba is not None and _requested != "numpy"
BACKEND = "numba" if USE_NUMBA else "numpy"


def njit(*args, **kwargs):
    if USE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def decorator(func):
        return func

    return decorator


if USE_NUMBA:
    # the bundled TBB is too old for numba and only produces a warning
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    prange = numba.prange
else:
    prange = range


def set_threads(n):
    """Limit numba's worker pool. No-op on the numpy backend."""
    if n is None or not USE_NUMBA:
        return
    n = max(1, min(int(n), numba.config.NUMBA_NUM_THREADS))
    numba.set_num_threads(n)
