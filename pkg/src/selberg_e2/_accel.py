"""numba toggle.

Set ``SELBERG_E2_NUMBA=0`` to force the pure-numpy kernels. When numba is not
importable the numpy path is used regardless of the flag.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("SELBERG_E2_NUMBA", "1") not in ("0", "false", "no")


def njit(func):
    if numba is None:
        return func
    return numba.njit(cache=True)(func)


def set_threads(n):
    if numba is not None and n:
        numba.set_num_threads(min(int(n), numba.config.NUMBA_NUM_THREADS))
