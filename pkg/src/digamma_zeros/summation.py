import math

import numpy as np

from ._accel import USE_NUMBA, njit


@njit(cache=True)
def _neumaier(values):
    s = 0.0
    comp = 0.0
    for i in range(values.shape[0]):
        v = values[i]
        t = s + v
        if abs(s) >= abs(v):
            comp += (s - t) + v
        else:
            comp += (v - t) + s
        s = t
    return s + comp


def compensated_sum(values):
    """Sum in index order with compensation.

    Neumaier's variant of Kahan summation under numba; ``math.fsum``
    (correctly rounded) on the numpy backend.
    """
    a = np.ascontiguousarray(values, dtype=float)
    if USE_NUMBA:
        return float(_neumaier(a))
    return math.fsum(a)
