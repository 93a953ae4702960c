"""Independent reference computations used only by the tests."""

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal


def _fd_ground(alpha, intervals):
    h = 2.0 / intervals
    x = -1.0 + h * np.arange(1, intervals)
    d = 2.0 / h ** 2 + (alpha * x) ** 2
    e = -np.ones(intervals - 2) / h ** 2
    w, v = eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
    v = v[:, 0] / v[intervals // 2 - 1, 0]
    return w[0], h * np.sum(v * v)


def fd_ground_state(alpha, intervals=10000):
    """Second-order finite differences, Richardson-extrapolated over h and h/2.

    Returns (lambda, squared L2 norm of v with v(0) = 1).
    """
    l1, n1 = _fd_ground(alpha, intervals)
    l2, n2 = _fd_ground(alpha, 2 * intervals)
    return (4 * l2 - l1) / 3, (4 * n2 - n1) / 3
