# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for per-frame pixel statistics.

Each kernel returns raw accumulators (exact integer sums where possible);
the statistical combination happens in Python so the compiled and fallback
paths produce identical results for MSE and frame-difference statistics.
"""

from libc.math cimport sqrt

import numpy as np
cimport numpy as cnp

cnp.import_array()


def sq_err_sum(cnp.uint8_t[:, :] a, cnp.uint8_t[:, :] b):
    """Exact sum of squared differences between two uint8 planes."""
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef Py_ssize_t i, j
    cdef long long acc = 0
    cdef long long d
    for i in range(h):
        for j in range(w):
            d = <long long> a[i, j] - <long long> b[i, j]
            acc += d * d
    return acc


def diff_moments(cnp.uint8_t[:, :] a, cnp.uint8_t[:, :] b):
    """Exact (sum, sum of squares) of the signed difference a - b."""
    cdef Py_ssize_t h = a.shape[0], w = a.shape[1]
    cdef Py_ssize_t i, j
    cdef long long s1 = 0, s2 = 0
    cdef long long d
    for i in range(h):
        for j in range(w):
            d = <long long> a[i, j] - <long long> b[i, j]
            s1 += d
            s2 += d * d
    return s1, s2


def sobel_moments(cnp.uint8_t[:, :] y):
    """Sobel gradient-magnitude accumulators over the frame interior.

    Returns (sum of magnitudes, exact integer sum of squared magnitudes,
    interior pixel count).  The 1-pixel border is excluded.
    """
    cdef Py_ssize_t h = y.shape[0], w = y.shape[1]
    cdef Py_ssize_t i, j
    cdef long long gx, gy, sq, s2 = 0
    cdef double s1 = 0.0
    for i in range(1, h - 1):
        for j in range(1, w - 1):
            gx = (
                - <long long> y[i - 1, j - 1] + <long long> y[i - 1, j + 1]
                - 2 * <long long> y[i, j - 1] + 2 * <long long> y[i, j + 1]
                - <long long> y[i + 1, j - 1] + <long long> y[i + 1, j + 1]
            )
            gy = (
                - <long long> y[i - 1, j - 1] - 2 * <long long> y[i - 1, j]
                - <long long> y[i - 1, j + 1]
                + <long long> y[i + 1, j - 1] + 2 * <long long> y[i + 1, j]
                + <long long> y[i + 1, j + 1]
            )
            sq = gx * gx + gy * gy
            s2 += sq
            s1 += sqrt(<double> sq)
    return s1, s2, (h - 2) * (w - 2)
