"""Numpy implementations of the pixel-statistics kernels.

Used when the compiled extension is unavailable.  Integer accumulators are
exact (Python ints), so MSE and frame-difference results are identical to
the compiled path; Sobel magnitude sums may differ in the last few ulps
because summation order differs.
"""

from __future__ import annotations

import numpy as np

_SOBEL_X = np.array([[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]], dtype=np.int64)
_SOBEL_Y = _SOBEL_X.T


def sq_err_sum(a: np.ndarray, b: np.ndarray) -> int:
    d = a.astype(np.int64) - b.astype(np.int64)
    return int(np.sum(d * d, dtype=np.int64))


def diff_moments(a: np.ndarray, b: np.ndarray) -> tuple[int, int]:
    d = a.astype(np.int64) - b.astype(np.int64)
    return int(d.sum(dtype=np.int64)), int(np.sum(d * d, dtype=np.int64))


def sobel_moments(y: np.ndarray) -> tuple[float, int, int]:
    p = y.astype(np.int64)
    gx = np.zeros((y.shape[0] - 2, y.shape[1] - 2), dtype=np.int64)
    gy = np.zeros_like(gx)
    for di in range(3):
        for dj in range(3):
            window = p[di : di + gx.shape[0], dj : dj + gx.shape[1]]
            gx += _SOBEL_X[di, dj] * window
            gy += _SOBEL_Y[di, dj] * window
    sq = gx * gx + gy * gy
    s1 = float(np.sqrt(sq.astype(np.float64)).sum())
    return s1, int(sq.sum(dtype=np.int64)), sq.size
