import numpy as np
import pytest

from qrhull import _fallback, kernels


def planes(rng, n=10, shape=(24, 31)):
    return [
        (rng.integers(0, 256, shape, dtype=np.uint8),
         rng.integers(0, 256, shape, dtype=np.uint8))
        for _ in range(n)
    ]


def test_backend_reported():
    assert kernels.BACKEND in ("native", "fallback")


def test_sq_err_sum_matches_python_ints(rng):
    for a, b in planes(rng):
        expected = sum(
            (int(x) - int(y)) ** 2 for x, y in zip(a.ravel(), b.ravel())
        )
        assert kernels.sq_err_sum(a, b) == expected
        assert _fallback.sq_err_sum(a, b) == expected


def test_diff_moments_matches_python_ints(rng):
    for a, b in planes(rng, n=5):
        diffs = [int(x) - int(y) for x, y in zip(a.ravel(), b.ravel())]
        expected = (sum(diffs), sum(d * d for d in diffs))
        assert tuple(kernels.diff_moments(a, b)) == expected
        assert _fallback.diff_moments(a, b) == expected


@pytest.mark.skipif(kernels.BACKEND != "native", reason="extension not built")
def test_native_and_fallback_sobel_agree(rng):
    for a, _ in planes(rng, n=5):
        s1, s2, n = kernels.sobel_moments(a)
        t1, t2, m = _fallback.sobel_moments(a)
        assert (s2, n) == (t2, m)  # squared magnitudes are exact integers
        assert s1 == pytest.approx(t1, rel=1e-12)


def test_sobel_interior_count(rng):
    a = rng.integers(0, 256, (7, 9), dtype=np.uint8)
    assert kernels.sobel_moments(a)[2] == 5 * 7


def test_forced_fallback_env(tmp_path):
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from qrhull import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env={"QRHULL_NO_NATIVE": "1", "PATH": "/usr/bin"},
    )
    assert out.stdout.strip() == "fallback"
