"""Kernel dispatch: compiled extension when built, numpy fallback otherwise.

``QRHULL_NO_NATIVE=1`` forces the fallback (used by tests and benchmarks).
"""

from __future__ import annotations

import os

if os.environ.get("QRHULL_NO_NATIVE") == "1":
    _impl = None
else:
    try:
        from qrhull import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None

if _impl is not None:
    sq_err_sum = _impl.sq_err_sum
    diff_moments = _impl.diff_moments
    sobel_moments = _impl.sobel_moments
    BACKEND = "native"
else:
    from qrhull._fallback import diff_moments, sobel_moments, sq_err_sum  # noqa: F401

    BACKEND = "fallback"
