"""Spatial (SI) and temporal (TI) content descriptors.

TI is the mean over frames of the population standard deviation of the
signed difference between adjacent luma frames.  SI is the mean over frames
of the population standard deviation of the Sobel gradient magnitude,
computed on the frame interior (the 1-pixel border is excluded).  Both use
population (divide-by-n) standard deviations and operate on the Y plane
only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from qrhull import kernels
from qrhull.errors import GeometryError, ValidationError
from qrhull.yuv import FrameYuv420


@dataclass(frozen=True)
class ContentFeatures:
    """SI/TI summary for one sequence."""

    si: float
    ti: float
    per_frame_si: tuple[float, ...] = field(default_factory=tuple)
    per_frame_ti: tuple[float, ...] = field(default_factory=tuple)

    @property
    def frame_count(self) -> int:
        return len(self.per_frame_si)


def _population_std(s1: float, s2: float, n: int) -> float:
    # var = E[x^2] - E[x]^2; guard against tiny negative from rounding
    var = (n * s2 - s1 * s1) / (n * n)
    return math.sqrt(max(var, 0.0))


def _luma_planes(frames: Iterable[FrameYuv420 | np.ndarray]) -> list[np.ndarray]:
    planes = []
    for f in frames:
        plane = f.y_plane if isinstance(f, FrameYuv420) else np.asarray(f)
        if plane.dtype != np.uint8:
            plane = plane.astype(np.uint8)
        planes.append(plane)
    shapes = {p.shape for p in planes}
    if len(shapes) > 1:
        raise GeometryError(f"inconsistent frame geometry: {sorted(shapes)}")
    return planes


def temporal_information(
    frames: Sequence[FrameYuv420 | np.ndarray],
) -> tuple[list[float], float]:
    """Per-frame TI (n >= 1) and their mean."""
    planes = _luma_planes(frames)
    if len(planes) < 2:
        raise ValidationError("temporal information needs at least 2 frames")
    per_frame = []
    for prev, cur in zip(planes, planes[1:]):
        s1, s2 = kernels.diff_moments(cur, prev)
        per_frame.append(_population_std(float(s1), float(s2), cur.size))
    return per_frame, math.fsum(per_frame) / len(per_frame)


def spatial_information(
    frames: Sequence[FrameYuv420 | np.ndarray],
) -> tuple[list[float], float]:
    """Per-frame SI and their mean."""
    planes = _luma_planes(frames)
    if not planes:
        raise ValidationError("spatial information needs at least 1 frame")
    if planes[0].shape[0] < 3 or planes[0].shape[1] < 3:
        raise GeometryError(
            f"frames must be at least 3x3 for the Sobel interior, "
            f"got {planes[0].shape[1]}x{planes[0].shape[0]}"
        )
    per_frame = []
    for plane in planes:
        s1, s2, n = kernels.sobel_moments(plane)
        per_frame.append(_population_std(s1, float(s2), n))
    return per_frame, math.fsum(per_frame) / len(per_frame)


def content_features(frames: Sequence[FrameYuv420 | np.ndarray]) -> ContentFeatures:
    per_si, si = spatial_information(frames)
    per_ti, ti = temporal_information(frames)
    return ContentFeatures(
        si=si, ti=ti, per_frame_si=tuple(per_si), per_frame_ti=tuple(per_ti)
    )
