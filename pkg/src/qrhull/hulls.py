"""Rate-quality curves and their upper convex hulls.

The "convex hull" of a rate-quality point cloud is the upper concave
envelope in the (log-bitrate, quality) plane: the Pareto-optimal operating
frontier across resolutions.  Log base is natural log by default.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from qrhull.errors import ValidationError

PSNR = "psnr"
VMAF = "vmaf"


@dataclass(frozen=True)
class HullPoint:
    """One point in the (log-bitrate, quality) plane with its provenance."""

    log_bitrate: float
    quality: float
    clip: Optional[str] = None
    resolution: Optional[tuple[int, int]] = None
    crf: Optional[int] = None

    @property
    def xy(self) -> tuple[float, float]:
        return (self.log_bitrate, self.quality)


@dataclass(frozen=True)
class QRCurve:
    """Quality-rate curve for one (clip, codec, resolution) stratum."""

    clip: str
    codec: str
    resolution: tuple[int, int]
    metric: str
    points: tuple[tuple[float, float], ...]  # (bitrate kb/s, quality), ascending
    crfs: tuple[Optional[int], ...] = ()


@dataclass(frozen=True)
class HullCurve:
    """Upper envelope of pooled QR points for one (clip, codec)."""

    codec: str
    clip: str
    metric: str
    vertices: tuple[HullPoint, ...]  # ascending log_bitrate
    source_count: int


def build_qr_curve(points: Sequence, metric: str) -> QRCurve:
    """Sorted, de-duplicated QR curve from EncodePoints of one stratum.

    Points sharing a bitrate collapse to the max-quality one.
    """
    if not points:
        raise ValidationError("cannot build a QR curve from zero points")
    strata = {(p.clip, p.codec, (p.width, p.height)) for p in points}
    if len(strata) > 1:
        raise ValidationError(f"mixed strata in one curve: {sorted(map(str, strata))}")
    clip, codec, resolution = next(iter(strata))

    quality_of = {PSNR: lambda p: p.psnr_420, VMAF: lambda p: p.vmaf}
    if metric not in quality_of:
        raise ValidationError(f"unknown metric {metric!r}; use {PSNR!r} or {VMAF!r}")
    get_q = quality_of[metric]

    best: dict[float, tuple[float, Optional[int]]] = {}
    for p in points:
        q = get_q(p)
        if q is None:
            raise ValidationError(f"point {p.clip}/crf{p.crf} lacks a {metric} value")
        if p.bitrate_kbps not in best or q > best[p.bitrate_kbps][0]:
            best[p.bitrate_kbps] = (q, p.crf)
    rates = sorted(best)
    return QRCurve(
        clip=clip,
        codec=codec,
        resolution=resolution,
        metric=metric,
        points=tuple((r, best[r][0]) for r in rates),
        crfs=tuple(best[r][1] for r in rates),
    )


def _cross(o: tuple[float, float], a: tuple[float, float], b: tuple[float, float]) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (b[0] - o[0]) * (a[1] - o[1])


def upper_envelope(points: Sequence[tuple[float, float]]) -> list[int]:
    """Indices of the upper-envelope vertices, by monotone chain.

    Collinear interior points are dropped (strict concavity).  For equal x,
    only the max-y point can be a vertex.
    """
    for x, y in points:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ValidationError(f"non-finite hull input ({x}, {y})")
    order = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
    # per x, keep only the topmost point
    dedup: list[int] = []
    for i in order:
        if dedup and points[dedup[-1]][0] == points[i][0]:
            dedup[-1] = i
        else:
            dedup.append(i)
    chain: list[int] = []
    for i in dedup:
        while len(chain) >= 2 and _cross(
            points[chain[-2]], points[chain[-1]], points[i]
        ) >= 0:
            chain.pop()
        chain.append(i)
    return chain


def upper_convex_hull(
    points: Sequence[HullPoint], codec: str = "", clip: str = "", metric: str = PSNR
) -> HullCurve:
    """Upper envelope of the convex hull over (log_bitrate, quality) points."""
    if not points:
        raise ValidationError("cannot take the hull of zero points")
    idx = upper_envelope([p.xy for p in points])
    return HullCurve(
        codec=codec,
        clip=clip,
        metric=metric,
        vertices=tuple(points[i] for i in idx),
        source_count=len(points),
    )


def pooled_hull(curves: Sequence[QRCurve], log_base: float = math.e) -> HullCurve:
    """Hull of the union of one (clip, codec)'s curves across resolutions."""
    if not curves:
        raise ValidationError("cannot pool zero curves")
    keys = {(c.clip, c.codec, c.metric) for c in curves}
    if len(keys) > 1:
        raise ValidationError(f"curves span multiple (clip, codec, metric): {sorted(keys)}")
    clip, codec, metric = next(iter(keys))
    pool: list[HullPoint] = []
    for c in curves:
        crfs = c.crfs if c.crfs else (None,) * len(c.points)
        for (bitrate, quality), crf in zip(c.points, crfs):
            if bitrate <= 0:
                raise ValidationError(f"non-positive bitrate {bitrate} in {clip}/{codec}")
            pool.append(
                HullPoint(
                    log_bitrate=math.log(bitrate) / math.log(log_base),
                    quality=quality,
                    clip=clip,
                    resolution=c.resolution,
                    crf=crf,
                )
            )
    return upper_convex_hull(pool, codec=codec, clip=clip, metric=metric)


def aggregate_codec_hull_points(hulls: Iterable[HullCurve]) -> list[HullPoint]:
    """Concatenated hull vertices across clips: the model-fitting input."""
    hulls = list(hulls)
    keys = {(h.codec, h.metric) for h in hulls}
    if len(keys) > 1:
        raise ValidationError(f"hulls span multiple (codec, metric): {sorted(keys)}")
    out: list[HullPoint] = []
    for h in hulls:
        out.extend(h.vertices)
    return out
