"""Deterministic SVG emission for QR curves, hull overlays, and fits.

SVG is built by plain string assembly: dependency-free, diffable, and
byte-identical for identical input.  Codec maps to hue, resolution to dash
pattern.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

from qrhull.errors import ValidationError
from qrhull.fitting import PolyModel, evaluate_model
from qrhull.hulls import HullCurve, QRCurve

WIDTH, HEIGHT = 800, 500
MARGIN = {"left": 70, "right": 20, "top": 30, "bottom": 50}

CODEC_COLOR = {
    "h264": "#1f77b4",
    "h265": "#d62728",
    "vp9": "#2ca02c",
}
_DASHES = ["none", "8,4", "3,3"]
_FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def _codec_color(codec: str, seen: list[str]) -> str:
    if codec in CODEC_COLOR:
        return CODEC_COLOR[codec]
    if codec not in seen:
        seen.append(codec)
    return _FALLBACK_COLORS[seen.index(codec) % len(_FALLBACK_COLORS)]


class _Axes:
    """Maps (ln bitrate, quality) data space to SVG pixel space."""

    def __init__(self, x_range: tuple[float, float], y_range: tuple[float, float]):
        pad_x = (x_range[1] - x_range[0]) * 0.04 or 0.5
        pad_y = (y_range[1] - y_range[0]) * 0.04 or 0.5
        self.x0, self.x1 = x_range[0] - pad_x, x_range[1] + pad_x
        self.y0, self.y1 = y_range[0] - pad_y, y_range[1] + pad_y
        self.px0 = MARGIN["left"]
        self.px1 = WIDTH - MARGIN["right"]
        self.py0 = HEIGHT - MARGIN["bottom"]
        self.py1 = MARGIN["top"]

    def x(self, v: float) -> float:
        return self.px0 + (v - self.x0) / (self.x1 - self.x0) * (self.px1 - self.px0)

    def y(self, v: float) -> float:
        return self.py0 + (v - self.y0) / (self.y1 - self.y0) * (self.py1 - self.py0)

    def frame_svg(self, x_label: str, y_label: str) -> list[str]:
        parts = [
            f'<rect x="{self.px0}" y="{self.py1}" width="{self.px1 - self.px0}" '
            f'height="{self.py0 - self.py1}" fill="none" stroke="#333"/>'
        ]
        for i in range(6):
            xv = self.x0 + (self.x1 - self.x0) * i / 5
            yv = self.y0 + (self.y1 - self.y0) * i / 5
            px, py = self.x(xv), self.y(yv)
            parts.append(
                f'<line x1="{_fmt(px)}" y1="{self.py0}" x2="{_fmt(px)}" '
                f'y2="{self.py0 + 5}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{_fmt(px)}" y="{self.py0 + 20}" font-size="11" '
                f'text-anchor="middle">{_fmt(math.exp(xv))}</text>'
            )
            parts.append(
                f'<line x1="{self.px0 - 5}" y1="{_fmt(py)}" x2="{self.px0}" '
                f'y2="{_fmt(py)}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{self.px0 - 8}" y="{_fmt(py + 4)}" font-size="11" '
                f'text-anchor="end">{_fmt(yv)}</text>'
            )
        parts.append(
            f'<text x="{(self.px0 + self.px1) // 2}" y="{HEIGHT - 10}" '
            f'font-size="13" text-anchor="middle">{x_label}</text>'
        )
        parts.append(
            f'<text x="18" y="{(self.py0 + self.py1) // 2}" font-size="13" '
            f'text-anchor="middle" transform="rotate(-90 18 '
            f'{(self.py0 + self.py1) // 2})">{y_label}</text>'
        )
        return parts


def _svg_doc(body: list[str]) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">\n'
        + "\n".join(body)
        + "\n</svg>\n"
    )


def emit_qr_plot(
    curves: Sequence[QRCurve],
    hull: Optional[HullCurve] = None,
    metric: str = "psnr",
    output_path: Optional[str] = None,
) -> str:
    """QR curves on a log-bitrate axis with the hull overlaid."""
    if not curves:
        raise ValidationError("no curves to plot")
    xs, ys = [], []
    for c in curves:
        for bitrate, quality in c.points:
            xs.append(math.log(bitrate))
            ys.append(quality)
    if hull:
        xs.extend(v.log_bitrate for v in hull.vertices)
        ys.extend(v.quality for v in hull.vertices)
    axes = _Axes((min(xs), max(xs)), (min(ys), max(ys)))
    body = axes.frame_svg("bitrate (kb/s, log axis)", metric.upper())

    resolutions = sorted({c.resolution for c in curves}, key=lambda r: -(r[0] * r[1]))
    extra_codecs: list[str] = []
    for c in sorted(curves, key=lambda c: (c.codec, -(c.resolution[0] * c.resolution[1]))):
        color = _codec_color(c.codec, extra_codecs)
        dash = _DASHES[resolutions.index(c.resolution) % len(_DASHES)]
        pts = [(axes.x(math.log(b)), axes.y(q)) for b, q in c.points]
        if len(pts) == 1:
            body.append(
                f'<circle cx="{_fmt(pts[0][0])}" cy="{_fmt(pts[0][1])}" r="4" '
                f'fill="{color}"/>'
            )
        else:
            coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
            dash_attr = "" if dash == "none" else f' stroke-dasharray="{dash}"'
            body.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" '
                f'stroke-width="1.5"{dash_attr}/>'
            )
    if hull and len(hull.vertices) > 1:
        coords = " ".join(
            f"{_fmt(axes.x(v.log_bitrate))},{_fmt(axes.y(v.quality))}"
            for v in hull.vertices
        )
        body.append(
            f'<polyline points="{coords}" fill="none" stroke="#000" stroke-width="3" '
            f'opacity="0.6"/>'
        )
    # legend: codec x resolution
    ly = MARGIN["top"] + 12
    for codec in sorted({c.codec for c in curves}):
        color = _codec_color(codec, extra_codecs)
        for res in resolutions:
            if not any(c.codec == codec and c.resolution == res for c in curves):
                continue
            dash = _DASHES[resolutions.index(res) % len(_DASHES)]
            dash_attr = "" if dash == "none" else f' stroke-dasharray="{dash}"'
            lx = WIDTH - MARGIN["right"] - 170
            body.append(
                f'<line x1="{lx}" y1="{ly}" x2="{lx + 30}" y2="{ly}" '
                f'stroke="{color}" stroke-width="2"{dash_attr}/>'
            )
            body.append(
                f'<text x="{lx + 36}" y="{ly + 4}" font-size="11">'
                f"{codec} {res[0]}x{res[1]}</text>"
            )
            ly += 16
    doc = _svg_doc(body)
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(doc)
    return doc


def emit_fit_plot(
    points: Sequence,
    model: PolyModel,
    output_path: Optional[str] = None,
    samples: int = 200,
) -> str:
    """Hull-point scatter plus the fitted curve, RMSE/R^2 annotated."""
    if not points:
        raise ValidationError("no points to plot")
    if getattr(points[0], "quality", None) is None:
        raise ValidationError("expected hull points with quality values")
    xs = [p.log_bitrate for p in points]
    ys = [p.quality for p in points]
    lo, hi = min(xs), max(xs)
    grid = [lo + (hi - lo) * i / (samples - 1) for i in range(samples)]
    fit_y = [evaluate_model(model, math.exp(x)) for x in grid]
    axes = _Axes((lo, hi), (min(ys + fit_y), max(ys + fit_y)))
    body = axes.frame_svg("bitrate (kb/s, log axis)", model.metric.upper())
    for x, y in zip(xs, ys):
        body.append(
            f'<circle cx="{_fmt(axes.x(x))}" cy="{_fmt(axes.y(y))}" r="3" '
            f'fill="none" stroke="#1f77b4"/>'
        )
    coords = " ".join(
        f"{_fmt(axes.x(x))},{_fmt(axes.y(y))}" for x, y in zip(grid, fit_y)
    )
    body.append(
        f'<polyline points="{coords}" fill="none" stroke="#d62728" stroke-width="2"/>'
    )
    if model.rmse is not None and model.r_squared is not None:
        body.append(
            f'<text x="{MARGIN["left"] + 10}" y="{MARGIN["top"] + 16}" font-size="12">'
            f"{model.codec} degree {model.degree}: RMSE {model.rmse:.4g}, "
            f"R&#178; {model.r_squared:.4g}</text>"
        )
    doc = _svg_doc(body)
    if output_path:
        with open(output_path, "w") as fh:
            fh.write(doc)
    return doc
