"""Full-reference quality measurement: native MSE/PSNR plus a VMAF adapter.

MSE accumulates exactly in integer arithmetic, so per-frame and sequence
PSNR are bitwise identical regardless of worker-thread count or kernel
backend.  VMAF is obtained by spawning FFmpeg's libvmaf filter and parsing
its JSON log; the model itself is never reimplemented here.
"""

from __future__ import annotations

import json
import math
import shutil
import subprocess
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from qrhull import kernels
from qrhull.errors import GeometryError, QrHullError, ToolError, ValidationError
from qrhull.yuv import FrameYuv420

# Sentinel PSNR for identical planes (MSE = 0); keeps sequence means finite.
PSNR_CLAMP_DB = 100.0


@dataclass(frozen=True)
class FramePsnr:
    """Per-frame PSNR/MSE for one reference/distorted pair."""

    frame_index: int
    mse_y: float
    mse_u: float
    mse_v: float
    psnr_y: float
    psnr_u: float
    psnr_v: float
    psnr_420: float
    clamped: bool = False


@dataclass
class SequenceQuality:
    """Sequence-level quality summary.

    ``mean_psnr_420`` (arithmetic mean of per-frame combined PSNR) is the
    canonical figure; ``pooled_mse_psnr_420`` (PSNR of the pooled MSE) is
    exported alongside for comparison with tools that pool first.
    """

    mean_psnr_420: float
    pooled_mse_psnr_420: float
    per_frame: list[FramePsnr] = field(default_factory=list)
    vmaf: Optional[float] = None
    frame_count: int = 0


def mse_plane(reference: np.ndarray, distorted: np.ndarray) -> float:
    """Mean squared error between two planes of identical geometry."""
    if reference.shape != distorted.shape:
        raise GeometryError(
            f"plane shapes differ: {reference.shape} vs {distorted.shape}"
        )
    return kernels.sq_err_sum(reference, distorted) / reference.size


def psnr_from_mse(mse: float, bit_depth: int = 8) -> float:
    """PSNR in dB from MSE; MSE = 0 maps to the 100 dB clamp."""
    if mse < 0:
        raise ValidationError(f"negative MSE {mse}")
    if mse == 0:
        return PSNR_CLAMP_DB
    peak = (1 << bit_depth) - 1
    return 10.0 * math.log10(peak * peak / mse)


def psnr_420_combine(psnr_y: float, psnr_u: float, psnr_v: float) -> float:
    """4:2:0 sample-count weighting: luma carries 4 of every 6 samples."""
    for v in (psnr_y, psnr_u, psnr_v):
        if not math.isfinite(v):
            raise ValidationError(f"non-finite PSNR input {v}")
    return (4.0 * psnr_y + psnr_u + psnr_v) / 6.0


def frame_psnr(
    reference: FrameYuv420, distorted: FrameYuv420, bit_depth: int = 8
) -> FramePsnr:
    mses = [
        mse_plane(getattr(reference, p), getattr(distorted, p))
        for p in ("y_plane", "u_plane", "v_plane")
    ]
    psnrs = [psnr_from_mse(m, bit_depth) for m in mses]
    return FramePsnr(
        frame_index=reference.index,
        mse_y=mses[0],
        mse_u=mses[1],
        mse_v=mses[2],
        psnr_y=psnrs[0],
        psnr_u=psnrs[1],
        psnr_v=psnrs[2],
        psnr_420=psnr_420_combine(*psnrs),
        clamped=any(m == 0 for m in mses),
    )


def sequence_psnr(
    reference: Iterable[FrameYuv420],
    distorted: Iterable[FrameYuv420],
    bit_depth: int = 8,
    workers: int = 1,
) -> SequenceQuality:
    """Per-frame and sequence PSNR between two equal-length streams."""
    ref_frames = list(reference)
    dist_frames = list(distorted)
    if len(ref_frames) != len(dist_frames):
        raise ValidationError(
            f"frame-count mismatch: reference has {len(ref_frames)}, "
            f"distorted has {len(dist_frames)}"
        )
    if not ref_frames:
        raise ValidationError("empty streams")

    pairs = list(zip(ref_frames, dist_frames))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_frame = list(pool.map(lambda p: frame_psnr(*p, bit_depth), pairs))
    else:
        per_frame = [frame_psnr(r, d, bit_depth) for r, d in pairs]

    n = len(per_frame)
    mean_420 = math.fsum(f.psnr_420 for f in per_frame) / n
    pooled = psnr_420_combine(
        psnr_from_mse(math.fsum(f.mse_y for f in per_frame) / n, bit_depth),
        psnr_from_mse(math.fsum(f.mse_u for f in per_frame) / n, bit_depth),
        psnr_from_mse(math.fsum(f.mse_v for f in per_frame) / n, bit_depth),
    )
    return SequenceQuality(
        mean_psnr_420=mean_420,
        pooled_mse_psnr_420=pooled,
        per_frame=per_frame,
        frame_count=n,
    )


def parse_vmaf_log(log_text: str) -> float:
    """Pooled mean VMAF from a libvmaf JSON log."""
    try:
        doc = json.loads(log_text)
    except json.JSONDecodeError as exc:
        raise QrHullError(f"VMAF log is not valid JSON: {exc}") from exc
    pooled = doc.get("pooled_metrics", {}).get("vmaf")
    if pooled is not None and "mean" in pooled:
        return float(pooled["mean"])
    frames = doc.get("frames")
    if frames:
        scores = [f["metrics"]["vmaf"] for f in frames if "vmaf" in f.get("metrics", {})]
        if scores:
            return float(np.mean(scores))
    raise QrHullError("VMAF log contains no pooled vmaf mean and no frame scores")


def vmaf_score(
    reference_path: str,
    distorted_path: str,
    ffmpeg_path: str = "ffmpeg",
    model_path: Optional[str] = None,
    log_path: Optional[str] = None,
) -> float:
    """Run FFmpeg's libvmaf filter and return the pooled mean score."""
    if shutil.which(ffmpeg_path) is None:
        raise ToolError(
            f"{ffmpeg_path!r} not found; install FFmpeg with libvmaf support "
            f"or set the transcoder path in the config"
        )
    log_file = log_path or (distorted_path + ".vmaf.json")
    filt = f"libvmaf=log_fmt=json:log_path={log_file}"
    if model_path:
        filt += f":model=path={model_path}"
    cmd = [
        ffmpeg_path, "-hide_banner", "-y",
        "-i", distorted_path, "-i", reference_path,
        "-lavfi", filt, "-f", "null", "-",
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise ToolError(f"VMAF run failed ({proc.returncode}): {proc.stderr[-2000:]}")
    with open(log_file) as fh:
        score = parse_vmaf_log(fh.read())
    if not 0.0 <= score <= 100.0:
        raise QrHullError(f"VMAF score {score} outside [0, 100]")
    return score
