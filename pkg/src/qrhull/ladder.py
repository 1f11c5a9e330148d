"""CRF ladder planning and execution through FFmpeg.

Each job runs the chain downscale -> encode at CRF -> decode -> upscale
back to native resolution, then measures bitrate (FFprobe), PSNR (native)
and optionally VMAF.  Jobs are cached under a content-hashed key and the
ladder is resumable: completed keys are skipped on rerun.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import shutil
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from qrhull.errors import QrHullError, ToolError, ValidationError
from qrhull.metrics import sequence_psnr, vmaf_score
from qrhull.yuv import RawYuvReader, StreamInfo, Y4mReader, write_frames_y4m

H264 = "h264"
H265 = "h265"
VP9 = "vp9"

CODECS = (H264, H265, VP9)
CRF_RANGE = {H264: (0, 51), H265: (0, 51), VP9: (0, 63)}
ENCODER = {H264: "libx264", H265: "libx265", VP9: "libvpx-vp9"}

DEFAULT_RESOLUTIONS = ((960, 544), (1920, 1080), (3840, 2160))
DEFAULT_CRFS = tuple(range(5, 51, 5))

RESULTS_HEADER = [
    "clip", "codec", "width", "height", "crf",
    "bitrate_kbps", "psnr_420", "vmaf", "size_bytes", "duration_s",
]


@dataclass(frozen=True)
class ClipSpec:
    """One input clip: a .y4m path, or a raw .yuv path plus geometry."""

    path: str
    info: Optional[StreamInfo] = None

    @property
    def clip_id(self) -> str:
        return Path(self.path).stem


@dataclass
class LadderConfig:
    """Experiment manifest for one ladder run."""

    clips: list[ClipSpec]
    codecs: tuple[str, ...] = CODECS
    resolutions: tuple[tuple[int, int], ...] = DEFAULT_RESOLUTIONS
    crf_values: tuple[int, ...] = DEFAULT_CRFS
    scale_filter: str = "lanczos"
    workdir: str = "qrhull-work"
    ffmpeg_path: str = "ffmpeg"
    ffprobe_path: str = "ffprobe"
    parallel: int = 1
    compute_vmaf: bool = False
    vmaf_model_path: Optional[str] = None
    keep_intermediates: bool = False

    def validate(self) -> None:
        if not self.crf_values:
            raise ValidationError("crf_values must be non-empty")
        if list(self.crf_values) != sorted(set(self.crf_values)):
            raise ValidationError("crf_values must be strictly increasing")
        for codec in self.codecs:
            if codec not in CODECS:
                raise ValidationError(f"unknown codec {codec!r}; choose from {CODECS}")
            lo, hi = CRF_RANGE[codec]
            bad = [c for c in self.crf_values if not lo <= c <= hi]
            if bad:
                raise ValidationError(
                    f"CRF {bad} outside {codec} legal range [{lo}, {hi}]"
                )
        if self.scale_filter not in ("lanczos", "bicubic"):
            raise ValidationError(f"scale_filter must be lanczos or bicubic")
        for w, h in self.resolutions:
            if w % 2 or h % 2:
                raise ValidationError(f"resolution {w}x{h} has odd dimensions")
        if self.parallel < 1:
            raise ValidationError("parallel job limit must be >= 1")

    @classmethod
    def from_json(cls, text: str) -> "LadderConfig":
        doc = json.loads(text)
        clips = []
        for entry in doc.pop("clips", []):
            if isinstance(entry, str):
                clips.append(ClipSpec(path=entry))
            else:
                info = entry.get("info")
                clips.append(
                    ClipSpec(
                        path=entry["path"],
                        info=StreamInfo(
                            width=info["width"],
                            height=info["height"],
                            frame_rate=Fraction(info.get("frame_rate", "25/1")),
                        )
                        if info
                        else None,
                    )
                )
        for tuple_key in ("codecs", "crf_values"):
            if tuple_key in doc:
                doc[tuple_key] = tuple(doc[tuple_key])
        if "resolutions" in doc:
            doc["resolutions"] = tuple(tuple(r) for r in doc["resolutions"])
        cfg = cls(clips=clips, **doc)
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class EncodeJob:
    """One (clip, codec, resolution, CRF) cell of the ladder."""

    clip: ClipSpec
    codec: str
    width: int
    height: int
    crf: int
    scale_filter: str
    tool_tag: str = ""

    @property
    def key(self) -> str:
        canonical = "|".join([
            self.clip.clip_id, self.codec, f"{self.width}x{self.height}",
            f"crf{self.crf}", self.scale_filter, self.tool_tag,
        ])
        return hashlib.sha256(canonical.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class EncodePoint:
    """One ladder measurement."""

    clip: str
    codec: str
    width: int
    height: int
    crf: int
    bitrate_kbps: float
    psnr_420: float
    vmaf: Optional[float]
    size_bytes: int
    duration_s: float

    def to_row(self) -> list[str]:
        return [
            self.clip, self.codec, str(self.width), str(self.height), str(self.crf),
            repr(self.bitrate_kbps), repr(self.psnr_420),
            "" if self.vmaf is None else repr(self.vmaf),
            str(self.size_bytes), repr(self.duration_s),
        ]

    @classmethod
    def from_row(cls, row: Sequence[str]) -> "EncodePoint":
        return cls(
            clip=row[0], codec=row[1], width=int(row[2]), height=int(row[3]),
            crf=int(row[4]), bitrate_kbps=float(row[5]), psnr_420=float(row[6]),
            vmaf=float(row[7]) if row[7] else None,
            size_bytes=int(row[8]), duration_s=float(row[9]),
        )


def plan_ladder(config: LadderConfig, tool_tag: str = "") -> list[EncodeJob]:
    """One job per (clip x codec x resolution x CRF), deterministic order."""
    config.validate()
    jobs = []
    for clip in config.clips:
        for codec in sorted(config.codecs):
            for width, height in sorted(
                config.resolutions, key=lambda r: -(r[0] * r[1])
            ):
                for crf in config.crf_values:
                    jobs.append(EncodeJob(
                        clip=clip, codec=codec, width=width, height=height,
                        crf=crf, scale_filter=config.scale_filter, tool_tag=tool_tag,
                    ))
    return jobs


def _run_tool(cmd: list[str]) -> subprocess.CompletedProcess:
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise ToolError(
            f"{cmd[0]} exited {proc.returncode}: {' '.join(cmd)}\n{proc.stderr[-2000:]}"
        )
    return proc


def tool_version(path: str) -> str:
    """First line of `tool -version`, or 'unavailable'."""
    if shutil.which(path) is None:
        return "unavailable"
    try:
        out = subprocess.run(
            [path, "-version"], capture_output=True, text=True, timeout=30
        ).stdout
        return out.splitlines()[0] if out else "unknown"
    except (OSError, subprocess.TimeoutExpired):
        return "unknown"


def probe_bitrate(
    path: str, ffprobe_path: str = "ffprobe"
) -> tuple[float, float, int]:
    """(bitrate kb/s, duration s, size bytes) from FFprobe, with fallback.

    Primary source is the probe report's bit_rate; when the container omits
    it, bitrate falls back to size * 8 / duration / 1000.
    """
    proc = _run_tool([
        ffprobe_path, "-v", "error", "-print_format", "json",
        "-show_format", "-show_streams", path,
    ])
    try:
        doc = json.loads(proc.stdout)
        fmt = doc["format"]
    except (json.JSONDecodeError, KeyError) as exc:
        raise QrHullError(
            f"unparseable probe output for {path}: {proc.stdout[:500]!r}"
        ) from exc
    size = int(fmt.get("size") or os.path.getsize(path))
    duration = float(fmt.get("duration", 0) or 0)
    if duration <= 0:
        for stream in doc.get("streams", []):
            if stream.get("duration"):
                duration = float(stream["duration"])
                break
    if duration <= 0:
        raise QrHullError(f"probe reports no duration for {path}")
    bit_rate = fmt.get("bit_rate")
    if bit_rate is None:
        for stream in doc.get("streams", []):
            if stream.get("codec_type") == "video" and stream.get("bit_rate"):
                bit_rate = stream["bit_rate"]
                break
    if bit_rate is not None:
        kbps = float(bit_rate) / 1000.0
    else:
        kbps = size * 8.0 / duration / 1000.0
    return kbps, duration, size


def rule_of_thumb_bitrate_kbps(size_bytes: int, duration_s: float) -> float:
    """Size-over-minutes cross-check: size in GB / (minutes * 0.0075), Mbps.

    Algebraically equal to size * 8 / duration with decimal units; exposed
    only as a sanity check against the probe-reported value.
    """
    minutes = duration_s / 60.0
    mbps = (size_bytes / 1e9) / (minutes * 0.0075)
    return mbps * 1000.0


def _encode_args(codec: str, crf: int) -> list[str]:
    if codec == H264:
        return ["-c:v", "libx264", "-crf", str(crf)]
    if codec == H265:
        return ["-c:v", "libx265", "-crf", str(crf), "-x265-params", "log-level=error"]
    if codec == VP9:
        return ["-c:v", "libvpx-vp9", "-crf", str(crf), "-b:v", "0"]
    raise ValidationError(f"unknown codec {codec!r}")


def _source_as_y4m(clip: ClipSpec, workdir: Path) -> tuple[Path, StreamInfo]:
    """Raw .yuv sources are rewrapped as Y4M once per run for FFmpeg input."""
    if clip.path.endswith(".y4m"):
        with open(clip.path, "rb") as fh:
            info = Y4mReader(fh).info
        return Path(clip.path), info
    if clip.info is None:
        raise ValidationError(f"raw clip {clip.path} needs explicit geometry")
    out = workdir / f"{clip.clip_id}.y4m"
    if not out.exists():
        with open(clip.path, "rb") as src, open(out, "wb") as dst:
            write_frames_y4m(dst, clip.info, RawYuvReader(src, clip.info))
    return out, clip.info


def run_job(job: EncodeJob, config: LadderConfig) -> EncodePoint:
    """Execute one job's scale/encode/decode/rescale chain and measure it."""
    workdir = Path(config.workdir)
    jobdir = workdir / job.key
    cache = jobdir / "point.json"
    if cache.exists():
        return EncodePoint(**json.loads(cache.read_text()))
    jobdir.mkdir(parents=True, exist_ok=True)

    source, native = _source_as_y4m(job.clip, workdir)
    at_native = (job.width, job.height) == (native.width, native.height)
    ffmpeg = config.ffmpeg_path

    if at_native:
        encode_input = source
    else:
        encode_input = jobdir / "scaled.y4m"
        _run_tool([
            ffmpeg, "-hide_banner", "-y", "-i", str(source),
            "-vf", f"scale={job.width}:{job.height}:flags={job.scale_filter}",
            "-pix_fmt", "yuv420p", str(encode_input),
        ])

    encoded = jobdir / "enc.mp4"
    _run_tool([
        ffmpeg, "-hide_banner", "-y", "-i", str(encode_input),
        *_encode_args(job.codec, job.crf), str(encoded),
    ])

    decoded = jobdir / "dec.y4m"
    _run_tool([
        ffmpeg, "-hide_banner", "-y", "-i", str(encoded),
        "-pix_fmt", "yuv420p", str(decoded),
    ])

    if at_native:
        restored = decoded
    else:
        restored = jobdir / "up.y4m"
        _run_tool([
            ffmpeg, "-hide_banner", "-y", "-i", str(decoded),
            "-vf", f"scale={native.width}:{native.height}:flags={job.scale_filter}",
            "-pix_fmt", "yuv420p", str(restored),
        ])

    kbps, duration, size = probe_bitrate(str(encoded), config.ffprobe_path)

    with open(source, "rb") as ref_fh, open(restored, "rb") as dist_fh:
        ref = Y4mReader(ref_fh)
        dist = Y4mReader(dist_fh)
        ref_frames = list(ref)
        dist_frames = list(dist)
    if len(ref_frames) != len(dist_frames):
        raise QrHullError(
            f"pipeline integrity: decoded frame count {len(dist_frames)} "
            f"differs from source {len(ref_frames)} for job {job.key}"
        )
    quality = sequence_psnr(ref_frames, dist_frames)

    vmaf = None
    if config.compute_vmaf:
        vmaf = vmaf_score(
            str(source), str(restored), ffmpeg_path=ffmpeg,
            model_path=config.vmaf_model_path,
            log_path=str(jobdir / "vmaf.json"),
        )

    point = EncodePoint(
        clip=job.clip.clip_id, codec=job.codec, width=job.width, height=job.height,
        crf=job.crf, bitrate_kbps=kbps, psnr_420=quality.mean_psnr_420,
        vmaf=vmaf, size_bytes=size, duration_s=duration,
    )
    cache.write_text(json.dumps(point.__dict__, indent=2))
    if not config.keep_intermediates:
        for name in ("scaled.y4m", "dec.y4m", "up.y4m"):
            (jobdir / name).unlink(missing_ok=True)
    return point


def check_monotone_trends(points: Sequence[EncodePoint]) -> list[str]:
    """Per (clip, codec, resolution): bitrate strictly down, quality
    non-increasing as CRF rises.  Violations are flagged, not fatal."""
    groups: dict[tuple, list[EncodePoint]] = {}
    for p in points:
        groups.setdefault((p.clip, p.codec, p.width, p.height), []).append(p)
    flags = []
    for key, pts in sorted(groups.items()):
        pts = sorted(pts, key=lambda p: p.crf)
        for a, b in zip(pts, pts[1:]):
            tag = f"{key[0]}/{key[1]}/{key[2]}x{key[3]}"
            if b.bitrate_kbps >= a.bitrate_kbps:
                flags.append(
                    f"{tag}: bitrate not decreasing crf {a.crf}->{b.crf} "
                    f"({a.bitrate_kbps} -> {b.bitrate_kbps})"
                )
            if b.psnr_420 > a.psnr_420:
                flags.append(f"{tag}: PSNR increased crf {a.crf}->{b.crf}")
            if a.vmaf is not None and b.vmaf is not None and b.vmaf > a.vmaf:
                flags.append(f"{tag}: VMAF increased crf {a.crf}->{b.crf}")
    return flags


def write_results_csv(points: Sequence[EncodePoint], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for p in points:
            writer.writerow(p.to_row())


def read_results_csv(path: str) -> list[EncodePoint]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != RESULTS_HEADER:
            raise ValidationError(f"unexpected results header: {header}")
        return [EncodePoint.from_row(row) for row in reader]


def run_ladder(
    config: LadderConfig, results_csv: Optional[str] = None
) -> tuple[list[EncodePoint], dict]:
    """Run all planned jobs (resumable), returning points plus a manifest.

    Raises ToolError listing failed job keys if any job failed; completed
    points are still persisted, so a rerun resumes where it left off.
    """
    config.validate()
    Path(config.workdir).mkdir(parents=True, exist_ok=True)
    versions = {
        "ffmpeg": tool_version(config.ffmpeg_path),
        "ffprobe": tool_version(config.ffprobe_path),
    }
    jobs = plan_ladder(config, tool_tag=versions["ffmpeg"])
    started = time.strftime("%Y-%m-%dT%H:%M:%S")

    results: dict[str, EncodePoint] = {}
    failures: dict[str, str] = {}

    def _one(job: EncodeJob):
        try:
            results[job.key] = run_job(job, config)
        except (QrHullError, OSError) as exc:
            failures[job.key] = str(exc)

    with ThreadPoolExecutor(max_workers=config.parallel) as pool:
        list(pool.map(_one, jobs))

    # plan order, independent of completion schedule
    points = [results[j.key] for j in jobs if j.key in results]
    manifest = {
        "started": started,
        "finished": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "tool_versions": versions,
        "encoder_args": {c: " ".join(_encode_args(c, 0)[:-1]) for c in config.codecs},
        "jobs": {
            j.key: ("failed: " + failures[j.key]) if j.key in failures else "ok"
            for j in jobs
        },
        "config": {
            "clips": [c.path for c in config.clips],
            "codecs": list(config.codecs),
            "resolutions": [list(r) for r in config.resolutions],
            "crf_values": list(config.crf_values),
            "scale_filter": config.scale_filter,
            "parallel": config.parallel,
            "compute_vmaf": config.compute_vmaf,
            "vmaf_model_path": config.vmaf_model_path,
        },
        "trend_flags": check_monotone_trends(points),
    }
    manifest_path = Path(config.workdir) / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2))
    if results_csv:
        write_results_csv(points, results_csv)
    if failures:
        raise ToolError(
            f"{len(failures)} of {len(jobs)} jobs failed: {sorted(failures)}"
        )
    return points, manifest
