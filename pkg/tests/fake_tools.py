"""Stand-in ffmpeg/ffprobe used by orchestrator tests.

The fake "mp4" is a JSON header line (codec, crf, geometry, bit_rate)
followed by a quantized Y4M payload.  Quantization step grows with CRF, so
PSNR falls and the reported bitrate (1e6 / (crf + 1)) strictly decreases,
mimicking a real encoder's trend.  Every invocation is appended to the file
named by FAKE_TOOL_LOG, which lets tests assert cache hits.
"""

from __future__ import annotations

import json
import os
import sys

import numpy as np

from qrhull.yuv import FrameYuv420, StreamInfo, Y4mReader, write_frames_y4m


def _log(argv):
    path = os.environ.get("FAKE_TOOL_LOG")
    if path:
        with open(path, "a") as fh:
            fh.write(" ".join(argv) + "\n")


def _read_y4m(path):
    with open(path, "rb") as fh:
        reader = Y4mReader(fh)
        return reader.info, list(reader)


def _scale_plane(plane, w, h):
    src_h, src_w = plane.shape
    rows = (np.arange(h) * src_h // h).clip(0, src_h - 1)
    cols = (np.arange(w) * src_w // w).clip(0, src_w - 1)
    return plane[np.ix_(rows, cols)]


def _scale(frames, info, w, h):
    out = []
    for f in frames:
        out.append(FrameYuv420(
            y_plane=_scale_plane(f.y_plane, w, h),
            u_plane=_scale_plane(f.u_plane, w // 2, h // 2),
            v_plane=_scale_plane(f.v_plane, w // 2, h // 2),
            index=f.index,
        ))
    return out, StreamInfo(width=w, height=h, frame_rate=info.frame_rate)


def _quantize(frames, crf):
    step = 1 + crf // 3
    out = []
    for f in frames:
        planes = {}
        for name in ("y_plane", "u_plane", "v_plane"):
            p = getattr(f, name).astype(np.int32)
            planes[name] = np.clip((p // step) * step + step // 2, 0, 255).astype(np.uint8)
        out.append(FrameYuv420(index=f.index, **planes))
    return out


def ffmpeg_main(argv) -> int:
    _log(["ffmpeg"] + argv)
    if argv == ["-version"]:
        print("ffmpeg version 0.0-fake")
        return 0
    args = dict()
    inputs = []
    i = 0
    vf = crf = codec = None
    while i < len(argv):
        if argv[i] == "-i":
            inputs.append(argv[i + 1]); i += 2
        elif argv[i] == "-vf":
            vf = argv[i + 1]; i += 2
        elif argv[i] == "-crf":
            crf = int(argv[i + 1]); i += 2
        elif argv[i] == "-c:v":
            codec = argv[i + 1]; i += 2
        elif argv[i] in ("-pix_fmt", "-x265-params", "-b:v", "-lavfi", "-f"):
            i += 2
        elif argv[i] in ("-hide_banner", "-y", "-"):
            i += 1
        else:
            args.setdefault("out", argv[i]); i += 1
    out = args.get("out")
    src = inputs[0]

    if crf is not None:  # encode
        info, frames = _read_y4m(src)
        frames = _quantize(frames, crf)
        import io

        payload = io.BytesIO()
        write_frames_y4m(payload, info, frames)
        header = {
            "codec": codec, "crf": crf, "width": info.width, "height": info.height,
            "frames": len(frames),
            "fps": [info.frame_rate.numerator, info.frame_rate.denominator],
            "bit_rate": round(1e6 / (crf + 1)),
        }
        with open(out, "wb") as fh:
            fh.write(json.dumps(header).encode() + b"\n")
            fh.write(payload.getvalue())
        return 0

    if src.endswith(".mp4"):  # decode
        with open(src, "rb") as fh:
            fh.readline()
            data = fh.read()
        with open(out, "wb") as fh:
            fh.write(data)
        return 0

    if vf:  # scale
        w, h = (int(v) for v in vf.split("=")[1].split(":")[:2])
        info, frames = _read_y4m(src)
        frames, new_info = _scale(frames, info, w, h)
        with open(out, "wb") as fh:
            write_frames_y4m(fh, new_info, frames)
        return 0

    print("fake ffmpeg: unrecognized invocation", file=sys.stderr)
    return 1


def ffprobe_main(argv) -> int:
    _log(["ffprobe"] + argv)
    if argv == ["-version"]:
        print("ffprobe version 0.0-fake")
        return 0
    path = argv[-1]
    with open(path, "rb") as fh:
        header = json.loads(fh.readline())
    size = os.path.getsize(path)
    num, den = header["fps"]
    duration = header["frames"] * den / num
    fmt = {"size": str(size), "duration": f"{duration:.6f}"}
    if not os.environ.get("FAKE_PROBE_NO_BITRATE"):
        fmt["bit_rate"] = str(header["bit_rate"])
    print(json.dumps({
        "format": fmt,
        "streams": [{"codec_type": "video", "duration": f"{duration:.6f}"}],
    }))
    return 0
