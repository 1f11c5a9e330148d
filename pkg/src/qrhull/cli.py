"""Command-line surface: ladder, metrics, features, hull, fit, compare, report.

Exit codes: 0 success, 1 domain error, 2 usage error.  Diagnostics go to
stderr; data goes to stdout or the requested output files.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from qrhull import fitting, hulls, ladder, plots
from qrhull.errors import QrHullError
from qrhull.features import content_features
from qrhull.fitting import PolyModel
from qrhull.hulls import HullCurve, HullPoint
from qrhull.metrics import sequence_psnr, vmaf_score
from qrhull.yuv import StreamInfo, open_reader

HULL_HEADER = ["codec", "clip", "resolution", "crf", "ln_bitrate", "quality"]


def _read_stream(path: str, width: Optional[int], height: Optional[int]):
    info = None
    if not path.endswith(".y4m"):
        if not width or not height:
            raise QrHullError(f"raw file {path} requires --width and --height")
        info = StreamInfo(width=width, height=height)
    reader = open_reader(path, info)
    return list(reader)


def _cmd_ladder(args) -> int:
    config = ladder.LadderConfig.from_json(Path(args.config).read_text())
    if args.workdir:
        config.workdir = args.workdir
    if args.parallel:
        config.parallel = args.parallel
    if args.ffmpeg:
        config.ffmpeg_path = args.ffmpeg
    if args.ffprobe:
        config.ffprobe_path = args.ffprobe
    points, manifest = ladder.run_ladder(config, results_csv=args.results)
    flags = manifest["trend_flags"]
    for flag in flags:
        print(f"trend flag: {flag}", file=sys.stderr)
    print(f"{len(points)} points -> {args.results}", file=sys.stderr)
    return 0


def _cmd_metrics(args) -> int:
    ref = _read_stream(args.reference, args.width, args.height)
    dist = _read_stream(args.distorted, args.width, args.height)
    quality = sequence_psnr(ref, dist, workers=args.workers)
    if args.vmaf:
        quality.vmaf = vmaf_score(args.reference, args.distorted, args.ffmpeg or "ffmpeg")
    writer = csv.writer(sys.stdout)
    writer.writerow(["frame", "psnr_y", "psnr_u", "psnr_v", "psnr_420", "clamped"])
    for f in quality.per_frame:
        writer.writerow([
            f.frame_index, repr(f.psnr_y), repr(f.psnr_u), repr(f.psnr_v),
            repr(f.psnr_420), int(f.clamped),
        ])
    writer.writerow([
        "mean", "", "", "", repr(quality.mean_psnr_420),
        "" if quality.vmaf is None else repr(quality.vmaf),
    ])
    return 0


def _cmd_features(args) -> int:
    writer = csv.writer(sys.stdout)
    writer.writerow(["sequence", "frame_count", "SI", "TI"])
    for path in args.inputs:
        frames = _read_stream(path, args.width, args.height)
        feats = content_features(frames)
        writer.writerow([Path(path).stem, len(frames), repr(feats.si), repr(feats.ti)])
    return 0


def write_hull_csv(hull_curves: Sequence[HullCurve], path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(HULL_HEADER)
        for h in hull_curves:
            for v in h.vertices:
                res = f"{v.resolution[0]}x{v.resolution[1]}" if v.resolution else ""
                writer.writerow([
                    h.codec, h.clip, res, "" if v.crf is None else v.crf,
                    repr(v.log_bitrate), repr(v.quality),
                ])


def read_hull_csv(path: str, codec: Optional[str] = None) -> list[HullPoint]:
    points = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != HULL_HEADER:
            raise QrHullError(f"unexpected hull CSV header: {header}")
        for row in reader:
            if codec and row[0] != codec:
                continue
            res = tuple(int(v) for v in row[2].split("x")) if row[2] else None
            points.append(HullPoint(
                log_bitrate=float(row[4]), quality=float(row[5]),
                clip=row[1], resolution=res, crf=int(row[3]) if row[3] else None,
            ))
    return points


def _build_hulls(points, metric: str) -> list[HullCurve]:
    strata: dict[tuple, list] = {}
    for p in points:
        strata.setdefault((p.clip, p.codec, p.width, p.height), []).append(p)
    curves: dict[tuple, list] = {}
    for (clip, codec, _, _), pts in sorted(strata.items()):
        curves.setdefault((clip, codec), []).append(hulls.build_qr_curve(pts, metric))
    return [hulls.pooled_hull(cs) for _, cs in sorted(curves.items())]


def _cmd_hull(args) -> int:
    points = ladder.read_results_csv(args.results)
    hull_curves = _build_hulls(points, args.metric)
    write_hull_csv(hull_curves, args.out)
    if args.plot_dir:
        plot_dir = Path(args.plot_dir)
        plot_dir.mkdir(parents=True, exist_ok=True)
        strata: dict[tuple, list] = {}
        for p in points:
            strata.setdefault((p.clip, p.codec, p.width, p.height), []).append(p)
        for h in hull_curves:
            curves = [
                hulls.build_qr_curve(pts, args.metric)
                for (clip, codec, _, _), pts in sorted(strata.items())
                if clip == h.clip and codec == h.codec
            ]
            out = plot_dir / f"qr_{h.clip}_{h.codec}_{args.metric}.svg"
            plots.emit_qr_plot(curves, h, args.metric, str(out))
    print(f"hull vertices -> {args.out}", file=sys.stderr)
    return 0


def _cmd_fit(args) -> int:
    points = read_hull_csv(args.hull, codec=args.codec)
    if not points:
        raise QrHullError(f"no hull points for codec {args.codec!r} in {args.hull}")
    xs = [p.log_bitrate for p in points]
    ys = [p.quality for p in points]
    if args.normalize:
        z, x_mean, x_std = fitting.normalize_abscissa(xs)
    else:
        z, x_mean, x_std = xs, 0.0, 1.0
    rows = fitting.degree_sweep(z, ys)
    if args.sweep_csv:
        with open(args.sweep_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["degree", "rmse", "r_squared", "error"])
            for r in rows:
                writer.writerow([
                    r.degree,
                    "" if r.rmse is None else repr(r.rmse),
                    "" if r.r_squared is None else repr(r.r_squared),
                    r.error or "",
                ])
    model = fitting.fit_hull_model(
        points, degree=args.degree, normalize=args.normalize,
        codec=args.codec, metric=args.metric,
    )
    Path(args.out).write_text(model.to_json())
    if args.plot:
        plots.emit_fit_plot(points, model, args.plot)
    print(
        f"degree {model.degree}: RMSE {model.rmse:.4g}, R2 {model.r_squared:.4g} "
        f"-> {args.out}",
        file=sys.stderr,
    )
    return 0


def _cmd_compare(args) -> int:
    model_a = PolyModel.from_json(Path(args.model_a).read_text())
    model_b = PolyModel.from_json(Path(args.model_b).read_text())
    report = fitting.compare_codec_models(model_a, model_b, grid_size=args.grid)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text)
    else:
        print(text)
    return 0


def _cmd_report(args) -> int:
    points = ladder.read_results_csv(args.results)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    hull_curves = _build_hulls(points, args.metric)
    hull_csv = outdir / f"hull_{args.metric}.csv"
    write_hull_csv(hull_curves, str(hull_csv))
    for codec in sorted({h.codec for h in hull_curves}):
        pool = hulls.aggregate_codec_hull_points(
            [h for h in hull_curves if h.codec == codec]
        )
        if len(pool) < 3:
            print(f"skipping {codec}: only {len(pool)} hull points", file=sys.stderr)
            continue
        model = fitting.fit_hull_model(pool, codec=codec, metric=args.metric)
        (outdir / f"model_{codec}_{args.metric}.json").write_text(model.to_json())
        plots.emit_fit_plot(
            pool, model, str(outdir / f"fit_{codec}_{args.metric}.svg")
        )
    print(f"report written under {outdir}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrhull",
        description="Quality-rate convex hull analysis for CRF encode ladders",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ladder", help="run the encode ladder")
    p.add_argument("--config", required=True, help="LadderConfig JSON path")
    p.add_argument("--results", required=True, help="output results CSV")
    p.add_argument("--workdir")
    p.add_argument("--parallel", type=int)
    p.add_argument("--ffmpeg", help="transcoder path override")
    p.add_argument("--ffprobe", help="probe tool path override")
    p.set_defaults(func=_cmd_ladder)

    p = sub.add_parser("metrics", help="PSNR (and optional VMAF) between two streams")
    p.add_argument("--reference", required=True)
    p.add_argument("--distorted", required=True)
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--vmaf", action="store_true")
    p.add_argument("--ffmpeg")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("features", help="SI/TI content descriptors")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--width", type=int)
    p.add_argument("--height", type=int)
    p.set_defaults(func=_cmd_features)

    p = sub.add_parser("hull", help="extract convex hulls from a results CSV")
    p.add_argument("--results", required=True)
    p.add_argument("--out", required=True, help="hull vertices CSV")
    p.add_argument("--metric", choices=["psnr", "vmaf"], default="psnr")
    p.add_argument("--plot-dir", help="emit one QR+hull SVG per (clip, codec)")
    p.set_defaults(func=_cmd_hull)

    p = sub.add_parser("fit", help="fit a polynomial model to hull points")
    p.add_argument("--hull", required=True, help="hull vertices CSV")
    p.add_argument("--codec", required=True)
    p.add_argument("--out", required=True, help="model JSON output")
    p.add_argument("--metric", choices=["psnr", "vmaf"], default="psnr")
    p.add_argument("--degree", type=int, help="fix the degree (default: sweep 1-8)")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--sweep-csv", help="write the degree-sweep table")
    p.add_argument("--plot", help="fit plot SVG path")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("compare", help="compare two fitted models")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--grid", type=int, default=50)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("report", help="hulls, models, and plots from a results CSV")
    p.add_argument("--results", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--metric", choices=["psnr", "vmaf"], default="psnr")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QrHullError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
