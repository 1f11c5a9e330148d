"""Quality-rate convex hull analysis for CRF encode ladders.

Runs H.264/H.265/VP9 CRF sweeps at multiple resolutions through FFmpeg,
measures bitrate/PSNR/VMAF and SI/TI, extracts per-codec convex hulls in
the (log-bitrate, quality) plane, and fits log-polynomial hull models.
"""

from qrhull.yuv import StreamInfo, FrameYuv420, Y4mReader, RawYuvReader
from qrhull.metrics import FramePsnr, SequenceQuality
from qrhull.features import ContentFeatures
from qrhull.ladder import LadderConfig, EncodeJob, EncodePoint
from qrhull.hulls import QRCurve, HullCurve
from qrhull.fitting import PolyModel

__version__ = "0.1.0"

__all__ = [
    "StreamInfo",
    "FrameYuv420",
    "Y4mReader",
    "RawYuvReader",
    "FramePsnr",
    "SequenceQuality",
    "ContentFeatures",
    "LadderConfig",
    "EncodeJob",
    "EncodePoint",
    "QRCurve",
    "HullCurve",
    "PolyModel",
]
