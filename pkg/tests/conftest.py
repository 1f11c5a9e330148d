import sys
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qrhull.yuv import FrameYuv420, StreamInfo


def random_frame(rng: np.random.Generator, width: int, height: int, index: int = 0) -> FrameYuv420:
    return FrameYuv420(
        y_plane=rng.integers(0, 256, (height, width), dtype=np.uint8),
        u_plane=rng.integers(0, 256, (height // 2, width // 2), dtype=np.uint8),
        v_plane=rng.integers(0, 256, (height // 2, width // 2), dtype=np.uint8),
        index=index,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture
def info_64() -> StreamInfo:
    return StreamInfo(width=64, height=64, frame_rate=Fraction(25, 1))


_TESTS_DIR = Path(__file__).parent

_WRAPPER = """#!{python}
import sys
sys.path.insert(0, {tests_dir!r})
from fake_tools import {entry}
sys.exit({entry}(sys.argv[1:]))
"""


@pytest.fixture(scope="session")
def fake_tools(tmp_path_factory):
    """Executable ffmpeg/ffprobe stand-ins; returns their directory."""
    tooldir = tmp_path_factory.mktemp("fake-tools")
    for name, entry in (("ffmpeg", "ffmpeg_main"), ("ffprobe", "ffprobe_main")):
        script = tooldir / name
        script.write_text(
            _WRAPPER.format(python=sys.executable, tests_dir=str(_TESTS_DIR), entry=entry)
        )
        script.chmod(0o755)
    return tooldir


def write_test_clip(path: Path, width=64, height=64, frames=8, seed=7) -> StreamInfo:
    """A small Y4M clip with smooth gradients plus motion (compressible)."""
    gen = np.random.default_rng(seed)
    info = StreamInfo(width=width, height=height, frame_rate=Fraction(25, 1))
    xs = np.arange(width)
    ys = np.arange(height)
    base = ((xs[None, :] * 2 + ys[:, None] * 3) % 256).astype(np.uint8)
    clip = []
    for n in range(frames):
        y = np.roll(base, n * 2, axis=1)
        y = (y + gen.integers(0, 4, y.shape)).astype(np.uint8)
        u = ((xs[None, : width // 2] + n) % 256).astype(np.uint8).repeat(height // 2, 0)[: height // 2]
        v = np.full((height // 2, width // 2), (128 + 3 * n) % 256, dtype=np.uint8)
        clip.append(FrameYuv420(y_plane=y, u_plane=u[:, : width // 2], v_plane=v, index=n))
    from qrhull.yuv import write_frames_y4m

    with open(path, "wb") as fh:
        write_frames_y4m(fh, info, clip)
    return info
