"""Raw planar 4:2:0 video model and bit-exact file I/O.

Two containers are supported: headerless ``.yuv`` (I420, geometry supplied
by the caller) and Y4M (self-describing).  Planes are stored densely with
no row padding, so a frame is exactly ``width * height * 3 / 2`` bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import BinaryIO, Iterable, Iterator, Optional

import numpy as np

from qrhull.errors import FormatError, GeometryError, TruncationError

Y4M_MAGIC = b"YUV4MPEG2"
FRAME_MAGIC = b"FRAME"

# 4:2:0 chroma tags accepted in Y4M headers; anything else is rejected.
_C420_TAGS = {"420", "420jpeg", "420mpeg2", "420paldv"}


@dataclass(frozen=True)
class StreamInfo:
    """Geometry and rate of one 4:2:0 stream."""

    width: int
    height: int
    frame_rate: Fraction = Fraction(25, 1)
    bit_depth: int = 8
    frame_count: Optional[int] = None

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise GeometryError(f"dimensions too small: {self.width}x{self.height}")
        if self.width % 2 or self.height % 2:
            raise GeometryError(
                f"4:2:0 requires even dimensions, got {self.width}x{self.height}"
            )
        if self.frame_rate.numerator <= 0 or self.frame_rate.denominator <= 0:
            raise FormatError(f"invalid frame rate {self.frame_rate}")
        if self.bit_depth != 8:
            raise FormatError(f"only 8-bit streams are supported, got {self.bit_depth}")

    @property
    def luma_size(self) -> int:
        return self.width * self.height

    @property
    def chroma_size(self) -> int:
        return (self.width // 2) * (self.height // 2)

    @property
    def frame_size(self) -> int:
        """Bytes per frame: width * height * 3 / 2."""
        return self.luma_size + 2 * self.chroma_size


@dataclass(frozen=True)
class FrameYuv420:
    """One planar 4:2:0 frame; planes are dense uint8 arrays."""

    y_plane: np.ndarray
    u_plane: np.ndarray
    v_plane: np.ndarray
    index: int = 0

    def __post_init__(self):
        h, w = self.y_plane.shape
        if self.u_plane.shape != (h // 2, w // 2) or self.v_plane.shape != (h // 2, w // 2):
            raise GeometryError(
                f"chroma planes {self.u_plane.shape}/{self.v_plane.shape} do not "
                f"match luma {self.y_plane.shape}"
            )

    @property
    def width(self) -> int:
        return self.y_plane.shape[1]

    @property
    def height(self) -> int:
        return self.y_plane.shape[0]

    def to_bytes(self) -> bytes:
        return (
            self.y_plane.tobytes() + self.u_plane.tobytes() + self.v_plane.tobytes()
        )


def _frame_from_bytes(data: bytes, info: StreamInfo, index: int) -> FrameYuv420:
    w, h = info.width, info.height
    y_end = info.luma_size
    u_end = y_end + info.chroma_size
    buf = np.frombuffer(data, dtype=np.uint8)
    return FrameYuv420(
        y_plane=buf[:y_end].reshape(h, w).copy(),
        u_plane=buf[y_end:u_end].reshape(h // 2, w // 2).copy(),
        v_plane=buf[u_end:].reshape(h // 2, w // 2).copy(),
        index=index,
    )


def parse_y4m_header(stream: BinaryIO) -> StreamInfo:
    """Parse a Y4M signature line, leaving the stream at the first FRAME."""
    line = stream.readline()
    if not line.startswith(Y4M_MAGIC):
        raise FormatError(f"not a Y4M stream: bad magic {line[:16]!r}")
    width = height = None
    rate = None
    for token in line.rstrip(b"\n").split(b" ")[1:]:
        if not token:
            continue
        tag, val = chr(token[0]), token[1:].decode("ascii", "replace")
        if tag == "W":
            width = int(val)
        elif tag == "H":
            height = int(val)
        elif tag == "F":
            num, den = val.split(":")
            rate = Fraction(int(num), int(den))
        elif tag == "C":
            if val not in _C420_TAGS:
                raise FormatError(f"unsupported chroma tag C{val}; only 4:2:0 is handled")
        # I (interlace), A (aspect), X (extension) tokens are ignored
    if width is None or height is None:
        raise FormatError("Y4M header missing W or H token")
    if rate is None:
        raise FormatError("Y4M header missing F token")
    return StreamInfo(width=width, height=height, frame_rate=rate)


class _FrameReader:
    """Sequential frame reader; assigns contiguous indices from 0."""

    def __init__(self, stream: BinaryIO, info: StreamInfo):
        self.stream = stream
        self.info = info
        self._next_index = 0

    def _read_payload(self) -> Optional[bytes]:
        data = self.stream.read(self.info.frame_size)
        if not data:
            return None
        if len(data) < self.info.frame_size:
            raise TruncationError(self.info.frame_size, len(data))
        return data

    def read_frame(self) -> Optional[FrameYuv420]:
        raise NotImplementedError

    def __iter__(self) -> Iterator[FrameYuv420]:
        while (frame := self.read_frame()) is not None:
            yield frame


class RawYuvReader(_FrameReader):
    """Reads headerless I420; geometry must be supplied externally."""

    def read_frame(self) -> Optional[FrameYuv420]:
        data = self._read_payload()
        if data is None:
            return None
        frame = _frame_from_bytes(data, self.info, self._next_index)
        self._next_index += 1
        return frame


class Y4mReader(_FrameReader):
    """Reads Y4M; geometry comes from the header."""

    def __init__(self, stream: BinaryIO):
        super().__init__(stream, parse_y4m_header(stream))

    def read_frame(self) -> Optional[FrameYuv420]:
        marker = self.stream.readline()
        if not marker:
            return None
        if not marker.startswith(FRAME_MAGIC):
            raise FormatError(f"expected FRAME marker, got {marker[:16]!r}")
        data = self._read_payload()
        if data is None:
            raise TruncationError(self.info.frame_size, 0)
        frame = _frame_from_bytes(data, self.info, self._next_index)
        self._next_index += 1
        return frame


def _check_frame_geometry(frame: FrameYuv420, info: StreamInfo) -> None:
    if (frame.height, frame.width) != (info.height, info.width):
        raise GeometryError(
            f"frame {frame.width}x{frame.height} does not match "
            f"stream {info.width}x{info.height}"
        )


def write_frames_raw(
    sink: BinaryIO, info: StreamInfo, frames: Iterable[FrameYuv420]
) -> int:
    """Write headerless I420 frames; returns bytes written."""
    written = 0
    for frame in frames:
        _check_frame_geometry(frame, info)
        written += sink.write(frame.to_bytes())
    return written


def write_frames_y4m(
    sink: BinaryIO, info: StreamInfo, frames: Iterable[FrameYuv420]
) -> int:
    """Write a Y4M stream (header plus FRAME-prefixed frames)."""
    header = (
        f"YUV4MPEG2 W{info.width} H{info.height} "
        f"F{info.frame_rate.numerator}:{info.frame_rate.denominator} Ip A1:1 C420\n"
    ).encode("ascii")
    written = sink.write(header)
    for frame in frames:
        _check_frame_geometry(frame, info)
        written += sink.write(b"FRAME\n")
        written += sink.write(frame.to_bytes())
    return written


def open_reader(path: str, info: Optional[StreamInfo] = None) -> _FrameReader:
    """Open a .y4m or .yuv file; raw files require an explicit StreamInfo."""
    stream = open(path, "rb")
    if path.endswith(".y4m"):
        return Y4mReader(stream)
    if info is None:
        raise FormatError(f"raw YUV file {path} requires explicit stream geometry")
    return RawYuvReader(stream, info)
