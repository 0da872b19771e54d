"""Uncompressed video I/O (Y4M and headerless planar YUV) and color conversion.

Samples live as float64 for the whole processing chain; quantization to
8 bits happens only when a sequence is written out. Chroma planes are kept
signed (the +128 byte offset is applied and removed at the file boundary),
so the color conversion formulas apply verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from vidmark.errors import ConfigurationError, FormatError, ShapeError, TruncationError

#: luma/chroma coefficient rows for RGB -> YCbCr (Cb/Cr come out signed).
RGB_TO_YCBCR = np.array(
    [
        [0.2989, 0.5866, 0.1145],
        [-0.1687, -0.3312, 0.5],
        [0.5, -0.4183, -0.0816],
    ]
)

YCBCR_TO_RGB = np.linalg.inv(RGB_TO_YCBCR)

CHROMA_LAYOUTS = ("444", "422", "420")


def chroma_plane_shape(layout: str, width: int, height: int) -> tuple[int, int]:
    if layout == "444":
        return height, width
    if layout == "422":
        return height, width // 2
    if layout == "420":
        return height // 2, width // 2
    raise ConfigurationError(f"unknown chroma layout {layout!r}")


@dataclass
class Frame:
    """One video picture: luma plane plus pass-through chroma planes."""

    index: int
    luma: np.ndarray
    chroma_b: np.ndarray
    chroma_r: np.ndarray
    chroma_layout: str = "420"

    def __post_init__(self):
        if self.luma.ndim != 2:
            raise ShapeError("luma plane must be 2D")
        expected = chroma_plane_shape(self.chroma_layout, self.width, self.height)
        for name, plane in (("chroma_b", self.chroma_b), ("chroma_r", self.chroma_r)):
            if plane.shape != expected:
                raise ShapeError(
                    f"{name} shape {plane.shape} inconsistent with "
                    f"{self.chroma_layout} layout (expected {expected})"
                )

    @property
    def width(self) -> int:
        return self.luma.shape[1]

    @property
    def height(self) -> int:
        return self.luma.shape[0]

    def copy(self) -> "Frame":
        return Frame(
            index=self.index,
            luma=self.luma.copy(),
            chroma_b=self.chroma_b.copy(),
            chroma_r=self.chroma_r.copy(),
            chroma_layout=self.chroma_layout,
        )


@dataclass
class FrameSequence:
    """Ordered frames sharing one geometry.

    Frame indices are contiguous for freshly read sequences; after a frame
    drop the surviving frames keep their original indices so manifests can
    still address them.
    """

    frames: list[Frame] = field(default_factory=list)
    frame_rate: Fraction = Fraction(30, 1)
    source_id: str = ""

    def __post_init__(self):
        if not self.frames:
            return
        first = self.frames[0]
        for f in self.frames:
            if (f.width, f.height, f.chroma_layout) != (
                first.width,
                first.height,
                first.chroma_layout,
            ):
                raise ShapeError("all frames in a sequence must share geometry")

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self):
        return iter(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def chroma_layout(self) -> str:
        return self.frames[0].chroma_layout

    def frame_by_index(self, index: int) -> Frame | None:
        for f in self.frames:
            if f.index == index:
                return f
        return None

    def copy(self) -> "FrameSequence":
        return FrameSequence(
            frames=[f.copy() for f in self.frames],
            frame_rate=self.frame_rate,
            source_id=self.source_id,
        )


# ---------------------------------------------------------------------------
# Y4M


_Y4M_MAGIC = b"YUV4MPEG2"

# C-token prefixes we accept, mapped to the internal layout tag.
_COLOURSPACES = {
    "C444": "444",
    "C422": "422",
    "C420": "420",
    "C420jpeg": "420",
    "C420mpeg2": "420",
    "C420paldv": "420",
}


def _read_header_line(fh, what: str) -> bytes:
    line = bytearray()
    while True:
        ch = fh.read(1)
        if not ch:
            if line:
                raise FormatError(f"unterminated {what} line")
            return b""
        if ch == b"\n":
            return bytes(line)
        line += ch
        if len(line) > 512:
            raise FormatError(f"{what} line too long")


def _parse_ratio(text: str, token: str) -> Fraction:
    num, sep, den = text.partition(":")
    if not sep:
        raise FormatError(f"malformed ratio in token {token!r}")
    try:
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"malformed ratio in token {token!r}") from exc


def read_y4m(path) -> FrameSequence:
    """Read an 8-bit YUV4MPEG2 file into a FrameSequence.

    Luma bytes become floats unchanged; chroma bytes lose their +128 offset.
    """
    with open(path, "rb") as fh:
        header = _read_header_line(fh, "stream header")
        if not header:
            raise FormatError("empty file: missing YUV4MPEG2 header")
        tokens = header.split(b" ")
        if tokens[0] != _Y4M_MAGIC:
            raise FormatError(f"not a YUV4MPEG2 stream (leading token {tokens[0]!r})")

        width = height = None
        rate = None
        layout = "420"
        for raw in tokens[1:]:
            if not raw:
                continue
            token = raw.decode("ascii", errors="replace")
            kind, value = token[0], token[1:]
            try:
                if kind == "W":
                    width = int(value)
                elif kind == "H":
                    height = int(value)
                elif kind == "F":
                    rate = _parse_ratio(value, token)
                elif kind == "C":
                    if token not in _COLOURSPACES:
                        raise FormatError(f"unsupported colourspace token {token!r}")
                    layout = _COLOURSPACES[token]
                elif kind == "I":
                    if value not in ("p", "?"):
                        raise FormatError(f"unsupported interlacing token {token!r}")
                elif kind in ("A", "X"):
                    pass  # aspect ratio and extensions are irrelevant here
                else:
                    raise FormatError(f"unrecognized header token {token!r}")
            except ValueError as exc:
                raise FormatError(f"malformed header token {token!r}") from exc

        if width is None or height is None:
            raise FormatError("header missing W or H token")
        if width <= 0 or height <= 0:
            raise FormatError(f"non-positive frame geometry {width}x{height}")
        if rate is None:
            raise FormatError("header missing F token")

        c_shape = chroma_plane_shape(layout, width, height)
        y_size = width * height
        c_size = c_shape[0] * c_shape[1]

        frames = []
        while True:
            line = _read_header_line(fh, "frame header")
            if not line:
                break
            if not line.startswith(b"FRAME"):
                raise FormatError(f"expected FRAME record, found {line[:16]!r}")
            index = len(frames)
            payload = fh.read(y_size + 2 * c_size)
            if len(payload) != y_size + 2 * c_size:
                raise TruncationError(index)
            buf = np.frombuffer(payload, dtype=np.uint8)
            luma = buf[:y_size].astype(np.float64).reshape(height, width)
            cb = buf[y_size : y_size + c_size].astype(np.float64).reshape(c_shape) - 128.0
            cr = buf[y_size + c_size :].astype(np.float64).reshape(c_shape) - 128.0
            frames.append(Frame(index, luma, cb, cr, layout))

    return FrameSequence(frames=frames, frame_rate=rate, source_id=str(path))


def _plane_to_bytes(plane: np.ndarray, offset: float) -> bytes:
    # Clamp to [0, 255] and round half up; the only quantization in the chain.
    shifted = plane + offset if offset else plane
    return np.floor(np.clip(shifted, 0.0, 255.0) + 0.5).astype(np.uint8).tobytes()


def write_y4m(seq: FrameSequence, path) -> None:
    """Write a FrameSequence as 8-bit YUV4MPEG2."""
    if not seq.frames:
        raise ConfigurationError("cannot write an empty sequence")
    layout_token = {"444": "C444", "422": "C422", "420": "C420"}[seq.chroma_layout]
    rate = seq.frame_rate
    header = (
        f"YUV4MPEG2 W{seq.width} H{seq.height} "
        f"F{rate.numerator}:{rate.denominator} Ip A1:1 {layout_token}\n"
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii"))
        for frame in seq.frames:
            fh.write(b"FRAME\n")
            fh.write(_plane_to_bytes(frame.luma, 0.0))
            fh.write(_plane_to_bytes(frame.chroma_b, 128.0))
            fh.write(_plane_to_bytes(frame.chroma_r, 128.0))


def read_raw_yuv(path, width: int, height: int, layout: str, frame_rate: Fraction) -> FrameSequence:
    """Read headerless planar YUV with explicitly supplied geometry."""
    if layout not in CHROMA_LAYOUTS:
        raise ConfigurationError(f"unknown raw format {layout!r}")
    if width <= 0 or height <= 0:
        raise ConfigurationError(f"non-positive frame geometry {width}x{height}")
    c_shape = chroma_plane_shape(layout, width, height)
    y_size = width * height
    c_size = c_shape[0] * c_shape[1]
    frame_bytes = y_size + 2 * c_size

    frames = []
    with open(path, "rb") as fh:
        while True:
            payload = fh.read(frame_bytes)
            if not payload:
                break
            if len(payload) != frame_bytes:
                raise TruncationError(len(frames))
            buf = np.frombuffer(payload, dtype=np.uint8)
            luma = buf[:y_size].astype(np.float64).reshape(height, width)
            cb = buf[y_size : y_size + c_size].astype(np.float64).reshape(c_shape) - 128.0
            cr = buf[y_size + c_size :].astype(np.float64).reshape(c_shape) - 128.0
            frames.append(Frame(len(frames), luma, cb, cr, layout))
    if not frames:
        raise FormatError("raw YUV file holds no complete frame")
    return FrameSequence(frames=frames, frame_rate=frame_rate, source_id=str(path))


# ---------------------------------------------------------------------------
# Color conversion


def rgb_to_ycbcr(r, g, b):
    """RGB -> (Y, Cb, Cr). Cb/Cr come out signed (no +128 offset)."""
    m = RGB_TO_YCBCR
    y = m[0, 0] * r + m[0, 1] * g + m[0, 2] * b
    cb = m[1, 0] * r + m[1, 1] * g + m[1, 2] * b
    cr = m[2, 0] * r + m[2, 1] * g + m[2, 2] * b
    return y, cb, cr


def ycbcr_to_rgb(y, cb, cr):
    """Exact matrix inverse of rgb_to_ycbcr."""
    m = YCBCR_TO_RGB
    r = m[0, 0] * y + m[0, 1] * cb + m[0, 2] * cr
    g = m[1, 0] * y + m[1, 1] * cb + m[1, 2] * cr
    b = m[2, 0] * y + m[2, 1] * cb + m[2, 2] * cr
    return r, g, b
