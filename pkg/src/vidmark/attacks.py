"""Deterministic signal-degradation operators for robustness evaluation.

Every attack touches luma only; chroma planes pass through bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vidmark.errors import ConfigurationError, DomainError
from vidmark.video_io import Frame, FrameSequence

ATTACK_KINDS = ("adaptive_quantization", "lowpass", "highpass", "frame_drop")


@dataclass
class AttackSpec:
    kind: str
    q_base: float = 16.0
    adaptive: bool = True
    radius: int = 1
    boost: float = 1.0
    drop_ratio: float | None = None
    drop_indices: list[int] | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ATTACK_KINDS:
            raise ConfigurationError(f"unknown attack kind {self.kind!r}")
        if self.q_base < 1:
            raise ConfigurationError(f"quantization step must be >= 1, got {self.q_base}")
        if self.radius < 1:
            raise ConfigurationError(f"filter radius must be >= 1, got {self.radius}")
        if self.kind == "highpass" and not self.boost > 0:
            raise ConfigurationError(f"highpass boost must be > 0, got {self.boost}")
        if self.drop_ratio is not None and not 0 <= self.drop_ratio < 1:
            raise ConfigurationError(f"drop ratio must be in [0, 1), got {self.drop_ratio}")
        if not self.label:
            self.label = self.kind


def _round_half_up(x: np.ndarray) -> np.ndarray:
    return np.floor(x + 0.5)


def _quantize_block(block: np.ndarray, q_base: float, adaptive: bool) -> np.ndarray:
    if adaptive:
        activity = float(np.abs(block - block.mean()).mean())
        q = max(1.0, q_base * activity / 8.0)
    else:
        q = max(1.0, q_base)
    return _round_half_up(block / q) * q


def adaptive_quantize(frame: Frame, q_base: float, adaptive: bool = True, block_size: int = 8) -> Frame:
    """Requantize luma per block; the step scales with block activity
    (mean absolute deviation / 8) unless `adaptive` is off."""
    if q_base < 1:
        raise ConfigurationError(f"quantization step must be >= 1, got {q_base}")
    out = frame.copy()
    h, w = out.luma.shape
    for oy in range(0, h, block_size):
        for ox in range(0, w, block_size):
            block = out.luma[oy : oy + block_size, ox : ox + block_size]
            block[:] = _quantize_block(block, q_base, adaptive)
    return out


def _box_mean(plane: np.ndarray, radius: int) -> np.ndarray:
    """Mean filter of side 2*radius+1 with symmetric border extension,
    computed with an integral image."""
    k = 2 * radius + 1
    padded = np.pad(plane, radius, mode="symmetric")
    s = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1), dtype=np.float64)
    s[1:, 1:] = padded.cumsum(axis=0).cumsum(axis=1)
    h, w = plane.shape
    window = s[k : k + h, k : k + w] - s[:h, k : k + w] - s[k : k + h, :w] + s[:h, :w]
    return window / (k * k)


def lowpass(frame: Frame, radius: int = 1) -> Frame:
    """Box blur on luma."""
    if radius < 1:
        raise ConfigurationError(f"filter radius must be >= 1, got {radius}")
    out = frame.copy()
    out.luma = _box_mean(frame.luma, radius)
    return out


def highpass(frame: Frame, radius: int = 1, boost: float = 1.0) -> Frame:
    """High-boost sharpening: Y + boost * (Y - lowpass(Y))."""
    if radius < 1:
        raise ConfigurationError(f"filter radius must be >= 1, got {radius}")
    if not boost > 0:
        raise ConfigurationError(f"boost must be > 0, got {boost}")
    out = frame.copy()
    out.luma = frame.luma + boost * (frame.luma - _box_mean(frame.luma, radius))
    return out


def drop_frames(seq: FrameSequence, spec) -> FrameSequence:
    """Remove frames given an explicit index list or a deterministic ratio
    rule (ratio r drops every ceil(1/r)-th frame, starting at position 0).
    Survivors keep their original index values."""
    if isinstance(spec, (int, np.integer)):
        spec = [int(spec)]
    if isinstance(spec, float):
        if not 0 <= spec < 1:
            raise DomainError(f"drop ratio must be in [0, 1), got {spec}")
        if spec == 0:
            positions: set[int] = set()
        else:
            step = math.ceil(1.0 / spec)
            positions = set(range(0, len(seq.frames), step))
    else:
        indices = list(spec)
        valid = {f.index for f in seq.frames}
        for i in indices:
            if i not in valid:
                raise DomainError(f"frame index {i} not present in sequence")
        drop = set(indices)
        positions = {pos for pos, f in enumerate(seq.frames) if f.index in drop}

    survivors = [f.copy() for pos, f in enumerate(seq.frames) if pos not in positions]
    return FrameSequence(frames=survivors, frame_rate=seq.frame_rate, source_id=seq.source_id)


def apply_attack(seq: FrameSequence, spec: AttackSpec) -> FrameSequence:
    """Apply one attack to a whole sequence."""
    if spec.kind == "frame_drop":
        if spec.drop_indices is not None:
            return drop_frames(seq, spec.drop_indices)
        return drop_frames(seq, spec.drop_ratio if spec.drop_ratio is not None else 0.5)

    per_frame = {
        "adaptive_quantization": lambda f: adaptive_quantize(f, spec.q_base, spec.adaptive),
        "lowpass": lambda f: lowpass(f, spec.radius),
        "highpass": lambda f: highpass(f, spec.radius, spec.boost),
    }[spec.kind]
    frames = [per_frame(f) for f in seq.frames]
    return FrameSequence(frames=frames, frame_rate=seq.frame_rate, source_id=seq.source_id)
