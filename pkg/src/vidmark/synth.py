"""Deterministic synthetic test clips.

Real footage from published robustness studies is not redistributable, so
the bundled evaluation content is generated. The morph and drift clips are
built from sums of low-frequency sinusoids (analytic and periodic, so there
are no interpolation kinks and panning wraps seamlessly), an alternating
global luminance flicker that guarantees every frame pair clears the motion
threshold, and a faint Nyquist-checkerboard texture whose energy sits at
the finest scale: it burdens per-pixel extraction while leaving the
second-level subbands almost untouched. Their luma stays real-valued; the
texture clip instead carries harsh integer-rounded per-pixel noise as a
stress case.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from vidmark.errors import ConfigurationError
from vidmark.video_io import Frame, FrameSequence, chroma_plane_shape

SYNTH_KINDS = ("morph", "drift", "texture")

#: clips the evaluation suite treats as its bundled content
BUNDLED_KINDS = ("morph", "drift")


def _wave_field(rng, height: int, width: int, n_waves: int, max_cycles: int) -> np.ndarray:
    """Sum of random low-frequency plane waves, unit variance-ish, periodic."""
    yy, xx = np.mgrid[0:height, 0:width]
    out = np.zeros((height, width))
    for _ in range(n_waves):
        fy = fx = 0
        while fy == 0 and fx == 0:
            fy = int(rng.integers(-max_cycles, max_cycles + 1))
            fx = int(rng.integers(-max_cycles, max_cycles + 1))
        phase = rng.uniform(0.0, 2.0 * np.pi)
        out += np.cos(2.0 * np.pi * (fx * xx / width + fy * yy / height) + phase)
    return out / np.sqrt(n_waves)


def _checkerboard(height: int, width: int) -> np.ndarray:
    yy, xx = np.mgrid[0:height, 0:width]
    return (-1.0) ** (xx + yy)


def synth_clip(
    kind: str,
    frames: int = 30,
    height: int = 128,
    width: int = 128,
    seed: int = 7,
) -> FrameSequence:
    """Generate one of the bundled clip kinds.

    morph   - smooth wave field redrawn every frame, plus flicker and texture
    drift   - panning wave base with a fresh smaller wobble per frame
    texture - integer-rounded panning noise (high-frequency stress case)
    """
    if kind not in SYNTH_KINDS:
        raise ConfigurationError(f"unknown synthetic clip kind {kind!r}")
    if frames < 1:
        raise ConfigurationError("frame count must be >= 1")
    rng = np.random.default_rng(seed)
    layout = "420"
    c_shape = chroma_plane_shape(layout, width, height)
    chroma_rng = np.random.default_rng(seed + 1)
    cb = np.floor(20.0 * _wave_field(chroma_rng, *c_shape, n_waves=4, max_cycles=2) + 0.5)
    cr = np.floor(20.0 * _wave_field(chroma_rng, *c_shape, n_waves=4, max_cycles=2) + 0.5)
    checker = _checkerboard(height, width)

    out = []
    if kind == "texture":
        base = rng.uniform(48.0, 208.0, size=(height, width))
        for t in range(frames):
            panned = np.roll(base, shift=(t, 3 * t), axis=(0, 1))
            sparkle = rng.uniform(-10.0, 10.0, size=(height, width))
            luma = np.clip(np.floor(panned + sparkle + 0.5), 0.0, 255.0)
            out.append(Frame(t, luma, cb.copy(), cr.copy(), layout))
        return FrameSequence(frames=out, frame_rate=Fraction(25, 1), source_id=f"synth:{kind}:{seed}")

    base = 1.6 * _wave_field(rng, height, width, n_waves=6, max_cycles=3)
    for t in range(frames):
        # alternating flicker keeps |delta| between consecutive frames >= 9,
        # so every block clears the default motion threshold of 4
        flicker = 6.0 * (-1.0) ** t + 1.5 * (2.0 * rng.uniform() - 1.0)
        if kind == "morph":
            body = 1.8 * _wave_field(rng, height, width, n_waves=6, max_cycles=3)
        else:
            panned = np.roll(base, shift=(2 * t, t), axis=(0, 1))
            body = panned + 0.9 * _wave_field(rng, height, width, n_waves=4, max_cycles=3)
        envelope = _wave_field(rng, height, width, n_waves=4, max_cycles=2)
        luma = 128.0 + flicker + body + 0.55 * checker * envelope
        out.append(Frame(t, luma, cb.copy(), cr.copy(), layout))

    return FrameSequence(frames=out, frame_rate=Fraction(25, 1), source_id=f"synth:{kind}:{seed}")
