"""2D multi-level 9/7 lifting wavelet transform for square blocks.

The coefficient array uses the Mallat layout: for an 8x8 block at 2 levels,
LL2 occupies the top-left 2x2, HL2/LH2/HH2 the remaining 2x2 quadrants of
the top-left 4x4, and HL1/LH1/HH1 the three 4x4 quadrants. HL holds
horizontal detail (row highpass), LH vertical detail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from vidmark import _kernels as K
from vidmark._kernels.constants import (  # noqa: F401 - re-exported for reference
    LIFT_PREDICT_1,
    LIFT_PREDICT_2,
    LIFT_SCALE,
    LIFT_UPDATE_1,
    LIFT_UPDATE_2,
)
from vidmark.errors import DomainError, ShapeError

BANDS_PER_LEVEL = ("HL", "LH", "HH")


@dataclass
class SubbandPyramid:
    """Mallat-layout coefficients of one square block."""

    block_size: int
    levels: int
    coefficients: np.ndarray

    def band_names(self) -> list[str]:
        names = [f"LL{self.levels}"]
        for level in range(self.levels, 0, -1):
            names += [f"{b}{level}" for b in BANDS_PER_LEVEL]
        return names


def _check_1d(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ShapeError("signal must be 1D")
    n = x.shape[0]
    if n < 2 or n % 2 != 0:
        raise ShapeError(f"signal length must be even and >= 2, got {n}")
    return x


def fwt97_1d(signal):
    """One analysis stage: signal of even length n -> (approx, detail).

    Whole-sample symmetric extension at both ends; note that the fold makes
    the outermost detail coefficients of non-constant signals nonzero.
    """
    x = _check_1d(signal)
    n = x.shape[0]
    row = x.reshape(1, n).copy()
    K.fwt97_rows(row)
    h = n // 2
    return row[0, :h].copy(), row[0, h:].copy()


def iwt97_1d(approx, detail):
    """Exact inverse of fwt97_1d."""
    a = np.asarray(approx, dtype=np.float64)
    d = np.asarray(detail, dtype=np.float64)
    if a.ndim != 1 or d.ndim != 1 or a.shape != d.shape:
        raise ShapeError("approx and detail must be 1D vectors of equal length")
    row = np.concatenate([a, d]).reshape(1, -1)
    K.iwt97_rows(row)
    return row[0].copy()


def fwt2d_block(block, levels: int) -> SubbandPyramid:
    """Separable 2D transform: rows first, then columns, recursing on LL."""
    b = np.asarray(block, dtype=np.float64)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ShapeError(f"block must be square, got {b.shape}")
    m = b.shape[0]
    if levels < 1:
        raise ShapeError("levels must be >= 1")
    if m % (1 << levels) != 0:
        raise ShapeError(f"block size {m} not divisible by 2^{levels}")
    coeff = b.copy()
    size = m
    for _ in range(levels):
        sub = coeff[:size, :size]
        K.fwt97_rows(sub)
        K.fwt97_rows(sub.T)
        size //= 2
    return SubbandPyramid(block_size=m, levels=levels, coefficients=coeff)


def iwt2d_block(pyramid: SubbandPyramid) -> np.ndarray:
    """Exact inverse of fwt2d_block."""
    m = pyramid.block_size
    out = pyramid.coefficients.copy()
    for level in range(pyramid.levels, 0, -1):
        size = m >> (level - 1)
        sub = out[:size, :size]
        K.iwt97_rows(sub.T)
        K.iwt97_rows(sub)
    return out


def _band_slices(pyramid: SubbandPyramid, band: str):
    name = band.upper()
    kind, level_text = name[:2], name[2:]
    try:
        level = int(level_text)
    except ValueError:
        raise DomainError(f"invalid subband tag {band!r}") from None
    if level < 1 or level > pyramid.levels:
        raise DomainError(f"subband {band!r} not present in a {pyramid.levels}-level pyramid")
    s = pyramid.block_size >> level
    if kind == "LL":
        if level != pyramid.levels:
            raise DomainError(f"LL only exists at the deepest level ({pyramid.levels})")
        return slice(0, s), slice(0, s)
    if kind == "HL":
        return slice(0, s), slice(s, 2 * s)
    if kind == "LH":
        return slice(s, 2 * s), slice(0, s)
    if kind == "HH":
        return slice(s, 2 * s), slice(s, 2 * s)
    raise DomainError(f"invalid subband tag {band!r}")


def subband_view(pyramid: SubbandPyramid, band: str) -> np.ndarray:
    """Writable view of one subband; mutations change the pyramid."""
    rows, cols = _band_slices(pyramid, band)
    return pyramid.coefficients[rows, cols]
