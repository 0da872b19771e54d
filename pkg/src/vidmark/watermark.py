"""Watermark generation, embedding/extraction in both domains, and the
quality measures (PSNR, cosine similarity).

The scheme is non-blind: extraction needs the unmodified original frame and
the embed manifest. The watermark-to-block assignment is fixed and mirrored
exactly by extraction: watermark samples are consumed in raster order and
assigned to blocks in selection order; in the frequency domain each 8x8
block takes 8 samples, four into HL2 then four into LH2, raster order
within each band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from vidmark.errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    IntegrityError,
    ShapeError,
)
from vidmark.rng import DEFAULT_GENERATOR_ID, make_uniform_source
from vidmark.video_io import Frame
from vidmark.wavelet import fwt2d_block, iwt2d_block, subband_view

FREQUENCY_BLOCK_SIZE = 8
FREQUENCY_LEVELS = 2
SAMPLES_PER_FREQUENCY_BLOCK = 8  # 4 coefficients in HL2 + 4 in LH2


@dataclass
class WatermarkPattern:
    """Seeded Gaussian sample matrix; (generator_id, seed, shape) fully
    determine the samples."""

    samples: np.ndarray
    seed: int
    generator_id: str

    @property
    def n(self) -> int | None:
        """Side length for square patterns, None for flat ones."""
        return self.samples.shape[0] if self.samples.ndim == 2 else None

    @property
    def size(self) -> int:
        return self.samples.size


@dataclass
class FrameEntry:
    """Per-frame manifest record: which blocks carry the watermark, in order."""

    index: int
    blocks: list[tuple[int, int]]  # (grid_i, grid_j), selection order


@dataclass
class EmbedManifest:
    """Everything extraction needs to mirror an embedding run."""

    domain: str
    alpha: float
    seed: int
    generator_id: str
    block_size: int
    wm_side: int | None
    wm_samples: int
    threshold: float
    search_range: int
    frames: list[FrameEntry] = field(default_factory=list)
    version: int = 1

    def entry_for(self, frame_index: int) -> FrameEntry | None:
        for entry in self.frames:
            if entry.index == frame_index:
                return entry
        return None

    def regenerate_watermark(self) -> WatermarkPattern:
        if self.wm_side is not None:
            return generate_watermark(self.seed, self.wm_side, self.generator_id)
        return generate_watermark_samples(self.seed, self.wm_samples, self.generator_id)


def _polar_gaussian(rng, count: int) -> np.ndarray:
    """Polar Box-Muller: uniform pairs on (-1,1)^2, reject outside the unit
    disc (and the origin), emit both transformed samples."""
    out = np.empty(count, dtype=np.float64)
    i = 0
    while i < count:
        u = 2.0 * rng.uniform() - 1.0
        v = 2.0 * rng.uniform() - 1.0
        s = u * u + v * v
        if s >= 1.0 or s == 0.0:
            continue
        f = math.sqrt(-2.0 * math.log(s) / s)
        out[i] = u * f
        i += 1
        if i < count:
            out[i] = v * f
            i += 1
    return out


def generate_watermark(seed: int, n: int, generator_id: str = DEFAULT_GENERATOR_ID) -> WatermarkPattern:
    """n x n standard-normal watermark, filled in raster order."""
    if n < 1:
        raise ConfigurationError(f"watermark side must be >= 1, got {n}")
    rng = make_uniform_source(generator_id, seed)
    samples = _polar_gaussian(rng, n * n).reshape(n, n)
    return WatermarkPattern(samples=samples, seed=seed, generator_id=generator_id)


def generate_watermark_samples(
    seed: int, count: int, generator_id: str = DEFAULT_GENERATOR_ID
) -> WatermarkPattern:
    """Flat watermark of `count` samples (the 512-sample mode)."""
    if count < 1:
        raise ConfigurationError(f"watermark sample count must be >= 1, got {count}")
    rng = make_uniform_source(generator_id, seed)
    return WatermarkPattern(
        samples=_polar_gaussian(rng, count), seed=seed, generator_id=generator_id
    )


def blocks_required(domain: str, wm_total: int, block_size: int) -> int:
    """Blocks one frame must contribute to hold the whole watermark."""
    if domain == "spatial":
        per_block = block_size * block_size
    elif domain == "frequency":
        if block_size != FREQUENCY_BLOCK_SIZE:
            raise ConfigurationError(
                f"frequency embedding requires block size {FREQUENCY_BLOCK_SIZE}"
            )
        per_block = SAMPLES_PER_FREQUENCY_BLOCK
    else:
        raise ConfigurationError(f"unknown domain {domain!r}")
    if wm_total % per_block:
        raise ConfigurationError(
            f"watermark size {wm_total} not divisible by {per_block} samples/block"
        )
    return wm_total // per_block


def _tiles(samples: np.ndarray, m: int):
    """Raster-order m x m tiles of a square watermark; consecutive chunks
    reshaped for a flat pattern."""
    if samples.ndim == 2:
        n = samples.shape[0]
        for ti in range(n // m):
            for tj in range(n // m):
                yield samples[ti * m : (ti + 1) * m, tj * m : (tj + 1) * m]
    else:
        mm = m * m
        for k in range(samples.size // mm):
            yield samples[k * mm : (k + 1) * mm].reshape(m, m)


def _tile_targets(out: np.ndarray, m: int):
    """Write targets matching the _tiles order, for reassembly."""
    yield from _tiles(out, m)


def _check_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise ConfigurationError(f"alpha must be > 0, got {alpha}")


def _block_origin(grid_i: int, grid_j: int, m: int) -> tuple[int, int]:
    return grid_i * m, grid_j * m


def embed_spatial(frame: Frame, wm: WatermarkPattern, blocks, alpha: float, block_size: int) -> Frame:
    """Adds alpha-scaled watermark tiles to the luma of the selected blocks."""
    _check_alpha(alpha)
    m = block_size
    required = blocks_required("spatial", wm.size, m)
    if len(blocks) != required:
        raise CapacityError(f"spatial embedding needs {required} blocks, got {len(blocks)}")
    out = frame.copy()
    for rec, tile in zip(blocks, _tiles(wm.samples, m)):
        oy, ox = rec.origin_y, rec.origin_x
        out.luma[oy : oy + m, ox : ox + m] += alpha * tile
    return out


def extract_spatial(original: Frame, suspect: Frame, manifest: EmbedManifest) -> np.ndarray:
    """Per-block (suspect - original) / alpha, reassembled into the watermark
    shape recorded in the manifest."""
    if manifest.domain != "spatial":
        raise ConfigurationError(f"manifest domain is {manifest.domain!r}, not spatial")
    _check_alpha(manifest.alpha)
    if original.luma.shape != suspect.luma.shape:
        raise ShapeError(
            f"geometry mismatch: {original.luma.shape} vs {suspect.luma.shape}"
        )
    entry = manifest.entry_for(original.index)
    if entry is None:
        raise IntegrityError(f"manifest has no entry for frame {original.index}")
    m = manifest.block_size
    shape = (manifest.wm_side, manifest.wm_side) if manifest.wm_side else (manifest.wm_samples,)
    out = np.zeros(shape, dtype=np.float64)
    targets = _tile_targets(out, m)
    for (gi, gj), target in zip(entry.blocks, targets):
        oy, ox = _block_origin(gi, gj, m)
        diff = suspect.luma[oy : oy + m, ox : ox + m] - original.luma[oy : oy + m, ox : ox + m]
        target[:] = diff / manifest.alpha
    return out


def _frequency_chunks(flat: np.ndarray):
    for k in range(flat.size // SAMPLES_PER_FREQUENCY_BLOCK):
        chunk = flat[k * SAMPLES_PER_FREQUENCY_BLOCK : (k + 1) * SAMPLES_PER_FREQUENCY_BLOCK]
        yield chunk[:4].reshape(2, 2), chunk[4:].reshape(2, 2)


def embed_frequency(frame: Frame, wm: WatermarkPattern, blocks, alpha: float, block_size: int = FREQUENCY_BLOCK_SIZE) -> Frame:
    """Adds alpha-scaled watermark samples to the HL2 and LH2 coefficients of
    each selected block's 2-level decomposition."""
    _check_alpha(alpha)
    required = blocks_required("frequency", wm.size, block_size)
    if len(blocks) != required:
        raise CapacityError(f"frequency embedding needs {required} blocks, got {len(blocks)}")
    m = block_size
    out = frame.copy()
    flat = wm.samples.ravel()
    for rec, (hl_tile, lh_tile) in zip(blocks, _frequency_chunks(flat)):
        oy, ox = rec.origin_y, rec.origin_x
        pyr = fwt2d_block(out.luma[oy : oy + m, ox : ox + m], FREQUENCY_LEVELS)
        subband_view(pyr, "HL2")[:] += alpha * hl_tile
        subband_view(pyr, "LH2")[:] += alpha * lh_tile
        out.luma[oy : oy + m, ox : ox + m] = iwt2d_block(pyr)
    return out


def extract_frequency(original: Frame, suspect: Frame, manifest: EmbedManifest) -> np.ndarray:
    """Transforms both frames' manifest blocks and reads the coefficient
    differences back out of HL2 then LH2, in embedding order."""
    if manifest.domain != "frequency":
        raise ConfigurationError(f"manifest domain is {manifest.domain!r}, not frequency")
    _check_alpha(manifest.alpha)
    if original.luma.shape != suspect.luma.shape:
        raise ShapeError(
            f"geometry mismatch: {original.luma.shape} vs {suspect.luma.shape}"
        )
    entry = manifest.entry_for(original.index)
    if entry is None:
        raise IntegrityError(f"manifest has no entry for frame {original.index}")
    m = manifest.block_size
    flat = np.zeros(manifest.wm_samples, dtype=np.float64)
    for k, (gi, gj) in enumerate(entry.blocks):
        oy, ox = _block_origin(gi, gj, m)
        pyr_o = fwt2d_block(original.luma[oy : oy + m, ox : ox + m], FREQUENCY_LEVELS)
        pyr_s = fwt2d_block(suspect.luma[oy : oy + m, ox : ox + m], FREQUENCY_LEVELS)
        hl = (subband_view(pyr_s, "HL2") - subband_view(pyr_o, "HL2")) / manifest.alpha
        lh = (subband_view(pyr_s, "LH2") - subband_view(pyr_o, "LH2")) / manifest.alpha
        base = k * SAMPLES_PER_FREQUENCY_BLOCK
        flat[base : base + 4] = hl.ravel()
        flat[base + 4 : base + 8] = lh.ravel()
    if manifest.wm_side:
        return flat.reshape(manifest.wm_side, manifest.wm_side)
    return flat


def _region(x) -> np.ndarray:
    return x.luma if isinstance(x, Frame) else np.asarray(x, dtype=np.float64)


def psnr(original, modified) -> float:
    """10*log10(N * max(original)^2 / sum((original-modified)^2)) in dB;
    identical inputs give +inf. The peak is the maximum of the original
    region, so dim regions score differently than a fixed-255 convention."""
    a = _region(original)
    b = _region(modified)
    if a.shape != b.shape:
        raise ShapeError(f"region shapes differ: {a.shape} vs {b.shape}")
    err = a - b
    sse = float(np.dot(err.ravel(), err.ravel()))
    if sse == 0.0:
        return math.inf
    peak = float(a.max())
    if peak == 0.0:
        raise DomainError("PSNR undefined: original region peaks at zero")
    return 10.0 * math.log10(a.size * peak * peak / sse)


def similarity(w_star, w) -> float:
    """Cosine similarity of the flattened patterns, in [-1, 1]."""
    a = (w_star.samples if isinstance(w_star, WatermarkPattern) else np.asarray(w_star, dtype=np.float64)).ravel()
    b = (w.samples if isinstance(w, WatermarkPattern) else np.asarray(w, dtype=np.float64)).ravel()
    if a.shape != b.shape:
        raise ShapeError(f"pattern sizes differ: {a.size} vs {b.size}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise DomainError("similarity undefined for a zero-norm pattern")
    return float(np.clip(float(np.dot(a, b)) / (na * nb), -1.0, 1.0))
