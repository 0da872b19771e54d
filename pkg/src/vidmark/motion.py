"""Block-matching motion estimation with predicted-start one-at-a-time search.

Motion vectors map the reference frame onto the current frame: the block at
(origin_x, origin_y) in the current frame is compared against the reference
block at (origin_x - dx, origin_y - dy), so a scene that pans right by two
pixels yields mv = (+2, 0).

Blocks are scanned in raster order because each block's search starts from
the average of the vectors already found for its top-left, top and left
neighbours; a motion field is therefore computed single-threaded, while
different frame pairs can be processed concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from vidmark import _kernels as K
from vidmark.errors import BoundsError, ConfigurationError, InsufficientMotionError
from vidmark.video_io import Frame

DEFAULT_SEARCH_RANGE = 7


@dataclass(frozen=True)
class MotionVector:
    dx: int = 0
    dy: int = 0


@dataclass
class BlockRecord:
    grid_i: int
    grid_j: int
    origin_x: int
    origin_y: int
    mv: MotionVector
    distortion: float
    is_motion: bool


@dataclass
class MotionField:
    """Per-block result of matching one frame pair."""

    ref_index: int
    cur_index: int
    block_size: int
    threshold: float
    frame_width: int
    frame_height: int
    records: list[list[BlockRecord]]

    @property
    def grid_height(self) -> int:
        return len(self.records)

    @property
    def grid_width(self) -> int:
        return len(self.records[0]) if self.records else 0

    def blocks(self):
        for row in self.records:
            yield from row

    def motion_blocks(self) -> list[BlockRecord]:
        return [b for b in self.blocks() if b.is_motion]


def _luma(frame) -> np.ndarray:
    return frame.luma if isinstance(frame, Frame) else np.asarray(frame, dtype=np.float64)


def block_distortion(ref, cur, origin_x: int, origin_y: int, size: int, mv: MotionVector) -> float:
    """Mean absolute luma difference between the current block and the
    mv-displaced reference block."""
    ref_l = _luma(ref)
    cur_l = _luma(cur)
    ry = origin_y - mv.dy
    rx = origin_x - mv.dx
    h, w = ref_l.shape
    if ry < 0 or rx < 0 or ry + size > h or rx + size > w:
        raise BoundsError(
            f"displaced block ({rx},{ry})+{size} outside reference frame {w}x{h}"
        )
    return K.block_mad(cur_l, ref_l, origin_y, origin_x, ry, rx, size)


def _round_half_away(v: float) -> int:
    return int(math.floor(v + 0.5)) if v >= 0 else int(math.ceil(v - 0.5))


def _neighbor_mv(records, grid_i: int, grid_j: int) -> MotionVector:
    if grid_i < 0 or grid_j < 0:
        return MotionVector(0, 0)
    rec = records[grid_i][grid_j]
    if rec is None:
        return MotionVector(0, 0)
    return rec.mv if isinstance(rec, BlockRecord) else rec


def predict_initial_mv(field, grid_i: int, grid_j: int, search_range: int = DEFAULT_SEARCH_RANGE) -> MotionVector:
    """Start vector for a block: mean of the top-left, top and left neighbour
    vectors (missing neighbours count as zero, the divisor stays 3), rounded
    half away from zero and clamped to the search range."""
    records = field.records if isinstance(field, MotionField) else field
    neighbors = (
        _neighbor_mv(records, grid_i - 1, grid_j - 1),
        _neighbor_mv(records, grid_i - 1, grid_j),
        _neighbor_mv(records, grid_i, grid_j - 1),
    )
    dx = _round_half_away(sum(n.dx for n in neighbors) / 3.0)
    dy = _round_half_away(sum(n.dy for n in neighbors) / 3.0)
    dx = max(-search_range, min(search_range, dx))
    dy = max(-search_range, min(search_range, dy))
    return MotionVector(dx, dy)


def mots_search(
    ref,
    cur,
    origin_x: int,
    origin_y: int,
    size: int,
    start: MotionVector,
    search_range: int = DEFAULT_SEARCH_RANGE,
) -> tuple[MotionVector, float]:
    """Descend from `start`: +-1 steps along x while the distortion strictly
    decreases (better of the two directions first, ties prefer +1), then the
    same along y. Candidates outside the range or the frame are skipped; an
    unusable start falls back to (0, 0), which is always in bounds."""
    if search_range < 1:
        raise ConfigurationError(f"search range must be >= 1, got {search_range}")
    dx, dy, dist = K.mots_descent(
        _luma(cur), _luma(ref), origin_y, origin_x, size, start.dx, start.dy, search_range
    )
    return MotionVector(dx, dy), dist


def compute_motion_field(
    ref: Frame,
    cur: Frame,
    block_size: int,
    threshold: float,
    search_range: int = DEFAULT_SEARCH_RANGE,
) -> MotionField:
    """Raster-order pass over the block grid: predicted start, then descent;
    a block is a motion block when its post-search distortion reaches the
    threshold."""
    ref_l = _luma(ref)
    cur_l = _luma(cur)
    if ref_l.shape != cur_l.shape:
        raise ConfigurationError(
            f"frame geometry mismatch: {ref_l.shape} vs {cur_l.shape}"
        )
    h, w = cur_l.shape
    if block_size < 1 or h % block_size or w % block_size:
        raise ConfigurationError(
            f"frame {w}x{h} not divisible into {block_size}x{block_size} blocks"
        )

    grid_h = h // block_size
    grid_w = w // block_size
    records: list[list[BlockRecord | None]] = [[None] * grid_w for _ in range(grid_h)]
    for gi in range(grid_h):
        for gj in range(grid_w):
            start = predict_initial_mv(records, gi, gj, search_range)
            oy = gi * block_size
            ox = gj * block_size
            dx, dy, dist = K.mots_descent(
                cur_l, ref_l, oy, ox, block_size, start.dx, start.dy, search_range
            )
            records[gi][gj] = BlockRecord(
                grid_i=gi,
                grid_j=gj,
                origin_x=ox,
                origin_y=oy,
                mv=MotionVector(dx, dy),
                distortion=dist,
                is_motion=dist >= threshold,
            )

    ref_index = ref.index if isinstance(ref, Frame) else -1
    cur_index = cur.index if isinstance(cur, Frame) else -1
    return MotionField(
        ref_index=ref_index,
        cur_index=cur_index,
        block_size=block_size,
        threshold=threshold,
        frame_width=w,
        frame_height=h,
        records=records,
    )


def select_blocks(field: MotionField, count: int) -> list[BlockRecord]:
    """The `count` motion blocks nearest the frame centre, distance ties
    broken by raster order. Raises InsufficientMotionError when the field
    has fewer motion blocks than requested."""
    if count < 1:
        raise ConfigurationError(f"block count must be >= 1, got {count}")
    m = field.block_size

    def dist2(rec: BlockRecord) -> int:
        # squared centre distance scaled by 4 keeps the sort key integral
        cx = 2 * rec.origin_x + m - field.frame_width
        cy = 2 * rec.origin_y + m - field.frame_height
        return cx * cx + cy * cy

    motion = field.motion_blocks()
    if len(motion) < count:
        raise InsufficientMotionError(len(motion), count)
    motion.sort(key=lambda rec: (dist2(rec), rec.grid_i, rec.grid_j))
    return motion[:count]
