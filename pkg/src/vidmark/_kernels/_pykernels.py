"""Pure-numpy kernel backend.

Mirrors vidmark._kernels._native operation for operation. The lifting steps
write only to samples they do not read (predict writes odds, update writes
evens), so the vectorized slice arithmetic here and the scalar loops in the
native backend produce bit-identical results.
"""

import numpy as np

from vidmark._kernels.constants import (
    LIFT_PREDICT_1,
    LIFT_PREDICT_2,
    LIFT_SCALE,
    LIFT_UPDATE_1,
    LIFT_UPDATE_2,
)

_INF = float("inf")


def fwt97_rows(a):
    """Forward 9/7 lifting of every row of `a`, in place.

    Each row of even length n becomes [approx | detail], n/2 samples each.
    Boundaries use whole-sample symmetric extension (x[n] == x[n-2]).
    """
    n = a.shape[1]
    h = n // 2
    a[:, 1 : n - 2 : 2] += LIFT_PREDICT_1 * (a[:, 0 : n - 3 : 2] + a[:, 2 : n - 1 : 2])
    a[:, n - 1] += 2.0 * LIFT_PREDICT_1 * a[:, n - 2]
    a[:, 2 : n - 1 : 2] += LIFT_UPDATE_1 * (a[:, 1 : n - 2 : 2] + a[:, 3:n:2])
    a[:, 0] += 2.0 * LIFT_UPDATE_1 * a[:, 1]
    a[:, 1 : n - 2 : 2] += LIFT_PREDICT_2 * (a[:, 0 : n - 3 : 2] + a[:, 2 : n - 1 : 2])
    a[:, n - 1] += 2.0 * LIFT_PREDICT_2 * a[:, n - 2]
    a[:, 2 : n - 1 : 2] += LIFT_UPDATE_2 * (a[:, 1 : n - 2 : 2] + a[:, 3:n:2])
    a[:, 0] += 2.0 * LIFT_UPDATE_2 * a[:, 1]
    approx = a[:, 0::2] * (1.0 / LIFT_SCALE)
    detail = a[:, 1::2] * LIFT_SCALE
    a[:, :h] = approx
    a[:, h:] = detail


def iwt97_rows(a):
    """Exact inverse of fwt97_rows, in place."""
    n = a.shape[1]
    h = n // 2
    x = np.empty_like(a)
    x[:, 0::2] = a[:, :h] * LIFT_SCALE
    x[:, 1::2] = a[:, h:] * (1.0 / LIFT_SCALE)
    a[:] = x
    a[:, 2 : n - 1 : 2] -= LIFT_UPDATE_2 * (a[:, 1 : n - 2 : 2] + a[:, 3:n:2])
    a[:, 0] -= 2.0 * LIFT_UPDATE_2 * a[:, 1]
    a[:, 1 : n - 2 : 2] -= LIFT_PREDICT_2 * (a[:, 0 : n - 3 : 2] + a[:, 2 : n - 1 : 2])
    a[:, n - 1] -= 2.0 * LIFT_PREDICT_2 * a[:, n - 2]
    a[:, 2 : n - 1 : 2] -= LIFT_UPDATE_1 * (a[:, 1 : n - 2 : 2] + a[:, 3:n:2])
    a[:, 0] -= 2.0 * LIFT_UPDATE_1 * a[:, 1]
    a[:, 1 : n - 2 : 2] -= LIFT_PREDICT_1 * (a[:, 0 : n - 3 : 2] + a[:, 2 : n - 1 : 2])
    a[:, n - 1] -= 2.0 * LIFT_PREDICT_1 * a[:, n - 2]


def block_mad(cur, ref, cy, cx, ry, rx, m):
    """Mean absolute difference between an m-square block of `cur` at
    (cy, cx) and one of `ref` at (ry, rx)."""
    d = cur[cy : cy + m, cx : cx + m] - ref[ry : ry + m, rx : rx + m]
    return float(np.abs(d).sum()) / (m * m)


def mots_descent(cur, ref, oy, ox, m, start_dx, start_dy, search_range):
    """One-at-a-time descent from (start_dx, start_dy): horizontal scan to a
    local minimum, then vertical. Candidates outside the search range or
    displacing the block outside `ref` are never selected.

    The motion vector maps reference to current, so candidate (dx, dy) reads
    the reference block at (oy - dy, ox - dx). Returns (dx, dy, distortion).
    """
    h, w = ref.shape

    def ev(dx, dy):
        if dx < -search_range or dx > search_range:
            return _INF
        if dy < -search_range or dy > search_range:
            return _INF
        ry = oy - dy
        rx = ox - dx
        if ry < 0 or rx < 0 or ry + m > h or rx + m > w:
            return _INF
        return block_mad(cur, ref, oy, ox, ry, rx, m)

    dx, dy = start_dx, start_dy
    val = ev(dx, dy)
    if val == _INF:
        dx, dy = 0, 0
        val = ev(0, 0)

    plus = ev(dx + 1, dy)
    minus = ev(dx - 1, dy)
    if plus < val or minus < val:
        step = 1 if plus <= minus else -1
        val = plus if step == 1 else minus
        dx += step
        while True:
            nxt = ev(dx + step, dy)
            if nxt < val:
                val = nxt
                dx += step
            else:
                break

    plus = ev(dx, dy + 1)
    minus = ev(dx, dy - 1)
    if plus < val or minus < val:
        step = 1 if plus <= minus else -1
        val = plus if step == 1 else minus
        dy += step
        while True:
            nxt = ev(dx, dy + step)
            if nxt < val:
                val = nxt
                dy += step
            else:
                break

    return dx, dy, val
