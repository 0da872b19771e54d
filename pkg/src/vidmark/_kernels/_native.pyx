# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend: scalar-loop twins of the numpy fallback.

Keep this file in lockstep with _pykernels.py; the parity tests assert
identical outputs on integral-valued frames.
"""

import numpy as np

from vidmark._kernels.constants import (
    LIFT_PREDICT_1,
    LIFT_PREDICT_2,
    LIFT_SCALE,
    LIFT_UPDATE_1,
    LIFT_UPDATE_2,
)

cdef double P1 = LIFT_PREDICT_1
cdef double U1 = LIFT_UPDATE_1
cdef double P2 = LIFT_PREDICT_2
cdef double U2 = LIFT_UPDATE_2
cdef double SCALE = LIFT_SCALE
cdef double INV_SCALE = 1.0 / LIFT_SCALE
cdef double INF = float("inf")


def fwt97_rows(double[:, :] a):
    """Forward 9/7 lifting of every row of `a`, in place."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t h = n // 2
    cdef Py_ssize_t i, j
    tmp_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] tmp = tmp_arr
    for i in range(rows):
        for j in range(1, n - 2, 2):
            a[i, j] += P1 * (a[i, j - 1] + a[i, j + 1])
        a[i, n - 1] += 2.0 * P1 * a[i, n - 2]
        for j in range(2, n - 1, 2):
            a[i, j] += U1 * (a[i, j - 1] + a[i, j + 1])
        a[i, 0] += 2.0 * U1 * a[i, 1]
        for j in range(1, n - 2, 2):
            a[i, j] += P2 * (a[i, j - 1] + a[i, j + 1])
        a[i, n - 1] += 2.0 * P2 * a[i, n - 2]
        for j in range(2, n - 1, 2):
            a[i, j] += U2 * (a[i, j - 1] + a[i, j + 1])
        a[i, 0] += 2.0 * U2 * a[i, 1]
        for j in range(h):
            tmp[j] = a[i, 2 * j] * INV_SCALE
            tmp[h + j] = a[i, 2 * j + 1] * SCALE
        for j in range(n):
            a[i, j] = tmp[j]


def iwt97_rows(double[:, :] a):
    """Exact inverse of fwt97_rows, in place."""
    cdef Py_ssize_t rows = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t h = n // 2
    cdef Py_ssize_t i, j
    tmp_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] tmp = tmp_arr
    for i in range(rows):
        for j in range(h):
            tmp[2 * j] = a[i, j] * SCALE
            tmp[2 * j + 1] = a[i, h + j] * INV_SCALE
        for j in range(n):
            a[i, j] = tmp[j]
        for j in range(2, n - 1, 2):
            a[i, j] -= U2 * (a[i, j - 1] + a[i, j + 1])
        a[i, 0] -= 2.0 * U2 * a[i, 1]
        for j in range(1, n - 2, 2):
            a[i, j] -= P2 * (a[i, j - 1] + a[i, j + 1])
        a[i, n - 1] -= 2.0 * P2 * a[i, n - 2]
        for j in range(2, n - 1, 2):
            a[i, j] -= U1 * (a[i, j - 1] + a[i, j + 1])
        a[i, 0] -= 2.0 * U1 * a[i, 1]
        for j in range(1, n - 2, 2):
            a[i, j] -= P1 * (a[i, j - 1] + a[i, j + 1])
        a[i, n - 1] -= 2.0 * P1 * a[i, n - 2]


cdef double _mad(double[:, :] cur, double[:, :] ref,
                 Py_ssize_t cy, Py_ssize_t cx,
                 Py_ssize_t ry, Py_ssize_t rx, Py_ssize_t m) nogil:
    cdef double s = 0.0
    cdef double d
    cdef Py_ssize_t i, j
    for i in range(m):
        for j in range(m):
            d = cur[cy + i, cx + j] - ref[ry + i, rx + j]
            s += d if d >= 0.0 else -d
    return s / (m * m)


def block_mad(double[:, :] cur, double[:, :] ref,
              Py_ssize_t cy, Py_ssize_t cx,
              Py_ssize_t ry, Py_ssize_t rx, Py_ssize_t m):
    """Mean absolute difference between two m-square blocks."""
    return _mad(cur, ref, cy, cx, ry, rx, m)


cdef double _eval(double[:, :] cur, double[:, :] ref,
                  Py_ssize_t oy, Py_ssize_t ox, Py_ssize_t m,
                  long dx, long dy, long rng,
                  Py_ssize_t h, Py_ssize_t w) nogil:
    cdef Py_ssize_t ry, rx
    if dx < -rng or dx > rng or dy < -rng or dy > rng:
        return INF
    ry = oy - dy
    rx = ox - dx
    if ry < 0 or rx < 0 or ry + m > h or rx + m > w:
        return INF
    return _mad(cur, ref, oy, ox, ry, rx, m)


def mots_descent(double[:, :] cur, double[:, :] ref,
                 Py_ssize_t oy, Py_ssize_t ox, Py_ssize_t m,
                 long start_dx, long start_dy, long search_range):
    """One-at-a-time descent: horizontal scan to a local minimum, then
    vertical. Returns (dx, dy, distortion)."""
    cdef Py_ssize_t h = ref.shape[0]
    cdef Py_ssize_t w = ref.shape[1]
    cdef long dx = start_dx
    cdef long dy = start_dy
    cdef long step
    cdef double val, plus, minus, nxt

    val = _eval(cur, ref, oy, ox, m, dx, dy, search_range, h, w)
    if val == INF:
        dx = 0
        dy = 0
        val = _eval(cur, ref, oy, ox, m, 0, 0, search_range, h, w)

    plus = _eval(cur, ref, oy, ox, m, dx + 1, dy, search_range, h, w)
    minus = _eval(cur, ref, oy, ox, m, dx - 1, dy, search_range, h, w)
    if plus < val or minus < val:
        step = 1 if plus <= minus else -1
        val = plus if step == 1 else minus
        dx += step
        while True:
            nxt = _eval(cur, ref, oy, ox, m, dx + step, dy, search_range, h, w)
            if nxt < val:
                val = nxt
                dx += step
            else:
                break

    plus = _eval(cur, ref, oy, ox, m, dx, dy + 1, search_range, h, w)
    minus = _eval(cur, ref, oy, ox, m, dx, dy - 1, search_range, h, w)
    if plus < val or minus < val:
        step = 1 if plus <= minus else -1
        val = plus if step == 1 else minus
        dy += step
        while True:
            nxt = _eval(cur, ref, oy, ox, m, dx, dy + step, search_range, h, w)
            if nxt < val:
                val = nxt
                dy += step
            else:
                break

    return dx, dy, val
