#!/usr/bin/env python3
"""Compare the compiled kernel backend against the pure-numpy fallback.

Two workloads dominate the pipeline's runtime: the one-at-a-time block
matching descent and the per-block 2-level 9/7 lifting transform. Both
backends are driven through the same call sequence; results are checked
for agreement before timings are reported.

Run:  python benchmarks/bench_kernels.py [--frames 256] [--blocks 4096]
"""

import argparse
import time

import numpy as np

from vidmark._kernels import _pykernels

try:
    from vidmark._kernels import _native
except ImportError:
    _native = None


def time_best(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def motion_field_workload(impl, ref, cur, m=8, rng_px=7):
    """The raster-order search loop of compute_motion_field, kernel calls only."""
    h, w = ref.shape
    gh, gw = h // m, w // m
    out = []
    for gi in range(gh):
        row = []
        for gj in range(gw):
            dx, dy, dist = impl.mots_descent(cur, ref, gi * m, gj * m, m, 0, 0, rng_px)
            row.append((dx, dy, dist))
        out.append(row)
    return out


def wavelet_workload(impl, blocks):
    """Forward+inverse 2-level transform of a batch of 8x8 blocks."""
    checks = 0.0
    for block in blocks:
        a = block.copy()
        for size in (8, 4):
            sub = a[:size, :size]
            impl.fwt97_rows(sub)
            impl.fwt97_rows(sub.T)
        for size in (4, 8):
            sub = a[:size, :size]
            impl.iwt97_rows(sub.T)
            impl.iwt97_rows(sub)
        checks += abs(float(a[0, 0] - block[0, 0]))
    return checks


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--frames", type=int, default=256, help="frame side for the motion bench")
    parser.add_argument("--blocks", type=int, default=4096, help="blocks for the wavelet bench")
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    side = args.frames
    ref = rng.integers(0, 256, (side, side)).astype(np.float64)
    cur = np.roll(ref, (2, 1), (0, 1)) + rng.integers(-6, 7, (side, side))
    blocks = rng.uniform(0.0, 255.0, (args.blocks, 8, 8))

    backends = [("python", _pykernels)]
    if _native is not None:
        backends.append(("native", _native))
    else:
        print("note: compiled backend not built; showing fallback only")

    if _native is not None:
        assert motion_field_workload(_pykernels, ref, cur) == motion_field_workload(
            _native, ref, cur
        ), "backends disagree on the motion workload"

    print(f"motion field: {side}x{side} frame pair, 8x8 blocks, range 7")
    times = {}
    for name, impl in backends:
        times[name] = time_best(lambda impl=impl: motion_field_workload(impl, ref, cur))
        print(f"  {name:>7}: {times[name] * 1e3:8.1f} ms")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['native']:.1f}x")

    print(f"wavelet: {args.blocks} blocks, 2-level forward+inverse")
    times = {}
    for name, impl in backends:
        times[name] = time_best(lambda impl=impl: wavelet_workload(impl, blocks))
        print(f"  {name:>7}: {times[name] * 1e3:8.1f} ms")
    if len(times) == 2:
        print(f"  speedup: {times['python'] / times['native']:.1f}x")


if __name__ == "__main__":
    main()
