#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs each hot kernel on both backends (forced via FREQFEAT_BACKEND) and
prints best-of-N wall times plus the speedup.  The first numba call per
kernel compiles; a warmup call keeps that out of the timings.

    python3 benchmarks/bench_kernels.py [--size 256] [--repeats 5]
"""

import argparse
import os
import time

import numpy as np

from freqfeat import kernels
from freqfeat.backend import HAVE_NUMBA


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--size", type=int, default=256)
    ap.add_argument("--channels", type=int, default=8)
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    n = args.size
    x = rng.standard_normal((n, n))
    k3 = rng.standard_normal((3, 3))
    k7 = rng.standard_normal((7, 7))
    xm = rng.standard_normal((args.channels, n, n))
    km = rng.standard_normal((args.channels, args.channels, 3, 3))
    sub = rng.standard_normal((4, n // 2, n // 2))

    cases = [
        ("conv2d 3x3", lambda: kernels.conv2d_same(x, k3)),
        ("conv2d 7x7", lambda: kernels.conv2d_same(x, k7)),
        ("conv2d 3x3 dil=7", lambda: kernels.conv2d_same(x, k3, dilation=7)),
        (f"conv2d_multi {args.channels}ch 3x3", lambda: kernels.conv2d_multi(xm, km)),
        ("haar_step", lambda: kernels.haar_step(x)),
        ("haar_unstep", lambda: kernels.haar_unstep(sub)),
    ]

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba not importable; timing the numpy path only")

    print(f"size={n} channels={args.channels} repeats={args.repeats} (best-of)")
    header = f"{'kernel':28s} " + " ".join(f"{b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    for name, fn in cases:
        row = f"{name:28s} "
        times = {}
        for backend in backends:
            os.environ["FREQFEAT_BACKEND"] = backend
            try:
                fn()  # warmup / compile
                times[backend] = best_of(fn, args.repeats)
            finally:
                os.environ.pop("FREQFEAT_BACKEND", None)
            row += f" {times[backend] * 1e3:10.3f}ms"
        if len(backends) == 2:
            row += f" {times['numpy'] / times['numba']:8.2f}x"
        print(row)


if __name__ == "__main__":
    main()
