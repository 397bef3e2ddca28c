"""Deterministic synthetic grayscale test images.

Every pattern is a closed-form function of pixel coordinates (plus one
fixed-seed congruential noise image), so regenerating the set always
produces identical files.  Used by the CLI `synth` subcommand and the
reproduction recipe in the README.
"""

import os

import numpy as np

from .core import Tensor, image_write_gray
from .errors import ParameterError


def _grid(size):
    y, x = np.meshgrid(np.arange(size), np.arange(size), indexing="ij")
    return y.astype(np.float64), x.astype(np.float64)


def _lcg_noise(size, seed):
    state = seed & 0xFFFFFFFFFFFFFFFF
    out = np.empty(size * size)
    for i in range(out.size):
        state = (6364136223846793005 * state + 1442695040888963407) & 0xFFFFFFFFFFFFFFFF
        out[i] = state / 2.0 ** 64
    return out.reshape(size, size)


def make_image(index: int, size: int = 64) -> Tensor:
    """Pattern number `index` at the given square size, values in [0,1]."""
    if size < 4:
        raise ParameterError(f"size must be >= 4, got {size}")
    y, x = _grid(size)
    n = size - 1
    kind = index % 8
    if kind == 0:
        arr = x / n
    elif kind == 1:
        arr = y / n
    elif kind == 2:
        arr = ((x.astype(np.int64) + y.astype(np.int64)) % 2).astype(np.float64)
    elif kind == 3:
        arr = 0.5 + 0.5 * np.sin(2 * np.pi * 4 * (x + y) / size)
    elif kind == 4:
        cy = cx = (size - 1) / 2.0
        arr = np.exp(-(((y - cy) ** 2 + (x - cx) ** 2) / (2 * (size / 6.0) ** 2)))
    elif kind == 5:
        cy = cx = (size - 1) / 2.0
        r = np.hypot(y - cy, x - cx)
        arr = 0.5 + 0.5 * np.cos(2 * np.pi * r / 8.0)
    elif kind == 6:
        arr = _lcg_noise(size, seed=1234 + index)
    else:
        cy = cx = (size - 1) / 2.0
        blob = np.exp(-(((y - cy) ** 2 + (x - cx) ** 2) / (2 * (size / 5.0) ** 2)))
        grating = 0.5 + 0.5 * np.sin(2 * np.pi * 6 * x / size)
        arr = 0.5 * blob + 0.5 * grating
    return Tensor(np.clip(arr, 0.0, 1.0)[np.newaxis])


def write_demo_images(outdir, count: int = 8, size: int = 64) -> list:
    """Write `count` patterns as 8-bit PGM files; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    for i in range(count):
        path = os.path.join(outdir, f"demo_{i:02d}.pgm")
        image_write_gray(make_image(i, size), path, bits=8)
        paths.append(path)
    return paths
