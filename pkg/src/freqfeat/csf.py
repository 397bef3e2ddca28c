"""Contrast-sensitivity analysis.

Two pieces: the analytic Mannos-Sakrison style sensitivity model, and an
empirical harness that low-pass filters a dataset at a sweep of cutoff
frequencies and profiles how any scorer's output degrades, normalized by
the unfiltered score.
"""

import csv as _csv
import os
import subprocess
import tempfile
from dataclasses import dataclass

import numpy as np

from .core import Mask, Tensor, atomic_write, image_write_gray, parallel_map
from .errors import ParameterError, ScorerError
from .fourier import CutoffSpec, _ifft2_real, cutoff_mask
from .svg import line_plot


@dataclass(frozen=True)
class CsfModelParams:
    """Coefficients of the sensitivity curve a*(b + c*f)*exp(-(d*f)**e)."""

    a: float
    b: float
    c: float
    d: float
    e: float

    def __post_init__(self):
        if not self.a > 0:
            raise ParameterError(f"coefficient a must be positive, got {self.a}")
        if not self.e > 0:
            raise ParameterError(f"exponent e must be positive, got {self.e}")


# The widely used band-pass parameterization: the linear term in f gives
# the mid-frequency peak.
CLASSIC = CsfModelParams(a=2.6, b=0.0192, c=0.114, d=0.114, e=1.1)

# Variant with a constant parenthesis (0.192 + 0.114), which decays
# monotonically instead of peaking; kept as a named preset because some
# sources print the formula this way.
PAPER_LITERAL = CsfModelParams(a=2.6, b=0.192 + 0.114, c=0.0, d=0.114, e=1.1)

PRESETS = {"classic": CLASSIC, "paper-literal": PAPER_LITERAL}


def hvs_csf(f, params: CsfModelParams = CLASSIC):
    """Evaluate the sensitivity model at spatial frequency f (scalar or
    array, cycles per degree, f >= 0)."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f < 0):
        raise ParameterError("spatial frequency must be nonnegative")
    out = params.a * (params.b + params.c * f) * np.exp(-((params.d * f) ** params.e))
    return float(out) if out.ndim == 0 else out


def hvs_csf_xy(fx, fy, params: CsfModelParams = CLASSIC):
    """Two-axis form: combine horizontal and vertical frequencies radially."""
    return hvs_csf(np.hypot(fx, fy), params)


# ---------------------------------------------------------------------------
# cutoff filtering
# ---------------------------------------------------------------------------

def bandlimit_mask(t: Tensor, mask: Mask) -> Tensor:
    """Gate each channel's centered spectrum with an explicit binary mask
    and transform back.  The all-ones mask is the exact identity."""
    if (mask.height, mask.width) != (t.height, t.width):
        raise ParameterError(
            f"mask {mask.height}x{mask.width} does not match image {t.height}x{t.width}"
        )
    m = mask.data

    def one(z):
        g = np.fft.fftshift(np.fft.fft2(z)) * m
        return _ifft2_real(np.fft.ifftshift(g))

    return t.map_channels(one)


def bandlimit(t: Tensor, spec: CutoffSpec) -> Tensor:
    """Keep only frequencies within the circular cutoff; channels are
    processed independently and shape is preserved."""
    return bandlimit_mask(t, cutoff_mask(t.height, t.width, spec))


# ---------------------------------------------------------------------------
# sweep harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CsfCurve:
    """Measured sensitivity at each normalized cutoff frequency."""

    points: tuple
    label: str = ""

    def __post_init__(self):
        cutoffs = [p[0] for p in self.points]
        if any(not 0.0 < c <= 1.0 for c in cutoffs):
            raise ParameterError("curve cutoffs must be normalized frequencies in (0,1]")
        if any(b <= a for a, b in zip(cutoffs, cutoffs[1:])):
            raise ParameterError("curve cutoffs must be strictly increasing")
        if not all(np.isfinite(p[1]) and p[1] >= 0.0 for p in self.points):
            raise ParameterError("curve sensitivities must be finite and nonnegative")

    def cutoffs(self):
        return [p[0] for p in self.points]

    def sensitivities(self):
        return [p[1] for p in self.points]

    def write_csv(self, path) -> None:
        with atomic_write(path) as f:
            text = "cutoff,sensitivity\n" + "".join(
                f"{c:.12g},{s:.12g}\n" for c, s in self.points
            )
            f.write(text.encode("ascii"))

    def write_svg(self, path) -> None:
        svg = line_plot(
            self.points,
            xlabel="normalized cutoff frequency",
            ylabel="sensitivity",
            title=self.label or "sensitivity sweep",
        )
        with atomic_write(path) as f:
            f.write(svg.encode("ascii"))


def _check_score(value, what: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not 0.0 <= value <= 1.0:
        raise ScorerError(f"{what} returned {value}, outside [0, 1]")
    return value


def csf_sweep(dataset, scorer, cutoffs, label: str = "") -> CsfCurve:
    """Profile a scorer's frequency sensitivity.

    dataset: sequence of (Tensor, target) pairs.  scorer: callable taking
    (images, targets) and returning a score in [0, 1], deterministic.
    For each cutoff every image is low-pass filtered and rescored;
    sensitivity is score(cutoff) / score(unfiltered).
    """
    dataset = list(dataset)
    if not dataset:
        raise ParameterError("dataset must be nonempty")
    cutoffs = sorted(cutoffs, key=lambda s: s.radius_fraction)
    if not cutoffs:
        raise ParameterError("need at least one cutoff")
    fractions = [s.radius_fraction for s in cutoffs]
    if any(b <= a for a, b in zip(fractions, fractions[1:])):
        raise ParameterError("cutoffs must be distinct")

    images = [t for t, _ in dataset]
    targets = [g for _, g in dataset]
    baseline = _check_score(scorer(images, targets), "scorer (baseline)")
    again = _check_score(scorer(images, targets), "scorer (baseline)")
    if baseline != again:
        raise ScorerError(
            f"scorer is nondeterministic: baseline {baseline!r} vs {again!r}"
        )
    if baseline == 0.0:
        raise ScorerError("baseline score is 0; sensitivities are undefined")

    points = []
    for spec in cutoffs:
        filtered = parallel_map(lambda img: bandlimit(img, spec), images)
        score = _check_score(scorer(filtered, targets), f"scorer (cutoff {spec.radius_fraction})")
        points.append((spec.radius_fraction, score / baseline))
    return CsfCurve(tuple(points), label=label)


# ---------------------------------------------------------------------------
# scorers
# ---------------------------------------------------------------------------

def energy_retention_scorer(images, targets) -> float:
    """Mean fraction of squared-signal energy each image retains relative
    to its target (the unfiltered original)."""
    ratios = []
    for img, ref in zip(images, targets):
        denom = float(np.sum(ref.data ** 2))
        if denom == 0.0:
            raise ScorerError("energy scorer needs nonzero reference images")
        ratios.append(min(float(np.sum(img.data ** 2)) / denom, 1.0))
    return sum(ratios) / len(ratios)


def subprocess_scorer(command):
    """Adapter for out-of-process scorers.

    Returns a scorer that writes the images as 16-bit PGM files
    (img_0000.pgm, ...) into a fresh temp directory, appends that
    directory path to `command`, runs it, and parses one decimal score
    from its stdout.
    """
    command = list(command)

    def scorer(images, targets) -> float:
        with tempfile.TemporaryDirectory(prefix="freqfeat_score.") as tmp:
            for i, img in enumerate(images):
                image_write_gray(img, os.path.join(tmp, f"img_{i:04d}.pgm"), bits=16)
            proc = subprocess.run(
                command + [tmp], stdout=subprocess.PIPE, check=True, text=True
            )
        try:
            return float(proc.stdout.strip().split()[0])
        except (ValueError, IndexError):
            raise ScorerError(
                f"scorer command produced no parseable score: {proc.stdout!r}"
            ) from None

    return scorer


def read_curve_csv(path) -> CsfCurve:
    """Inverse of CsfCurve.write_csv."""
    with open(path, newline="") as f:
        rows = list(_csv.reader(f))
    if not rows or rows[0] != ["cutoff", "sensitivity"]:
        raise ParameterError(f"{path}: expected a 'cutoff,sensitivity' CSV header")
    points = tuple((float(c), float(s)) for c, s in rows[1:])
    return CsfCurve(points)
