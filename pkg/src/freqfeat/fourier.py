"""2-D DFT/IDFT, spectrum centering, circular cutoff masks, and the
spectral pooling filter family (low/high split and balanced mixing).

Transform convention: unnormalized forward
    Z(u,v) = sum_{x,y} z(x,y) * exp(-2*pi*i*(u*x/H + v*y/W))
with the 1/(H*W) factor on the inverse.  Under this convention the
high-pass complement is a plain spectral subtraction and the one-inverse
mixed form equals the two-inverse form with no scale factors.
"""

from dataclasses import dataclass

import numpy as np

from .core import Mask, Spectrum, Tensor
from .errors import NumericalError, ParameterError, StateError

# Relative ceiling on the imaginary residue of an inverse transform whose
# result must be real; anything larger indicates an asymmetric spectrum.
IMAG_RESIDUE_TOL = 1e-8


@dataclass(frozen=True)
class SpectralMixParams:
    """Balance weight and low-frequency disk radius for spectral mixing."""

    lam: float
    radius: float

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ParameterError(f"lambda must be in [0,1], got {self.lam}")
        if not self.radius > 0.0:
            raise ParameterError(f"radius must be positive, got {self.radius}")


@dataclass(frozen=True)
class CutoffSpec:
    """Cutoff radius as a fraction of the maximum representable radius
    min(H, W) / 2."""

    radius_fraction: float

    def __post_init__(self):
        if not 0.0 < self.radius_fraction <= 1.0:
            raise ParameterError(
                f"radius_fraction must be in (0,1], got {self.radius_fraction}"
            )


def _single_channel(t: Tensor, op: str) -> np.ndarray:
    if t.channels != 1:
        raise ParameterError(f"{op} needs a single-channel tensor, got {t.channels} channels")
    return t.data[0]


def _ifft2_real(z: np.ndarray) -> np.ndarray:
    out = np.fft.ifft2(z)
    residue = float(np.abs(out.imag).max(initial=0.0))
    bound = IMAG_RESIDUE_TOL * (1.0 + float(np.abs(out.real).max(initial=0.0)))
    if residue >= bound:
        raise NumericalError(
            f"inverse transform imaginary residue {residue:.3e} exceeds {bound:.3e}; "
            "spectrum is not conjugate-symmetric"
        )
    return out.real


def dft2(t: Tensor) -> Spectrum:
    """Forward 2-D DFT of a single-channel tensor; result is uncentered."""
    z = _single_channel(t, "dft2")
    return Spectrum(np.fft.fft2(z), centered=False)


def idft2(s: Spectrum) -> Tensor:
    """Inverse 2-D DFT; the spectrum must be uncentered and conjugate
    symmetric (imaginary residue below IMAG_RESIDUE_TOL, relative)."""
    if s.centered:
        raise StateError("idft2 needs an uncentered spectrum; call uncenter first")
    return Tensor(_ifft2_real(s.data)[np.newaxis])


def center(s: Spectrum) -> Spectrum:
    """Cyclic shift moving bin (0,0) to (H//2, W//2)."""
    if s.centered:
        raise StateError("spectrum is already centered")
    return Spectrum(np.fft.fftshift(s.data), centered=True)


def uncenter(s: Spectrum) -> Spectrum:
    """Exact inverse of center()."""
    if not s.centered:
        raise StateError("spectrum is not centered")
    return Spectrum(np.fft.ifftshift(s.data), centered=False)


def radial_mask(height: int, width: int, radius: float) -> Mask:
    """Disk mask on the centered grid: 1 where the Euclidean distance from
    (H//2, W//2) is <= radius (boundary inclusive), else 0."""
    if radius <= 0.0:
        raise ParameterError(f"radius must be positive, got {radius}")
    du = np.arange(height, dtype=np.float64) - height // 2
    dv = np.arange(width, dtype=np.float64) - width // 2
    r2 = du[:, np.newaxis] ** 2 + dv[np.newaxis, :] ** 2
    return Mask((r2 <= radius * radius).astype(np.float64))


def cutoff_mask(height: int, width: int, spec: CutoffSpec) -> Mask:
    """Circular cutoff on the centered grid with radius
    spec.radius_fraction * min(height, width) / 2."""
    radius = spec.radius_fraction * min(height, width) / 2.0
    return radial_mask(height, width, radius)


def _split_channel(z: np.ndarray, mask: np.ndarray):
    g = np.fft.fftshift(np.fft.fft2(z))
    s_lf = g * mask
    low = _ifft2_real(np.fft.ifftshift(s_lf))
    high = _ifft2_real(np.fft.ifftshift(g - s_lf))
    return low, high


def spf_split(t: Tensor, radius: float):
    """Split a tensor into low/high-frequency parts about a centered disk.

    The low part keeps the bins inside the disk of the given radius, the
    high part is the spectral complement; low + high reconstructs the
    input exactly (up to rounding).  Channels are processed independently.
    """
    mask = radial_mask(t.height, t.width, radius).data
    lows, highs = [], []
    for c in range(t.channels):
        low, high = _split_channel(t.data[c], mask)
        lows.append(low)
        highs.append(high)
    return Tensor(np.stack(lows)), Tensor(np.stack(highs))


def spf_mix(t: Tensor, params: SpectralMixParams) -> Tensor:
    """Blend low- and high-frequency content with weight lambda.

    Computed in a single inverse transform: the combination filter
    lam * mask + (1 - lam) * (1 - mask) is applied in the frequency
    domain, which by linearity equals mixing the two separately inverted
    components.  Channels are processed independently.
    """
    mask = radial_mask(t.height, t.width, params.radius).data
    comb = params.lam * mask + (1.0 - params.lam) * (1.0 - mask)

    def one(z):
        g = np.fft.fftshift(np.fft.fft2(z))
        return _ifft2_real(np.fft.ifftshift(g * comb))

    return t.map_channels(one)


# ---------------------------------------------------------------------------
# debugging dumps: a spectrum as a two-channel (re, im) SFT1 tensor
# ---------------------------------------------------------------------------

def spectrum_to_tensor(s: Spectrum) -> Tensor:
    return Tensor(np.stack((s.data.real, s.data.imag)))


def tensor_to_spectrum(t: Tensor, centered: bool = False) -> Spectrum:
    if t.channels != 2:
        raise ParameterError(f"spectrum tensors have 2 channels (re, im), got {t.channels}")
    return Spectrum(t.data[0] + 1j * t.data[1], centered=centered)
