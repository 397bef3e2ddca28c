"""Wavelet-adaptive spectral fusion: wavelet-convolution low-frequency
enhancement, then spectral low/high mixing, then a separable depthwise
smoothing pass.
"""

from dataclasses import dataclass

import numpy as np

from .core import Tensor
from .errors import ParameterError
from .fourier import SpectralMixParams, spf_mix
from .kernels import conv2d_same
from .wavelet import DwtConvParams, dwtconv


@dataclass(frozen=True)
class WasfParams:
    """Branch parameters for the fusion operator.

    n sets the low-frequency disk radius to 2**n bins.  The separable
    stage applies a 1 x L then an L x 1 depthwise kernel (L odd); its
    length is configured independently of n because a kernel of length
    2**n would be even.
    """

    n: int
    lam: float
    dwt: DwtConvParams
    sep_row: np.ndarray
    sep_col: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"radius exponent n must be >= 1, got {self.n}")
        if not 0.0 <= self.lam <= 1.0:
            raise ParameterError(f"lambda must be in [0,1], got {self.lam}")
        row = np.ascontiguousarray(self.sep_row, dtype=np.float64).ravel()
        col = np.ascontiguousarray(self.sep_col, dtype=np.float64).ravel()
        if row.size != col.size:
            raise ParameterError(
                f"separable kernels must share one length, got {row.size} and {col.size}"
            )
        if row.size % 2 == 0:
            raise ParameterError(f"separable kernel length must be odd, got {row.size}")
        row.setflags(write=False)
        col.setflags(write=False)
        object.__setattr__(self, "sep_row", row)
        object.__setattr__(self, "sep_col", col)

    @property
    def radius(self) -> float:
        return float(2 ** self.n)

    @property
    def sep_kernel_len(self) -> int:
        return self.sep_row.size

    @staticmethod
    def identity(n: int, lam: float = 0.5, sep_kernel_len: int = 3,
                 dwt: DwtConvParams | None = None) -> "WasfParams":
        """Neutral parameters: identity wavelet stage and delta separable
        kernels, so the operator reduces to the pure spectral mix."""
        delta = np.zeros(sep_kernel_len)
        delta[sep_kernel_len // 2] = 1.0
        return WasfParams(
            n=n,
            lam=lam,
            dwt=dwt if dwt is not None else DwtConvParams.identity(),
            sep_row=delta,
            sep_col=delta.copy(),
        )


def _check_radius(p: WasfParams, height: int, width: int) -> None:
    if p.radius > min(height, width) / 2.0:
        raise ParameterError(
            f"low-frequency radius 2^{p.n} = {int(p.radius)} exceeds the Nyquist "
            f"extent of a {height}x{width} image (max {min(height, width) / 2:g})"
        )


def wasf_forward(t: Tensor, p: WasfParams) -> Tensor:
    """Apply the fusion operator channelwise; output shape == input shape.

    Stage order: wavelet convolution, spectral mix at radius 2**n with
    weight lambda, then the 1 x L and L x 1 depthwise convolutions.
    """
    _check_radius(p, t.height, t.width)
    y = dwtconv(t, p.dwt)
    z = spf_mix(y, SpectralMixParams(p.lam, p.radius))
    row_k = p.sep_row[np.newaxis, :]
    col_k = p.sep_col[:, np.newaxis]
    return z.map_channels(lambda x: conv2d_same(conv2d_same(x, row_k), col_k))
