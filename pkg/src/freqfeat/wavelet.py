"""2-D orthonormal Haar transform, its pyramid cascade, and the
depthwise wavelet convolution used to enhance low-frequency content.

Odd-sized inputs are symmetric-padded to even before each analysis step
and cropped after synthesis, so perfect reconstruction holds for every
input size.  Subband order throughout is LL, LH, HL, HH (LH holds
left-right detail, HL top-bottom detail).
"""

from dataclasses import dataclass

import numpy as np

from .core import Tensor
from .errors import ParameterError
from .kernels import conv2d_same, haar_step, haar_unstep

BANDS = ("LL", "LH", "HL", "HH")


def _pad_even(x: np.ndarray) -> np.ndarray:
    ph = x.shape[0] % 2
    pw = x.shape[1] % 2
    if ph or pw:
        x = np.pad(x, ((0, ph), (0, pw)), mode="symmetric")
    return x


def _dwt2_array(x: np.ndarray) -> np.ndarray:
    """(H,W) -> (4, ceil(H/2), ceil(W/2)) Haar subbands."""
    return haar_step(_pad_even(x))


def _idwt2_array(sub: np.ndarray, shape=None) -> np.ndarray:
    out = haar_unstep(sub)
    if shape is not None:
        out = out[: shape[0], : shape[1]]
    return out


def dwt2(t: Tensor):
    """One Haar analysis level of a single-channel tensor.

    Returns (LL, LH, HL, HH) as single-channel tensors of size
    ceil(H/2) x ceil(W/2).
    """
    if t.channels != 1:
        raise ParameterError(f"dwt2 needs a single-channel tensor, got {t.channels}")
    sub = _dwt2_array(t.data[0])
    return tuple(Tensor(sub[i][np.newaxis]) for i in range(4))


def idwt2(ll: Tensor, lh: Tensor, hl: Tensor, hh: Tensor, shape=None) -> Tensor:
    """Exact inverse of dwt2.

    `shape` crops the synthesis to the original (possibly odd) input size;
    without it the even-sized reconstruction is returned.
    """
    parts = (ll, lh, hl, hh)
    shapes = {p.shape for p in parts}
    if len(shapes) != 1 or any(p.channels != 1 for p in parts):
        raise ParameterError(f"idwt2 needs four equal-shaped single-channel subbands, got {[p.shape for p in parts]}")
    sub = np.stack([p.data[0] for p in parts])
    return Tensor(_idwt2_array(sub, shape)[np.newaxis])


@dataclass(frozen=True)
class WaveletPyramid:
    """Cascaded subband decomposition; level l analyzes level l-1's LL.

    `subbands[l]` is a (4, h_l, w_l) array and `input_shapes[l]` records
    the (pre-padding) shape that level analyzed, which the inverse needs
    to undo odd-size padding.
    """

    subbands: tuple
    input_shapes: tuple

    def __post_init__(self):
        if len(self.subbands) < 1 or len(self.subbands) != len(self.input_shapes):
            raise ParameterError("pyramid needs one subband stack and shape per level")

    @property
    def depth(self) -> int:
        return len(self.subbands)

    def band(self, level: int, name: str) -> np.ndarray:
        return self.subbands[level][BANDS.index(name)]


def dwt_pyramid(t: Tensor, depth: int) -> WaveletPyramid:
    """Cascade `depth` Haar analysis levels over a single-channel tensor."""
    if t.channels != 1:
        raise ParameterError(f"dwt_pyramid needs a single-channel tensor, got {t.channels}")
    if depth < 1:
        raise ParameterError(f"depth must be >= 1, got {depth}")
    if 2 ** depth > min(t.height, t.width):
        raise ParameterError(
            f"depth {depth} too large for {t.height}x{t.width} input "
            f"(needs 2^depth <= min(H, W))"
        )
    levels, shapes = [], []
    cur = t.data[0]
    for _ in range(depth):
        shapes.append(cur.shape)
        sub = _dwt2_array(cur)
        levels.append(sub)
        cur = sub[0]
    return WaveletPyramid(tuple(levels), tuple(shapes))


def idwt_pyramid(p: WaveletPyramid) -> Tensor:
    """Reconstruct the original tensor from a pyramid."""
    cur = p.subbands[-1][0]
    for level in range(p.depth - 1, -1, -1):
        sub = p.subbands[level].copy()
        sub[0] = cur
        cur = _idwt2_array(sub, p.input_shapes[level])
    return Tensor(cur[np.newaxis])


@dataclass(frozen=True)
class DwtConvParams:
    """Kernels for the cascaded wavelet convolution.

    subband_kernels has shape (depth, 4, k, k): one depthwise kernel per
    subband per level, k odd.  residual_kernel (k, k) is applied to the
    input in the spatial domain and added to the synthesis, for a total
    of 4 * depth + 1 kernels.
    """

    subband_kernels: np.ndarray
    residual_kernel: np.ndarray

    def __post_init__(self):
        sk = np.ascontiguousarray(self.subband_kernels, dtype=np.float64)
        rk = np.ascontiguousarray(self.residual_kernel, dtype=np.float64)
        if sk.ndim != 4 or sk.shape[1] != 4 or sk.shape[2] != sk.shape[3]:
            raise ParameterError(f"subband_kernels must be (depth, 4, k, k), got {sk.shape}")
        if sk.shape[0] < 1:
            raise ParameterError("cascade depth must be >= 1")
        if sk.shape[2] % 2 == 0:
            raise ParameterError(f"kernel size must be odd, got {sk.shape[2]}")
        if rk.shape != sk.shape[2:]:
            raise ParameterError(
                f"residual kernel shape {rk.shape} must match subband kernels {sk.shape[2:]}"
            )
        sk.setflags(write=False)
        rk.setflags(write=False)
        object.__setattr__(self, "subband_kernels", sk)
        object.__setattr__(self, "residual_kernel", rk)

    @property
    def depth(self) -> int:
        return self.subband_kernels.shape[0]

    @property
    def kernel_size(self) -> int:
        return self.subband_kernels.shape[2]

    @staticmethod
    def identity(depth: int = 2, kernel_size: int = 3) -> "DwtConvParams":
        """Centered-delta subband kernels and a zero residual: the
        resulting dwtconv is the identity map."""
        delta = np.zeros((kernel_size, kernel_size))
        delta[kernel_size // 2, kernel_size // 2] = 1.0
        sub = np.broadcast_to(delta, (depth, 4, kernel_size, kernel_size)).copy()
        return DwtConvParams(sub, np.zeros((kernel_size, kernel_size)))


def _dwtconv_channel(x: np.ndarray, params: DwtConvParams) -> np.ndarray:
    def cascade(cur, level):
        sub = _dwt2_array(cur)
        conv = np.stack([
            conv2d_same(sub[i], params.subband_kernels[level, i]) for i in range(4)
        ])
        if level + 1 < params.depth:
            conv[0] = cascade(conv[0], level + 1)
        return _idwt2_array(conv, cur.shape)

    return cascade(x, 0) + conv2d_same(x, params.residual_kernel)


def dwtconv(t: Tensor, params: DwtConvParams) -> Tensor:
    """Cascaded depthwise wavelet convolution.

    Each level analyzes the running LL, convolves all four subbands with
    that level's kernels, recurses on the convolved LL, then synthesizes
    bottom-up; the residual spatial convolution of the input is added last.
    Channels are processed independently; output shape equals input shape.
    """
    return t.map_channels(lambda x: _dwtconv_channel(x, params))
