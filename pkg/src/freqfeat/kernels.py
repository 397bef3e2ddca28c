"""Hot numeric kernels: depthwise/full 2-D convolution and the Haar
analysis/synthesis step.

Each kernel has a numba @njit loop-nest implementation and a pure-numpy
fallback; dispatch is decided per call via backend.use_numba().  Inputs
are coerced to contiguous float64.  All convolutions are
cross-correlations with zero padding chosen so output size equals input
size ("same"), which requires odd kernel extents.
"""

import numpy as np

from .backend import jit, use_numba
from .errors import ParameterError


def _as_f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def _check_odd_kernel(kh, kw):
    if kh % 2 == 0 or kw % 2 == 0:
        raise ParameterError(f"same-padding convolution needs odd kernel dims, got {kh}x{kw}")


# ---------------------------------------------------------------------------
# single-channel conv, arbitrary dilation
# ---------------------------------------------------------------------------

def _conv2d_loops(x, k, dilation):
    h, w = x.shape
    kh, kw = k.shape
    ch = kh // 2
    cw = kw // 2
    out = np.zeros((h, w), dtype=np.float64)
    for a in range(kh):
        da = dilation * (a - ch)
        i0 = max(0, -da)
        i1 = min(h, h - da)
        for b in range(kw):
            db = dilation * (b - cw)
            j0 = max(0, -db)
            j1 = min(w, w - db)
            kv = k[a, b]
            for i in range(i0, i1):
                for j in range(j0, j1):
                    out[i, j] += kv * x[i + da, j + db]
    return out


_conv2d_jit = jit(_conv2d_loops)


def _conv2d_np(x, k, dilation):
    h, w = x.shape
    kh, kw = k.shape
    ph = dilation * (kh // 2)
    pw = dilation * (kw // 2)
    xp = np.zeros((h + 2 * ph, w + 2 * pw), dtype=np.float64)
    xp[ph:ph + h, pw:pw + w] = x
    out = np.zeros((h, w), dtype=np.float64)
    for a in range(kh):
        for b in range(kw):
            out += k[a, b] * xp[a * dilation:a * dilation + h,
                                b * dilation:b * dilation + w]
    return out


def conv2d_same(x, k, dilation=1):
    """Same-size cross-correlation of a 2-D array with an odd 2-D kernel."""
    x = _as_f64(x)
    k = _as_f64(k)
    if x.ndim != 2 or k.ndim != 2:
        raise ParameterError("conv2d_same expects 2-D input and kernel")
    _check_odd_kernel(*k.shape)
    if dilation < 1:
        raise ParameterError(f"dilation must be >= 1, got {dilation}")
    if use_numba():
        return _conv2d_jit(x, k, dilation)
    return _conv2d_np(x, k, dilation)


# ---------------------------------------------------------------------------
# channel-mixing conv: (C,H,W) x (O,C,kh,kw) -> (O,H,W)
# ---------------------------------------------------------------------------

def _conv2d_multi_loops(x, k, dilation):
    c_in, h, w = x.shape
    c_out = k.shape[0]
    kh = k.shape[2]
    kw = k.shape[3]
    ch = kh // 2
    cw = kw // 2
    out = np.zeros((c_out, h, w), dtype=np.float64)
    for o in range(c_out):
        for c in range(c_in):
            for a in range(kh):
                da = dilation * (a - ch)
                i0 = max(0, -da)
                i1 = min(h, h - da)
                for b in range(kw):
                    db = dilation * (b - cw)
                    j0 = max(0, -db)
                    j1 = min(w, w - db)
                    kv = k[o, c, a, b]
                    for i in range(i0, i1):
                        for j in range(j0, j1):
                            out[o, i, j] += kv * x[c, i + da, j + db]
    return out


_conv2d_multi_jit = jit(_conv2d_multi_loops)


def _conv2d_multi_np(x, k, dilation):
    c_in, h, w = x.shape
    c_out, _, kh, kw = k.shape
    ph = dilation * (kh // 2)
    pw = dilation * (kw // 2)
    xp = np.zeros((c_in, h + 2 * ph, w + 2 * pw), dtype=np.float64)
    xp[:, ph:ph + h, pw:pw + w] = x
    out = np.zeros((c_out, h, w), dtype=np.float64)
    for a in range(kh):
        for b in range(kw):
            patch = xp[:, a * dilation:a * dilation + h,
                       b * dilation:b * dilation + w]
            out += np.tensordot(k[:, :, a, b], patch, axes=(1, 0))
    return out


def conv2d_multi(x, k, dilation=1):
    """Full (channel-mixing) same-size conv: x (C,H,W), k (O,C,kh,kw)."""
    x = _as_f64(x)
    k = _as_f64(k)
    if x.ndim != 3 or k.ndim != 4:
        raise ParameterError("conv2d_multi expects (C,H,W) input and (O,C,kh,kw) kernel")
    if k.shape[1] != x.shape[0]:
        raise ParameterError(
            f"kernel expects {k.shape[1]} input channels, tensor has {x.shape[0]}"
        )
    _check_odd_kernel(k.shape[2], k.shape[3])
    if dilation < 1:
        raise ParameterError(f"dilation must be >= 1, got {dilation}")
    if use_numba():
        return _conv2d_multi_jit(x, k, dilation)
    return _conv2d_multi_np(x, k, dilation)


# ---------------------------------------------------------------------------
# orthonormal Haar step (even-sized input)
# ---------------------------------------------------------------------------

def _haar_fwd_loops(x):
    h2 = x.shape[0] // 2
    w2 = x.shape[1] // 2
    out = np.empty((4, h2, w2), dtype=np.float64)
    for i in range(h2):
        for j in range(w2):
            a = x[2 * i, 2 * j]
            b = x[2 * i, 2 * j + 1]
            c = x[2 * i + 1, 2 * j]
            d = x[2 * i + 1, 2 * j + 1]
            out[0, i, j] = (a + b + c + d) * 0.5
            out[1, i, j] = (a - b + c - d) * 0.5
            out[2, i, j] = (a + b - c - d) * 0.5
            out[3, i, j] = (a - b - c + d) * 0.5
    return out


_haar_fwd_jit = jit(_haar_fwd_loops)


def _haar_fwd_np(x):
    a = x[0::2, 0::2]
    b = x[0::2, 1::2]
    c = x[1::2, 0::2]
    d = x[1::2, 1::2]
    return np.stack((
        (a + b + c + d) * 0.5,
        (a - b + c - d) * 0.5,
        (a + b - c - d) * 0.5,
        (a - b - c + d) * 0.5,
    ))


def _haar_inv_loops(sub):
    h2 = sub.shape[1]
    w2 = sub.shape[2]
    out = np.empty((2 * h2, 2 * w2), dtype=np.float64)
    for i in range(h2):
        for j in range(w2):
            ll = sub[0, i, j]
            lh = sub[1, i, j]
            hl = sub[2, i, j]
            hh = sub[3, i, j]
            out[2 * i, 2 * j] = (ll + lh + hl + hh) * 0.5
            out[2 * i, 2 * j + 1] = (ll - lh + hl - hh) * 0.5
            out[2 * i + 1, 2 * j] = (ll + lh - hl - hh) * 0.5
            out[2 * i + 1, 2 * j + 1] = (ll - lh - hl + hh) * 0.5
    return out


_haar_inv_jit = jit(_haar_inv_loops)


def _haar_inv_np(sub):
    ll, lh, hl, hh = sub
    h2, w2 = ll.shape
    out = np.empty((2 * h2, 2 * w2), dtype=np.float64)
    out[0::2, 0::2] = (ll + lh + hl + hh) * 0.5
    out[0::2, 1::2] = (ll - lh + hl - hh) * 0.5
    out[1::2, 0::2] = (ll + lh - hl - hh) * 0.5
    out[1::2, 1::2] = (ll - lh - hl + hh) * 0.5
    return out


def haar_step(x):
    """One orthonormal Haar analysis step on an even-sized 2-D array.

    Returns a (4, H/2, W/2) stack ordered LL, LH, HL, HH where LH carries
    the horizontal (left-right) differences and HL the vertical ones.
    """
    x = _as_f64(x)
    if x.ndim != 2 or x.shape[0] % 2 or x.shape[1] % 2:
        raise ParameterError(f"haar_step needs an even-sized 2-D array, got {x.shape}")
    if use_numba():
        return _haar_fwd_jit(x)
    return _haar_fwd_np(x)


def haar_unstep(sub):
    """Exact inverse of haar_step; sub is a (4, h, w) subband stack."""
    sub = _as_f64(sub)
    if sub.ndim != 3 or sub.shape[0] != 4:
        raise ParameterError(f"haar_unstep needs a (4,h,w) stack, got {sub.shape}")
    if use_numba():
        return _haar_inv_jit(sub)
    return _haar_inv_np(sub)
