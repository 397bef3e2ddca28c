"""Independent reference implementations used as test oracles.

Everything here is written directly from the defining formulas with
explicit loops (or plain numpy arithmetic), sharing no code with the
package under test.
"""

import numpy as np


def naive_dft2(z):
    """Direct-sum forward DFT, O(N^4): one explicit loop per output bin."""
    h, w = z.shape
    x = np.arange(h).reshape(-1, 1)
    y = np.arange(w).reshape(1, -1)
    out = np.empty((h, w), dtype=np.complex128)
    for u in range(h):
        for v in range(w):
            phase = np.exp(-2j * np.pi * (u * x / h + v * y / w))
            out[u, v] = np.sum(z * phase)
    return out


def naive_idft2(Z):
    """Direct-sum inverse DFT with the 1/(H*W) factor."""
    h, w = Z.shape
    u = np.arange(h).reshape(-1, 1)
    v = np.arange(w).reshape(1, -1)
    out = np.empty((h, w), dtype=np.complex128)
    for x in range(h):
        for y in range(w):
            phase = np.exp(2j * np.pi * (u * x / h + v * y / w))
            out[x, y] = np.sum(Z * phase) / (h * w)
    return out


def shift_to_center(Z):
    """Move bin (0,0) to (H//2, W//2) by pure index arithmetic."""
    h, w = Z.shape
    out = np.empty_like(Z)
    for p in range(h):
        for q in range(w):
            out[p, q] = Z[(p - h // 2) % h, (q - w // 2) % w]
    return out


def shift_from_center(Zc):
    h, w = Zc.shape
    out = np.empty_like(Zc)
    for u in range(h):
        for v in range(w):
            out[u, v] = Zc[(u + h // 2) % h, (v + w // 2) % w]
    return out


def disk_mask(h, w, radius):
    """Centered-grid disk, boundary inclusive, by per-bin enumeration."""
    m = np.zeros((h, w))
    for p in range(h):
        for q in range(w):
            du = p - h // 2
            dv = q - w // 2
            if du * du + dv * dv <= radius * radius:
                m[p, q] = 1.0
    return m


def naive_spf_mix(z, lam, radius):
    """Two-inverse-transform spectral mix built only from oracle pieces."""
    g = shift_to_center(naive_dft2(z))
    m = disk_mask(*z.shape, radius)
    low = naive_idft2(shift_from_center(g * m)).real
    high = naive_idft2(shift_from_center(g * (1.0 - m))).real
    return lam * low + (1.0 - lam) * high


def direct_conv2d(x, k, dilation=1):
    """Same-padding cross-correlation via four explicit loops."""
    h, w = x.shape
    kh, kw = k.shape
    out = np.zeros((h, w))
    for i in range(h):
        for j in range(w):
            acc = 0.0
            for a in range(kh):
                for b in range(kw):
                    ii = i + dilation * (a - kh // 2)
                    jj = j + dilation * (b - kw // 2)
                    if 0 <= ii < h and 0 <= jj < w:
                        acc += x[ii, jj] * k[a, b]
            out[i, j] = acc
    return out


def direct_conv_multi(x, k, dilation=1):
    """(C,H,W) x (O,C,kh,kw) same-padding conv via explicit loops."""
    c_in, h, w = x.shape
    c_out = k.shape[0]
    out = np.zeros((c_out, h, w))
    for o in range(c_out):
        for c in range(c_in):
            out[o] += direct_conv2d(x[c], k[o, c], dilation)
    return out


def haar_analysis(x):
    """2x2-block orthonormal Haar from the four-point formulas; input is
    symmetric-padded to even first."""
    if x.shape[0] % 2:
        x = np.vstack([x, x[-1:]])
    if x.shape[1] % 2:
        x = np.hstack([x, x[:, -1:]])
    h2, w2 = x.shape[0] // 2, x.shape[1] // 2
    ll = np.zeros((h2, w2))
    lh = np.zeros((h2, w2))
    hl = np.zeros((h2, w2))
    hh = np.zeros((h2, w2))
    for i in range(h2):
        for j in range(w2):
            a, b = x[2 * i, 2 * j], x[2 * i, 2 * j + 1]
            c, d = x[2 * i + 1, 2 * j], x[2 * i + 1, 2 * j + 1]
            ll[i, j] = (a + b + c + d) / 2
            lh[i, j] = (a - b + c - d) / 2
            hl[i, j] = (a + b - c - d) / 2
            hh[i, j] = (a - b - c + d) / 2
    return ll, lh, hl, hh


def haar_synthesis(ll, lh, hl, hh, shape=None):
    h2, w2 = ll.shape
    out = np.zeros((2 * h2, 2 * w2))
    for i in range(h2):
        for j in range(w2):
            out[2 * i, 2 * j] = (ll[i, j] + lh[i, j] + hl[i, j] + hh[i, j]) / 2
            out[2 * i, 2 * j + 1] = (ll[i, j] - lh[i, j] + hl[i, j] - hh[i, j]) / 2
            out[2 * i + 1, 2 * j] = (ll[i, j] + lh[i, j] - hl[i, j] - hh[i, j]) / 2
            out[2 * i + 1, 2 * j + 1] = (ll[i, j] - lh[i, j] - hl[i, j] + hh[i, j]) / 2
    if shape is not None:
        out = out[: shape[0], : shape[1]]
    return out


def naive_dwtconv(x, subband_kernels, residual_kernel):
    """Cascaded wavelet convolution from oracle pieces: analyze, convolve
    the four subbands, recurse on the convolved LL, synthesize, and add
    the residual spatial convolution of the input."""
    depth = subband_kernels.shape[0]

    def rec(cur, level):
        ll, lh, hl, hh = haar_analysis(cur)
        ll = direct_conv2d(ll, subband_kernels[level, 0])
        lh = direct_conv2d(lh, subband_kernels[level, 1])
        hl = direct_conv2d(hl, subband_kernels[level, 2])
        hh = direct_conv2d(hh, subband_kernels[level, 3])
        if level + 1 < depth:
            ll = rec(ll, level + 1)
        return haar_synthesis(ll, lh, hl, hh, cur.shape)

    return rec(x, 0) + direct_conv2d(x, residual_kernel)


def naive_wasf(x, params):
    """Full fusion-branch forward from oracle pieces only."""
    y = naive_dwtconv(x, params.dwt.subband_kernels, params.dwt.residual_kernel)
    z = naive_spf_mix(y, params.lam, 2.0 ** params.n)
    z = direct_conv2d(z, params.sep_row.reshape(1, -1))
    return direct_conv2d(z, params.sep_col.reshape(-1, 1))


def apply_1x1(k, x):
    """(O,C) x (C,H,W) pointwise projection by explicit channel loops."""
    c_out = k.shape[0]
    out = np.zeros((c_out,) + x.shape[1:])
    for o in range(c_out):
        for c in range(x.shape[0]):
            out[o] += k[o, c] * x[c]
    return out


def naive_pfb_forward(x, w):
    """Complete block forward built only from oracle pieces."""
    branch_outs = []
    for b in w.branches:
        u = apply_1x1(b.proj, x)
        fused = np.stack([naive_wasf(u[c], b.wasf) for c in range(u.shape[0])])
        branch_outs.append(direct_conv_multi(fused, b.dilated, b.dilation))
    cat = np.concatenate(branch_outs, axis=0)
    y = apply_1x1(w.fuse, cat) + apply_1x1(w.shortcut, x)
    if w.bias is not None:
        y = y + w.bias.reshape(-1, 1, 1)
    if w.nonlinearity == "relu":
        y = np.maximum(y, 0.0)
    return y


def bilinear_resize(a, shape):
    """Half-pixel-center bilinear resize via per-pixel loops."""
    in_h, in_w = a.shape
    out_h, out_w = shape
    out = np.zeros(shape)
    for i in range(out_h):
        for j in range(out_w):
            sy = min(max((i + 0.5) * in_h / out_h - 0.5, 0.0), in_h - 1.0)
            sx = min(max((j + 0.5) * in_w / out_w - 0.5, 0.0), in_w - 1.0)
            y0, x0 = int(np.floor(sy)), int(np.floor(sx))
            y1, x1 = min(y0 + 1, in_h - 1), min(x0 + 1, in_w - 1)
            fy, fx = sy - y0, sx - x0
            out[i, j] = (a[y0, x0] * (1 - fy) * (1 - fx)
                         + a[y0, x1] * (1 - fy) * fx
                         + a[y1, x0] * fy * (1 - fx)
                         + a[y1, x1] * fy * fx)
    return out


def lcg_floats(seed, count):
    """Reference congruential stream from the documented recurrence,
    evaluated with exact Python integers."""
    a = 6364136223846793005
    c = 1442695040888963407
    m = 1 << 64
    state = seed % m
    out = []
    for _ in range(count):
        state = (a * state + c) % m
        out.append(-0.1 + 0.2 * (state / 2.0 ** 64))
    return out
