"""Haar transform identities, pyramid reconstruction, and the cascaded
wavelet convolution against hand-composed oracles."""

import numpy as np
import pytest

from freqfeat import (DwtConvParams, ParameterError, Tensor, dwt2,
                      dwt_pyramid, dwtconv, idwt2, idwt_pyramid)

from oracles import haar_analysis, naive_dwtconv


def rand_tensor(rng, h, w, c=1):
    return Tensor(rng.standard_normal((c, h, w)))


def test_constant_2x2_block():
    ll, lh, hl, hh = dwt2(Tensor(np.ones((1, 2, 2))))
    assert ll.data.tolist() == [[[2.0]]]
    for band in (lh, hl, hh):
        assert band.data.tolist() == [[[0.0]]]


def test_2x2_closed_form():
    a, b, c, d = 1.0, 2.0, 3.0, 4.0
    ll, lh, hl, hh = dwt2(Tensor(np.array([[[a, b], [c, d]]])))
    assert ll.data[0, 0, 0] == (a + b + c + d) / 2
    assert lh.data[0, 0, 0] == (a - b + c - d) / 2
    assert hl.data[0, 0, 0] == (a + b - c - d) / 2
    assert hh.data[0, 0, 0] == (a - b - c + d) / 2


def test_analysis_preserves_energy():
    rng = np.random.default_rng(50)
    z = rng.standard_normal((8, 8))
    subs = dwt2(Tensor(z[np.newaxis]))
    e_in = np.sum(z ** 2)
    e_out = sum(np.sum(s.data ** 2) for s in subs)
    assert abs(e_in - e_out) < 1e-10 * e_in


def test_idwt_inverts_dwt():
    rng = np.random.default_rng(51)
    for h, w in [(8, 8), (7, 9), (16, 15)]:
        t = rand_tensor(rng, h, w)
        back = idwt2(*dwt2(t), shape=(h, w))
        assert np.abs(back.data - t.data).max() < 1e-10


def test_zeroing_details_of_constant_changes_nothing():
    t = Tensor(np.full((1, 4, 4), 3.0))
    ll, lh, hl, hh = dwt2(t)
    zero = Tensor(np.zeros_like(lh.data))
    back = idwt2(ll, zero, zero, zero, shape=(4, 4))
    assert np.abs(back.data - t.data).max() < 1e-12


def test_zero_hh_reconstruction_matches_projection_oracle():
    rng = np.random.default_rng(52)
    z = rng.standard_normal((16, 16))
    ll, lh, hl, hh = dwt2(Tensor(z[np.newaxis]))
    zero = Tensor(np.zeros_like(hh.data))
    got = idwt2(ll, lh, hl, zero, shape=(16, 16)).data[0]

    # independent projection: subtract each block's HH basis component
    _, _, _, hh_o = haar_analysis(z)
    want = z.copy()
    for i in range(8):
        for j in range(8):
            comp = hh_o[i, j] * 0.5 * np.array([[1.0, -1.0], [-1.0, 1.0]])
            want[2 * i:2 * i + 2, 2 * j:2 * j + 2] -= comp
    assert np.abs(got - want).max() < 1e-10


def test_subband_shapes_halve_with_ceiling():
    rng = np.random.default_rng(53)
    p = dwt_pyramid(rand_tensor(rng, 37, 21), 3)
    hs = [s.shape[1] for s in p.subbands]
    ws = [s.shape[2] for s in p.subbands]
    assert hs == [19, 10, 5]
    assert ws == [11, 6, 3]


def test_pyramid_depth_one_equals_dwt2():
    rng = np.random.default_rng(54)
    t = rand_tensor(rng, 10, 12)
    p = dwt_pyramid(t, 1)
    for got, want in zip(p.subbands[0], dwt2(t)):
        assert np.array_equal(got, want.data[0])


def test_constant_scales_by_two_per_level():
    c = 1.75
    p = dwt_pyramid(Tensor(np.full((1, 4, 4), c)), 2)
    deepest_ll = p.subbands[-1][0]
    assert deepest_ll.shape == (1, 1)
    assert abs(deepest_ll[0, 0] - c * 2 ** 2) < 1e-12


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
@pytest.mark.parametrize("h,w", [(16, 16), (64, 64), (33, 47), (63, 64)])
def test_pyramid_perfect_reconstruction(depth, h, w):
    rng = np.random.default_rng(55)
    t = rand_tensor(rng, h, w)
    back = idwt_pyramid(dwt_pyramid(t, depth))
    assert np.abs(back.data - t.data).max() < 1e-10


def test_pyramid_depth_too_large():
    with pytest.raises(ParameterError):
        dwt_pyramid(Tensor(np.zeros((1, 8, 8))), 4)


# ---------------------------------------------------------------------------
# cascaded wavelet convolution
# ---------------------------------------------------------------------------

def test_dwtconv_identity_params_is_identity():
    rng = np.random.default_rng(56)
    for h, w in [(8, 8), (13, 11)]:
        t = rand_tensor(rng, h, w, c=2)
        out = dwtconv(t, DwtConvParams.identity(depth=2, kernel_size=3))
        assert np.abs(out.data - t.data).max() <= 1e-10


def test_dwtconv_zero_params_gives_zero():
    rng = np.random.default_rng(57)
    t = rand_tensor(rng, 8, 8)
    params = DwtConvParams(np.zeros((2, 4, 3, 3)), np.zeros((3, 3)))
    assert np.all(dwtconv(t, params).data == 0.0)


def test_dwtconv_depth1_matches_composition_oracle():
    rng = np.random.default_rng(58)
    z = rng.standard_normal((8, 8))
    sub_k = rng.standard_normal((1, 4, 3, 3))
    res_k = rng.standard_normal((3, 3))
    got = dwtconv(Tensor(z[np.newaxis]), DwtConvParams(sub_k, res_k)).data[0]
    want = naive_dwtconv(z, sub_k, res_k)
    assert np.abs(got - want).max() < 1e-9


def test_dwtconv_depth2_matches_composition_oracle_odd_size():
    rng = np.random.default_rng(59)
    z = rng.standard_normal((9, 7))
    sub_k = rng.standard_normal((2, 4, 3, 3)) * 0.5
    res_k = rng.standard_normal((3, 3)) * 0.5
    got = dwtconv(Tensor(z[np.newaxis]), DwtConvParams(sub_k, res_k)).data[0]
    want = naive_dwtconv(z, sub_k, res_k)
    assert np.abs(got - want).max() < 1e-9


def test_dwtconv_is_linear():
    rng = np.random.default_rng(60)
    params = DwtConvParams(rng.standard_normal((2, 4, 3, 3)),
                           rng.standard_normal((3, 3)))
    x = rand_tensor(rng, 12, 12)
    y = rand_tensor(rng, 12, 12)
    a, b = 1.5, -2.25
    lhs = dwtconv(Tensor(a * x.data + b * y.data), params).data
    rhs = a * dwtconv(x, params).data + b * dwtconv(y, params).data
    assert np.abs(lhs - rhs).max() < 1e-9 * max(np.abs(rhs).max(), 1.0)


def test_dwtconv_params_validation():
    with pytest.raises(ParameterError):
        DwtConvParams(np.zeros((2, 3, 3, 3)), np.zeros((3, 3)))  # not 4 bands
    with pytest.raises(ParameterError):
        DwtConvParams(np.zeros((1, 4, 2, 2)), np.zeros((2, 2)))  # even kernel
    with pytest.raises(ParameterError):
        DwtConvParams(np.zeros((1, 4, 3, 3)), np.zeros((5, 5)))  # size mismatch


def test_idwt2_shape_validation():
    ll = Tensor(np.zeros((1, 2, 2)))
    bad = Tensor(np.zeros((1, 3, 2)))
    with pytest.raises(ParameterError):
        idwt2(ll, ll, ll, bad)
