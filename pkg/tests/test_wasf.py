"""Fusion operator: stage composition against independent oracles,
linearity, shape preservation, and collapse to the pure spectral mix."""

import numpy as np
import pytest

from freqfeat import (DwtConvParams, ParameterError, SpectralMixParams,
                      Tensor, WasfParams, spf_mix, wasf_forward)

from oracles import naive_wasf


def test_identity_params_at_half_lambda_halve_the_input():
    rng = np.random.default_rng(70)
    t = Tensor(rng.standard_normal((1, 16, 16)))
    out = wasf_forward(t, WasfParams.identity(n=2, lam=0.5))
    assert np.abs(out.data - 0.5 * t.data).max() < 1e-10


def test_identity_params_at_lambda_one_is_pure_lowpass():
    rng = np.random.default_rng(71)
    t = Tensor(rng.standard_normal((1, 16, 16)))
    out = wasf_forward(t, WasfParams.identity(n=2, lam=1.0))
    want = spf_mix(t, SpectralMixParams(1.0, 4.0))
    assert np.abs(out.data - want.data).max() < 1e-10


def test_collapses_to_spectral_mix_with_neutral_stages():
    rng = np.random.default_rng(72)
    t = Tensor(rng.standard_normal((2, 12, 14)))
    for lam in (0.0, 0.3, 1.0):
        out = wasf_forward(t, WasfParams.identity(n=1, lam=lam, sep_kernel_len=5))
        want = spf_mix(t, SpectralMixParams(lam, 2.0))
        assert np.abs(out.data - want.data).max() < 1e-10


def test_matches_stage_composition_oracle():
    rng = np.random.default_rng(73)
    z = rng.standard_normal((16, 16))
    params = WasfParams(
        n=2,
        lam=0.7,
        dwt=DwtConvParams(rng.standard_normal((2, 4, 3, 3)) * 0.3,
                          rng.standard_normal((3, 3)) * 0.3),
        sep_row=rng.standard_normal(3) * 0.5,
        sep_col=rng.standard_normal(3) * 0.5,
    )
    got = wasf_forward(Tensor(z[np.newaxis]), params).data[0]
    want = naive_wasf(z, params)
    assert np.abs(got - want).max() < 1e-9


def test_linear_in_input():
    rng = np.random.default_rng(74)
    params = WasfParams(
        n=1,
        lam=0.25,
        dwt=DwtConvParams(rng.standard_normal((1, 4, 3, 3)),
                          rng.standard_normal((3, 3))),
        sep_row=rng.standard_normal(5),
        sep_col=rng.standard_normal(5),
    )
    x = Tensor(rng.standard_normal((1, 10, 10)))
    y = Tensor(rng.standard_normal((1, 10, 10)))
    a, b = -1.25, 0.75
    lhs = wasf_forward(Tensor(a * x.data + b * y.data), params).data
    rhs = a * wasf_forward(x, params).data + b * wasf_forward(y, params).data
    assert np.abs(lhs - rhs).max() < 1e-9 * max(np.abs(rhs).max(), 1.0)


@pytest.mark.parametrize("c,h,w,n", [(1, 8, 8, 1), (3, 16, 20, 3), (2, 9, 33, 2)])
def test_shape_preserved(c, h, w, n):
    rng = np.random.default_rng(75)
    t = Tensor(rng.standard_normal((c, h, w)))
    out = wasf_forward(t, WasfParams.identity(n=n, lam=0.4))
    assert out.shape == t.shape


def test_radius_beyond_nyquist_is_rejected():
    t = Tensor(np.zeros((1, 16, 16)))
    with pytest.raises(ParameterError, match="2\\^4.*16x16"):
        wasf_forward(t, WasfParams.identity(n=4))
    # boundary case: radius 8 on 16x16 is allowed
    wasf_forward(t, WasfParams.identity(n=3))


def test_param_validation():
    with pytest.raises(ParameterError):
        WasfParams.identity(n=0)
    with pytest.raises(ParameterError):
        WasfParams.identity(n=1, lam=1.5)
    with pytest.raises(ParameterError):
        WasfParams.identity(n=1, sep_kernel_len=4)
    with pytest.raises(ParameterError):
        WasfParams(n=1, lam=0.5, dwt=DwtConvParams.identity(),
                   sep_row=np.ones(3), sep_col=np.ones(5))
