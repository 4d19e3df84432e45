"""
测试谱权重与 Bessel 积分
"""

import math

import numpy as np
import pytest

from modules.errors import RegimeError
from modules.spectral_weight import (
    BesselIntegralExpansion, CompositeWeight, G_bound_scan, H_envelope, SpectralWeight, V_decay_scan,
    bessel_integral_H, bump, contour_shift_check, plain_H, weight_probe,
)


@pytest.fixture(scope="module")
def weight():
    return SpectralWeight()


@pytest.mark.parametrize("kwargs", [{"T": 0.5}, {"A_prime": 0}, {"mu": 0.3}])
def test_invalid_weight(kwargs):
    with pytest.raises(RegimeError):
        SpectralWeight(**kwargs)


def test_G_at_zero_is_one(weight):
    t = np.array([0.3, 1.0, 2.5, 7.0])
    assert np.allclose(weight.G(0.0, t), 1.0)


def test_gamma_st_is_even(weight):
    t = np.array([0.4, 1.7, 5.0])
    assert np.allclose(weight.gamma_st(0.6, t), weight.gamma_st(0.6, -t))


def test_polynomial_factors(weight):
    assert float(weight.p_t(0.0).real) == pytest.approx(24.0 ** 2)
    assert float(weight.g_t(0.0).real) == pytest.approx(3.0 ** 32)


def test_h_weight_real_and_even(weight):
    t = np.array([0.2, 1.3, 4.0])
    h = weight.h_weight(t)
    assert np.allclose(h.imag, 0, atol=1e-12 * np.abs(h).max())
    assert np.allclose(h, weight.h_weight(-t))
    assert plain_H(weight) > 0


def test_V_limits(weight):
    assert weight.V(1e-6, 0.5, nodes=2000) == pytest.approx(1.0, abs=1e-6)
    assert abs(weight.V(1e6, 0.5, nodes=2000)) < 1e-6


def test_V_domain(weight):
    with pytest.raises(RegimeError):
        weight.V(0.0, 1.0)
    with pytest.raises(RegimeError):
        SpectralWeight(v=-0.1).V(1.0, 1.0)


def test_V_error_term_shrinks_with_U(weight):
    assert weight.V_error_term(1.0, 2.0, U=8.0) < weight.V_error_term(1.0, 2.0, U=4.0)


def test_V_even_in_t(weight):
    probe = weight_probe(weight, [1.0, 3.0], [0.5, 10.0], [])
    diff = (probe["V"]["V"] - probe["V"]["V_minus_t"]).abs()
    assert (diff < 1e-6).all()
    assert probe["H"].empty
    assert np.allclose(probe["weights"]["G0"], 1.0)


def test_G_and_V_bounds(weight):
    margin = weight.A_prime + 9 / 32 - 0.05
    df = G_bound_scan(weight, [0.0, 1.0, 3.0], [-margin, 0.0, margin])
    assert (df["ratio"] <= 100).all()
    df = V_decay_scan(weight, [0.5, 10.0], [0.0, 1.0])
    assert (df["ratio"] <= 100).all()


def test_G_bound_outside_holomorphy(weight):
    with pytest.raises(RegimeError):
        G_bound_scan(weight, [0.0], [weight.A_prime + 0.5])


def test_H_requires_nonzero(weight):
    with pytest.raises(RegimeError):
        bessel_integral_H(0, weight)


def test_H_is_even(weight):
    z = 0.5 + 0.2j
    assert bessel_integral_H(-z, weight) == pytest.approx(bessel_integral_H(z, weight), rel=1e-8)


def test_H_envelope_shape(weight):
    assert H_envelope(0.5, weight) == pytest.approx(0.5 ** 8)
    assert H_envelope(4.0, weight) == pytest.approx(0.25)


def test_contour_shift_regime(weight):
    with pytest.raises(RegimeError):
        contour_shift_check(2.0, weight)


@pytest.mark.slow
def test_contour_shift(weight):
    res = contour_shift_check(0.5, weight)
    assert res["residual"] < 1e-6
    assert res["kernel_residual"] < 1e-6


def test_bump():
    values = bump(np.array([0.5, 1.0, 1.5, 2.0, 2.5]))
    assert values[2] == pytest.approx(1.0)
    assert values[0] == values[1] == values[3] == values[4] == 0.0


def test_composite_weight_support(weight):
    w = CompositeWeight(weight)
    assert w(0.5, 10.0) == 0j
    assert w(3.0 + 1j, 10.0) == 0j


def test_expansion_order():
    with pytest.raises(RegimeError):
        BesselIntegralExpansion(SpectralWeight(), K=0)
    assert BesselIntegralExpansion(SpectralWeight(T=2.0), K=1).min_radius == pytest.approx(9.0)


def test_expansion_leading_moment(weight):
    expansion = BesselIntegralExpansion(weight, K=1)
    assert expansion.moments[0, 0] == pytest.approx(plain_H(weight), rel=1e-8)
    zeta = 20.0 + 3.0j
    assert complex(expansion.amplitude(zeta)) == pytest.approx(plain_H(weight) / (2 * abs(zeta)), rel=1e-8)


@pytest.mark.slow
def test_expansion_matches_direct_integral(weight):
    zeta = 12.0 + 5.0j
    expansion = BesselIntegralExpansion(weight, K=3)
    direct = bessel_integral_H(zeta, weight)
    assert abs(expansion(zeta) - direct) <= 1e-3 * abs(direct) + 1e-3 * math.fabs(plain_H(weight)) / abs(zeta) ** 2
