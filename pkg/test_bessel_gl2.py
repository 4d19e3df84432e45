"""
测试 GL2(ℂ) Bessel 核
"""

import mpmath
import numpy as np
import pytest

from modules.bessel_gl2 import (
    BesselOrder, W_series, asymptotic_decomposition, bessel_scan, bound_for_J_mu_m_scan, classical_J,
    derivative_growth_scan, derivative_polynomials, derivative_recurrence_check, hankel_coefficient, hankel_H, kernel_J,
    kernel_J_hankel_form, kernel_J_integral, kernel_J_polar, nongeneric_distance, poisson_bound,
    poisson_bound_scan, spherical_J,
)
from modules.errors import RegimeError


def test_hankel_coefficient():
    assert hankel_coefficient(0.3j, 0) == 1
    # ν = 1/2 时级数在第一项截止
    assert all(abs(hankel_coefficient(0.5, k)) < 1e-15 for k in range(1, 5))
    # 与 (2w)^k 配对，(0,1)/2 = −1/8
    assert hankel_coefficient(0, 1) == pytest.approx(-0.25)


def test_classical_J_at_origin():
    assert classical_J(0, 0) == pytest.approx(1.0)
    assert classical_J(1, 0) == pytest.approx(0.0)


@pytest.mark.parametrize("nu, z", [
    (0, 2.5), (0.5, 1 + 1j), (1.5, 6 - 2j), (0.3 + 0.2j, 3 + 1j),
    (0, 30.0), (1, 25 + 3j), (0.3 + 0.2j, -20 + 5j),
])
def test_classical_J_matches_mpmath(nu, z):
    expected = complex(mpmath.besselj(nu, z))
    assert classical_J(nu, z) == pytest.approx(expected, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("nu, z", [(0, 1.0), (0, 3.0), (0.5, 2.0), (2j, 5.0)])
def test_classical_J_series_path(nu, z):
    expected = complex(mpmath.besselj(nu, z))
    assert classical_J(nu, z, "series") == pytest.approx(expected, rel=1e-10, abs=1e-14)


def test_classical_J_series_known_values():
    assert classical_J(0, 1.0).real == pytest.approx(0.7651976865579666, rel=1e-12)
    assert classical_J(0, 2.5).real == pytest.approx(-0.048383776468197996, rel=1e-10)


def test_kernel_series_matches_hankel_form_small_z():
    z = 0.3 + 0.2j
    assert kernel_J(0.1, 0, z) == pytest.approx(kernel_J_hankel_form(0.1, 0, z), rel=1e-6)


def test_classical_J_backends_agree_near_crossover():
    z = 11.5 + 0.5j
    assert classical_J(0.25, z, "series") == pytest.approx(classical_J(0.25, z, "asymptotic"), rel=1e-8)


def test_unknown_backend():
    with pytest.raises(ValueError):
        classical_J(0, 1.0, "magic")
    with pytest.raises(ValueError):
        kernel_J_polar(0.1j, 0, 1.0, 0.0, "magic")


@pytest.mark.parametrize("kind", [1, 2])
def test_hankel_H_asymptotic(kind):
    assert hankel_H(kind, 1, 40.0) == pytest.approx(hankel_H(kind, 1, 40.0, exact=True), rel=1e-10)


def test_hankel_H_kind():
    with pytest.raises(ValueError):
        hankel_H(3, 0, 10.0)


def test_bessel_order():
    order = BesselOrder(0.25j, 2)
    assert order.classical_orders == (-0.5j - 1, -0.5j + 1)
    assert order(0.4 + 0.1j) == kernel_J(0.25j, 2, 0.4 + 0.1j)


def test_kernel_requires_nonzero_argument():
    with pytest.raises(RegimeError):
        kernel_J(0.1j, 0, 0)
    with pytest.raises(RegimeError):
        kernel_J_hankel_form(0.1j, 0, 0)


@pytest.mark.parametrize("mu, m, z", [
    (0.3j, 0, 0.4 + 0.2j), (0.1 + 0.5j, 1, 0.3 - 0.6j), (0.7j, 2, -0.5 + 0.1j), (0.2j, 0, 3.0 + 1.0j),
])
def test_kernel_matches_hankel_form(mu, m, z):
    assert kernel_J(mu, m, z) == pytest.approx(kernel_J_hankel_form(mu, m, z), rel=1e-6)


def test_kernel_parity():
    z = 0.6 + 0.3j
    assert kernel_J(0.4j, 2, -z) == pytest.approx(kernel_J(0.4j, 2, z), rel=1e-10)
    assert kernel_J(0.4j, 1, -z) == pytest.approx(-kernel_J(0.4j, 1, z), rel=1e-10)


def test_nongeneric_distance():
    dist, mu0 = nongeneric_distance(0.5 + 1e-5, 0)
    assert dist == pytest.approx(4e-5)
    assert mu0 == 0.5
    assert nongeneric_distance(0.3j, 0)[0] > 1


@pytest.mark.parametrize("mu, m", [(0, 0), (0.5, 0), (0.25, 1)])
def test_kernel_at_nongeneric_points(mu, m):
    z = 0.3 + 0.2j
    assert kernel_J(mu, m, z) == pytest.approx(kernel_J_hankel_form(mu, m, z), rel=1e-5)


def test_spherical_kernel():
    z = 0.7 - 0.2j
    assert spherical_J(1.3, z) == kernel_J(1.3j, 0, z)


def test_integral_representation_range():
    with pytest.raises(RegimeError):
        kernel_J_integral(0.2, 0, 1.0, 0.3)
    with pytest.raises(RegimeError):
        kernel_J_integral(0.1j, 0, 0.0, 0.3)


def test_bessel_scan_small_grid():
    df = bessel_scan([0.5], [0.5, 2.0], 4)
    assert len(df) == 8
    assert df["pass"].all()


def test_W_series_leading_term():
    z = 7.0 + 2.0j
    assert W_series(0.8, z, 1) == pytest.approx(1 / (2 * abs(z)))


def test_asymptotic_decomposition_improves_with_K():
    z = 20.0 + 5.0j
    coarse = asymptotic_decomposition(0.5, z, 1)
    fine = asymptotic_decomposition(0.5, z, 3)
    assert fine.residual < coarse.residual
    assert coarse.residual <= 10 * coarse.envelope


def test_asymptotic_decomposition_regime():
    with pytest.raises(RegimeError):
        asymptotic_decomposition(3.0, 5.0, 2)


def test_derivative_polynomials_follow_bessel_equation():
    tables = derivative_polynomials(3)
    p0, p1 = tables[1]
    assert p0.sum() == 0 and p1.tolist() == [[1]]
    p0, p1 = tables[2]
    # z²J″ = −zJ′ + (Y − Z)J
    assert np.polynomial.polynomial.polyval2d(2.0, 3.0, p1) == pytest.approx(-1.0)
    assert np.polynomial.polynomial.polyval2d(2.0, 3.0, p0) == pytest.approx(-1.0)


@pytest.mark.parametrize("alpha, beta", [(1, 0), (0, 1), (1, 1), (2, 0)])
def test_derivative_recurrence(alpha, beta):
    _, _, rel = derivative_recurrence_check(0.5, 2 + 1j, alpha, beta)
    assert rel < 1e-6


def test_derivative_orders_limited():
    with pytest.raises(RegimeError):
        derivative_recurrence_check(0.7, 0.5 + 0.3j, 2, 1)


def test_poisson_bound():
    df = poisson_bound_scan([0, 0.5, 1.5], [1.0, 3 + 1j, 0.5 - 2j])
    assert df["pass"].all()
    with pytest.raises(RegimeError):
        poisson_bound(-1.6, 1.0)


def test_kernel_bound_regimes():
    with pytest.raises(RegimeError):
        bound_for_J_mu_m_scan(0, [0.2], [0], [2.0])
    with pytest.raises(RegimeError):
        bound_for_J_mu_m_scan(1, [0.1j], [0], [0.5])


def test_derivative_growth_scan_skips_t_zero():
    df = derivative_growth_scan([0.0, 0.5], [2 + 1j], orders=((1, 0), (1, 1)))
    assert len(df) == 2
    assert (df["t"] == 0.5).all()
    assert (df["bound"] > 0).all()
