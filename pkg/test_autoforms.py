"""
测试自守系数
"""

import math

import pytest

from modules.autoforms import (
    A, SatakeCoefficients, coefficient_source, dump_coefficients, eisenstein_coefficient, eisenstein_phi, eta,
    eta_hecke_scan, hecke_relation_scan, kim_sarnak_scan, nu, omega_star, rs_growth_scan, satake_family,
    schur_polynomial, zeta_F, zeta_F_local,
)
from modules.errors import ArithmeticDomainError
from modules.zi_core import GaussianInt, canonical_up_to_norm


def test_eta_counts_divisors_at_half():
    assert eta(1, 0.7) == pytest.approx(1.0)
    assert eta("1+i", 0.5) == pytest.approx(2.0)
    assert eta(5, 0.5) == pytest.approx(4.0)


def test_eta_zero():
    with pytest.raises(ArithmeticDomainError):
        eta(0, 0.5)


def test_eta_hecke_relation():
    df = eta_hecke_scan(30, 0.5 + 1.3j)
    assert not df.empty
    assert df["pass"].all()


@pytest.mark.parametrize("n", ["1+i", "3", "2+i", "5", "3+3i"])
def test_eisenstein_coefficient_is_bounded(n):
    bound = eta(n, 0.5).real
    for t in [0.0, 0.4, 2.5, 11.0]:
        assert abs(eisenstein_coefficient(n, t)) <= bound + 1e-9
    assert eisenstein_coefficient(1, 3.0) == pytest.approx(1.0)


def test_zeta_F_factorization():
    catalan = 0.915965594177219
    assert zeta_F(2) == pytest.approx(math.pi ** 2 / 6 * catalan)
    with pytest.raises(ArithmeticDomainError):
        zeta_F(1)


def test_local_factors():
    assert zeta_F_local(2, 1) == 1
    assert zeta_F_local(2, 3) == pytest.approx(1 / (1 - 9 ** -2))
    assert nu(1) == 1
    assert nu(3) == pytest.approx(10.0)
    assert nu("1+i") == pytest.approx(3.0)


def test_omega_star():
    assert omega_star(0) == 0
    assert omega_star(1.5) > 0
    assert omega_star(1e-3) < omega_star(0.5)


def test_eisenstein_phi_scales_with_eta():
    s = 0.5 + 2.0j
    base = eisenstein_phi(1, s, 3)
    for n in ["2+i", "1+i", "4+i"]:
        assert eisenstein_phi(n, s, 3) == pytest.approx(base * eta(n, s), rel=1e-9)


def test_eisenstein_phi_domain():
    with pytest.raises(ArithmeticDomainError):
        eisenstein_phi(3, 0.7, 3)
    with pytest.raises(ArithmeticDomainError):
        eisenstein_phi(1, 0.7, 3, "2+i")


@pytest.mark.parametrize("a, b", [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (3, 2)])
def test_schur_dimension(a, b):
    assert schur_polynomial(a, b, (1, 1, 1)) == pytest.approx((a + 1) * (b + 1) * (a + b + 2) / 2)


def test_trivial_satake_coefficients():
    trivial = SatakeCoefficients()
    assert A(1, 1, trivial) == 1
    assert A(3, 1, trivial) == pytest.approx(3)
    assert A(2, 1, trivial) == pytest.approx(6)
    assert A("1+i", "1+i", trivial) == pytest.approx(8)


def test_A_rejects_zero():
    with pytest.raises(ArithmeticDomainError):
        A(0, 1, satake_family(1))


def test_archimedean_bound():
    with pytest.raises(ArithmeticDomainError):
        SatakeCoefficients(mu=0.3)


def test_satake_parameters():
    tempered = satake_family(4)
    wild = satake_family(4, tempered=False)
    for p in ["1+i", "3", "2+i", "7"]:
        assert abs(tempered.alpha(p)) == pytest.approx(1.0)
        alpha = wild.alpha(p)
        assert alpha.imag == 0
        assert abs(math.log(alpha.real)) <= 7 / 32 * math.log(GaussianInt.of(p).norm()) + 1e-12
    assert tempered.alpha("2+i") == tempered.alpha("1-2i")


@pytest.mark.parametrize("tempered", [True, False])
def test_hecke_relations_and_self_duality(tempered):
    df = hecke_relation_scan(satake_family(3, tempered), 25)
    assert df["pass"].all()


def test_coefficients_are_unit_invariant():
    coeffs = satake_family(2)
    assert coeffs("3+2i", 3) == pytest.approx(coeffs("-2+3i", -3))


def test_kim_sarnak_tempered():
    df = kim_sarnak_scan(satake_family(9), 30)
    assert (df["ratio"] <= 1 + 1e-9).all()
    assert df["pass"].all()


def test_rs_growth_scan_shape():
    df = rs_growth_scan(satake_family(1), [2.0, 3.0, 4.0, 5.0])
    assert list(df["X"]) == [2.0, 3.0, 4.0, 5.0]
    assert df["sum"].is_monotonic_increasing
    assert df["slope"].nunique() == 1


def test_dump_coefficients_trivial():
    df = dump_coefficients(SatakeCoefficients(), 2.0)
    assert list(df["n"]) == [str(n) for n in canonical_up_to_norm(4)]
    assert list(df["A"]) == pytest.approx([1.0, 3.0, 6.0])


def test_coefficient_source_zero():
    source = coefficient_source(satake_family(1))
    assert source(GaussianInt.of(0)) == 0.0
    assert source(GaussianInt.of(1)) == 1.0
