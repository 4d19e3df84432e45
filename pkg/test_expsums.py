"""
测试指数和与特征和
"""

import cmath
import itertools

import numpy as np
import pytest

from modules.characters import multiplicative_characters, principal_character, quadratic_character
from modules.errors import AdmissibilityError, ArithmeticDomainError
from modules.expsums import (
    bilinear_sum, ci_g, ci_H, ci_Hr, coefficient_table, g_bound_scan, kloosterman,
    kloosterman_twisted_multiplicativity, ramanujan, selberg_kuznetsov_check, weil_bound_scan,
)
from modules.zi_core import GaussianInt, canonical_up_to_norm, enumerate_residues, euler_phi


def G(text):
    return GaussianInt.of(text)


def e_re(num: GaussianInt, den: GaussianInt) -> complex:
    return cmath.exp(2j * cmath.pi * (complex(num) / complex(den)).real)


def brute_kloosterman(n1, n2, c):
    """逐个枚举单位剩余并搜索逆元"""
    n1, n2, c = G(n1), G(n2), G(c)
    units = enumerate_residues(c).units
    total = 0j
    for a in units:
        a_inv = next(b for b in units if c.divides(a * b - 1))
        total += e_re(n1 * a + n2 * a_inv, c)
    return total


def test_kloosterman_even_prime():
    assert kloosterman(1, 1, "1+i") == pytest.approx(1.0)


@pytest.mark.parametrize("c", ["1+i", "3", "2+i", "3+2i", "2+2i"])
def test_kloosterman_degenerate(c):
    assert kloosterman(0, 0, c) == pytest.approx(euler_phi(c))


@pytest.mark.parametrize("n1, n2, c", [
    (1, 1, "2+i"), ("1+i", 3, "3"), ("2-i", "i", "3+2i"), (2, "1+2i", "4+i"), (1, 1, "2+2i"),
])
def test_kloosterman_matches_enumeration(n1, n2, c):
    brute = brute_kloosterman(n1, n2, c)
    assert abs(brute.imag) < 1e-9
    assert kloosterman(n1, n2, c) == pytest.approx(brute.real, abs=1e-9)


def test_kloosterman_zero_modulus():
    with pytest.raises(ArithmeticDomainError):
        kloosterman(1, 1, 0)


def test_ramanujan_sums():
    assert ramanujan(0, "3+2i") == pytest.approx(euler_phi("3+2i"))
    assert ramanujan("2+i", 1) == pytest.approx(1.0)
    assert ramanujan(1, "1+i") == pytest.approx(-1.0)
    assert ramanujan(1, 3) == pytest.approx(-1.0)
    assert ramanujan(3, 3) == pytest.approx(8.0)


@pytest.mark.parametrize("c", canonical_up_to_norm(20))
def test_selberg_kuznetsov(c):
    for n1, n2 in itertools.product(canonical_up_to_norm(5), ["1", "i", "1+i", "2"]):
        _, _, diff = selberg_kuznetsov_check(n1, n2, c)
        assert diff < 1e-8


def test_twisted_multiplicativity_requires_coprime_moduli():
    with pytest.raises(ArithmeticDomainError):
        kloosterman_twisted_multiplicativity(1, 1, "1+i", 2)


def test_weil_bound_on_primes():
    df = weil_bound_scan(["3", "2+i", "1+2i", "3+2i", "7"], canonical_up_to_norm(5))
    assert (df["ratio"] <= 1 + 1e-9).all()


def brute_ci_H(w, q):
    w, q = G(w), G(q)
    chi = quadratic_character(q)
    classes = enumerate_residues(q).classes
    return sum(chi(u * v * (u + 1) * (v + 1)) * e_re((u * v - 1) * w, q)
               for u in classes for v in classes)


def test_ci_H_trivial_modulus():
    assert ci_H("2+i", 1) == 1


@pytest.mark.parametrize("w", [0, 1, "1+i", "2-i"])
def test_ci_H_matches_enumeration(w):
    assert ci_H(w, 3) == pytest.approx(brute_ci_H(w, 3), abs=1e-9)


def test_ci_H_depends_on_w_mod_q():
    assert ci_H("1+i", "4+i") == pytest.approx(ci_H(G("1+i") + G("4+i") * G("2-i"), "4+i"), abs=1e-9)


def test_ci_H_strict_rejects_inadmissible():
    with pytest.raises(AdmissibilityError):
        ci_H(1, "2+i")


def test_ci_H_unknown_variant():
    with pytest.raises(ArithmeticDomainError):
        ci_H(1, 3, variant="imag")


def test_ci_Hr_vanishing_clause():
    res = ci_Hr(3, 3, 1, 1, 3)
    assert res.vanishes
    assert res.factored == 0
    assert abs(res.direct) < 1e-9


@pytest.mark.parametrize("variant", ["re", "trace"])
@pytest.mark.parametrize("r, m, m1, m2", [(1, 1, 1, 1), ("1+i", 2, 1, "i"), (1, 3, 1, 1), (2, 1, "1+i", 3)])
def test_ci_Hr_factorization(variant, r, m, m1, m2):
    res = ci_Hr(r, m, m1, m2, 3, variant)
    assert res.residual < 1e-6


def test_ci_g_principal_ceiling():
    q = G("4+i")
    chi0 = principal_character(q)
    phi = euler_phi(q)
    assert abs(ci_g(chi0, chi0)) <= phi ** 2 + 1e-9


def test_ci_g_modulus_mismatch():
    with pytest.raises(ArithmeticDomainError):
        ci_g(principal_character(3), principal_character("4+i"))


def test_g_bound_scan_on_primes():
    df = g_bound_scan(["3", "4+i"])
    assert list(df["characters"]) == [8, 16]
    assert df["pass"].all()
    chars = multiplicative_characters(3)
    assert df.loc[0, "value"] == pytest.approx(max(abs(ci_g(quadratic_character(3), psi)) for psi in chars))


def test_bilinear_sum_empty_tables():
    assert bilinear_sum({}, {G(1): 1.0}, 1, 1, 3, 3) == (0j, 0.0)


def test_bilinear_sum_requires_coprimality():
    with pytest.raises(ArithmeticDomainError):
        bilinear_sum({G(1): 1.0}, {G(1): 1.0}, 3, 1, 3, 3)


def test_bilinear_sum_within_bound():
    rng = np.random.default_rng(7)
    alpha = coefficient_table(2.0, rng)
    beta = coefficient_table(3.0, rng, unimodular=True)
    value, bound = bilinear_sum(alpha, beta, 1, 1, "2+i", 3)
    assert bound > 0
    assert abs(value) <= bound
