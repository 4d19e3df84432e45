"""
测试高斯整数算术
"""

import dataclasses
import itertools

import numpy as np
import pytest

from modules.errors import ArithmeticDomainError, ComponentOverflowError
from modules.zi_core import (
    GaussianInt, additive_character, canonical, canonical_up_to_norm, coprime, divisors, elements_up_to_norm,
    enumerate_residues, euler_phi, factor, factor_unit, gcd, gcd_ext, ideal_divisors, inverse_mod, is_squarefree,
    mobius, norm, parse_gaussian, unit_part, _validate_transversal,
)


def G(text):
    return GaussianInt.of(text)


@pytest.mark.parametrize("z, expected", [("1+i", 2), ("4+i", 17), (0, 0), ("-3i", 9)])
def test_norm(z, expected):
    assert norm(z) == expected


@pytest.mark.parametrize("text, expected", [
    ("4+i", (4, 1)),
    ("-2-3i", (-2, -3)),
    ("5", (5, 0)),
    ("i", (0, 1)),
    ("-7i", (0, -7)),
    ("1+0j", (1, 0)),
])
def test_parse_gaussian(text, expected):
    assert parse_gaussian(text) == GaussianInt(*expected)


def test_parse_gaussian_rejects_garbage():
    with pytest.raises(ArithmeticDomainError):
        parse_gaussian("abc")


def test_str_uses_i_suffix():
    assert str(G("4-i")) == "4-i"
    assert str(G("2i")) == "2i"
    assert str(G(-3)) == "-3"


def test_component_overflow():
    with pytest.raises(ComponentOverflowError):
        GaussianInt(2 ** 31, 0)


def test_of_rejects_non_integral_complex():
    with pytest.raises(ArithmeticDomainError):
        GaussianInt.of(0.5 + 1j)


@pytest.mark.parametrize("z", ["3-2i", "-1-i", "-4", "-5i"])
def test_canonical_associate(z):
    c = canonical(z)
    assert c.re > 0 and c.im >= 0
    assert unit_part(z) * c == G(z)


def test_gcd_ext_even_prime():
    g, x, y = gcd_ext("1+i", 2)
    assert g == G("1+i")
    assert G("1+i") * x + G(2) * y == g


def test_gcd_ext_coprime_rational_primes():
    g, x, y = gcd_ext(3, 5)
    assert g == G(1)
    assert 3 * x + 5 * y == g


def test_gcd_with_zero_is_canonical():
    assert gcd_ext("-2-3i", 0)[0] == canonical("-2-3i")
    assert gcd("6+3i", 0, "3") == G(3)


def test_gcd_ext_zero_zero():
    with pytest.raises(ArithmeticDomainError):
        gcd_ext(0, 0)


def test_gcd_ext_matches_divisor_enumeration():
    for a, b in itertools.product(canonical_up_to_norm(20), repeat=2):
        g = gcd_ext(a, b)[0]
        common = [d for d in ideal_divisors(a) if d.divides(b)]
        assert max(d.norm() for d in common) == g.norm()


@pytest.mark.parametrize("c, size, phi", [("1+i", 2, 1), (2, 4, 2), (1, 1, 1), ("2+i", 5, 4), (3, 9, 8)])
def test_enumerate_residues(c, size, phi):
    system = enumerate_residues(c)
    assert system.size == size
    assert system.phi == phi == euler_phi(c)


def test_residues_of_one_plus_i():
    system = enumerate_residues("1+i")
    assert set(system.classes) == {G(0), G(1)}
    assert system.units == [G(1)]


def test_residue_tables_are_consistent():
    c = G("3+2i")
    system = enumerate_residues(c)
    classes = system.classes
    mul = system.mul_table
    for i, j in [(1, 2), (5, 7), (11, 12), (3, 3)]:
        assert c.divides(classes[i] * classes[j] - classes[mul[i, j]])
    one = system.index(1)
    for i in system.unit_indices:
        assert mul[i, system.inverse_index[i]] == one
    assert np.all(system.inverse_index[~system.unit_mask] == -1)


def test_enumerate_residues_zero():
    with pytest.raises(ArithmeticDomainError):
        enumerate_residues(0)


@pytest.mark.parametrize("n, count", [(1, 4), ("1+i", 8), (2, 12), (5, 16)])
def test_divisors_count(n, count):
    result = divisors(n)
    assert len(result) == count
    assert all(d.divides(n) for d in result)


def test_divisors_of_one_are_units():
    assert set(divisors(1)) == {G(1), G(-1), G("i"), G("-i")}


def test_factor_two():
    assert factor(2) == [(G("1+i"), 2)]
    assert factor_unit(2) == G("-i")


def test_factor_five_splits():
    primes = {p for p, _ in factor(5)}
    assert primes == {canonical("2+i"), canonical("2-i")}
    assert all(e == 1 for _, e in factor(5))


def test_factor_inert_prime():
    assert factor(3) == [(G(3), 1)]


@pytest.mark.parametrize("n", [0, 1, "i"])
def test_factor_rejects_zero_and_units(n):
    with pytest.raises(ArithmeticDomainError):
        factor(n)


def test_factorization_reconstructs_input():
    for n in elements_up_to_norm(200):
        if n.is_unit():
            continue
        product = factor_unit(n)
        for p, e in factor(n):
            product = product * p ** e
        assert product == n


@pytest.mark.parametrize("n, expected", [(1, 1), ("1+i", -1), (2, 0), (5, 1), (3, -1), ("3+3i", 1)])
def test_mobius(n, expected):
    assert mobius(n) == expected


@pytest.mark.parametrize("n, expected", [("1+i", 1), (2, 2), (3, 8), (5, 16)])
def test_euler_phi(n, expected):
    assert euler_phi(n) == expected


def test_is_squarefree():
    assert is_squarefree(15)
    assert not is_squarefree(2)


def test_inverse_mod():
    for c in ["3", "2+i", "4+i", "5"]:
        c = G(c)
        for a in enumerate_residues(c).units:
            assert c.divides(a * inverse_mod(a, c) - 1)


def test_inverse_mod_not_invertible():
    with pytest.raises(ArithmeticDomainError):
        inverse_mod("1+i", 2)


def test_coprime():
    assert coprime(3, "2+i")
    assert not coprime("1+i", 2)
    assert not coprime(0, 0)


def test_additive_character():
    assert additive_character(1, 2) == pytest.approx(-1)
    assert additive_character(1, "1+i") == pytest.approx(-1)
    assert additive_character("2i", 3) == pytest.approx(1)


def test_element_enumeration_counts():
    assert len(elements_up_to_norm(2)) == 8
    assert len(elements_up_to_norm(2, include_zero=True)) == 9
    assert canonical_up_to_norm(5) == [G(1), G("1+i"), G(2), G("1+2i"), G("2+i")]


def test_residue_system_rejects_bad_transversal():
    good = enumerate_residues(3)
    _validate_transversal(good)
    # 宽 9 高 1 的列式横截下标可以往返，但 0 与 3 模 3 同余
    flat = dataclasses.replace(good, width=9, height=1, shift=0, re=np.arange(9), im=np.zeros(9, dtype=np.int64))
    with pytest.raises(AssertionError, match="重复"):
        _validate_transversal(flat)
    shifted = enumerate_residues("2+i")
    with pytest.raises(AssertionError, match="平移"):
        _validate_transversal(dataclasses.replace(shifted, shift=(shifted.shift + 1) % shifted.width))
    with pytest.raises(AssertionError, match="大小"):
        _validate_transversal(dataclasses.replace(good, size=8))
