"""
测试 Hecke 特征与 Gauss 和
"""

import math

import numpy as np
import pytest

from modules.characters import (
    admissible_moduli, character_values_report, gauss_sum, is_admissible_modulus, multiplicative_characters,
    principal_character, quadratic_character, root_number,
)
from modules.errors import AdmissibilityError
from modules.zi_core import GaussianInt, enumerate_residues


def test_trivial_character_gauss_sum():
    assert gauss_sum(quadratic_character(1)) == pytest.approx(1)


@pytest.mark.parametrize("q", ["3", "4+i", "1+4i", "5", "7", "3+8i"])
def test_gauss_sum_equals_root_norm(q):
    chi = quadratic_character(q)
    norm = GaussianInt.of(q).norm()
    assert abs(gauss_sum(chi) - math.sqrt(norm)) < 1e-9
    assert abs(root_number(chi) - 1) < 1e-9


@pytest.mark.parametrize("q", ["3", "4+i", "5"])
def test_quadratic_character_is_a_character(q):
    chi = quadratic_character(q)
    assert chi.units_defect() < 1e-12
    assert chi.multiplicativity_defect() < 1e-12
    system = chi.system
    assert set(np.unique(chi.values[system.unit_mask])) <= {-1.0, 1.0}
    assert np.all(chi.values[~system.unit_mask] == 0)


@pytest.mark.parametrize("q", ["1+i", "2+i", "9", "3+3i"])
def test_inadmissible_moduli(q):
    assert not is_admissible_modulus(q)
    with pytest.raises(AdmissibilityError):
        quadratic_character(q)


def test_admissible_moduli_small():
    assert [str(q) for q in admissible_moduli(20)] == ["3", "1+4i", "4+i"]


def test_character_values_report():
    df = character_values_report(["3", "4+i"])
    assert list(df["q"]) == ["3", "4+i"]
    assert df.loc[0, "tau"] == pytest.approx(3.0)
    assert df.loc[1, "tau"] == pytest.approx(math.sqrt(17))
    assert df["epsilon"].map(lambda e: abs(e - 1) < 1e-9).all()
    assert df["pass"].all()


def test_character_values_report_empty():
    df = character_values_report([])
    assert df.empty
    assert "tau" in df.columns


def test_character_values_report_flags_bad_modulus():
    df = character_values_report(["2+i"])
    assert not df.loc[0, "pass"]
    assert df.loc[0, "error"]


@pytest.mark.parametrize("q", ["3", "2+i", "3+2i", "15"])
def test_multiplicative_characters_orthogonality(q):
    chars = multiplicative_characters(q)
    system = enumerate_residues(q)
    assert len(chars) == system.phi
    assert np.allclose(chars[0].values, principal_character(q).values)
    table = np.array([c.values[system.unit_indices] for c in chars])
    gram = table @ table.conj().T
    assert np.allclose(gram, system.phi * np.eye(len(chars)))
    for chi in chars[:5]:
        assert chi.multiplicativity_defect() < 1e-9
