"""
测试 Voronoi 侧特征和管线
"""

import numpy as np
import pytest

from modules.autoforms import bi_coefficient_source, satake_family
from modules.charsum_pipeline import (
    PipelineParams, SubsumParams, admissible_grid, bilinear_reduction_report, detection_identity_check,
    envelope_decay_check, final_subsum, geometric_sum, lemma_TeV_check, pipeline_grid_check,
    random_detection_array, synthetic_coefficients,
)
from modules.config import SUITE_DEFAULTS
from modules.errors import ArithmeticDomainError, CostGuardError
from modules.zi_core import GaussianInt


def G(text):
    return GaussianInt.of(text)


def flat_weight(z, lam):
    return 1.0


@pytest.fixture(scope="module")
def bi_coeffs():
    return bi_coefficient_source(satake_family(1))


def test_derived_quantities():
    p = PipelineParams.derive(3, "1+i", 1, "3+3i", "1+i", 1, 1)
    assert p.r == G("1+i")
    assert p.c2 == G(3)
    assert p.delta0 == G("1+i")
    assert p.delta_prime.is_unit()
    assert p.c_prime == G(3)
    assert p.r_prime.is_unit()
    assert p.c2_prime is None
    assert p.vanishes


@pytest.mark.parametrize("args", [
    (3, 1, 2, 3, 3, 1, 1),
    (3, 2, 1, 3, 3, 1, 1),
    (3, 1, 1, "2+i", 1, 1, 1),
    (3, 1, 1, 3, "1+i", 1, 1),
    (3, 1, 1, 0, 1, 1, 1),
])
def test_invalid_params(args):
    with pytest.raises(ArithmeticDomainError):
        PipelineParams.derive(*args)


def test_TeV_golden_case():
    result = lemma_TeV_check(PipelineParams.derive(3, 1, 1, 3, 3, 1, 1))
    assert not result.vanishes
    assert result.passed


def test_TeV_vanishing_when_delta0_misses_c2():
    result = lemma_TeV_check(PipelineParams.derive(3, "1+i", 1, "3+3i", "1+i", 1, 1))
    assert result.vanishes
    assert result.rhs == 0
    assert result.passed


def test_TeV_requires_delta_coprime_to_q():
    with pytest.raises(ArithmeticDomainError):
        lemma_TeV_check(PipelineParams.derive(3, 3, 1, 9, 3, 1, 1))


def test_pipeline_grid_small():
    grid = admissible_grid(3, 18, 2, ["1", "1+i"])
    assert grid
    assert all(p.q.divides(p.c) and p.n1.divides(p.c1) for p in grid)
    df = pipeline_grid_check(grid)
    assert df["pass"].all()
    assert df["vanishes"].any() and not df["vanishes"].all()


@pytest.mark.parametrize("q, max_c_norm", [
    ("4+i", 50),
    pytest.param("3", 50, marks=pytest.mark.slow),
])
def test_pipeline_grid_over_moduli_and_twists(q, max_c_norm):
    grid = admissible_grid(q, max_c_norm, 5, ["1", "1+i"])
    df = pipeline_grid_check(grid)
    assert len(df) == len(grid) > 0
    assert df["epsilon"].nunique() == 2
    # N(δ) ≤ 5 且与 q 互素的无平方因子元：1, 1+i 与 5 的两个素因子
    assert df["delta"].nunique() == 4
    assert df["pass"].all()


def test_T_sum_cost_guard():
    with pytest.raises(CostGuardError):
        lemma_TeV_check(PipelineParams.derive(3, 1, 1, "6+6i", "6+6i", 1, 1))


@pytest.mark.parametrize("c", ["1", "1+i", "3", "2+i", "2+2i", "3+3i"])
def test_detection_identity(c):
    rng = np.random.default_rng(3)
    for _ in range(5):
        F = random_detection_array(30, rng)
        a = G((int(rng.integers(-3, 4)), int(rng.integers(-3, 4))))
        lhs, rhs, diff = detection_identity_check(c, F, a)
        assert diff < 1e-9 * (1 + abs(lhs))


def test_detection_empty_array():
    assert detection_identity_check(3, {}, 1) == (0j, 0j, 0.0)


def test_geometric_sum_zero_coefficients():
    result = geometric_sum(3, 1, 1, lambda n: 0.0, 4.0, 81, flat_weight)
    assert result.value == 0
    assert result.tail_bound == 0


def test_geometric_sum_empty_support():
    coeffs = synthetic_coefficients(10)
    result = geometric_sum(3, 1, 1, coeffs, 0.3, 81, flat_weight)
    assert result.value == 0


def test_geometric_sum_envelope():
    coeffs = synthetic_coefficients(64, np.random.default_rng(1))
    result = geometric_sum(3, 1, 1, coeffs, 4.0, 81, flat_weight)
    # q | c 且 N(c) ≤ 81：c = 3r，N(r) ≤ 9
    assert len(result.contributions) == 28
    assert envelope_decay_check(result.contributions)
    assert result.tail_bound > 0


def test_geometric_sum_guards():
    coeffs = synthetic_coefficients(10)
    with pytest.raises(CostGuardError):
        geometric_sum(3, 1, 1, coeffs, 4.0, 10_000, flat_weight)
    with pytest.raises(ArithmeticDomainError):
        geometric_sum(3, 1, 2, coeffs, 4.0, 81, flat_weight)
    with pytest.raises(ArithmeticDomainError):
        geometric_sum(3, 3, 1, coeffs, 4.0, 81, flat_weight)


def test_synthetic_coefficients_unit_invariant():
    coeffs = synthetic_coefficients(50, np.random.default_rng(5))
    n = G("3+2i")
    assert coeffs(n) == coeffs(n * G("i")) == coeffs(-n)
    assert coeffs(G(0)) == 0
    assert coeffs(G(10)) == 0


def test_subsum_params_divisibility():
    with pytest.raises(ArithmeticDomainError):
        SubsumParams.of(3, 1, 1, "2+i", 1, 1, 1, 3)


def test_final_subsum_empty_window(bi_coeffs):
    params = SubsumParams.of(3, 1, 1, "2+i", 1, 1, 1, 1)
    result = final_subsum(params, bi_coeffs, flat_weight, 100.0, 1.0, 0.5)
    assert result.value == 0
    assert result.terms == 0


def test_final_subsum_zero_coefficients():
    params = SubsumParams.of(3, 1, 1, "2+i", 1, 1, 1, 1)
    result = final_subsum(params, lambda n1, n2: 0.0, flat_weight, 100.0, 1.0, 2.0)
    assert result.value == 0


@pytest.mark.parametrize("case", SUITE_DEFAULTS["pipeline-verify"]["bilinear_cases"])
def test_bilinear_reduction(case, bi_coeffs):
    keys = ("q", "epsilon", "delta0", "delta_prime", "g", "n1", "r", "s")
    params = SubsumParams.of(*(case[k] for k in keys))
    report = bilinear_reduction_report(params, bi_coeffs, case["N"], case["D2"], case["N2"])
    assert report.residual < 1e-6 * (1 + abs(report.bilinear))
    assert report.bilinear != 0
