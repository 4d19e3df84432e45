"""
自守系数模块
提供 Eisenstein 系数 η(n,s) 与 φ_𝔞(n,s)、Dedekind ζ_F 及其局部因子、
由 Satake 参数生成的合成 GL3 Hecke 系数 A(n₁,n₂)、Hecke 关系与 Rankin–Selberg 增长检查、
连续谱权重 ω⋆(t)
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd

from .config import TOLERANCES
from .errors import ArithmeticDomainError
from .utils import fit_loglog_slope, get_logger
from .zi_core import (
    GaussianInt, GaussianLike, canonical, canonical_up_to_norm, coprime, divisors, factor, gcd,
    mobius, prime_factors,
)

logger = get_logger(__name__)

# Kim–Sarnak 型指数：|A(n₁,n₂)| ≪ |n₁n₂|^{7/16}，|Re μ| ≤ 7/32
KIM_SARNAK_EXPONENT = 7.0 / 16.0
ARCHIMEDEAN_BOUND = 7.0 / 32.0

# L(s, χ₋₄) 的 Dirichlet 特征周期表
_CHI_MINUS_4 = [0, 1, 0, -1]


def eta(n: GaussianLike, s: complex) -> complex:
    """
    η(n, s) = ¼ Σ_{a|n} |n/a²|^{2s−1}，a 取遍元素因子

    Raises:
        ArithmeticDomainError: n = 0
    """
    n = GaussianInt.of(n)
    if not n:
        raise ArithmeticDomainError("η(0, s) 无定义")
    abs_n = math.sqrt(n.norm())
    total = sum((abs_n / a.norm()) ** (2 * s - 1) for a in divisors(n))
    return complex(total) / 4


def eta_hecke_check(n1: GaussianLike, n2: GaussianLike, s: complex) -> Tuple[complex, complex, float]:
    """η(n₁,s)η(n₂,s) 与 ¼ Σ_{d|n₁,d|n₂} η(n₁n₂/d², s) 的比较"""
    n1, n2 = GaussianInt.of(n1), GaussianInt.of(n2)
    lhs = eta(n1, s) * eta(n2, s)
    prod = n1 * n2
    rhs = sum(eta(prod.exact_div(d * d), s) for d in divisors(gcd(n1, n2))) / 4
    return lhs, complex(rhs), abs(lhs - rhs)


def eisenstein_coefficient(n: GaussianLike, t: float) -> float:
    """
    Eisenstein 级数在谱参数 t 处的 Hecke 特征值 η(n, 1/2 + it)

    在单位上取 1，实值，且 |η(n, 1/2+it)| ≤ η(n, 1/2)（理想因子个数）。
    """
    value = eta(n, 0.5 + 1j * t)
    if abs(value.imag) > TOLERANCES["imag_part"] * max(1.0, abs(value)):
        raise AssertionError(f"η({n}, 1/2+{t}i) 虚部过大: {value.imag}")
    return value.real


def zeta_F(s: complex) -> complex:
    """
    ℚ(i) 的 Dedekind ζ 函数 ζ_F(s) = ζ(s)·L(s, χ₋₄)

    Raises:
        ArithmeticDomainError: s = 1 为极点
    """
    s = complex(s)
    if s == 1:
        raise ArithmeticDomainError("ζ_F 在 s = 1 处有极点")
    return complex(mpmath.zeta(s) * mpmath.dirichlet(s, _CHI_MINUS_4))


def zeta_F_local(s: complex, q: GaussianLike) -> complex:
    """ζ_{F,q}(s) = ∏_{(p)|q} (1 − N(p)^{−s})^{−1}，q 为单位时取 1"""
    q = GaussianInt.of(q)
    result = 1.0 + 0.0j
    for p in prime_factors(q):
        result /= 1.0 - p.norm() ** (-complex(s))
    return result


def nu(q: GaussianLike) -> float:
    """ν(q) = N(q)·∏_{(p)|q}(1 + 1/N(p))"""
    q = GaussianInt.of(q)
    result = float(q.norm())
    for p in prime_factors(q):
        result *= 1.0 + 1.0 / p.norm()
    return result


def omega_star(t: float, q: GaussianLike = 1) -> float:
    """
    ω⋆(t) = 2πν(q)|ζ_{F,q}(1+2it)|² / (N(q)²|ζ_F(1+2it)|²)

    t = 0 处 ζ_F 有极点，取极限值 0；t → 0 时 ω⋆(t) ~ (128/π)·ν(q)|ζ_{F,q}(1)|²/N(q)²·t²。
    """
    q = GaussianInt.of(q)
    if t == 0:
        return 0.0
    s = 1 + 2j * t
    local = abs(zeta_F_local(s, q)) ** 2
    return float(2 * math.pi * nu(q) * local / (q.norm() ** 2 * abs(zeta_F(s)) ** 2))


def eisenstein_phi(n: GaussianLike, s: complex, q: GaussianLike = 1, v: GaussianLike = 1) -> complex:
    """
    φ_𝔞(n, s) = 2μ(v)π^{2s}ζ_{F,q}(2s)η(n,s) / (|qv|^{2s}Γ(2s)ζ_F(2s))

    Args:
        n: 与 q 互素的非零元
        s: 复变量
        q: 水平
        v: q 的因子，对应尖点 𝔞

    Raises:
        ArithmeticDomainError: (n, q) ≠ 𝒪 或 v ∤ q
    """
    n, q, v = GaussianInt.of(n), GaussianInt.of(q), GaussianInt.of(v)
    if not n or not coprime(n, q):
        raise ArithmeticDomainError(f"要求 (n, q) = 𝒪: n = {n}, q = {q}")
    if not v.divides(q):
        raise ArithmeticDomainError(f"v = {v} 不整除 q = {q}")
    s = complex(s)
    numerator = 2 * mobius(v) * mpmath.power(mpmath.pi, 2 * s) * zeta_F_local(2 * s, q) * eta(n, s)
    denominator = mpmath.power((q * v).norm(), s) * mpmath.gamma(2 * s) * zeta_F(2 * s)
    return complex(numerator / denominator)


def _complete_homogeneous(k: int, x: Sequence[complex]) -> complex:
    """h_k(x₁, x₂, x₃)，k < 0 时为 0"""
    if k < 0:
        return 0j
    # h_k = Σ_{i+j ≤ k} x₁^i x₂^j x₃^{k−i−j}
    x1, x2, x3 = x
    total = 0j
    for i in range(k + 1):
        for j in range(k - i + 1):
            total += x1 ** i * x2 ** j * x3 ** (k - i - j)
    return total


def schur_polynomial(a: int, b: int, x: Sequence[complex]) -> complex:
    """
    s_{(a+b, b, 0)}(x₁, x₂, x₃) = h_{a+b}h_b − h_{a+b+1}h_{b−1}（Jacobi–Trudi，第三行为 0）
    """
    return (_complete_homogeneous(a + b, x) * _complete_homogeneous(b, x)
            - _complete_homogeneous(a + b + 1, x) * _complete_homogeneous(b - 1, x))


@lru_cache(maxsize=65536)
def _local_coefficient(seed: Optional[int], tempered: bool, p: GaussianInt, a: int, b: int) -> float:
    alpha = _satake_parameter(seed, tempered, p)
    return schur_polynomial(a, b, (alpha, 1.0, 1.0 / alpha)).real


@lru_cache(maxsize=None)
def _satake_parameter(seed: Optional[int], tempered: bool, p: GaussianInt) -> complex:
    if seed is None:
        return 1.0 + 0.0j
    rng = np.random.default_rng([int(seed), p.re, p.im])
    if tempered:
        return complex(np.exp(2j * np.pi * rng.random()))
    # 实参数，|log α| ≤ (7/32)·log N(p)，即 |α| ≤ |p|^{7/16}
    return complex(np.exp((2 * rng.random() - 1) * ARCHIMEDEAN_BOUND * math.log(p.norm())))


@dataclass(frozen=True)
class SatakeCoefficients:
    """
    由 Satake 三元组 (α_p, 1, α_p⁻¹) 生成的自对偶 GL3 系数

    seed 为 None 时全部 α_p = 1；tempered 为 True 时 α_p 在单位圆上，
    否则为满足 |log α_p| ≤ (7/32)·log N(p) 的实数。每个素理想的 α_p 由 (seed, p) 确定。
    """

    seed: Optional[int] = None
    tempered: bool = True
    mu: complex = 0.0

    def __post_init__(self):
        if abs(complex(self.mu).real) > ARCHIMEDEAN_BOUND:
            raise ArithmeticDomainError(f"|Re μ| = {abs(complex(self.mu).real)} 超过 7/32")

    def alpha(self, p: GaussianLike) -> complex:
        return _satake_parameter(self.seed, self.tempered, canonical(GaussianInt.of(p)))

    def __call__(self, n1: GaussianLike, n2: GaussianLike = 1) -> float:
        return A(n1, n2, self)


def satake_family(seed: Optional[int], tempered: bool = True, mu: complex = 0.0) -> SatakeCoefficients:
    """按种子构造系数族"""
    return SatakeCoefficients(seed, tempered, mu)


def A(n1: GaussianLike, n2: GaussianLike, coeffs: SatakeCoefficients) -> float:
    """
    A(n₁, n₂) = ∏_p s_{(a+b, b, 0)}(α_p, 1, α_p⁻¹)，a = v_p(n₁)，b = v_p(n₂)

    Raises:
        ArithmeticDomainError: n₁n₂ = 0
    """
    n1, n2 = GaussianInt.of(n1), GaussianInt.of(n2)
    if not n1 or not n2:
        raise ArithmeticDomainError("A(n₁, n₂) 要求 n₁n₂ ≠ 0")
    exponents: Dict[GaussianInt, List[int]] = {}
    if not n1.is_unit():
        for p, e in factor(n1):
            exponents.setdefault(p, [0, 0])[0] = e
    if not n2.is_unit():
        for p, e in factor(n2):
            exponents.setdefault(p, [0, 0])[1] = e
    result = 1.0
    for p, (a, b) in exponents.items():
        result *= _local_coefficient(coeffs.seed, coeffs.tempered, p, a, b)
    return result


def hecke_relation_check(coeffs: SatakeCoefficients, n1: GaussianLike,
                         n2: GaussianLike) -> Tuple[float, float, float]:
    """A(n₁,n₂) 与 ¼ Σ_{d|n₁,d|n₂} μ(d)A(n₁/d,1)A(1,n₂/d) 的比较"""
    n1, n2 = GaussianInt.of(n1), GaussianInt.of(n2)
    lhs = A(n1, n2, coeffs)
    rhs = 0.0
    for d in divisors(gcd(n1, n2)):
        mu = mobius(d)
        if mu:
            rhs += mu * A(n1.exact_div(d), 1, coeffs) * A(1, n2.exact_div(d), coeffs)
    rhs /= 4
    return lhs, rhs, abs(lhs - rhs)


def hecke_relation_scan(coeffs: SatakeCoefficients, max_norm: int) -> pd.DataFrame:
    """
    在 N(n₁n₂) ≤ max_norm 的全部规范对上检查 Hecke 关系与自对偶 A(n₁,n₂) = A(n₂,n₁)

    Returns:
        pd.DataFrame: 列为 n1, n2, lhs, rhs, residual, dual_residual, pass
    """
    rows = []
    elements = canonical_up_to_norm(max_norm)
    for n1 in elements:
        for n2 in canonical_up_to_norm(max_norm // n1.norm()):
            lhs, rhs, diff = hecke_relation_check(coeffs, n1, n2)
            dual = abs(lhs - A(n2, n1, coeffs))
            ok = diff < TOLERANCES["exact"] * (1 + abs(lhs)) and dual < TOLERANCES["exact"] * (1 + abs(lhs))
            rows.append({"n1": str(n1), "n2": str(n2), "lhs": lhs, "rhs": rhs, "residual": diff,
                         "dual_residual": dual, "pass": bool(ok)})
    return pd.DataFrame(rows)


def eta_hecke_scan(max_norm: int, s: complex) -> pd.DataFrame:
    """在 N(n₁n₂) ≤ max_norm 的全部规范对上检查 η 的 Hecke 关系"""
    rows = []
    for n1 in canonical_up_to_norm(max_norm):
        for n2 in canonical_up_to_norm(max_norm // n1.norm()):
            lhs, rhs, diff = eta_hecke_check(n1, n2, s)
            rows.append({"n1": str(n1), "n2": str(n2), "lhs": lhs, "rhs": rhs, "residual": diff,
                         "pass": bool(diff < TOLERANCES["exact"] * (1 + abs(lhs)))})
    return pd.DataFrame(rows)


def _partial_square_sums(values: Dict[GaussianInt, float], X_list: Sequence[float]) -> List[float]:
    # 每个规范元代表 4 个伴随元
    norms = np.array([n.norm() for n in values], dtype=float)
    squares = np.array([abs(v) ** 2 for v in values.values()])
    return [4.0 * float(squares[norms <= X * X].sum()) for X in X_list]


def rs_growth_scan(coeffs: SatakeCoefficients, X_list: Sequence[float]) -> pd.DataFrame:
    """
    Σ_{0<|n|≤X} |A(n,1)|² 的部分和与对数-对数拟合斜率

    Returns:
        pd.DataFrame: 列为 X, sum, slope；slope 为对全部 X 拟合的斜率（每行相同）
    """
    X_list = sorted(float(X) for X in X_list)
    elements = canonical_up_to_norm(int(math.floor(X_list[-1] ** 2)))
    values = {n: A(n, 1, coeffs) for n in elements}
    sums = _partial_square_sums(values, X_list)
    slope = fit_loglog_slope(X_list, sums)
    logger.info(f"Rankin–Selberg 增长: seed={coeffs.seed}, 斜率 {slope:.3f}")
    return pd.DataFrame({"X": X_list, "sum": sums, "slope": [slope] * len(X_list)})


def rs_twisted_scan(coeffs: SatakeCoefficients, a1: GaussianLike, a2: GaussianLike,
                    X_list: Sequence[float]) -> pd.DataFrame:
    """
    Σ_{0<|n|≤X} |A(a₁n, a₂)|² 与 |a₁a₂|^{7/8}·X² 之比

    Returns:
        pd.DataFrame: 列为 a1, a2, X, sum, ratio
    """
    a1, a2 = GaussianInt.of(a1), GaussianInt.of(a2)
    X_list = sorted(float(X) for X in X_list)
    elements = canonical_up_to_norm(int(math.floor(X_list[-1] ** 2)))
    values = {n: A(a1 * n, a2, coeffs) for n in elements}
    sums = _partial_square_sums(values, X_list)
    scale = math.sqrt((a1 * a2).norm()) ** (2 * KIM_SARNAK_EXPONENT)
    return pd.DataFrame({"a1": str(a1), "a2": str(a2), "X": X_list, "sum": sums,
                         "ratio": [s / (scale * X * X) for s, X in zip(sums, X_list)]})


def kim_sarnak_scan(coeffs: SatakeCoefficients, max_norm: int, factor_tol: float = 2.0) -> pd.DataFrame:
    """
    |A(n₁,n₂)| 与 d(n₁,n₂)·|n₁n₂|^{7/16} 之比，d(n₁,n₂) 为平凡 Satake 下的系数（局部表示维数）

    Returns:
        pd.DataFrame: 列为 n1, n2, value, bound, ratio, pass
    """
    trivial = SatakeCoefficients()
    rows = []
    for n1 in canonical_up_to_norm(max_norm):
        for n2 in canonical_up_to_norm(max_norm // n1.norm()):
            value = A(n1, n2, coeffs)
            bound = A(n1, n2, trivial) * math.sqrt((n1 * n2).norm()) ** KIM_SARNAK_EXPONENT
            ratio = abs(value) / bound
            rows.append({"n1": str(n1), "n2": str(n2), "value": value, "bound": bound,
                         "ratio": ratio, "pass": bool(ratio <= factor_tol)})
    return pd.DataFrame(rows)


def dump_coefficients(coeffs: SatakeCoefficients, X: float) -> pd.DataFrame:
    """|n| ≤ X 的规范元上 A(n, 1) 的表"""
    elements = canonical_up_to_norm(int(math.floor(X * X)))
    return pd.DataFrame({"n": [str(n) for n in elements], "norm": [n.norm() for n in elements],
                         "A": [A(n, 1, coeffs) for n in elements]})


def coefficient_source(coeffs: SatakeCoefficients):
    """n ↦ A(1, n)，供几何侧和使用"""
    return lambda n: A(1, n, coeffs) if n else 0.0


def bi_coefficient_source(coeffs: SatakeCoefficients):
    """(n₁, n₂) ↦ A(n₁, n₂)，供最终子和使用"""
    return lambda n1, n2: A(n1, n2, coeffs) if n1 and n2 else 0.0
