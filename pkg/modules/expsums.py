"""
指数和与特征和模块
提供 Kloosterman 和、Ramanujan 和、Selberg–Kuznetsov 恒等式，
以及 Conrey–Iwaniec 型特征和 H(w;q)、H_r(m,m₁,m₂;q)、g(χ,ψ) 与双线性和
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .characters import HeckeCharacter, multiplicative_characters, quadratic_character, quadratic_symbol
from .config import TOLERANCES
from .errors import ArithmeticDomainError
from .utils import get_logger, parallel_map
from .zi_core import (
    ONE, GaussianInt, GaussianLike, ResidueSystem, canonical, coprime, divisors, elements_up_to_norm,
    enumerate_residues, euler_phi, gcd, ideal_divisors, inverse_mod, is_squarefree, mobius,
)

logger = get_logger(__name__)

# H(w;q) 指数的两种解释：e(Re(·)) 与 e(2Re(·)) = e(Tr(·))
CI_VARIANTS = ("re", "trace")


@lru_cache(maxsize=64)
def _roots(n: int) -> np.ndarray:
    """n 次单位根表 e(k/n)"""
    return np.exp(2j * np.pi * np.arange(n) / n)


def _scaled(z: GaussianInt, re: np.ndarray, im: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """向量化计算 z·(re + i·im)"""
    return z.re * re - z.im * im, z.re * im + z.im * re


def kloosterman(n1: GaussianLike, n2: GaussianLike, c: GaussianLike) -> float:
    """
    Kloosterman 和 S(n₁, n₂; c) = Σ*_{a mod c} e(Re((n₁a + n₂ā)/c))

    Args:
        n1, n2: 高斯整数
        c: 非零模

    Returns:
        float: 实值（虚部小于容差后丢弃）

    Raises:
        ArithmeticDomainError: c = 0
    """
    n1, n2, c = GaussianInt.of(n1), GaussianInt.of(n2), GaussianInt.of(c)
    system = enumerate_residues(c)
    units = system.unit_indices
    inverses = system.inverse_index[units]
    x_re, x_im = _scaled(n1, system.re[units], system.im[units])
    y_re, y_im = _scaled(n2, system.re[inverses], system.im[inverses])
    phases = system.phase_numerators(x_re + y_re, x_im + y_im)
    total = complex(np.sum(_roots(system.size)[phases]))
    if abs(total.imag) > TOLERANCES["imag_part"]:
        raise AssertionError(f"S({n1}, {n2}; {c}) 虚部过大: {total.imag}")
    return total.real


def ramanujan(m: GaussianLike, k: GaussianLike) -> float:
    """Ramanujan 和 R(m; k) = S(m, 0; k)"""
    return kloosterman(m, 0, k)


def selberg_kuznetsov_check(n1: GaussianLike, n2: GaussianLike,
                            c: GaussianLike) -> Tuple[float, float, float]:
    """
    检查 S(n₁n₂, 1; c) = ¼ Σ_{d|n₁, d|n₂, d|c} |d|² μ(d) S(n₁/d, n₂/d; c/d)

    d 取遍公因子的全部元素因子（含伴随元），因此有 ¼ 的归一化。

    Returns:
        tuple: (左端, 右端, |差|)
    """
    n1, n2, c = GaussianInt.of(n1), GaussianInt.of(n2), GaussianInt.of(c)
    if not n1 or not n2:
        raise ArithmeticDomainError("n₁n₂ 不能为零")
    lhs = kloosterman(n1 * n2, 1, c)
    rhs = 0.0
    for d in divisors(gcd(n1, n2, c)):
        mu = mobius(d)
        if mu:
            rhs += d.norm() * mu * kloosterman(n1.exact_div(d), n2.exact_div(d), c.exact_div(d))
    rhs /= 4
    return lhs, rhs, abs(lhs - rhs)


def kloosterman_twisted_multiplicativity(n1: GaussianLike, n2: GaussianLike, c1: GaussianLike,
                                         c2: GaussianLike) -> Tuple[float, float, float]:
    """
    (c₁, c₂) = 𝒪 时 S(n₁, n₂; c₁c₂) 与 S(n₁c̄₂², n₂; c₁)·S(n₁c̄₁², n₂; c₂) 的比较

    c̄₂ 为 c₂ 模 c₁ 的逆，c̄₁ 为 c₁ 模 c₂ 的逆。

    Returns:
        tuple: (左端, 右端, |差|)
    """
    n1, n2 = GaussianInt.of(n1), GaussianInt.of(n2)
    c1, c2 = GaussianInt.of(c1), GaussianInt.of(c2)
    if not coprime(c1, c2):
        raise ArithmeticDomainError(f"({c1}, {c2}) 不互素")
    lhs = kloosterman(n1, n2, c1 * c2)
    inv2 = inverse_mod(c2, c1)
    inv1 = inverse_mod(c1, c2)
    rhs = kloosterman(n1 * inv2 * inv2, n2, c1) * kloosterman(n1 * inv1 * inv1, n2, c2)
    return lhs, rhs, abs(lhs - rhs)


def weil_bound_scan(c_list: Sequence[GaussianLike], n_list: Sequence[GaussianLike]) -> pd.DataFrame:
    """
    经验扫描 |S(n₁,n₂;c)| / (d(c)·N((n₁,n₂,c))^{1/2}·N(c)^{1/2})，d(c) 为理想因子个数

    Returns:
        pd.DataFrame: 列为 n1, n2, c, value, bound, ratio
    """
    rows = []
    for c in map(GaussianInt.of, c_list):
        tau = len(ideal_divisors(c))
        for n1 in map(GaussianInt.of, n_list):
            for n2 in map(GaussianInt.of, n_list):
                value = kloosterman(n1, n2, c)
                bound = tau * math.sqrt(gcd(n1, n2, c).norm() * c.norm())
                rows.append({"n1": str(n1), "n2": str(n2), "c": str(c),
                             "value": value, "bound": bound, "ratio": abs(value) / bound})
    return pd.DataFrame(rows)


def _ci_character(q: GaussianInt, strict: bool) -> HeckeCharacter:
    if strict:
        return quadratic_character(q)
    if not is_squarefree(q):
        raise ArithmeticDomainError(f"模 {q} 含平方因子")
    return quadratic_symbol(q)


@lru_cache(maxsize=64)
def _ci_weights(q: GaussianInt, strict: bool = True) -> np.ndarray:
    """
    W[x] = Σ_{uv−1 ≡ x} χ(uv(u+1)(v+1))，按剩余下标存放

    H(w;q) 与 g(χ,ψ) 都是 W 与某个关于 x 的函数的内积。
    """
    system = enumerate_residues(q)
    chi = _ci_character(q, strict)
    mul, add = system.mul_table, system.add_table
    one, minus_one = system.index(ONE), system.index(-ONE)
    u, v = np.meshgrid(np.arange(system.size), np.arange(system.size), indexing="ij")
    uv = mul[u, v]
    arg = mul[mul[uv, add[u, one]], add[v, one]]
    shifted = add[uv, minus_one]
    return np.bincount(shifted.ravel(), weights=chi.values[arg].ravel(), minlength=system.size)


def _ci_phase_matrix(system: ResidueSystem, w_indices: np.ndarray, variant: str) -> np.ndarray:
    if variant not in CI_VARIANTS:
        raise ArithmeticDomainError(f"未知的 H 变体: {variant}")
    prod = system.mul_table[:, w_indices]
    phases = system.phase_numerators(system.re[prod], system.im[prod])
    if variant == "trace":
        phases = np.mod(2 * phases, system.size)
    return _roots(system.size)[phases]


def ci_H(w: GaussianLike, q: GaussianLike, variant: str = "re", strict: bool = True) -> complex:
    """
    H(w; q) = ΣΣ_{u,v mod q} χ(uv(u+1)(v+1)) e(Re((uv−1)w/q))

    Args:
        w: 参数，只依赖于 w mod q
        q: 无平方因子模；q 为单位时按约定返回 1
        variant: "re" 取 e(Re(·))，"trace" 取 e(2Re(·))
        strict: 为 True 时要求 q 满足 χ_q 的可容许条件

    Raises:
        AdmissibilityError: strict 且 q 不可容许
    """
    q = GaussianInt.of(q)
    if q.is_unit():
        return 1.0 + 0.0j
    system = enumerate_residues(q)
    weights = _ci_weights(q, strict)
    column = _ci_phase_matrix(system, np.array([system.index(w)]), variant)[:, 0]
    return complex(np.dot(weights, column))


@lru_cache(maxsize=32)
def ci_H_table(q: GaussianInt, variant: str = "re", strict: bool = True) -> np.ndarray:
    """全部剩余 w mod q 上的 H(w; q)，按剩余下标存放"""
    system = enumerate_residues(q)
    if q.is_unit():
        return np.ones(system.size, dtype=complex)
    weights = _ci_weights(q, strict)
    return weights @ _ci_phase_matrix(system, np.arange(system.size), variant)


@dataclass(frozen=True)
class CIHrResult:
    """H_r 的直接值与分解式值，附带 (h), (k), ℓ"""

    direct: complex
    factored: complex
    h: GaussianInt
    k: GaussianInt
    ell: GaussianInt
    vanishes: bool

    @property
    def residual(self) -> float:
        return abs(self.direct - self.factored)


def ci_Hr_direct(r: GaussianLike, m: GaussianLike, m1: GaussianLike, m2: GaussianLike,
                 q: GaussianLike, variant: str = "re") -> complex:
    """H_r(m, m₁, m₂; q) = ΣΣ_{u,v mod q} χ(v(u+vm₁)(vr−m)(ur+mm₁)) e(Re(um₂/q))"""
    r, m, m1, m2, q = (GaussianInt.of(x) for x in (r, m, m1, m2, q))
    system = enumerate_residues(q)
    if q.is_unit():
        return 1.0 + 0.0j
    chi = _ci_character(q, strict=False)
    mul, add = system.mul_table, system.add_table
    idx = system.index
    u, v = np.meshgrid(np.arange(system.size), np.arange(system.size), indexing="ij")
    factor1 = add[u, mul[v, idx(m1)]]
    factor2 = add[mul[v, idx(r)], idx(-m)]
    factor3 = add[mul[u, idx(r)], idx(m * m1)]
    arg = mul[mul[v, factor1], mul[factor2, factor3]]
    phase_col = _ci_phase_matrix(system, np.array([idx(m2)]), variant)[:, 0]
    return complex(np.sum(chi.values[arg] * phase_col[u]))


def ci_Hr(r: GaussianLike, m: GaussianLike, m1: GaussianLike, m2: GaussianLike,
          q: GaussianLike, variant: str = "re") -> CIHrResult:
    """
    H_r 的直接二重和与分解式

    分解式：(h) = (r, q)，(k) = (mm₁m₂, q/h)，ℓ = q/hk，
    (h, mm₁m₂) = 𝒪 时 H_r = N(h)/φ(k)·R(m;k)R(m₁;k)R(m₂;k)·H(overline{hkr}·mm₁m₂; ℓ)，否则为 0。
    """
    r, m, m1, m2, q = (GaussianInt.of(x) for x in (r, m, m1, m2, q))
    if not is_squarefree(q):
        raise ArithmeticDomainError(f"模 {q} 含平方因子")
    direct = ci_Hr_direct(r, m, m1, m2, q, variant)
    h = gcd(r, q)
    product = m * m1 * m2
    k = gcd(product, q.exact_div(h))
    ell = q.exact_div(h * k)
    if not coprime(h, product):
        return CIHrResult(direct, 0j, h, k, ell, True)
    scale = h.norm() / euler_phi(k) * ramanujan(m, k) * ramanujan(m1, k) * ramanujan(m2, k)
    if ell.is_unit():
        inner = 1.0 + 0.0j
    else:
        inner = ci_H(inverse_mod(h * k * r, ell) * product, ell, variant, strict=False)
    return CIHrResult(direct, complex(scale * inner), h, k, ell, False)


def ci_g(chi: HeckeCharacter, psi: HeckeCharacter) -> complex:
    """
    g(χ, ψ) = ΣΣ_{u,v mod q} χ(uv(u+1)(v+1)) ψ(uv−1)

    Raises:
        ArithmeticDomainError: χ 与 ψ 的模不同
    """
    if canonical(chi.modulus) != canonical(psi.modulus):
        raise ArithmeticDomainError(f"特征模不一致: {chi.modulus} 与 {psi.modulus}")
    q = chi.modulus
    if q.is_unit():
        return 1.0 + 0.0j
    weights = _ci_weights(q, strict=False)
    return complex(np.dot(weights, psi.values))


def g_bound_scan(q_list: Sequence[GaussianLike], threads: int = 1) -> pd.DataFrame:
    """
    对每个素模 q 取遍全部乘法特征 ψ，报告 max|g(χ,ψ)| 与 4·N(q) 的比值

    Returns:
        pd.DataFrame: 列为 q, characters, value, bound, ratio, pass
    """
    def scan(q):
        q = GaussianInt.of(q)
        weights = _ci_weights(q, strict=True)
        values = [abs(np.dot(weights, psi.values)) for psi in multiplicative_characters(q)]
        worst = max(values)
        bound = 4.0 * q.norm()
        return {"q": str(q), "characters": len(values), "value": worst, "bound": bound,
                "ratio": worst / bound, "pass": bool(worst <= bound)}

    return pd.DataFrame(parallel_map(scan, q_list, threads))


def coefficient_table(max_abs: float, rng: Optional[np.random.Generator] = None,
                      unimodular: bool = False) -> Dict[GaussianInt, complex]:
    """
    生成以 1 ≤ |d| ≤ max_abs 为下标的系数表

    Args:
        max_abs: 下标绝对值上限
        rng: 随机数生成器；None 时全部取 1
        unimodular: 为 True 时取单位模长的随机相位，否则取单位圆盘内的随机复数
    """
    keys = elements_up_to_norm(int(math.floor(max_abs * max_abs)))
    if rng is None:
        return {d: 1.0 + 0.0j for d in keys}
    phases = np.exp(2j * np.pi * rng.random(len(keys)))
    radii = np.ones(len(keys)) if unimodular else np.sqrt(rng.random(len(keys)))
    return {d: complex(r * p) for d, r, p in zip(keys, radii, phases)}


def bilinear_sum(alpha: Dict[GaussianInt, complex], beta: Dict[GaussianInt, complex],
                 a: GaussianLike, b: GaussianLike, c: GaussianLike, q: GaussianLike,
                 variant: str = "re") -> Tuple[complex, float]:
    """
    ΣΣ_{(dn, qc) = 𝒪} α(d)β(n) e(Re(a d̄ n/c)) H(b d̄ n; q)

    e(·) 中的 d̄ 取模 c 的逆，H 中的 d̄ 取模 q 的逆。

    Returns:
        tuple: (和, 上界 ‖β‖·|q/c|·(|qc|+N)·D·(|qc|+D)·max|α|)

    Raises:
        ArithmeticDomainError: (a, c) 或 (b, q) 不互素
    """
    a, b, c, q = (GaussianInt.of(x) for x in (a, b, c, q))
    if not coprime(a, c) or not coprime(b, q):
        raise ArithmeticDomainError(f"要求 (a, c) = (b, q) = 𝒪: a={a}, c={c}, b={b}, q={q}")
    if not alpha or not beta:
        return 0j, 0.0
    qc = q * c
    table = ci_H_table(q, variant, strict=False)
    q_system = enumerate_residues(q)
    total = 0j
    for d, alpha_d in alpha.items():
        if not coprime(d, qc):
            continue
        d_inv_c = inverse_mod(d, c)
        d_inv_q = inverse_mod(d, q)
        for n, beta_n in beta.items():
            if not coprime(n, qc):
                continue
            twist = complex(np.exp(2j * np.pi * _re_fraction(a * d_inv_c * n, c)))
            total += alpha_d * beta_n * twist * table[q_system.index(b * d_inv_q * n)]
    big_d = max(abs(complex(d)) for d in alpha)
    big_n = max(abs(complex(n)) for n in beta)
    beta_norm = math.sqrt(sum(abs(v) ** 2 for v in beta.values()))
    alpha_max = max(abs(v) for v in alpha.values())
    abs_qc = math.sqrt(qc.norm())
    bound = beta_norm * math.sqrt(q.norm() / c.norm()) * (abs_qc + big_n) * big_d * (abs_qc + big_d) * alpha_max
    return total, bound


def _re_fraction(numerator: GaussianInt, denominator: GaussianInt) -> float:
    """Re(numerator/denominator) mod 1"""
    n = denominator.norm()
    return ((numerator * denominator.conjugate()).re % n) / n
