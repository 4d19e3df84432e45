"""
Hecke 特征模块
提供 ℤ[i] 上模 q 的特征值表、二次特征 χ_q、乘法特征群、Gauss 和与根数
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, List

import numpy as np
import pandas as pd

from .errors import AdmissibilityError, ArithmeticDomainError
from .utils import get_logger
from .zi_core import (
    UNITS, GaussianInt, GaussianLike, ResidueSystem, canonical_up_to_norm,
    enumerate_residues, is_odd, is_squarefree, prime_factors,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class HeckeCharacter:
    """
    模 q、频率 k 的特征

    values 按剩余系规范下标存放 ω 的取值，非单位处为 0（模 1 时唯一剩余类取 1）。
    """

    modulus: GaussianInt
    frequency: int
    values: np.ndarray = field(repr=False, compare=False)
    label: str = ""

    @property
    def system(self) -> ResidueSystem:
        return enumerate_residues(self.modulus)

    def __call__(self, a: GaussianLike) -> complex:
        return complex(self.values[self.system.index(a)])

    def at(self, indices: np.ndarray) -> np.ndarray:
        """按剩余下标向量化取值"""
        return self.values[indices]

    def units_defect(self) -> float:
        """max_ε |ω(ε)ε^k − 1|，单位相容条件的残差"""
        defect = 0.0
        for unit in UNITS:
            eps_k = complex(unit) ** self.frequency
            defect = max(defect, abs(self(unit) * eps_k - 1.0))
        return defect

    def multiplicativity_defect(self) -> float:
        """在单位剩余上 max |ω(ab) − ω(a)ω(b)|"""
        system = self.system
        units = system.unit_indices
        mul = system.mul_table[np.ix_(units, units)]
        lhs = self.values[mul]
        rhs = np.multiply.outer(self.values[units], self.values[units])
        return float(np.max(np.abs(lhs - rhs))) if units.size else 0.0


def _legendre(x: int, p: int) -> int:
    x %= p
    if x == 0:
        return 0
    return 1 if pow(x, (p - 1) // 2, p) == 1 else -1


def _prime_quadratic_values(prime: GaussianInt, system: ResidueSystem) -> np.ndarray:
    """素元 π 的二次剩余符号在模 q 剩余系上的取值"""
    if prime.norm() == 2:
        raise AdmissibilityError("偶素元 1+i 没有二次特征")
    if prime.im == 0:
        # 惰性素数 p：χ_p = ξ_p ∘ N
        p = prime.re
        norms = system.re * system.re + system.im * system.im
        return np.array([_legendre(int(n), p) for n in norms], dtype=float)
    # 分裂素元 π = x + yi，ℤ[i]/π ≅ ℤ/pℤ 下 i ↦ −x·y⁻¹
    p = prime.norm()
    image_of_i = (-prime.re * pow(prime.im, -1, p)) % p
    images = (system.re + system.im * image_of_i) % p
    return np.array([_legendre(int(v), p) for v in images], dtype=float)


@lru_cache(maxsize=256)
def quadratic_symbol(q: GaussianInt) -> HeckeCharacter:
    """
    奇无平方因子模 q 的二次符号（不检查 N(q) ≡ 1 (mod 8)），按素因子相乘

    Raises:
        AdmissibilityError: q 为偶数或含平方因子
    """
    q = GaussianInt.of(q)
    system = enumerate_residues(q)
    if q.is_unit():
        return HeckeCharacter(q, 0, np.ones(system.size), label="trivial")
    if not is_odd(q):
        raise AdmissibilityError(f"模 {q} 为偶数")
    if not is_squarefree(q):
        raise AdmissibilityError(f"模 {q} 含平方因子")
    values = np.ones(system.size)
    for prime in prime_factors(q):
        values = values * _prime_quadratic_values(prime, system)
    return HeckeCharacter(q, 0, values, label=f"chi_{q}")


def is_admissible_modulus(q: GaussianLike) -> bool:
    """q 奇、无平方因子且 N(q) ≡ 1 (mod 8)"""
    q = GaussianInt.of(q)
    if not q:
        return False
    if q.is_unit():
        return True
    return is_odd(q) and is_squarefree(q) and q.norm() % 8 == 1


def quadratic_character(q: GaussianLike) -> HeckeCharacter:
    """
    频率为 0 的二次特征 χ_q

    Raises:
        AdmissibilityError: q 为偶数、含平方因子或 N(q) ≢ 1 (mod 8)
    """
    q = GaussianInt.of(q)
    if not q:
        raise ArithmeticDomainError("模为零")
    if not q.is_unit() and q.norm() % 8 != 1:
        raise AdmissibilityError(f"N({q}) = {q.norm()} ≢ 1 (mod 8)")
    chi = quadratic_symbol(q)
    defect = chi.units_defect()
    if defect > 1e-12:
        raise AdmissibilityError(f"χ_{q} 不满足单位相容条件，残差 {defect}")
    return chi


def principal_character(q: GaussianLike) -> HeckeCharacter:
    """模 q 的主特征"""
    q = GaussianInt.of(q)
    system = enumerate_residues(q)
    return HeckeCharacter(q, 0, system.unit_mask.astype(float), label=f"principal_{q}")


def gauss_sum(chi: HeckeCharacter) -> complex:
    """
    τ(χ) = η^k(q) Σ*_{a mod q} ω(a) e(Re(a/q))，η(z) = z/|z|
    """
    system = chi.system
    phases = system.phase_numerators(system.re, system.im)
    total = np.sum(chi.values * np.exp(2j * np.pi * phases / system.size))
    q = complex(chi.modulus)
    eta_k = (q / abs(q)) ** chi.frequency
    return complex(eta_k * total)


def root_number(chi: HeckeCharacter) -> complex:
    """ε(χ) = i^{−k} τ(χ)/√N(q)"""
    return complex((1j ** (-chi.frequency)) * gauss_sum(chi) / np.sqrt(chi.modulus.norm()))


def _cyclic_generator(system: ResidueSystem) -> int:
    """素模剩余乘法群（循环群）的一个生成元下标"""
    order = system.phi
    prime_divisors = [p for p in range(2, order + 1) if order % p == 0 and all(p % d for d in range(2, p))]
    mul = system.mul_table
    one = system.index(GaussianInt(1))
    for g in system.unit_indices:
        ok = True
        for p in prime_divisors:
            power = one
            for _ in range(order // p):
                power = mul[power, g]
            if power == one:
                ok = False
                break
        if ok:
            return int(g)
    raise ArithmeticDomainError(f"模 {system.modulus} 的单位群不是循环群")


def _prime_characters(prime: GaussianInt) -> List[np.ndarray]:
    system = enumerate_residues(prime)
    order = system.phi
    g = _cyclic_generator(system)
    log = np.full(system.size, -1, dtype=np.int64)
    power = system.index(GaussianInt(1))
    for k in range(order):
        log[power] = k
        power = system.mul_table[power, g]
    result = []
    for j in range(order):
        values = np.zeros(system.size, dtype=complex)
        mask = log >= 0
        values[mask] = np.exp(2j * np.pi * j * log[mask] / order)
        result.append(values)
    return result


def multiplicative_characters(q: GaussianLike) -> List[HeckeCharacter]:
    """
    (ℤ[i]/q)^× 的全部乘法特征（q 无平方因子），经 CRT 由各素因子的循环群特征相乘得到

    Returns:
        list: φ(q) 个特征，第 0 个为主特征
    """
    q = GaussianInt.of(q)
    system = enumerate_residues(q)
    if q.is_unit():
        return [principal_character(q)]
    if not is_squarefree(q):
        raise ArithmeticDomainError(f"模 {q} 含平方因子")
    tables = [np.ones(system.size, dtype=complex)]
    for prime in prime_factors(q):
        sub = enumerate_residues(prime)
        local_idx = sub.index_arrays(system.re, system.im)
        tables = [t * chi_p[local_idx] for t in tables for chi_p in _prime_characters(prime)]
    return [HeckeCharacter(q, 0, t, label=f"psi_{j}") for j, t in enumerate(tables)]


def admissible_moduli(max_norm: int) -> List[GaussianInt]:
    """范数不超过 max_norm 的可容许模（规范伴随元，不含单位）"""
    return [q for q in canonical_up_to_norm(max_norm) if not q.is_unit() and is_admissible_modulus(q)]


def character_values_report(q_list: Iterable[GaussianLike], tol: float = 1e-9) -> pd.DataFrame:
    """
    逐模给出 (q, τ(χ_q), ε(χ_q)) 表

    Args:
        q_list: 模列表
        tol: |τ − √N(q)| 与 |ε − 1| 的容差

    Returns:
        pd.DataFrame: 列为 q, norm, tau, epsilon, pass, error
    """
    rows = []
    for q in q_list:
        try:
            q = GaussianInt.of(q)
            chi = quadratic_character(q)
            tau = gauss_sum(chi)
            eps = root_number(chi)
            ok = abs(tau - np.sqrt(q.norm())) < tol and abs(eps - 1.0) < tol
            rows.append({"q": str(q), "norm": q.norm(), "tau": tau, "epsilon": eps,
                         "pass": bool(ok), "error": ""})
        except ArithmeticDomainError as e:
            logger.warning(f"模 {q} 不可容许: {e}")
            rows.append({"q": str(q), "norm": None, "tau": None, "epsilon": None,
                         "pass": False, "error": str(e)})
    return pd.DataFrame(rows, columns=["q", "norm", "tau", "epsilon", "pass", "error"])
