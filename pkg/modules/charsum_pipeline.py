"""
Voronoi 侧特征和管线模块
提供几何侧和 𝒮_δ^ε(q,N)、同余检测恒等式、特征和 T 与 V 的直接计算、
T = e·V 分解的组装比较、最终子和 𝒮_{g,n₁,r,s}(q,N,D₂,N₂) 及其双线性化
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .characters import quadratic_character
from .config import COST_GUARDS, TOLERANCES
from .errors import ArithmeticDomainError, CostGuardError
from .expsums import _roots, bilinear_sum, ci_Hr, ci_H_table, kloosterman
from .utils import get_logger, parallel_map
from .zi_core import (
    I, ONE, UNITS, GaussianInt, GaussianLike, canonical, canonical_up_to_norm, coprime, divisors,
    elements_up_to_norm, enumerate_residues, euler_phi, gcd, ideal_divisors, inverse_mod,
    is_squarefree, mobius,
)

logger = get_logger(__name__)

# Σ_{n≡a (c)} F(n) = DETECTION_CONSTANT/N(c) · Σ_{c₁|c} Σ*_{b₁ (c₁)} Σ_n F(n) e(Re((n−a)b̄₁/c₁))，
# c₁ 取遍全部元素因子（每个理想 4 个伴随元）
DETECTION_CONSTANT = 0.25

# n ↦ A(1, n)
CoefficientSource = Callable[[GaussianInt], complex]
# (n₁, n₂) ↦ A(n₁, n₂)
BiCoefficientSource = Callable[[GaussianInt, GaussianInt], complex]
# (z, Λ) ↦ w(z; Λ)
WeightFunction = Callable[[complex, complex], complex]


def _re_phase(numerator: GaussianInt, denominator: GaussianInt) -> complex:
    """e(Re(numerator/denominator))"""
    n = denominator.norm()
    return complex(np.exp(2j * np.pi * ((numerator * denominator.conjugate()).re % n) / n))


@dataclass(frozen=True)
class PipelineParams:
    """
    特征和 T、V 的参数组 (q, δ, ε, c, c₁, n₁, n₂) 及其派生量

    派生量：r = c/q，c₂ = c/c₁，(δ₀) = (δ, r)，δ′ = δ/δ₀，c′ = c/δ₀，
    c₂′ = c₂/δ₀（仅当 δ₀ | c₂），r′ = r/δ₀。
    """

    q: GaussianInt
    delta: GaussianInt
    epsilon: GaussianInt
    c: GaussianInt
    c1: GaussianInt
    n1: GaussianInt
    n2: GaussianInt
    r: GaussianInt = field(init=False)
    c2: GaussianInt = field(init=False)
    delta0: GaussianInt = field(init=False)
    delta_prime: GaussianInt = field(init=False)
    c_prime: GaussianInt = field(init=False)
    c2_prime: Optional[GaussianInt] = field(init=False)
    r_prime: GaussianInt = field(init=False)

    def __post_init__(self):
        q, delta, eps, c, c1 = self.q, self.delta, self.epsilon, self.c, self.c1
        if not q or not c or not delta or not c1 or not self.n1 or not self.n2:
            raise ArithmeticDomainError("参数不能为零")
        if eps not in (ONE, I):
            raise ArithmeticDomainError(f"ε 只能取 1 或 i: {eps}")
        if not is_squarefree(delta):
            raise ArithmeticDomainError(f"δ = {delta} 含平方因子")
        if not q.divides(c):
            raise ArithmeticDomainError(f"q = {q} 不整除 c = {c}")
        if not c1.divides(c):
            raise ArithmeticDomainError(f"c₁ = {c1} 不整除 c = {c}")
        r = c.exact_div(q)
        c2 = c.exact_div(c1)
        delta0 = gcd(delta, r)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c2", c2)
        object.__setattr__(self, "delta0", delta0)
        object.__setattr__(self, "delta_prime", delta.exact_div(delta0))
        object.__setattr__(self, "c_prime", c.exact_div(delta0))
        object.__setattr__(self, "c2_prime", c2.exact_div(delta0) if delta0.divides(c2) else None)
        object.__setattr__(self, "r_prime", r.exact_div(delta0))

    @classmethod
    def derive(cls, q: GaussianLike, delta: GaussianLike, epsilon: GaussianLike, c: GaussianLike,
               c1: GaussianLike, n1: GaussianLike, n2: GaussianLike) -> "PipelineParams":
        """由任意高斯整数输入构造参数组"""
        return cls(*(GaussianInt.of(x) for x in (q, delta, epsilon, c, c1, n1, n2)))

    @property
    def conditions(self) -> Dict[str, bool]:
        """(δ,q) = 𝒪、(r′,c₂) = 𝒪、δ₀ | c₂、n₁ | c₁ 各自是否成立"""
        return {
            "delta_q_coprime": coprime(self.delta, self.q),
            "r_prime_c2_coprime": coprime(self.r_prime, self.c2),
            "delta0_divides_c2": self.c2_prime is not None,
            "n1_divides_c1": self.n1.divides(self.c1),
        }

    @property
    def vanishes(self) -> bool:
        """(r′, c₂) ≠ 𝒪 或 δ₀ ∤ c₂ 时 T = 0"""
        cond = self.conditions
        return not (cond["r_prime_c2_coprime"] and cond["delta0_divides_c2"])

    @property
    def epsilon_bar(self) -> GaussianInt:
        return self.epsilon.conjugate()

    def label(self) -> Dict[str, str]:
        return {"q": str(self.q), "delta": str(self.delta), "epsilon": str(self.epsilon),
                "c": str(self.c), "c1": str(self.c1), "n1": str(self.n1), "n2": str(self.n2)}


def admissible_grid(q: GaussianLike, max_c_norm: int, max_delta_norm: int = 5,
                    n2_list: Sequence[GaussianLike] = ("1",),
                    epsilons: Sequence[GaussianLike] = (ONE, I)) -> List[PipelineParams]:
    """
    枚举 N(c) ≤ max_c_norm 的参数组：c = q·r，c₁ 取 c 的理想因子，n₁ 取 c₁ 的理想因子，
    δ 取 N(δ) ≤ max_delta_norm 且与 q 互素的无平方因子元，n₂ 取自 n2_list

    Returns:
        list: PipelineParams 列表（含 vanishes 为 True 的组）
    """
    q = GaussianInt.of(q)
    r_list = canonical_up_to_norm(max_c_norm // q.norm())
    deltas = [d for d in canonical_up_to_norm(max_delta_norm) if is_squarefree(d) and coprime(d, q)]
    grid = []
    for r in r_list:
        c = q * r
        for c1 in ideal_divisors(c):
            for n1 in ideal_divisors(c1):
                for delta in deltas:
                    for n2 in n2_list:
                        for eps in epsilons:
                            grid.append(PipelineParams.derive(q, delta, eps, c, c1, n1, n2))
    return grid


def detection_identity_check(c: GaussianLike, F: Dict[GaussianInt, complex],
                             a: GaussianLike) -> Tuple[complex, complex, float]:
    """
    检查同余检测恒等式
    Σ_{n≡a (c)} F(n) = DETECTION_CONSTANT/N(c) · Σ_{c₁|c} Σ*_{b₁ mod c₁} Σ_n F(n) e(Re((n−a)b̄₁/c₁))

    b̄₁ 随 b₁ 取遍单位剩余，故内层对 b₁ 的和即 Ramanujan 型向量 ρ(x) = Σ*_u e(Re(xu/c₁))。

    Args:
        c: 非零模
        F: 有限支撑的系数 {n: F(n)}
        a: 目标剩余类

    Returns:
        tuple: (左端, 右端, |差|)
    """
    c, a = GaussianInt.of(c), GaussianInt.of(a)
    system = enumerate_residues(c)
    if not F:
        return 0j, 0j, 0.0
    keys = list(F)
    values = np.array([F[n] for n in keys], dtype=complex)
    re = np.array([n.re - a.re for n in keys], dtype=np.int64)
    im = np.array([n.im - a.im for n in keys], dtype=np.int64)
    residues = system.index_arrays(re, im)
    zero = system.index(0)
    lhs = complex(values[residues == zero].sum())

    rhs = 0j
    for c1 in ideal_divisors(c):
        sub = enumerate_residues(c1)
        idx = sub.index_arrays(re, im)
        bins = (np.bincount(idx, weights=values.real, minlength=sub.size)
                + 1j * np.bincount(idx, weights=values.imag, minlength=sub.size))
        units = sub.unit_indices
        prod = sub.mul_table[:, units]
        phases = sub.phase_numerators(sub.re[prod], sub.im[prod])
        rho = _roots(sub.size)[phases].sum(axis=1)
        # 4 个伴随元 c₁u 给出相同的内层和
        rhs += len(UNITS) * complex(np.dot(bins, rho))
    rhs *= DETECTION_CONSTANT / c.norm()
    return lhs, rhs, abs(lhs - rhs)


def random_detection_array(max_norm: int, rng: np.random.Generator,
                           density: float = 0.5) -> Dict[GaussianInt, complex]:
    """在 N(n) ≤ max_norm 上按密度随机取支撑的复系数"""
    result = {}
    for n in elements_up_to_norm(max_norm, include_zero=True):
        if rng.random() < density:
            result[n] = complex(rng.normal(), rng.normal())
    return result


def _chi_mod_c(q: GaussianInt, c: GaussianInt) -> np.ndarray:
    """χ_q 在模 c 剩余代表上的取值（q | c）"""
    chi = quadratic_character(q)
    system_c = enumerate_residues(c)
    system_q = chi.system
    return chi.values[system_q.index_arrays(system_c.re, system_c.im)]


def T_sum(params: PipelineParams) -> complex:
    """
    T = Σ*_{b₁ mod c₁} Σ*_{b mod c} Σ_{a mod c} χ(a) S(b₁, n₂; c₁/n₁) e(Re((εb̄ + δab)/c − ab̄₁/c₁))

    对 a 的和先做成表 G(y) = Σ_a χ(a) e(Re(ay/c))，y = δb − b̄₁c₂，
    总代价 φ(c₁)·φ(c) 次查表加 N(c)² 次建表。

    Raises:
        CostGuardError: N(c) 超过 COST_GUARDS["t_sum_max_norm"]
        ArithmeticDomainError: n₁ ∤ c₁
    """
    p = params
    if p.c.norm() > COST_GUARDS["t_sum_max_norm"]:
        raise CostGuardError(f"T 的直接计算要求 N(c) ≤ {COST_GUARDS['t_sum_max_norm']}，当前 N({p.c}) = {p.c.norm()}")
    if not p.n1.divides(p.c1):
        raise ArithmeticDomainError(f"n₁ = {p.n1} 不整除 c₁ = {p.c1}")
    system = enumerate_residues(p.c)
    roots = _roots(system.size)
    mul, add = system.mul_table, system.add_table
    phases = system.phase_numerators(system.re[mul], system.im[mul])
    G = _chi_mod_c(p.q, p.c) @ roots[phases]

    units = system.unit_indices
    b_inv = system.inverse_index[units]
    eps_prod = mul[system.index(p.epsilon), b_inv]
    outer = roots[system.phase_numerators(system.re[eps_prod], system.im[eps_prod])]
    delta_b = mul[system.index(p.delta), units]

    modulus = p.c1.exact_div(p.n1)
    sub = enumerate_residues(p.c1)
    kl_cache: Dict[int, float] = {}
    total = 0j
    for b1_idx in sub.unit_indices:
        b1 = GaussianInt(int(sub.re[b1_idx]), int(sub.im[b1_idx]))
        key = enumerate_residues(modulus).index(b1)
        if key not in kl_cache:
            kl_cache[key] = kloosterman(b1, p.n2, modulus)
        if kl_cache[key] == 0.0:
            continue
        b1_inv = inverse_mod(b1, p.c1)
        shift = system.index(-(b1_inv * p.c2))
        total += kl_cache[key] * complex(np.dot(outer, G[add[delta_b, shift]]))
    return complex(total)


@dataclass(frozen=True)
class VSumResult:
    """V 的直接双重和、H_{r′} 对应值与分解式值"""

    direct: complex
    correspondence: complex
    factored: complex
    h: GaussianInt
    k: GaussianInt
    ell: GaussianInt

    @property
    def correspondence_residual(self) -> float:
        return abs(self.direct - self.correspondence)

    @property
    def factored_residual(self) -> float:
        return abs(self.direct - self.factored)


def V_sum(params: PipelineParams, variant: str = "re") -> VSumResult:
    """
    V = ΣΣ_{b₂,b₃ mod q} χ(b₂b₃) χ(b₂r′ + c₂b₃r′ − ε̄c₂′c₂n₁n₂) χ(r′b₃ − ε̄n₁n₂c₂′)
        · e(Re(δ̄′c₂′n₁(b₂ + c₂b₃)/q))

    换元 u = b₂ + c₂b₃、v = b₃ 后即 H_{r′}(ε̄c₂′n₁n₂, −c₂, δ̄′c₂′n₁; q)，δ̄′ 取模 q 的逆。

    Raises:
        ArithmeticDomainError: δ₀ ∤ c₂（c₂′ 无定义）或 (δ, q) ≠ 𝒪
    """
    p = params
    if p.c2_prime is None:
        raise ArithmeticDomainError(f"δ₀ = {p.delta0} 不整除 c₂ = {p.c2}，V 无定义")
    if not coprime(p.delta, p.q):
        raise ArithmeticDomainError(f"(δ, q) ≠ 𝒪: δ = {p.delta}, q = {p.q}")
    q, c2, c2p, r1 = p.q, p.c2, p.c2_prime, p.r_prime
    eps_bar = p.epsilon_bar
    delta_inv = inverse_mod(p.delta_prime, q)

    chi = quadratic_character(q).values
    system = enumerate_residues(q)
    mul, add, idx = system.mul_table, system.add_table, system.index
    b2, b3 = np.meshgrid(np.arange(system.size), np.arange(system.size), indexing="ij")
    u = add[b2, mul[b3, idx(c2)]]
    arg1 = mul[b2, b3]
    arg2 = add[mul[u, idx(r1)], idx(-(eps_bar * c2p * c2 * p.n1 * p.n2))]
    arg3 = add[mul[b3, idx(r1)], idx(-(eps_bar * p.n1 * p.n2 * c2p))]
    twist = mul[u, idx(delta_inv * c2p * p.n1)]
    phases = _roots(system.size)[system.phase_numerators(system.re[twist], system.im[twist])]
    if variant == "trace":
        phases = phases * phases
    direct = complex(np.sum(chi[arg1] * chi[arg2] * chi[arg3] * phases))

    hr = ci_Hr(r1, eps_bar * c2p * p.n1 * p.n2, -c2, delta_inv * c2p * p.n1, q, variant)
    return VSumResult(direct, hr.direct, hr.factored, hr.h, hr.k, hr.ell)


def f_sum(params: PipelineParams) -> complex:
    """
    ΣΣΣ_{f₁f₂d₂′ = r′} μ(f₂)/(16N(f₁)) e(Re(ε̄δ̄′c₂′²c₂n₁′n₁n₂·overline(d₂′q)/f₁))

    f₁, f₂ 取遍元素因子（含伴随元），n₁′ = n₁/f₂，逆元取模 f₁；
    条件 (d₂′, f₁n₁n₂) = (f₁, f₂) = (f₁f₂, q) = 𝒪，μ²(f₁) = 1，f₂ | n₁。
    """
    p = params
    if p.c2_prime is None:
        raise ArithmeticDomainError(f"δ₀ = {p.delta0} 不整除 c₂ = {p.c2}")
    base = p.epsilon_bar * p.c2_prime * p.c2_prime * p.c2 * p.n1 * p.n2
    total = 0j
    for f1 in divisors(p.r_prime):
        if mobius(f1) == 0 or not coprime(f1, p.q):
            continue
        rest = p.r_prime.exact_div(f1)
        for f2 in divisors(rest):
            d2 = rest.exact_div(f2)
            if not f2.divides(p.n1) or not coprime(f1, f2) or not coprime(f2, p.q):
                continue
            if not coprime(d2, f1 * p.n1 * p.n2):
                continue
            n1_prime = p.n1.exact_div(f2)
            if f1.is_unit():
                phase = 1.0 + 0.0j
            else:
                inv = inverse_mod(p.delta_prime * d2 * p.q, f1)
                phase = _re_phase(base * n1_prime * inv, f1)
            total += mobius(f2) / (16.0 * f1.norm()) * phase
    return complex(total)


@dataclass(frozen=True)
class TeVResult:
    """T 的直接值与右端组装值"""

    T_direct: complex
    rhs: complex
    V: Optional[VSumResult]
    vanishes: bool

    @property
    def residual(self) -> float:
        return abs(self.T_direct - self.rhs)

    @property
    def passed(self) -> bool:
        return self.residual < TOLERANCES["identity"] * (1.0 + abs(self.T_direct))


def lemma_TeV_rhs(params: PipelineParams, V: Optional[VSumResult] = None) -> complex:
    """
    e(−Re(ε̄δ̄′c₂′²c₂n₁²n₂/c′))·φ(c₁)φ(c₁/n₁)/φ(c′)²·μ(δ₀)χ(δ)/N(δ₀)·N(r)²N(q)·V·f_sum

    δ̄′ 取模 c′ 的逆；条件 (r′,c₂) = 𝒪 或 δ₀ | c₂ 不成立时为 0。
    """
    p = params
    if p.vanishes:
        return 0j
    V = V or V_sum(p)
    numerator = p.epsilon_bar * inverse_mod(p.delta_prime, p.c_prime) * p.c2_prime * p.c2_prime \
        * p.c2 * p.n1 * p.n1 * p.n2
    prefactor = _re_phase(-numerator, p.c_prime)
    phi_ratio = euler_phi(p.c1) * euler_phi(p.c1.exact_div(p.n1)) / euler_phi(p.c_prime) ** 2
    chi_delta = quadratic_character(p.q)(p.delta)
    scale = mobius(p.delta0) * chi_delta / p.delta0.norm() * p.r.norm() ** 2 * p.q.norm()
    return complex(prefactor * phi_ratio * scale * V.direct * f_sum(p))


def lemma_TeV_check(params: PipelineParams) -> TeVResult:
    """
    直接计算 T，与由 V、f_sum 组装的右端比较

    Raises:
        ArithmeticDomainError: (δ, q) ≠ 𝒪 或 n₁ ∤ c₁
        CostGuardError: N(c) 超限
    """
    p = params
    cond = p.conditions
    if not cond["delta_q_coprime"] or not cond["n1_divides_c1"]:
        raise ArithmeticDomainError(f"参数不满足 (δ,q) = 𝒪 与 n₁ | c₁: {p.label()}")
    T = T_sum(p)
    if p.vanishes:
        return TeVResult(T, 0j, None, True)
    V = V_sum(p)
    return TeVResult(T, lemma_TeV_rhs(p, V), V, False)


def pipeline_grid_check(grid: Iterable[PipelineParams], threads: int = 1) -> pd.DataFrame:
    """
    在参数网格上逐组运行 T = e·V 比较与 V = H_{r′} 对应检查

    Returns:
        pd.DataFrame: 每组一行，含 T、rhs、residual、V、H_r、corr_residual、factored_residual、vanishes、pass
    """
    def check(params: PipelineParams) -> dict:
        row = dict(params.label())
        result = lemma_TeV_check(params)
        row.update({"T": result.T_direct, "rhs": result.rhs, "residual": result.residual,
                    "vanishes": result.vanishes})
        if result.V is not None:
            v = result.V
            row.update({"V": v.direct, "H_r": v.correspondence, "corr_residual": v.correspondence_residual,
                        "factored_residual": v.factored_residual})
            corr_ok = v.correspondence_residual < TOLERANCES["exact"] * (1.0 + abs(v.direct))
            fact_ok = v.factored_residual < TOLERANCES["identity"] * (1.0 + abs(v.direct))
        else:
            corr_ok = fact_ok = True
        row["pass"] = bool(corr_ok and fact_ok and result.passed)
        return row

    rows = parallel_map(check, list(grid), threads)
    df = pd.DataFrame(rows)
    if not df.empty:
        logger.info(f"T = e·V 网格检查: {int(df['pass'].sum())}/{len(df)} 组通过")
    return df


@dataclass(frozen=True)
class GeometricSumResult:
    """截断几何侧和、逐 c 贡献表与截断尾项估计"""

    value: complex
    contributions: pd.DataFrame = field(repr=False)
    tail_bound: float


def synthetic_coefficients(max_norm: int, rng: Optional[np.random.Generator] = None) -> CoefficientSource:
    """
    按规范伴随元取值的合成系数 n ↦ A(1, n)，满足 A(1, εn) = A(1, n)

    rng 为 None 时取常数 1；超出 max_norm 的下标取 0。
    """
    keys = canonical_up_to_norm(max_norm)
    if rng is None:
        table = {k: 1.0 + 0.0j for k in keys}
    else:
        table = {k: complex(rng.normal(), rng.normal()) / math.sqrt(2) for k in keys}

    def coeff(n: GaussianInt) -> complex:
        return table.get(canonical(n), 0j) if n else 0j

    return coeff


def _support(N: float) -> List[GaussianInt]:
    """N ≤ |n| ≤ 2N 的全部高斯整数"""
    low, high = N * N, 4.0 * N * N
    return [n for n in elements_up_to_norm(int(math.floor(high))) if low <= n.norm() <= high]


def geometric_sum(q: GaussianLike, delta: GaussianLike, epsilon: GaussianLike, coeffs: CoefficientSource,
                  N: float, c_norm_cap: int, weight: WeightFunction,
                  tail_shell: bool = True) -> GeometricSumResult:
    """
    𝒮_δ^ε(q, N) = Σ_{q|c, N(c) ≤ cap} N(c)⁻¹ Σ_n A(1,n) χ(n) S(δn, ε; c) w(n/N; √(εδN)/(2c))

    c 取遍 q 的全部倍元（含伴随元），n 取遍 v 的支撑 N ≤ |n| ≤ 2N。
    尾项估计：在外壳 cap < N(c) ≤ 2·cap 上以 |S| ≤ φ(c) 给出的平凡上界。

    Args:
        q: 可容许素模
        delta: 与 q 互素的无平方因子元
        epsilon: 1 或 i
        coeffs: n ↦ A(1, n)
        N: 尺度参数
        c_norm_cap: N(c) 截断上限
        weight: (z, Λ) ↦ w(z; Λ)
        tail_shell: 是否计算外壳尾项估计

    Raises:
        CostGuardError: c_norm_cap 超过 COST_GUARDS["geometric_max_c_norm"]
        ArithmeticDomainError: 参数不可容许
    """
    q, delta, epsilon = GaussianInt.of(q), GaussianInt.of(delta), GaussianInt.of(epsilon)
    if c_norm_cap > COST_GUARDS["geometric_max_c_norm"]:
        raise CostGuardError(f"c_norm_cap = {c_norm_cap} 超过上限 {COST_GUARDS['geometric_max_c_norm']}")
    if epsilon not in (ONE, I):
        raise ArithmeticDomainError(f"ε 只能取 1 或 i: {epsilon}")
    if not is_squarefree(delta) or not coprime(delta, q):
        raise ArithmeticDomainError(f"δ = {delta} 须无平方因子且与 q = {q} 互素")
    chi = quadratic_character(q)
    support = [(n, coeffs(n) * chi(n)) for n in _support(N)]
    support = [(n, a) for n, a in support if a != 0]
    root = cmath.sqrt(complex(epsilon) * complex(delta) * N)

    def shell(lo: int, hi: int) -> List[GaussianInt]:
        r_max = hi // q.norm()
        return [q * r for r in elements_up_to_norm(r_max) if lo < (q * r).norm() <= hi]

    rows = []
    total = 0j
    for c in shell(0, c_norm_cap):
        lam = root / (2 * complex(c))
        contribution = 0j
        envelope = 0.0
        for n, a in support:
            w = weight(complex(n) / N, lam)
            if w == 0:
                continue
            contribution += a * kloosterman(delta * n, epsilon, c) * w
            envelope += abs(a * w)
        contribution /= c.norm()
        envelope *= euler_phi(c) / c.norm()
        total += contribution
        rows.append({"c": str(c), "norm": c.norm(), "contribution": contribution,
                     "abs": abs(contribution), "envelope": envelope})

    tail = 0.0
    if tail_shell and support:
        for c in shell(c_norm_cap, 2 * c_norm_cap):
            lam = root / (2 * complex(c))
            tail += euler_phi(c) / c.norm() * sum(abs(a * weight(complex(n) / N, lam)) for n, a in support)
    contributions = pd.DataFrame(rows, columns=["c", "norm", "contribution", "abs", "envelope"])
    logger.info(f"几何侧和: q={q}, δ={delta}, ε={epsilon}, N={N}, {len(rows)} 个 c, 尾项估计 {tail:.3g}")
    return GeometricSumResult(complex(total), contributions, tail)


def envelope_decay_check(contributions: pd.DataFrame) -> bool:
    """按范数分组后各组 |贡献| 不超过对应平凡包络"""
    if contributions.empty:
        return True
    grouped = contributions.groupby("norm")[["abs", "envelope"]].sum()
    return bool((grouped["abs"] <= grouped["envelope"] * (1 + 1e-9) + 1e-300).all())


@dataclass(frozen=True)
class SubsumParams:
    """
    最终子和 𝒮_{g,n₁,r,s}^{ε,δ₀,δ′}(q, N, D₂, N₂) 的参数

    δ = δ₀δ′，s | δ′g。
    """

    q: GaussianInt
    epsilon: GaussianInt
    delta0: GaussianInt
    delta_prime: GaussianInt
    g: GaussianInt
    n1: GaussianInt
    r: GaussianInt
    s: GaussianInt

    def __post_init__(self):
        if self.epsilon not in (ONE, I):
            raise ArithmeticDomainError(f"ε 只能取 1 或 i: {self.epsilon}")
        if not self.s.divides(self.delta_prime * self.g):
            raise ArithmeticDomainError(f"s = {self.s} 不整除 δ′g = {self.delta_prime * self.g}")

    @classmethod
    def of(cls, q, epsilon, delta0, delta_prime, g, n1, r, s) -> "SubsumParams":
        return cls(*(GaussianInt.of(x) for x in (q, epsilon, delta0, delta_prime, g, n1, r, s)))

    @property
    def delta(self) -> GaussianInt:
        return self.delta0 * self.delta_prime

    @property
    def modulus(self) -> GaussianInt:
        """指数中的分母 δ′g/s"""
        return (self.delta_prime * self.g).exact_div(self.s)


@dataclass(frozen=True)
class SubsumResult:
    value: complex
    bound: float
    in_hypothesis: bool
    terms: int

    @property
    def ratio(self) -> float:
        return abs(self.value) / self.bound if self.bound else float("nan")


def _dyadic(lower: float) -> List[GaussianInt]:
    """lower ≤ |d| < 2·lower 的全部高斯整数"""
    low, high = lower * lower, 4.0 * lower * lower
    return [d for d in elements_up_to_norm(int(math.ceil(high))) if low <= d.norm() < high]


def subsum_windows(params: SubsumParams, N: float, eps: float = 0.05) -> Tuple[float, float]:
    """D₂、N₂ 的假设上限 |q|^ε|δ|^{1/2}N^{1/2}/|qδ₀gn₁r| 与 |q|^ε|δ|^{3/2}N^{1/2}/|δ₀³n₁²rs|"""
    p = params
    qa = abs(complex(p.q))
    da = abs(complex(p.delta))
    d2_max = qa ** eps * math.sqrt(da * N) / abs(complex(p.q * p.delta0 * p.g * p.n1 * p.r))
    n2_max = qa ** eps * da ** 1.5 * math.sqrt(N) / abs(complex(p.delta0 ** 3 * p.n1 * p.n1 * p.r * p.s))
    return d2_max, n2_max


def subsum_bound(params: SubsumParams, N: float, D2: float, N2: float, eps: float = 0.05) -> float:
    """|q|^ε|q⁶δ₀g⁴n₁²r³||n₁rs|^{7/16}D₂/(|δ|^{1/2}|s|N^{3/2})·(|qδ′g/s| + N₂)"""
    p = params
    big = abs(complex(p.q ** 6 * p.delta0 * p.g ** 4 * p.n1 * p.n1 * p.r ** 3))
    kim_sarnak = abs(complex(p.n1 * p.r * p.s)) ** (7.0 / 16.0)
    denom = abs(complex(p.delta)) ** 0.5 * abs(complex(p.s)) * N ** 1.5
    return abs(complex(p.q)) ** eps * big * kim_sarnak * D2 / denom * (abs(complex(p.q * p.modulus)) + N2)


def _subsum_terms(params: SubsumParams, D2: float, N2: float):
    p = params
    d_list = [d for d in _dyadic(D2) if coprime(d, p.q * p.delta * p.g * p.n1)]
    n_list = [n for n in _dyadic(N2) if coprime(n, p.q * p.modulus)]
    return d_list, n_list


def final_subsum(params: SubsumParams, coeffs: BiCoefficientSource, w_tilde: WeightFunction,
                 N: float, D2: float, N2: float, eps: float = 0.05, variant: str = "re") -> SubsumResult:
    """
    𝒮 = Σ_{D₂≤|d₂′|<2D₂} Σ_{N₂≤|n₂′|<2N₂} A(rsn₂′, n₁)/|d₂′|⁴ · e(Re(ε̄δ₀n₁n₂′·overline(qd₂′)/(δ′g/s)))
        · H(−ε̄δ₀n₁sn₂′·overline(δ′gd₂′); q) · W̃(sn₂′N/(8n₁r²(qgd₂′)³); √(εδN)/(2qδ₀gn₁rd₂′))

    约束 (d₂′, qδgn₁) = 𝒪，(n₂′, qδ′g/s) = 𝒪。窗口超出假设范围时照常计算并标记。

    Returns:
        SubsumResult: 值、上界、是否在假设窗口内、项数
    """
    p = params
    d2_max, n2_max = subsum_windows(p, N, eps)
    in_hyp = 1.0 <= D2 <= d2_max and 1.0 <= N2 <= n2_max
    if not in_hyp:
        logger.warning(f"窗口 D₂={D2}, N₂={N2} 超出假设范围 (D₂ ≤ {d2_max:.3g}, N₂ ≤ {n2_max:.3g})")
    bound = subsum_bound(p, N, D2, N2, eps)
    d_list, n_list = _subsum_terms(p, D2, N2)
    if not d_list or not n_list:
        return SubsumResult(0j, bound, in_hyp, 0)

    q, mod = p.q, p.modulus
    eps_bar = p.epsilon.conjugate()
    table = ci_H_table(q, variant, strict=False)
    q_system = enumerate_residues(q)
    root = cmath.sqrt(complex(p.epsilon) * complex(p.delta) * N)
    total = 0j
    terms = 0
    for d in d_list:
        inv_mod = inverse_mod(q * d, mod)
        inv_q = inverse_mod(p.delta_prime * p.g * d, q)
        qgd = complex(q * p.g * d)
        lam = root / (2 * complex(q * p.delta0 * p.g * p.n1 * p.r * d))
        weight_d = 1.0 / d.norm() ** 2
        for n in n_list:
            a = coeffs(p.r * p.s * n, p.n1)
            if a == 0:
                continue
            phase = _re_phase(eps_bar * p.delta0 * p.n1 * n * inv_mod, mod)
            h = table[q_system.index(-(eps_bar * p.delta0 * p.n1 * p.s * n * inv_q))]
            u = complex(p.s * n) * N / (8 * complex(p.n1 * p.r * p.r) * qgd ** 3)
            total += a * weight_d * phase * h * w_tilde(u, lam)
            terms += 1
    return SubsumResult(complex(total), bound, in_hyp, terms)


@dataclass(frozen=True)
class BilinearReport:
    """最终子和（W̃ ≡ 1）与双线性形式的比较"""

    subsum: complex
    bilinear: complex
    bilinear_bound: float
    scale: float

    @property
    def residual(self) -> float:
        return abs(self.scale * self.subsum - self.bilinear)

    @property
    def ratio(self) -> float:
        return abs(self.bilinear) / self.bilinear_bound if self.bilinear_bound else float("nan")


def bilinear_reduction_report(params: SubsumParams, coeffs: BiCoefficientSource, N: float,
                              D2: float, N2: float, variant: str = "re") -> BilinearReport:
    """
    把 W̃ ≡ 1 的最终子和写成双线性形式：c = δ′g/s，a = ε̄δ₀n₁q̄（模 c），
    b = −ε̄δ₀n₁s·overline(δ′g)（模 q），α(d) = D₂⁴/|d|⁴，β(n) = A(rsn, n₁)，
    于是双线性和等于 D₂⁴ 乘以子和
    """
    p = params
    sub = final_subsum(p, coeffs, lambda u, lam: 1.0, N, D2, N2, variant=variant)
    d_list, n_list = _subsum_terms(p, D2, N2)
    mod = p.modulus
    eps_bar = p.epsilon.conjugate()
    a = eps_bar * p.delta0 * p.n1 * inverse_mod(p.q, mod)
    b = -(eps_bar * p.delta0 * p.n1 * p.s * inverse_mod(p.delta_prime * p.g, p.q))
    scale = D2 ** 4
    alpha = {d: complex(scale / d.norm() ** 2) for d in d_list}
    beta = {n: complex(coeffs(p.r * p.s * n, p.n1)) for n in n_list}
    total, bound = bilinear_sum(alpha, beta, a, b, mod, p.q, variant)
    return BilinearReport(sub.value, total, bound, scale)
