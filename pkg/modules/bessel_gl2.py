"""
GL2(ℂ) Bessel 核模块
提供经典 J_ν（幂级数/Hankel 渐近两种后端）、Hankel 函数渐近式、
核函数 𝐉_{μ,m}(z)（含非一般点的 Richardson 外推）、Hankel 形式与积分表示两条对偶路径、
渐近分解 𝐉 = e·W + e·W + E、导数递推恒等式与若干界的扫描
"""

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd
from numpy.polynomial import polynomial as npoly

from .config import TOLERANCES
from .errors import ConvergenceError, RegimeError
from .utils import get_logger, parallel_map

logger = get_logger(__name__)

BACKENDS = ("auto", "series", "asymptotic")

# 距非一般点集 {4μ ∈ 2ℤ + m} 小于该值时改用 Richardson 外推
NONGENERIC_RADIUS = 1e-3
RICHARDSON_POINTS = 4

# 渐近级数的最大项数
_MAX_ASYMPTOTIC_TERMS = 400
_LN10 = math.log(10.0)


@dataclass(frozen=True)
class BesselOrder:
    """核函数的阶 (μ, m)，m 为偶数时 𝐉_{μ,m} 为偶函数"""

    mu: complex
    m: int = 0

    def __call__(self, z: complex) -> complex:
        return kernel_J(self.mu, self.m, z)

    @property
    def classical_orders(self) -> Tuple[complex, complex]:
        """J_{μ,m}(z) = J_a(z)J_b(z̄) 中的 (a, b) = (−2μ − m/2, −2μ + m/2)"""
        mu = complex(self.mu)
        return -2 * mu - self.m / 2, -2 * mu + self.m / 2


def hankel_coefficient(nu: complex, k: int) -> complex:
    """(ν, k) = Γ(ν+k+1/2)/(k!Γ(ν−k+1/2)) = ∏_{j=1}^{k}(4ν² − (2j−1)²)/(4^k k!)"""
    nu = complex(nu)
    result = 1.0 + 0.0j
    for j in range(1, k + 1):
        result *= (4 * nu * nu - (2 * j - 1) ** 2) / (4.0 * j)
    return result


def _asymptotic_sum(nu: complex, w: complex, kind: int, K: Optional[int] = None) -> complex:
    """
    Σ_{k<K} (∓1)^k... 即 H^{(1)} 取 Σ i^k(ν,k)/(2w)^k，H^{(2)} 取 Σ (−i)^k(ν,k)/(2w)^k

    K 为 None 时在最小项处截断。
    """
    unit = 1j if kind == 1 else -1j
    nu2 = 4 * complex(nu) ** 2
    term = 1.0 + 0.0j
    total = 0j
    previous = math.inf
    limit = _MAX_ASYMPTOTIC_TERMS if K is None else K
    for k in range(limit):
        size = abs(term)
        if K is None:
            if size > previous or size < 1e-17 * abs(total):
                break
            previous = size
        total += term
        term *= unit * (nu2 - (2 * k + 1) ** 2) / (4.0 * (k + 1) * 2 * w)
    return total


def hankel_H(kind: int, nu: complex, z: complex, K: Optional[int] = None, exact: bool = False) -> complex:
    """
    Hankel 函数 H^{(1)}_ν、H^{(2)}_ν

    Args:
        kind: 1 或 2
        nu: 阶
        z: 自变量，渐近式要求 |z| ≫ |ν|² + 1
        K: 渐近级数项数，None 为最优截断
        exact: 为 True 时用 mpmath 精确值
    """
    if kind not in (1, 2):
        raise ValueError(f"kind 只能为 1 或 2: {kind}")
    z = complex(z)
    if exact:
        dps = 20 + int(2 * abs(z) / _LN10)
        with mpmath.workdps(dps):
            fn = mpmath.hankel1 if kind == 1 else mpmath.hankel2
            return complex(fn(complex(nu), z))
    sign = 1 if kind == 1 else -1
    phase = np.exp(sign * 1j * (z - math.pi * complex(nu) / 2 - math.pi / 4))
    return complex(np.sqrt(2 / (math.pi * z)) * phase * _asymptotic_sum(nu, z, kind, K))


def crossover_radius(*orders: complex) -> float:
    """幂级数与渐近后端的分界半径 max(12, 2|ν|²)"""
    return max(12.0, max(2 * abs(complex(nu)) ** 2 for nu in orders))


def _power_series(nu, x):
    """Σ_k x^k/(k!Γ(ν+k+1))，按当前 mpmath 精度求和"""
    k = 0
    if mpmath.isint(nu) and mpmath.re(nu) < 0:
        k = int(-mpmath.re(nu))
    term = mpmath.power(x, k) / mpmath.factorial(k) * mpmath.rgamma(nu + k + 1)
    total = mpmath.mpc(0)
    eps = mpmath.mpf(10) ** (-mpmath.mp.dps)
    tail_start = 2 + abs(nu) + mpmath.sqrt(abs(x))
    while True:
        total += term
        term = term * x / ((k + 1) * (nu + k + 1))
        k += 1
        if k > tail_start and abs(term) <= eps * max(abs(total), eps):
            return total
        if k > 100000:
            raise ConvergenceError(f"J_ν 幂级数未收敛: ν={nu}, x={x}")


def _series_dps(w: complex, *orders: complex) -> int:
    imag = max(abs(complex(nu).imag) for nu in orders)
    return 20 + int((2 * abs(w) + 2 * math.pi * imag) / _LN10)


def classical_J(nu: complex, z: complex, backend: str = "auto") -> complex:
    """
    经典 Bessel 函数 J_ν(z)（主支）

    幂级数 Σ(−z²/4)^k/(k!Γ(ν+k+1)) 用于 |z| ≤ max(12, 2|ν|²)，
    否则用 (H^{(1)} + H^{(2)})/2 的渐近式；左半平面由 J_ν(−u) = e^{±iπν}J_ν(u) 转到右半平面。
    """
    if backend not in BACKENDS:
        raise ValueError(f"未知后端: {backend}")
    nu, z = complex(nu), complex(z)
    if backend == "auto":
        backend = "series" if abs(z) <= crossover_radius(nu) else "asymptotic"
    if backend == "series":
        with mpmath.workdps(_series_dps(z, nu)):
            mz = mpmath.mpc(z)
            value = mpmath.power(mz / 2, nu) * _power_series(mpmath.mpc(nu), -mz * mz / 4)
            return complex(value)
    if z == 0:
        raise RegimeError("渐近式不适用于 z = 0")
    if z.real < 0:
        u = -z
        factor = np.exp((1j if z.imag >= 0 else -1j) * math.pi * nu)
        return complex(factor * classical_J(nu, u, "asymptotic"))
    return 0.5 * (hankel_H(1, nu, z) + hankel_H(2, nu, z))


def _kernel_constant(mu, m: int):
    """偶 m 取 2π²/sin 2πμ，奇 m 取 2π²i/cos 2πμ"""
    if m % 2 == 0:
        return 2 * mpmath.pi ** 2 / mpmath.sin(2 * mpmath.pi * mu)
    return 2j * mpmath.pi ** 2 / mpmath.cos(2 * mpmath.pi * mu)


def _kernel_series(mu: complex, m: int, x: float, theta: float) -> complex:
    """由定义式计算 𝐉_{μ,m}(x e^{iθ})，用 |w|、θ 显式写出分支"""
    a = -2 * mu - m / 2
    b = -2 * mu + m / 2
    radius = 4 * math.pi * x
    w = radius * complex(math.cos(theta), math.sin(theta))
    with mpmath.workdps(_series_dps(w, a, b) + 10):
        mmu = mpmath.mpc(mu)
        ma, mb = mpmath.mpc(a), mpmath.mpc(b)
        mw = mpmath.mpf(radius) * mpmath.expj(mpmath.mpf(theta))
        x_plus = -mw * mw / 4
        x_minus = -mpmath.conj(mw) * mpmath.conj(mw) / 4
        half = mpmath.mpf(radius) / 2
        rot = mpmath.expj(-mpmath.mpf(theta) * m)
        first = mpmath.power(half, ma + mb) * rot * _power_series(ma, x_plus) * _power_series(mb, x_minus)
        second = mpmath.power(half, -ma - mb) / rot * _power_series(-ma, x_plus) * _power_series(-mb, x_minus)
        combo = first - second if m % 2 == 0 else first + second
        return complex(_kernel_constant(mmu, m) * combo)


def _kernel_asymptotic(mu: complex, m: int, z: complex, K: Optional[int] = None) -> complex:
    """
    𝐉_{μ,m}(z) ≈ (1/2|z|)[e(4Re z)S¹_a(w)S¹_b(w̄) + (−1)^m e(−4Re z)S²_a(w)S²_b(w̄)]，
    w = 4πz，a = 2μ + m/2，b = 2μ − m/2；左半平面按 𝐉(−z) = (−1)^m 𝐉(z) 反射
    """
    if z.real < 0:
        return (-1) ** m * _kernel_asymptotic(mu, m, -z, K)
    a = 2 * mu + m / 2
    b = 2 * mu - m / 2
    w = 4 * math.pi * z
    plus = np.exp(2j * w.real) * _asymptotic_sum(a, w, 1, K) * _asymptotic_sum(b, w.conjugate(), 1, K)
    minus = np.exp(-2j * w.real) * _asymptotic_sum(a, w, 2, K) * _asymptotic_sum(b, w.conjugate(), 2, K)
    return complex((plus + (-1) ** m * minus) / (2 * abs(z)))


def _neville_at_zero(hs: Sequence[float], values: Sequence[complex]) -> complex:
    """多项式插值在 h = 0 处的值"""
    p = list(values)
    n = len(hs)
    for level in range(1, n):
        for i in range(n - level):
            p[i] = (hs[i + level] * p[i] - hs[i] * p[i + 1]) / (hs[i + level] - hs[i])
    return p[0]


def nongeneric_distance(mu: complex, m: int) -> Tuple[float, complex]:
    """4μ 到 2ℤ + m 的距离及最近的奇异 μ₀"""
    r = 4 * complex(mu) - m
    n = 2 * round(r.real / 2)
    return abs(r - n), (n + m) / 4


def kernel_J_polar(mu: complex, m: int, x: float, theta: float, backend: str = "auto") -> complex:
    """
    以显式辐角 θ 计算 𝐉_{μ,m}(x e^{iθ})（结果与 θ 取 mod 2π 的代表无关）

    Raises:
        RegimeError: x = 0
    """
    if backend not in BACKENDS:
        raise ValueError(f"未知后端: {backend}")
    if x <= 0:
        raise RegimeError("𝐉_{μ,m}(z) 要求 z ≠ 0")
    mu = complex(mu)
    a, b = -2 * mu - m / 2, -2 * mu + m / 2
    if backend == "auto":
        backend = "series" if 4 * math.pi * x <= crossover_radius(a, b) else "asymptotic"
    if backend == "asymptotic":
        return _kernel_asymptotic(mu, m, x * complex(math.cos(theta), math.sin(theta)))
    dist, mu0 = nongeneric_distance(mu, m)
    if dist >= NONGENERIC_RADIUS:
        return _kernel_series(mu, m, x, theta)
    # 沿 μ₀ → μ 方向向外取点，外推回 μ
    delta = mu - mu0
    direction = delta / abs(delta) if abs(delta) > 0 else 1.0
    hs = [NONGENERIC_RADIUS * 2.0 ** (-j) for j in range(RICHARDSON_POINTS)]
    values = [_kernel_series(mu + h * direction, m, x, theta) for h in hs]
    return complex(_neville_at_zero(hs, values))


def kernel_J(mu: complex, m: int, z: complex, backend: str = "auto") -> complex:
    """
    核函数 𝐉_{μ,m}(z)

    偶 m：(2π²/sin 2πμ)(J_{μ,m}(4πz) − J_{−μ,−m}(4πz))；
    奇 m：(2π²i/cos 2πμ)(J_{μ,m}(4πz) + J_{−μ,−m}(4πz))；
    J_{μ,m}(z) = J_{−2μ−m/2}(z)J_{−2μ+m/2}(z̄)。

    Args:
        mu: 复参数 μ
        m: 整数
        z: 非零复数
        backend: "auto"、"series"（定义式，需要时 Richardson 外推）或 "asymptotic"（Hankel 渐近）
    """
    z = complex(z)
    return kernel_J_polar(mu, m, abs(z), math.atan2(z.imag, z.real), backend)


def spherical_J(t: float, z: complex, backend: str = "auto") -> complex:
    """球面核 𝐉_{it}(z) = 𝐉_{it,0}(z)"""
    return kernel_J(1j * t, 0, z, backend)


def kernel_J_hankel_form(mu: complex, m: int, z: complex) -> complex:
    """
    𝐉_{μ,m}(z) = π²i(e^{2πiμ}H¹_{μ,m}(4πz) + (−1)^{m+1}e^{−2πiμ}H²_{μ,m}(4πz))，
    H^{(1,2)}_{μ,m}(w) = H^{(1,2)}_{2μ+m/2}(w)H^{(1,2)}_{2μ−m/2}(w̄)，mpmath 精确值

    左半平面按 𝐉(−z) = (−1)^m 𝐉(z) 反射，使两个因子都取主支。
    """
    z = complex(z)
    if z == 0:
        raise RegimeError("𝐉_{μ,m}(z) 要求 z ≠ 0")
    if z.real < 0:
        return (-1) ** m * kernel_J_hankel_form(mu, m, -z)
    mu = complex(mu)
    a, b = 2 * mu + m / 2, 2 * mu - m / 2
    w = 4 * math.pi * z
    with mpmath.workdps(_series_dps(w, a, b)):
        mw = mpmath.mpc(w)
        first = mpmath.hankel1(a, mw) * mpmath.hankel1(b, mpmath.conj(mw))
        second = mpmath.hankel2(a, mw) * mpmath.hankel2(b, mpmath.conj(mw))
        e = mpmath.expj(2 * mpmath.pi * mpmath.mpc(mu))
        value = mpmath.pi ** 2 * 1j * (e * first + (-1) ** (m + 1) * second / e)
        return complex(value)


def kernel_J_integral(mu: complex, m: int, x: float, phi: float) -> complex:
    """
    积分表示 𝐉_{μ,m}(xe^{iφ}) = 4πi^m ∫₀^∞ y^{4μ−1}E(ye^{iφ})^{−m}J_m(4πxY(ye^{iφ}))dy，
    Y(z) = |z + 1/z|，E(z) = (z + 1/z)/Y(z)

    把 (0, 1] 经 y ↦ 1/y 折到 [1, ∞)（Y 不变，E 取共轭），再用 mpmath.quadosc 做振荡积分。

    Raises:
        RegimeError: |Re μ| ≥ 1/8
    """
    mu = complex(mu)
    if abs(mu.real) >= 0.125:
        raise RegimeError(f"积分表示要求 |Re μ| < 1/8，当前 {mu.real}")
    if x <= 0:
        raise RegimeError("𝐉_{μ,m}(z) 要求 z ≠ 0")
    with mpmath.workdps(20):
        rot = mpmath.expj(mpmath.mpf(phi))
        mmu = mpmath.mpc(mu)
        scale = 4 * mpmath.pi * mpmath.mpf(x)

        def integrand(y):
            s = y * rot + 1 / (y * rot)
            big_y = abs(s)
            if big_y == 0:
                return mpmath.mpc(0) if m else 2 * mpmath.cosh(4 * mmu * mpmath.log(y)) / y
            E = s / big_y
            jm = mpmath.besselj(m, scale * big_y)
            weights = mpmath.power(y, 4 * mmu - 1) * mpmath.power(E, -m) \
                + mpmath.power(y, -4 * mmu - 1) * mpmath.power(mpmath.conj(E), -m)
            return weights * jm

        total = mpmath.quadosc(integrand, [1, mpmath.inf], omega=scale)
        return complex(4 * mpmath.pi * mpmath.power(1j, m) * total)


@dataclass(frozen=True)
class AsymptoticDecomposition:
    """𝐉_{it}(z) = e(4Re z)W(z) + e(−4Re z)W(−z) + E(z) 的各部分"""

    W_plus: complex
    W_minus: complex
    main: complex
    exact: complex
    envelope: float

    @property
    def residual(self) -> float:
        return abs(self.exact - self.main)


def W_series(t: float, z: complex, K: int) -> complex:
    """
    W(z) = (1/2|z|) Σ_{k,k′<K} (2it,k)(2it,k′)/((−8πi)^{k+k′} z^k z̄^{k′})

    k = k′ = 0 项为 1/(2|z|)。
    """
    z = complex(z)
    coeffs = [hankel_coefficient(2j * t, k) / (-8j * math.pi * z) ** k for k in range(K)]
    coeffs_bar = [hankel_coefficient(2j * t, k) / (-8j * math.pi * z.conjugate()) ** k for k in range(K)]
    return complex(sum(coeffs) * sum(coeffs_bar) / (2 * abs(z)))


def asymptotic_decomposition(t: float, z: complex, K: int) -> AsymptoticDecomposition:
    """
    截断双重级数给出 W(±z)，与 kernel_J 比较，包络为 (|t|+1)^{2K}/|z|^{1+K}

    Raises:
        RegimeError: |z| < (|t|+1)²
    """
    z = complex(z)
    if abs(z) < (abs(t) + 1) ** 2:
        raise RegimeError(f"渐近分解要求 |z| ≥ (|t|+1)² = {(abs(t) + 1) ** 2}")
    w_plus = W_series(t, z, K)
    w_minus = W_series(t, -z, K)
    phase = np.exp(8j * math.pi * z.real)
    main = phase * w_plus + w_minus / phase
    exact = spherical_J(t, z)
    envelope = (abs(t) + 1) ** (2 * K) / abs(z) ** (1 + K)
    return AsymptoticDecomposition(w_plus, w_minus, complex(main), exact, envelope)


def _poly_add(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    shape = (max(p.shape[0], q.shape[0]), max(p.shape[1], q.shape[1]))
    result = np.zeros(shape, dtype=np.int64)
    result[:p.shape[0], :p.shape[1]] += p
    result[:q.shape[0], :q.shape[1]] += q
    return result


def _shift(p: np.ndarray, dy: int, dz: int) -> np.ndarray:
    """乘以 Y^dy Z^dz"""
    result = np.zeros((p.shape[0] + dy, p.shape[1] + dz), dtype=np.int64)
    result[dy:, dz:] = p
    return result


def _z_times_dz(p: np.ndarray) -> np.ndarray:
    """Z·∂_Z"""
    return p * np.arange(p.shape[1])[None, :]


def derivative_polynomials(max_order: int = 4) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """
    整系数多项式 P₀^α(Y,Z)、P₁^α(Y,Z)，使 z^α (d/dz)^α J_ν(z) = zP₁^α J_ν′ + P₀^α J_ν，Y = ν²，Z = z²

    由 Bessel 方程 z²J″ = −zJ′ + (Y − Z)J 递推：
    P₁^{α+1} = 2Z∂_Z P₁ + P₀ − αP₁，P₀^{α+1} = (Y − Z)P₁ + 2Z∂_Z P₀ − αP₀。
    系数数组下标 [i, j] 对应 Y^i Z^j。
    """
    p0 = np.array([[1]], dtype=np.int64)
    p1 = np.array([[0]], dtype=np.int64)
    tables = {0: (p0, p1)}
    for alpha in range(max_order):
        y_minus_z = _poly_add(_shift(p1, 1, 0), -_shift(p1, 0, 1))
        new_p1 = _poly_add(_poly_add(2 * _z_times_dz(p1), p0), -alpha * p1)
        new_p0 = _poly_add(_poly_add(y_minus_z, 2 * _z_times_dz(p0)), -alpha * p0)
        p0, p1 = new_p0, new_p1
        tables[alpha + 1] = (p0, p1)
    return tables


_P_TABLES = derivative_polynomials(4)


def _eval_poly(coeffs: np.ndarray, Y: complex, Z: complex) -> complex:
    return complex(npoly.polyval2d(Y, Z, coeffs.astype(complex)))


def derivative_rhs(t: float, z: complex, alpha: int, beta: int) -> complex:
    """
    z^α z̄^β ∂^α ∂̄^β 𝐉_{it}(z) 的核函数展开：
    P₀P̄₀𝐉_{it} − 4π²|z|²P₁P̄₁(𝐉_{it+1/2} + 𝐉_{it−1/2} + 𝐉_{it,2} + 𝐉_{it,−2})
    + 2πi z P₁P̄₀(𝐉_{it+1/4,1} + 𝐉_{it−1/4,−1}) + 2πi z̄ P̄₁P₀(𝐉_{it+1/4,−1} + 𝐉_{it−1/4,1})，
    P 在 (−4t², (4πz)²) 处取值，P̄ 在 (−4t², (4πz̄)²) 处取值
    """
    if alpha not in _P_TABLES or beta not in _P_TABLES:
        raise RegimeError(f"只支持 α, β ≤ {max(_P_TABLES)}")
    z = complex(z)
    w = 4 * math.pi * z
    Y = -4.0 * t * t
    p0a, p1a = (_eval_poly(c, Y, w * w) for c in _P_TABLES[alpha])
    p0b, p1b = (_eval_poly(c, Y, w.conjugate() ** 2) for c in _P_TABLES[beta])
    mu = 1j * t
    total = p0a * p0b * kernel_J(mu, 0, z)
    if p1a != 0 and p1b != 0:
        group = (kernel_J(mu + 0.5, 0, z) + kernel_J(mu - 0.5, 0, z)
                 + kernel_J(mu, 2, z) + kernel_J(mu, -2, z))
        total -= 4 * math.pi ** 2 * abs(z) ** 2 * p1a * p1b * group
    if p1a != 0 and p0b != 0:
        total += 2j * math.pi * z * p1a * p0b * (kernel_J(mu + 0.25, 1, z) + kernel_J(mu - 0.25, -1, z))
    if p1b != 0 and p0a != 0:
        total += 2j * math.pi * z.conjugate() * p1b * p0a * (kernel_J(mu + 0.25, -1, z) + kernel_J(mu - 0.25, 1, z))
    return complex(total)


def _wirtinger_fd(f, z: complex, alpha: int, beta: int, h: float) -> complex:
    """中心差分的 Wirtinger 导数 ∂^α ∂̄^β f（α + β ≤ 2）"""
    def val(dx, dy):
        return f(z + complex(dx * h, dy * h))

    if alpha + beta == 0:
        return val(0, 0)
    fx = (val(1, 0) - val(-1, 0)) / (2 * h)
    fy = (val(0, 1) - val(0, -1)) / (2 * h)
    if alpha + beta == 1:
        return 0.5 * (fx - 1j * fy) if alpha == 1 else 0.5 * (fx + 1j * fy)
    f0 = val(0, 0)
    fxx = (val(1, 0) - 2 * f0 + val(-1, 0)) / h ** 2
    fyy = (val(0, 1) - 2 * f0 + val(0, -1)) / h ** 2
    fxy = (val(1, 1) - val(1, -1) - val(-1, 1) + val(-1, -1)) / (4 * h * h)
    if alpha == 2:
        return 0.25 * (fxx - 2j * fxy - fyy)
    if beta == 2:
        return 0.25 * (fxx + 2j * fxy - fyy)
    return 0.25 * (fxx + fyy)


def derivative_lhs(t: float, z: complex, alpha: int, beta: int, h: Optional[float] = None) -> complex:
    """z^α z̄^β ∂^α ∂̄^β 𝐉_{it}(z) 的有限差分值（步长 h 与 h/2 的 Richardson 组合）"""
    if alpha + beta > 2:
        raise RegimeError("有限差分只实现到 α + β ≤ 2")
    z = complex(z)
    if abs(z) < 1e-6:
        raise RegimeError("z 过于接近 0，差分模板下溢")
    h = h or 1e-3 * min(1.0, abs(z))
    f = lambda u: spherical_J(t, u)
    coarse = _wirtinger_fd(f, z, alpha, beta, h)
    fine = _wirtinger_fd(f, z, alpha, beta, h / 2)
    derivative = fine + (fine - coarse) / 3
    return complex(z ** alpha * z.conjugate() ** beta * derivative)


def derivative_recurrence_check(t: float, z: complex, alpha: int, beta: int) -> Tuple[complex, complex, float]:
    """
    有限差分左端与核函数展开右端的比较

    Returns:
        tuple: (左端, 右端, 相对残差)
    """
    lhs = derivative_lhs(t, z, alpha, beta)
    rhs = derivative_rhs(t, z, alpha, beta)
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return lhs, rhs, abs(lhs - rhs) / scale


def derivative_growth_scan(t_list: Sequence[float], z_list: Sequence[complex],
                           orders: Sequence[Tuple[int, int]] = ((1, 0), (0, 1), (1, 1))) -> pd.DataFrame:
    """
    |t(4t²+1) z^α z̄^β ∂^α∂̄^β 𝐉_{it}(z)| 与 (|t|+1)⁵min{1,1/|z|}(|z|+|t|+1)^{α+β} 之比（t ≠ 0）

    导数由 derivative_rhs 的核函数展开给出。
    """
    rows = []
    for t in t_list:
        if t == 0:
            continue
        for z in map(complex, z_list):
            for alpha, beta in orders:
                value = abs(t * (4 * t * t + 1) * derivative_rhs(t, z, alpha, beta))
                bound = (abs(t) + 1) ** 5 * min(1.0, 1 / abs(z)) * (abs(z) + abs(t) + 1) ** (alpha + beta)
                rows.append({"t": t, "z": z, "alpha": alpha, "beta": beta, "value": value,
                             "bound": bound, "ratio": value / bound})
    return pd.DataFrame(rows)


def poisson_bound(nu: complex, z: complex) -> float:
    """
    Re ν > −1/2：|z^ν|e^{|Im z|}/|Γ(ν+1/2)|；
    −3/2 < Re ν ≤ −1/2：|z^ν|e^{|Im z|}/|Γ(ν+3/2)|·(|ν+1| + |z²|/|ν+3/2|)

    Raises:
        RegimeError: Re ν ≤ −3/2
    """
    nu, z = complex(nu), complex(z)
    size = abs(complex(mpmath.power(z, nu))) * math.exp(abs(z.imag))
    if nu.real > -0.5:
        return size * abs(complex(mpmath.rgamma(nu + 0.5)))
    if nu.real > -1.5:
        return size * abs(complex(mpmath.rgamma(nu + 1.5))) * (abs(nu + 1) + abs(z * z) / abs(nu + 1.5))
    raise RegimeError(f"Poisson 型界要求 Re ν > −3/2，当前 {nu.real}")


def poisson_bound_scan(nu_list: Sequence[complex], z_list: Sequence[complex], cap: float = 5.0) -> pd.DataFrame:
    """|J_ν(z)| 与 Poisson 型界之比，pass 要求比值 ≤ cap"""
    rows = []
    for nu in map(complex, nu_list):
        for z in map(complex, z_list):
            value = abs(classical_J(nu, z))
            bound = poisson_bound(nu, z)
            ratio = value / bound
            rows.append({"nu": nu, "z": z, "value": value, "bound": bound, "ratio": ratio,
                         "pass": bool(ratio <= cap)})
    return pd.DataFrame(rows)


def bound_for_J_mu_m_scan(k: int, mu_list: Sequence[complex], m_list: Sequence[int],
                          z_list: Sequence[complex], cap: float = TOLERANCES["envelope_cap"]) -> pd.DataFrame:
    """
    |𝐉_{μ,m}(z)| 与 1 + (|μ|+1)^k/|z|^{k+1/2} 之比（|z| > 1，|Re μ| < (2k+1)/8）

    Raises:
        RegimeError: 参数超出适用范围
    """
    rows = []
    for mu in map(complex, mu_list):
        if abs(mu.real) >= (2 * k + 1) / 8:
            raise RegimeError(f"|Re μ| = {abs(mu.real)} 不满足 < (2k+1)/8")
        for m in m_list:
            for z in map(complex, z_list):
                if abs(z) <= 1:
                    raise RegimeError(f"要求 |z| > 1: {z}")
                value = abs(kernel_J(mu, m, z))
                bound = 1 + (abs(mu) + 1) ** k / abs(z) ** (k + 0.5)
                rows.append({"k": k, "mu": mu, "m": m, "z": z, "value": value, "bound": bound,
                             "ratio": value / bound, "pass": bool(value / bound <= cap)})
    return pd.DataFrame(rows)


def uniform_bound_scan(t_list: Sequence[float], z_list: Sequence[complex],
                       cap: float = TOLERANCES["envelope_cap"]) -> pd.DataFrame:
    """|t·𝐉_{it}(z)| 与 (|t|+1)³min{1, 1/|z|} 之比"""
    rows = []
    for t in t_list:
        for z in map(complex, z_list):
            value = abs(t * spherical_J(t, z))
            bound = (abs(t) + 1) ** 3 * min(1.0, 1 / abs(z))
            rows.append({"t": t, "z": z, "value": value, "bound": bound, "ratio": value / bound,
                         "pass": bool(value / bound <= cap)})
    return pd.DataFrame(rows)


def bessel_scan(t_list: Sequence[float], z_abs_list: Sequence[float], points: int,
                threads: int = 1) -> pd.DataFrame:
    """
    在圆周网格上检查：定义式与 Hankel 形式的对偶路径、偶性、分支无关性

    Returns:
        pd.DataFrame: 列为 t, x, theta, value, hankel, residual, even_residual, branch_residual, pass
    """
    grid = [(t, x, 2 * math.pi * (j + 0.5) / points) for t in t_list for x in z_abs_list for j in range(points)]

    def check(item):
        t, x, theta = item
        z = x * complex(math.cos(theta), math.sin(theta))
        value = kernel_J_polar(1j * t, 0, x, theta)
        hankel = kernel_J_hankel_form(1j * t, 0, z)
        even = kernel_J(1j * t, 0, -z)
        branch = kernel_J_polar(1j * t, 0, x, theta + 2 * math.pi)
        scale = max(abs(value), 1e-300)
        residual = abs(value - hankel) / scale
        even_res = abs(value - even) / scale
        branch_res = abs(value - branch) / scale
        ok = residual < TOLERANCES["bessel_dual"] and even_res < TOLERANCES["exact"] \
            and branch_res < TOLERANCES["exact"]
        return {"t": t, "x": x, "theta": theta, "value": value, "hankel": hankel, "residual": residual,
                "even_residual": even_res, "branch_residual": branch_res, "pass": bool(ok)}

    df = pd.DataFrame(parallel_map(check, grid, threads))
    logger.info(f"Bessel 核网格检查: {int(df['pass'].sum())}/{len(df)} 点通过")
    return df
