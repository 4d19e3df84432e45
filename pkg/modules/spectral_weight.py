"""
谱权重模块
γ(s)、γ(s,t)、p(s,t)、G(v,t)、近似函数方程权重 V(y,t)、谱权重 h(t) = k(t)G(v,t)
以及 Bessel 积分 H(z) = ∫h(t)𝐉_{it}(z)t²dt；另含几何侧使用的复合测试函数 w(z;Λ) = v(|z|)H(Λ√z)
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.polynomial.legendre import leggauss
from scipy.interpolate import RectBivariateSpline
from scipy.special import loggamma

from .bessel_gl2 import classical_J, hankel_coefficient, spherical_J
from .config import WEIGHT_DEFAULTS
from .errors import RegimeError
from .utils import get_logger, parallel_map

logger = get_logger(__name__)

ARCHIMEDEAN_BOUND = 7 / 32
# 高斯尾 e^{−t²/T²} < 10⁻¹⁶·峰值 的截断
TRUNCATION_FACTOR = math.sqrt(40 * math.log(10))


def _nodes(a: float, b: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = leggauss(n)
    half = (b - a) / 2
    return a + half * (x + 1), half * w


@dataclass(frozen=True)
class SpectralWeight:
    """
    谱权重参数 (T, A′, μ, v)

    Attributes:
        T: 谱尺度，T ≥ 1
        A_prime: p(t) 消去的极点数
        mu: GL3 Archimedes 参数，|Re μ| ≤ 7/32
        v: 近似函数方程的线积分变量，默认 Re v = ε
    """

    T: float = WEIGHT_DEFAULTS["T"]
    A_prime: int = WEIGHT_DEFAULTS["A_prime"]
    mu: complex = WEIGHT_DEFAULTS["mu"]
    v: complex = WEIGHT_DEFAULTS["eps"]
    shifts: Tuple[complex, complex, complex] = field(init=False)

    def __post_init__(self):
        if self.T < 1:
            raise RegimeError(f"T 须 ≥ 1: {self.T}")
        if self.A_prime < 1:
            raise RegimeError(f"A′ 须为正整数: {self.A_prime}")
        if abs(complex(self.mu).real) > ARCHIMEDEAN_BOUND:
            raise RegimeError(f"|Re μ| = {abs(complex(self.mu).real)} 超过 7/32")
        mu = complex(self.mu)
        object.__setattr__(self, "shifts", (mu, 0j, -mu))

    @property
    def t_max(self) -> float:
        return self.T * TRUNCATION_FACTOR

    def log_gamma_s(self, s):
        """log γ(s)，γ(s) = 2³(2π)^{−3s}Γ(s+μ)Γ(s)Γ(s−μ)"""
        s = np.asarray(s, dtype=complex)
        total = 3 * math.log(2) - 3 * s * math.log(2 * math.pi)
        for shift in self.shifts:
            total = total + loggamma(s + shift)
        return total

    def gamma_s(self, s):
        return np.exp(self.log_gamma_s(s))

    def log_gamma_st(self, s, t):
        t = np.asarray(t, dtype=complex)
        return self.log_gamma_s(s - 1j * t) + self.log_gamma_s(s + 1j * t)

    def gamma_st(self, s, t):
        """γ(s,t) = γ(s−it)γ(s+it)，关于 t 为偶函数"""
        return np.exp(self.log_gamma_st(s, t))

    def p_st(self, s, t):
        """p(s,t) = ∏_{k<A′}∏_±(s ± it + μ + k)(s ± it + k)(s ± it − μ + k)"""
        t = np.asarray(t, dtype=complex)
        result = np.ones_like(t)
        for k in range(self.A_prime):
            for sign in (1, -1):
                for shift in self.shifts:
                    result = result * (s + sign * 1j * t + shift + k)
        return result

    def p_t(self, t):
        """p(t) = ∏_{k=0}^{2A′−1}(4t² + (k+1)²)"""
        t = np.asarray(t, dtype=complex)
        result = np.ones_like(t)
        for k in range(2 * self.A_prime):
            result = result * (4 * t * t + (k + 1) ** 2)
        return result

    def g_t(self, t):
        """g(t) = (t² + (A′+1)²)^{8A′}"""
        t = np.asarray(t, dtype=complex)
        return (t * t + (self.A_prime + 1) ** 2) ** (8 * self.A_prime)

    def k_weight(self, t):
        """k(t) = e^{−t²/T²}p(1/2,t)²p(t)/g(t)"""
        t = np.asarray(t, dtype=complex)
        return np.exp(-t * t / self.T ** 2) * self.p_st(0.5, t) ** 2 * self.p_t(t) / self.g_t(t)

    def pG(self, v, t):
        """
        G(v,t)·p(1/2,t)²，在 p(1/2,t) 的零点处仍有定义

        γ 比值取 log-Gamma 差再取指数。
        """
        t = np.asarray(t, dtype=complex)
        ratio = np.exp(self.log_gamma_st(0.5 + v, t) - self.log_gamma_st(0.5, t))
        return ratio * self.p_st(0.5 + v, t) * self.p_st(0.5 - v, t) * np.exp(v * v)

    def G(self, v, t):
        """G(v,t) = γ(1/2+v,t)/γ(1/2,t) · p(1/2+v,t)p(1/2−v,t)e^{v²}/p(1/2,t)²"""
        return self.pG(v, t) / self.p_st(0.5, t) ** 2

    def h_weight(self, t):
        """h(t) = k(t)G(v,t)，p(1/2,t)² 两两约去"""
        t = np.asarray(t, dtype=complex)
        return np.exp(-t * t / self.T ** 2) * self.p_t(t) / self.g_t(t) * self.pG(self.v, t)

    def V(self, y: float, t: complex, U: Optional[float] = None, nodes: Optional[int] = None) -> complex:
        """
        V(y,t) = (1/2πi)∫_{ε−iU}^{ε+iU} G(v,t)y^{−2v}dv/v，ε = Re v

        Args:
            y: 正实数
            t: 谱参数
            U: 截断高度，默认 WEIGHT_DEFAULTS["U"]
            nodes: Gauss–Legendre 节点数，默认按 y^{−2iτ} 的振荡次数确定
        """
        if y <= 0:
            raise RegimeError(f"V(y,t) 要求 y > 0: {y}")
        U = U or WEIGHT_DEFAULTS["U"]
        eps = complex(self.v).real
        if eps <= 0:
            raise RegimeError("V(y,t) 的积分线要求 Re v > 0")
        log_y = math.log(y)
        n = nodes or 64 + 4 * int(2 * U * abs(log_y) / math.pi + 1)
        tau, w = _nodes(-U, U, n)
        v = eps + 1j * tau
        integrand = self.G(v, complex(t)) * np.exp(-2 * v * log_y) / v
        return complex(np.sum(w * integrand) / (2 * math.pi))

    def V_error_term(self, y: float, t: complex, U: Optional[float] = None) -> float:
        """截断误差 (|t|+1)^{6ε}/(y^{2ε}e^{U²/2})"""
        U = U or WEIGHT_DEFAULTS["U"]
        eps = complex(self.v).real
        return (abs(t) + 1) ** (6 * eps) / (y ** (2 * eps) * math.exp(U * U / 2))


def plain_H(weight: SpectralWeight, nodes: Optional[int] = None) -> float:
    """H = ∫h(t)t²dt（被积函数为偶函数，只在 [0, t_max] 上求积后乘 2）"""
    n = nodes or max(WEIGHT_DEFAULTS["t_nodes"], int(8 * weight.t_max))
    t, w = _nodes(0.0, weight.t_max, n)
    return float(2 * np.sum(w * weight.h_weight(t).real * t * t))


def _h_nodes(weight: SpectralWeight, z: complex, nodes: Optional[int]) -> int:
    if nodes:
        return nodes
    log_scale = abs(math.log(max(4 * math.pi * abs(z), 1e-12) / 2))
    return max(WEIGHT_DEFAULTS["t_nodes"], int(1.5 * weight.t_max * (1 + 4 * log_scale)))


def bessel_integral_H(z: complex, weight: SpectralWeight, nodes: Optional[int] = None) -> complex:
    """
    H(z) = ∫h(t)𝐉_{it}(z)t²dt

    h(t)𝐉_{it}(z) 关于 t 为偶函数，在 [0, T√(40 ln 10)] 上做 Gauss–Legendre 求积。

    Raises:
        RegimeError: z = 0
    """
    z = complex(z)
    if z == 0:
        raise RegimeError("H(z) 要求 z ≠ 0")
    t, w = _nodes(0.0, weight.t_max, _h_nodes(weight, z, nodes))
    h = weight.h_weight(t)
    kernel = np.array([spherical_J(float(tt), z) for tt in t])
    return complex(2 * np.sum(w * h * kernel * t * t))


def small_z_H(z: complex, weight: SpectralWeight, shift: float = 0.0, nodes: Optional[int] = None) -> complex:
    """
    H(z) = 4π²i∫h(t)J_{2it}(4πz)J_{2it}(4πz̄)/sinh(2πt)·t²dt，积分线 Im t = −shift

    shift > 0 时积分线移过 p(t) 消去的 1/sinh 极点。
    """
    z = complex(z)
    if z == 0:
        raise RegimeError("H(z) 要求 z ≠ 0")
    wz = 4 * math.pi * z
    tau, wts = _nodes(-weight.t_max, weight.t_max, 2 * _h_nodes(weight, z, nodes))
    t = tau - 1j * shift
    h = weight.h_weight(t)
    bessel = np.array([classical_J(2j * tt, wz) * classical_J(2j * tt, wz.conjugate()) for tt in t])
    integrand = h * bessel / np.sinh(2 * math.pi * t) * t * t
    return complex(4 * math.pi ** 2 * 1j * np.sum(wts * integrand))


def contour_shift_check(z: complex, weight: SpectralWeight, nodes: Optional[int] = None) -> Dict[str, complex]:
    """
    |z| ≤ 1 时比较实轴积分与移到 Im t = −(A′ − 1/4) 的积分

    Returns:
        dict: real_line、shifted、kernel_form（𝐉_{it} 形式）与相对残差
    """
    z = complex(z)
    if abs(z) > 1:
        raise RegimeError(f"围道平移检查只用于 |z| ≤ 1: {z}")
    real_line = small_z_H(z, weight, 0.0, nodes)
    shifted = small_z_H(z, weight, weight.A_prime - 0.25, nodes)
    kernel_form = bessel_integral_H(z, weight, nodes)
    scale = max(abs(real_line), 1e-300)
    return {"real_line": real_line, "shifted": shifted, "kernel_form": kernel_form,
            "residual": abs(real_line - shifted) / scale,
            "kernel_residual": abs(real_line - kernel_form) / scale}


def H_envelope(z: complex, weight: SpectralWeight, eps: float = WEIGHT_DEFAULTS["eps"]) -> float:
    """T^{5+ε}min{|z|^{4A′}, 1/|z|}"""
    r = abs(complex(z))
    return weight.T ** (5 + eps) * min(r ** (4 * weight.A_prime), 1 / r)


def H_envelope_scan(T_list: Sequence[float], A_prime: int, z_list: Sequence[complex],
                    threads: int = 1) -> pd.DataFrame:
    """|H(z)| 与包络之比；各 T 的最大比值 C_T 写入 C_T 列，用于检查 C 随 T 的稳定性"""
    jobs = [(T, complex(z)) for T in T_list for z in z_list]

    def evaluate(job):
        T, z = job
        weight = SpectralWeight(T=T, A_prime=A_prime)
        value = bessel_integral_H(z, weight)
        envelope = H_envelope(z, weight)
        return {"T": T, "z": z, "H": value, "abs": abs(value), "envelope": envelope,
                "ratio": abs(value) / envelope}

    df = pd.DataFrame(parallel_map(evaluate, jobs, threads))
    df["C_T"] = df.groupby("T")["ratio"].transform("max")
    return df


def G_bound_scan(weight: SpectralWeight, t_re: Sequence[float], t_im: Sequence[float]) -> pd.DataFrame:
    """|G(v,t)p(1/2,t)²| 与 (|t|+1)^{12A′+6Re v} 之比，|Im t| < A′ + 9/32"""
    exponent = 12 * weight.A_prime + 6 * complex(weight.v).real
    rows = []
    for im in t_im:
        if abs(im) >= weight.A_prime + 9 / 32:
            raise RegimeError(f"|Im t| = {abs(im)} 超出全纯区域")
        for re in t_re:
            t = complex(re, im)
            value = abs(complex(weight.pG(weight.v, t)))
            bound = (abs(t) + 1) ** exponent
            rows.append({"t": t, "value": value, "bound": bound, "ratio": value / bound})
    return pd.DataFrame(rows)


def V_decay_scan(weight: SpectralWeight, y_list: Sequence[float], t_list: Sequence[float],
                 A: int = 2) -> pd.DataFrame:
    """|p(1/2,t)²V(y,t)| 与 (|t|+1)^{12A′}(1 + y/(|t|+1)⁶)^{−A} 之比"""
    rows = []
    for t in t_list:
        p2 = abs(complex(weight.p_st(0.5, t))) ** 2
        for y in y_list:
            value = p2 * abs(weight.V(y, t))
            bound = (abs(t) + 1) ** (12 * weight.A_prime) * (1 + y / (abs(t) + 1) ** 6) ** (-A)
            rows.append({"t": t, "y": y, "value": value, "bound": bound, "ratio": value / bound})
    return pd.DataFrame(rows)


def bump(x, r1: float = 1.0, r2: float = 2.0):
    """[r1, r2] 上的光滑 bump，峰值 1"""
    x = np.asarray(x, dtype=float)
    u = (2 * x - r1 - r2) / (r2 - r1)
    inside = np.abs(u) < 1
    out = np.zeros_like(x)
    out[inside] = np.exp(1 - 1 / (1 - u[inside] ** 2))
    return out


class HInterpolator:
    """
    H(ζ) 在极坐标网格 (log|ζ|, arg ζ) 上的样条插值

    H 为偶函数，辐角只需覆盖 [0, π)，网格两侧按周期补点。
    """

    def __init__(self, weight: SpectralWeight, r_min: float, r_max: float,
                 n_r: int = 24, n_theta: int = 24, threads: int = 1):
        if not 0 < r_min < r_max:
            raise RegimeError(f"插值半径区间无效: [{r_min}, {r_max}]")
        self.weight = weight
        self.r_min, self.r_max = r_min, r_max
        self.log_r = np.linspace(math.log(r_min), math.log(r_max), n_r)
        theta = np.arange(n_theta) * math.pi / n_theta
        pad = 3
        grid = [(lr, th) for lr in self.log_r for th in theta]
        values = np.array(parallel_map(
            lambda p: bessel_integral_H(cmath.rect(math.exp(p[0]), p[1]), weight), grid, threads
        )).reshape(n_r, n_theta)
        ext_theta = np.concatenate([theta[-pad:] - math.pi, theta, theta[:pad] + math.pi])
        ext_values = np.concatenate([values[:, -pad:], values, values[:, :pad]], axis=1)
        self._re = RectBivariateSpline(self.log_r, ext_theta, ext_values.real)
        self._im = RectBivariateSpline(self.log_r, ext_theta, ext_values.imag)
        logger.info(f"H(z) 插值表: {n_r}×{n_theta} 个节点, |ζ| ∈ [{r_min:.3g}, {r_max:.3g}]")

    def __call__(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        r = abs(zeta)
        if not self.r_min <= r <= self.r_max:
            return bessel_integral_H(zeta, self.weight)
        theta = math.atan2(zeta.imag, zeta.real) % math.pi
        lr = math.log(r)
        return complex(self._re(lr, theta)[0, 0], self._im(lr, theta)[0, 0])


@dataclass
class CompositeWeight:
    """
    复合测试函数 w(z;Λ) = v(|z|)·H(Λ√z)

    H 为偶函数，故取值与 √z 的分支无关。evaluator 缺省时直接计算 H。
    """

    weight: SpectralWeight
    r1: float = 1.0
    r2: float = 2.0
    evaluator: Optional[HInterpolator] = None

    def H(self, zeta: complex) -> complex:
        if self.evaluator is not None:
            return self.evaluator(zeta)
        return bessel_integral_H(zeta, self.weight)

    def __call__(self, z: complex, lam: complex) -> complex:
        z = complex(z)
        radial = float(bump(abs(z), self.r1, self.r2))
        if radial == 0.0:
            return 0j
        return radial * self.H(complex(lam) * cmath.sqrt(z))

    def with_interpolation(self, lam_min: float, lam_max: float, threads: int = 1, **grid) -> "CompositeWeight":
        """按 |Λ| 范围建立插值表，返回新的 CompositeWeight"""
        r_min = lam_min * math.sqrt(self.r1)
        r_max = lam_max * math.sqrt(self.r2)
        interp = HInterpolator(self.weight, r_min, r_max, threads=threads, **grid)
        return CompositeWeight(self.weight, self.r1, self.r2, interp)


def weight_probe(weight: SpectralWeight, t_list: Sequence[float], y_list: Sequence[float],
                 z_abs_list: Sequence[float], threads: int = 1) -> Dict[str, pd.DataFrame]:
    """k(t)、h(t)、V(y,t)、H(z) 的采样表"""
    t = np.asarray(t_list, dtype=float)
    weights = pd.DataFrame({"t": t, "k": weight.k_weight(t).real, "h": weight.h_weight(t),
                            "G0": weight.G(0.0, t).real})
    v_rows = [{"y": y, "t": tt, "V": weight.V(y, tt), "V_minus_t": weight.V(y, -tt)}
              for y in y_list for tt in t_list]
    zs = [complex(r) for r in z_abs_list]
    h_rows = parallel_map(lambda z: {"z": z, "H": bessel_integral_H(z, weight),
                                     "H_minus": bessel_integral_H(-z, weight),
                                     "envelope": H_envelope(z, weight)}, zs, threads)
    return {"weights": weights, "V": pd.DataFrame(v_rows), "H": pd.DataFrame(h_rows)}


class BesselIntegralExpansion:
    """
    |ζ| 较大时 H(ζ) ≈ e(4Re ζ)𝐇(ζ) + e(−4Re ζ)𝐇(−ζ)，
    𝐇(ζ) = (1/2|ζ|) Σ_{k,k′<K} c_{kk′}(−8πiζ)^{−k}(−8πiζ̄)^{−k′}，c_{kk′} = ∫h(t)(2it,k)(2it,k′)t²dt

    逐点计算只需矩阵运算，供 GL3 Hankel 变换的网格采样使用。
    """

    def __init__(self, weight: SpectralWeight, K: int = 3, nodes: Optional[int] = None):
        if K < 1:
            raise RegimeError(f"K 须 ≥ 1: {K}")
        self.weight = weight
        self.K = K
        n = nodes or max(WEIGHT_DEFAULTS["t_nodes"], int(8 * weight.t_max))
        t, w = _nodes(0.0, weight.t_max, n)
        h = weight.h_weight(t)
        coeffs = np.array([[hankel_coefficient(2j * tt, k) for k in range(K)] for tt in t])
        weighted = 2 * w * h * t * t
        self.moments = np.einsum("n,nk,nl->kl", weighted, coeffs, coeffs)

    @property
    def min_radius(self) -> float:
        """展开有意义的最小 |ζ|，取 (T+1)²"""
        return (self.weight.T + 1) ** 2

    def amplitude(self, zeta):
        """𝐇(ζ)"""
        zeta = np.asarray(zeta, dtype=complex)
        a = 1 / (-8j * math.pi * zeta)
        b = 1 / (-8j * math.pi * np.conj(zeta))
        total = np.zeros_like(zeta)
        for k in range(self.K):
            for l in range(self.K):
                total = total + self.moments[k, l] * a ** k * b ** l
        return total / (2 * np.abs(zeta))

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        phase = np.exp(8j * math.pi * zeta.real)
        value = phase * self.amplitude(zeta) + self.amplitude(-zeta) / phase
        return value if value.ndim else complex(value)
