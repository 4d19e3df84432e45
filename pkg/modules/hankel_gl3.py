"""
GL3(ℂ) Hankel 变换模块
Mellin 恒等式 ℳ_{−m}W(2s) = G_m(s,π)ℳ_m w(2(1−s)) 路线、渐近核路线、
去相位变换 W̃(u,Λ) = e(−2Re(u/Λ²))W(u,Λ) 的衰减分区报告，以及 W̃ 在环形区域上的 Mellin 变量分离
"""

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from numpy.polynomial.legendre import leggauss
from scipy.special import loggamma

from .config import HANKEL_DEFAULTS, TOLERANCES, WEIGHT_DEFAULTS
from .errors import ConvergenceError, RegimeError
from .spectral_weight import BesselIntegralExpansion, SpectralWeight, bump
from .utils import fit_loglog_slope, get_logger, parallel_map

logger = get_logger(__name__)

# 渐近核的适用下限 |z| ≥ 10³
KERNEL_REGIME = 1e3
CUBE_ROOTS = tuple(cmath.exp(2j * math.pi * k / 3) for k in range(3))
# 共振参数 |Λ| = y^{1/3}/2^{1/12}，驻点落在 w 支撑的对数中点
RESONANCE_OFFSET = 2 ** (-1 / 12)


def _triple(mu: complex) -> Tuple[complex, complex, complex]:
    mu = complex(mu)
    return mu, 0j, -mu


def log_gamma_factor(s, m, mu: complex = 0.0):
    """log G_m(s,π)，s 与 m 可广播"""
    s = np.asarray(s, dtype=complex)
    am = np.abs(np.asarray(m))
    total = 3 * (am * 0.5j * math.pi + (1 - 2 * s) * math.log(2 * math.pi))
    for mu_l in _triple(mu):
        total = total + loggamma(s - mu_l + am / 2) - loggamma(1 - s + mu_l + am / 2)
    return total


def gamma_factor_Gm(s, m, mu: complex = 0.0):
    """
    G_m(s,π) = ∏_{l} i^{|m|}(2π)^{1−2s}Γ(s − μ_l + |m|/2)/Γ(1 − s + μ_l + |m|/2)，(μ₁,μ₂,μ₃) = (μ,0,−μ)

    Raises:
        RegimeError: s 落在 Γ(s − μ_l + |m|/2) 的极点上
    """
    s_arr = np.asarray(s, dtype=complex)
    am = np.abs(np.asarray(m))
    for mu_l in _triple(mu):
        arg = s_arr - mu_l + am / 2
        if np.any((np.abs(arg.imag) < 1e-14) & (arg.real <= 0) & (np.abs(arg.real - np.round(arg.real)) < 1e-14)):
            raise RegimeError(f"s = {s} 落在 G_m 的极点上")
    value = np.exp(log_gamma_factor(s_arr, m, mu))
    return value if value.ndim else complex(value)


@dataclass
class HankelJob:
    """
    Hankel 变换任务

    Attributes:
        w: 向量化测试函数 z ↦ w(z)，支撑在 r1 ≤ |z| ≤ r2
        mu: Archimedes 参数 (μ, 0, −μ) 中的 μ
        lam: 复合测试函数的 Λ（计算 W̃ 时需要）
        scale: 导数尺度 (S, X)
    """

    w: Callable[[np.ndarray], np.ndarray]
    mu: complex = HANKEL_DEFAULTS["mu"]
    r1: float = 1.0
    r2: float = 2.0
    lam: Optional[complex] = None
    scale: Tuple[float, float] = (1.0, 1.0)
    abscissa: float = HANKEL_DEFAULTS["abscissa"]
    min_orders: int = HANKEL_DEFAULTS["min_orders"]
    max_orders: int = HANKEL_DEFAULTS["max_orders"]
    radial_nodes: int = HANKEL_DEFAULTS["radial_nodes"]
    angular_nodes: int = HANKEL_DEFAULTS["angular_nodes"]
    tau_max: float = HANKEL_DEFAULTS["tau_max"]
    tau_step: float = HANKEL_DEFAULTS["tau_step"]
    tail_tol: float = HANKEL_DEFAULTS["tail_tol"]
    _cache: Dict[str, object] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not 0 < self.r1 < self.r2:
            raise RegimeError(f"支撑环无效: [{self.r1}, {self.r2}]")
        if self.angular_nodes < 2 * self.max_orders + 1:
            raise RegimeError("角向节点数须不少于 2·max_orders + 1")
        if abs(complex(self.mu).real) >= self.abscissa:
            raise RegimeError(f"Mellin 积分线 Re s = {self.abscissa} 须位于 Re μ 右侧")
        if self.radial_nodes < self.required_radial_nodes:
            logger.warning(f"径向节点 {self.radial_nodes} 不足以分辨 |τ| ≤ {self.tau_max:g} 的 Mellin 变换，"
                           f"至少需要 {self.required_radial_nodes}")

    @property
    def required_radial_nodes(self) -> int:
        """x^{−2iτ} 在 [r1, r2] 的 Legendre 变量中频率至多 τ_max(r2 − r1)/r1，Gauss 求积约需其一半的节点"""
        return int(math.ceil(self.tau_max * (self.r2 - self.r1) / (2 * self.r1))) + 16

    @classmethod
    def bump(cls, m0: int = 0, r1: float = 1.0, r2: float = 2.0, **controls) -> "HankelJob":
        """w(z) = v(|z|)(z/|z|)^{m0}，纯角向阶 m0"""
        def w(z):
            z = np.asarray(z, dtype=complex)
            return bump(np.abs(z), r1, r2) * np.exp(1j * m0 * np.angle(z))

        return cls(w=w, r1=r1, r2=r2, **controls)

    @classmethod
    def composite(cls, weight: SpectralWeight, lam: complex, K: int = 3, **controls) -> "HankelJob":
        """
        w(z;Λ) = v(|z|)·H(Λ√z)，v 为 [1, 2] 上的 bump，H 取大 |ζ| 展开

        H 为偶函数，取值与 √z 的分支无关。

        Raises:
            RegimeError: |Λ| 小于展开的适用半径
        """
        expansion = BesselIntegralExpansion(weight, K)
        if abs(lam) < expansion.min_radius:
            raise RegimeError(f"|Λ| = {abs(lam):.3g} 小于 H 展开的适用半径 {expansion.min_radius:.3g}")

        def w(z):
            z = np.asarray(z, dtype=complex)
            return bump(np.abs(z), 1.0, 2.0) * expansion(complex(lam) * np.sqrt(z))

        S = abs(plain_amplitude(expansion)) / abs(lam)
        X = max(1.0, 8 * math.pi * abs(lam))
        return cls(w=w, mu=weight.mu, r1=1.0, r2=2.0, lam=complex(lam), scale=(S, X), **controls)

    def sample_grid(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """径向 Gauss–Legendre × 角向等距网格上的 (x, 径向权, φ, w 值)"""
        if "grid" not in self._cache:
            u, wts = leggauss(self.radial_nodes)
            half = (self.r2 - self.r1) / 2
            x = self.r1 + half * (u + 1)
            phi = 2 * math.pi * np.arange(self.angular_nodes) / self.angular_nodes
            z = x[:, None] * np.exp(1j * phi)[None, :]
            self._cache["grid"] = (x, half * wts, phi, np.asarray(self.w(z), dtype=complex))
        return self._cache["grid"]

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.sample_grid()[3])))

    def angular_coefficients(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        a_m(x) = ∫w(xe^{iφ})e^{imφ}dφ，|m| ≤ M，M 自 min_orders 起倍增直到尾部 < tail_tol

        Raises:
            ConvergenceError: max_orders 时尾部仍超过容差
        """
        if "angular" in self._cache:
            return self._cache["angular"]
        x, wr, phi, values = self.sample_grid()
        n = self.angular_nodes
        coeffs = 2 * math.pi * np.fft.ifft(values, axis=1)
        orders_all = np.fft.fftfreq(n, 1.0 / n).astype(int)
        energy = np.abs(coeffs).T @ wr
        total = energy.sum()
        M = self.min_orders
        while True:
            tail = energy[np.abs(orders_all) > M].sum()
            if total == 0 or tail <= self.tail_tol * total:
                break
            if M >= self.max_orders:
                raise ConvergenceError(f"角向级数未收敛: M = {M}, 尾部占比 {tail / total:.3g}")
            M = min(2 * M, self.max_orders)
        orders = np.arange(-M, M + 1)
        result = (orders, coeffs[:, orders % n])
        logger.debug(f"角向截断 M = {M}")
        self._cache["angular"] = result
        return result


def plain_amplitude(expansion: BesselIntegralExpansion) -> float:
    """∫h(t)t²dt，即展开的首项矩 c₀₀"""
    return float(expansion.moments[0, 0].real)


def _tau_grid(job: HankelJob) -> np.ndarray:
    n = int(round(job.tau_max / job.tau_step))
    return job.tau_step * np.arange(-n, n + 1)


def _derivative_multiplier(s: np.ndarray, m: np.ndarray, alpha: int, beta: int) -> np.ndarray:
    """u^αū^β∂^α∂̄^β 作用在 e^{imθ}y^{−2s} 上的乘子 ∏(−s + m/2 − j)∏(−s − m/2 − k)"""
    result = np.ones(np.broadcast(s, m).shape, dtype=complex)
    for j in range(alpha):
        result = result * (-s + m / 2 - j)
    for k in range(beta):
        result = result * (-s - m / 2 - k)
    return result


def radial_modes(job: HankelJob, y: Sequence[float], alpha: int = 0, beta: int = 0,
                 block: int = 64) -> Tuple[np.ndarray, np.ndarray]:
    """
    F_m(y) = ∫G_m(s)ℳ_m w(2−2s)y^{−2s}dτ（s = σ + iτ），W(ye^{iθ}) = (1/4π²)Σ_m e^{imθ}F_m(y)

    Returns:
        tuple: (orders, F)，F 形状为 (阶数, len(y))
    """
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise RegimeError("Hankel 变换要求 |u| > 0")
    orders, coeffs = job.angular_coefficients()
    x, wr, _, _ = job.sample_grid()
    tau = _tau_grid(job)
    s = job.abscissa + 1j * tau
    powers = np.exp(np.outer(1 - 2 * s, np.log(x)))
    y_powers = np.exp(np.outer(-2 * s, np.log(y))) * job.tau_step
    F = np.zeros((len(orders), len(y)), dtype=complex)
    edge, peak = 0.0, 0.0
    for start in range(0, len(orders), block):
        m = orders[start:start + block]
        mellin = 2 * powers @ (wr[:, None] * coeffs[:, start:start + block])
        integrand = np.exp(log_gamma_factor(s[:, None], m[None, :], job.mu)) * mellin
        integrand *= _derivative_multiplier(s[:, None], m[None, :], alpha, beta)
        magnitude = np.abs(integrand)
        peak = max(peak, float(magnitude.max()))
        edge = max(edge, float(magnitude[[0, -1], :].max()))
        F[start:start + block] = integrand.T @ y_powers
    if peak > 0 and edge > 1e-10 * peak:
        logger.warning(f"Mellin 积分线截断处相对幅度 {edge / peak:.3g}，可增大 tau_max")
    return orders, F


def hankel_transform(job: HankelJob, u, alpha: int = 0, beta: int = 0):
    """
    Mellin 路线的 Hankel 变换 W(u)；α、β > 0 时给出 u^αū^β∂^α∂̄^β W(u)

    Args:
        job: 变换任务
        u: 非零复数或数组
    """
    u_arr = np.atleast_1d(np.asarray(u, dtype=complex))
    radii, inverse = np.unique(np.abs(u_arr), return_inverse=True)
    orders, F = radial_modes(job, radii, alpha, beta)
    theta = np.angle(u_arr)
    phases = np.exp(1j * np.outer(theta, orders))
    values = np.einsum("nm,mn->n", phases, F[:, inverse]) / (4 * math.pi ** 2)
    return values if np.ndim(u) else complex(values[0])


def kernel_asymptotic_polar(r, theta, B: Sequence[complex] = (1.0,)):
    """
    渐近核 Σ_ξ e(3(ζ + ζ̄))/|z|^{2/3} Σ_{k+l<K} B_kB_l ζ^{−k}ζ̄^{−l}，ζ = ξz^{1/3}，z = re^{iθ}

    ξ 取遍三次单位根，和式与 θ 的 2π 代表无关。
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < KERNEL_REGIME):
        raise RegimeError(f"渐近核要求 |z| ≥ {KERNEL_REGIME:g}")
    root = np.cbrt(r) * np.exp(1j * np.asarray(theta, dtype=float) / 3)
    K = len(B)
    total = np.zeros(np.broadcast(r, root).shape, dtype=complex)
    for xi in CUBE_ROOTS:
        zeta = xi * root
        series = np.zeros_like(total)
        for k in range(K):
            for l in range(K - k):
                series = series + B[k] * B[l] * zeta ** (-k) * np.conj(zeta) ** (-l)
        total = total + np.exp(2j * math.pi * 6 * zeta.real) * series
    value = total / r ** (2 / 3)
    return value if value.ndim else complex(value)


def kernel_asymptotic(z, K: int = 1, B: Optional[Sequence[complex]] = None):
    """
    kernel_asymptotic_polar 的复数入口（主支辐角）

    Args:
        K: 截断阶数
        B: 系数表 B_0..B_{K−1}，缺省时只有 K = 1 可用（B₀ = 1，未标定）

    Raises:
        RegimeError: |z| < 10³，或 K 超出已知系数
    """
    coeffs = tuple(B) if B is not None else (1.0,)
    if not 1 <= K <= len(coeffs):
        raise RegimeError(f"K = {K} 超出已知系数 B_k 的个数 {len(coeffs)}")
    z = np.asarray(z, dtype=complex)
    return kernel_asymptotic_polar(np.abs(z), np.angle(z), coeffs[:K])


def hankel_transform_kernel(job: HankelJob, u: complex, B: Sequence[complex] = (1.0,)) -> complex:
    """
    核函数路线 W(u) = ∫w(z)𝐉(uz)dz（dz 为 ℂ 上测度的两倍），渐近核

    Raises:
        RegimeError: |u|·r1 < 10³
    """
    u = complex(u)
    if abs(u) * job.r1 < KERNEL_REGIME:
        raise RegimeError(f"|u|·r1 = {abs(u) * job.r1:.3g} 不在渐近核的适用范围内")
    x, wr, phi, values = job.sample_grid()
    uz_r = abs(u) * x[:, None] * np.ones_like(phi)[None, :]
    uz_theta = np.angle(u) + phi[None, :] * np.ones_like(x)[:, None]
    kernel = kernel_asymptotic_polar(uz_r, uz_theta, B)
    dphi = 2 * math.pi / job.angular_nodes
    return complex(2 * np.sum(values * kernel * (wr * x)[:, None]) * dphi)


def _complex_median(values) -> complex:
    values = np.asarray(values, dtype=complex)
    return complex(np.median(values.real), np.median(values.imag))


def calibrate_B0(jobs: Sequence[HankelJob], u_list: Sequence[complex]) -> pd.DataFrame:
    """
    以 Mellin 路线与 B₀ = 1 的核路线之比标定 B₀²

    Returns:
        pd.DataFrame: 每个任务、每个 u 的比值，以及各任务中位数相对全体中位数的偏差 spread
    """
    rows = []
    for idx, job in enumerate(jobs):
        for u in map(complex, u_list):
            mellin = hankel_transform(job, u)
            kernel = hankel_transform_kernel(job, u)
            rows.append({"job": idx, "u": u, "mellin": mellin, "kernel": kernel,
                         "B0_sq": mellin / kernel if kernel != 0 else complex("nan")})
    df = pd.DataFrame(rows)
    overall = _complex_median(df["B0_sq"])
    per_job = df.groupby("job")["B0_sq"].apply(_complex_median)
    df["spread"] = df["job"].map(lambda j: abs(per_job[j] - overall) / max(abs(overall), 1e-300))
    df["pass"] = df["spread"] <= TOLERANCES["b0_calibration"]
    df.attrs["B0_sq"] = overall
    logger.info(f"B₀² 标定值 {overall:.6g}")
    return df


def dual_path_report(job: HankelJob, u_list: Sequence[complex], B0_sq: complex) -> pd.DataFrame:
    """
    Mellin 路线与标定后核路线 B₀²·W_kernel 的相对偏差

    只有 B₀ 已知，K = 1 的截断误差为 O(|u·r1|^{−1/3})，允许偏差取 hankel_dual 加上该项。
    """
    rows = []
    for u in map(complex, u_list):
        mellin = hankel_transform(job, u)
        kernel = B0_sq * hankel_transform_kernel(job, u)
        rel = abs(mellin - kernel) / max(abs(mellin), 1e-300)
        allowed = TOLERANCES["hankel_dual"] + (abs(u) * job.r1) ** (-1 / 3)
        rows.append({"u": u, "mellin": mellin, "kernel": kernel, "rel_error": rel,
                     "allowed": allowed, "pass": rel <= allowed})
    return pd.DataFrame(rows)


def w_tilde(job: HankelJob, u, alpha: int = 0, beta: int = 0):
    """W̃(u,Λ) = e(−2Re(u/Λ²))W(u,Λ)"""
    if job.lam is None:
        raise RegimeError("W̃ 需要复合测试函数的 Λ")
    u_arr = np.asarray(u, dtype=complex)
    phase = np.exp(-4j * math.pi * (u_arr / job.lam ** 2).real)
    return phase * hankel_transform(job, u, alpha, beta)


def hankel_transform_grid(job: HankelJob, grid: Sequence[complex]) -> pd.DataFrame:
    """(u, W, W̃) 表"""
    u = np.asarray(list(grid), dtype=complex)
    W = np.atleast_1d(hankel_transform(job, u))
    df = pd.DataFrame({"u": u, "W": W})
    if job.lam is not None:
        df["W_tilde"] = np.exp(-4j * math.pi * (u / job.lam ** 2).real) * W
    return df


def regime_of(y: float, lam: complex, Q: float, eps: float) -> str:
    """W̃ 衰减的四个分区"""
    a = abs(lam)
    if a <= Q ** (-eps / 12):
        return "small_lambda"
    if y <= Q ** eps:
        return "small_y"
    if a < y ** (1 / 3) / 2 or a > 2 * y ** (1 / 3):
        return "negligible"
    return "resonance"


def decay_Q(y: float, lam: complex, T: float, X: float, A_double_prime: int = HANKEL_DEFAULTS["A_double_prime"]) -> float:
    """Q = 10·(TX)^{A″}(y + 1/y)(|Λ| + 1/|Λ|)"""
    a = abs(lam)
    return 10 * (T * X) ** A_double_prime * (y + 1 / y) * (a + 1 / a)


def decay_report(weight: SpectralWeight, y_list: Sequence[float], points: int, K: int = 3,
                 off_factor: float = 0.45, eps: float = WEIGHT_DEFAULTS["eps"], threads: int = 1,
                 **controls) -> Tuple[pd.DataFrame, Dict[str, float]]:
    """
    对每个 y 取共振 Λ = y^{1/3}/2^{1/12} 与非共振 Λ = off_factor·y^{1/3}，在 |u| = y 的圆周上计算 W̃，
    分类并拟合 log(|W̃|/|Λ|) 关于 log y 的斜率

    Returns:
        tuple: (逐点表, 汇总)，汇总含 resonance_slope、uniform_C 与 suppression
    """
    theta = 2 * math.pi * np.arange(points) / points
    jobs = [(y, kind, factor * y ** (1 / 3)) for y in y_list
            for kind, factor in (("resonance", RESONANCE_OFFSET), ("off", off_factor))]

    def run(item):
        y, kind, lam = item
        job = HankelJob.composite(weight, lam, K, **controls)
        u = y * np.exp(1j * theta)
        values = np.atleast_1d(w_tilde(job, u))
        X = job.scale[1]
        Q = decay_Q(y, lam, weight.T, X)
        regime = regime_of(y, lam, Q, eps)
        uniform = weight.T ** (5 + eps) * Q ** eps / (abs(lam) * y)
        return [{"y": y, "kind": kind, "lam": lam, "theta": th, "W_tilde": v, "abs": abs(v),
                 "regime": regime, "Q": Q, "uniform_bound": uniform, "uniform_ratio": abs(v) / uniform}
                for th, v in zip(theta, values)]

    rows = [row for chunk in parallel_map(run, jobs, threads) for row in chunk]
    df = pd.DataFrame(rows)
    peaks = df.groupby(["y", "kind"])["abs"].max().unstack()
    res = peaks["resonance"]
    lam_res = RESONANCE_OFFSET * np.asarray(res.index, dtype=float) ** (1 / 3)
    slope = fit_loglog_slope(res.index.to_numpy(dtype=float), res.to_numpy() / lam_res)
    summary = {
        "resonance_slope": slope,
        "uniform_C": float(df["uniform_ratio"].max()),
        "suppression": float((peaks["off"] / peaks["resonance"]).max()),
    }
    logger.info(f"W̃ 衰减: 共振斜率 {slope:.3f}, 非共振/共振 {summary['suppression']:.3g}")
    return df, summary


def pre_bound_scan(job: HankelJob, u_list: Sequence[complex],
                   orders: Sequence[Tuple[int, int]] = ((0, 0), (1, 0), (0, 1), (1, 1), (2, 0))) -> pd.DataFrame:
    """
    |u^αū^β∂^α∂̄^β W| 与 ‖w‖_∞(2π(|u|^{1/3}+1))^{α+β}/|u|^{2/3} 之比

    核的相位为 e(3(ζ + ζ̄))，u∂_u 每作用一次带出 2πiζ，|ζ| ≍ |u|^{1/3}，故每阶导数计入 2π。
    """
    norm = job.sup_norm()
    u = np.asarray(list(u_list), dtype=complex)
    rows = []
    for alpha, beta in orders:
        values = np.atleast_1d(hankel_transform(job, u, alpha, beta))
        bound = norm * (2 * math.pi * (np.abs(u) ** (1 / 3) + 1)) ** (alpha + beta) / np.abs(u) ** (2 / 3)
        for uu, v, b in zip(u, values, bound):
            rows.append({"u": uu, "alpha": alpha, "beta": beta, "value": abs(v), "bound": b, "ratio": abs(v) / b})
    return pd.DataFrame(rows)


def small_z_bound_scan(job: HankelJob, u_list: Sequence[complex], sigma: float = 1 / 3) -> pd.DataFrame:
    """|u| ≪ 1 时 |W(u)|·|u|^{2σ}/‖w‖_∞ 应保持有界"""
    norm = job.sup_norm()
    u = np.asarray(list(u_list), dtype=complex)
    values = np.atleast_1d(hankel_transform(job, u))
    ratio = np.abs(values) * np.abs(u) ** (2 * sigma) / norm
    return pd.DataFrame({"u": u, "value": np.abs(values), "ratio": ratio})


def hankel_of_E_scan(job: HankelJob, u_list: Sequence[complex], A: int,
                     orders: Sequence[Tuple[int, int]] = ((0, 0), (1, 0), (0, 1))) -> pd.DataFrame:
    """
    |u^γū^δ∂^γ∂̄^δ W| 与 S·X^{2A}(2π)^{γ+δ}/|u|^{(2A+2−γ−δ)/3} 之比（|u| ≫ 1）

    每阶导数计入的 2π 与 pre_bound_scan 相同。
    """
    S, X = job.scale
    u = np.asarray(list(u_list), dtype=complex)
    rows = []
    for gamma, delta in orders:
        values = np.atleast_1d(hankel_transform(job, u, gamma, delta))
        bound = S * X ** (2 * A) * (2 * math.pi) ** (gamma + delta) / np.abs(u) ** ((2 * A + 2 - gamma - delta) / 3)
        for uu, v, b in zip(u, values, bound):
            rows.append({"u": uu, "A": A, "gamma": gamma, "delta": delta, "value": abs(v), "bound": b,
                         "ratio": abs(v) / b})
    return pd.DataFrame(rows)


@dataclass
class MellinSeparation:
    """
    W̃(ye^{iθ})·ω(y/Y) = Σ_{j,m} c_{jm} y^{it_j} e^{imθ} 的离散系数（log y 周期延拓）

    Attributes:
        Y: 中心尺度
        t: 频率 t_j
        m: 角向阶
        coeffs: c_{jm}
        period: log y 方向的周期长度
    """

    Y: float
    t: np.ndarray
    m: np.ndarray
    coeffs: np.ndarray
    period: float
    samples_energy: float

    @property
    def upsilon(self) -> np.ndarray:
        """Υ_Y(t,m) = c_{jm}/Δt"""
        return self.coeffs * self.period / (2 * math.pi)

    @property
    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def reconstruct(self, u) -> np.ndarray:
        u = np.atleast_1d(np.asarray(u, dtype=complex))
        log_y = np.log(np.abs(u) / self.Y)
        radial = np.exp(1j * np.outer(log_y, self.t))
        angular = np.exp(1j * np.outer(np.angle(u), self.m))
        return np.einsum("nj,jm,nm->n", radial, self.coeffs, angular)


def separation_window(x):
    """ω(x)：[1/4, 4] 上恒为 1，支撑在 [1/8, 8]，过渡段为光滑 bump 的累积"""
    x = np.asarray(x, dtype=float)
    r = np.abs(np.log2(np.maximum(x, 1e-300)))
    out = np.zeros_like(r)
    out[r <= 2] = 1.0
    mid = (r > 2) & (r < 3)
    s = r[mid] - 2
    a = np.exp(-1 / np.maximum(1 - s, 1e-300))
    b = np.exp(-1 / np.maximum(s, 1e-300))
    out[mid] = a / (a + b)
    return out


def mellin_separation(func: Callable[[np.ndarray], np.ndarray], Y: float,
                      n_log: int = 512, n_theta: int = 64) -> MellinSeparation:
    """
    在 y ∈ [Y/8, 8Y] × θ ∈ [0, 2π) 上对 func(ye^{iθ})ω(y/Y) 做二维 FFT

    ω 在两端为 0，log y 方向可周期延拓；在 [Y/4, 4Y] 上重构即为 func。
    """
    if Y <= 0:
        raise RegimeError(f"Y 须为正: {Y}")
    period = 6 * math.log(2)
    log_x = -3 * math.log(2) + period * np.arange(n_log) / n_log
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    y = Y * np.exp(log_x)
    u = y[:, None] * np.exp(1j * theta)[None, :]
    samples = np.asarray(func(u), dtype=complex) * separation_window(np.exp(log_x))[:, None]
    j = np.fft.fftfreq(n_log, 1.0 / n_log)
    m = np.fft.fftfreq(n_theta, 1.0 / n_theta).astype(int)
    t = 2 * math.pi * j / period
    # 相位基准移到 log(y/Y) = 0
    coeffs = np.fft.fft2(samples) / (n_log * n_theta)
    coeffs = coeffs * np.exp(-1j * t * log_x[0])[:, None]
    energy = float(np.mean(np.abs(samples) ** 2))
    return MellinSeparation(Y, t, m, coeffs, period, energy)


def separation_report(func: Callable[[np.ndarray], np.ndarray], Y: float, n_log: int = 512, n_theta: int = 64,
                      points: int = 100, seed: int = 0) -> Dict[str, float]:
    """重构误差、Parseval 偏差与加倍分辨率的混叠检测"""
    sep = mellin_separation(func, Y, n_log, n_theta)
    rng = np.random.default_rng(seed)
    radii = Y * np.exp(rng.uniform(-2 * math.log(2), 2 * math.log(2), points))
    u = radii * np.exp(1j * rng.uniform(0, 2 * math.pi, points))
    exact = np.asarray(func(u), dtype=complex)
    approx = sep.reconstruct(u)
    scale = max(float(np.max(np.abs(exact))), 1e-300)
    fine = mellin_separation(func, Y, 2 * n_log, 2 * n_theta)
    common = {(round(tt, 9), mm): c for tt, row in zip(sep.t, sep.coeffs) for mm, c in zip(sep.m, row)}
    alias = 0.0
    for tt, row in zip(fine.t, fine.coeffs):
        for mm, c in zip(fine.m, row):
            key = (round(tt, 9), mm)
            if key in common:
                alias = max(alias, abs(c - common[key]))
    return {
        "reconstruction_error": float(np.max(np.abs(exact - approx)) / scale),
        "parseval_error": abs(sep.energy - sep.samples_energy) / max(sep.samples_energy, 1e-300),
        "aliasing": alias / scale,
    }
