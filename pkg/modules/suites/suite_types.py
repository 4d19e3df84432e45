"""
具体验证套件
每个套件调用对应计算模块的扫描函数，把结果整理成统一的检查行
"""

import cmath
import math
from itertools import combinations, product
from typing import Any, Dict, List

import numpy as np

from ..autoforms import (
    bi_coefficient_source, eta_hecke_scan, hecke_relation_scan, kim_sarnak_scan, rs_growth_scan,
    rs_twisted_scan, satake_family,
)
from ..bessel_gl2 import (
    asymptotic_decomposition, bessel_scan, bound_for_J_mu_m_scan, derivative_growth_scan, derivative_recurrence_check,
    kernel_J, kernel_J_integral, poisson_bound_scan, uniform_bound_scan,
)
from ..characters import admissible_moduli, character_values_report
from ..charsum_pipeline import (
    SubsumParams, admissible_grid, bilinear_reduction_report, detection_identity_check, envelope_decay_check,
    geometric_sum, pipeline_grid_check, random_detection_array, synthetic_coefficients,
)
from ..config import OSC_DEFAULTS, TOLERANCES
from ..errors import ConfigError
from ..expsums import CI_VARIANTS, ci_Hr, g_bound_scan, kloosterman_twisted_multiplicativity, \
    selberg_kuznetsov_check, weil_bound_scan
from ..hankel_gl3 import (
    HankelJob, calibrate_B0, decay_report, dual_path_report, hankel_of_E_scan, hankel_transform, pre_bound_scan,
    separation_report, small_z_bound_scan,
)
from ..oscillatory import (
    OscJob, fresnel_oracle, g_lower_bound_check, ibp_machinery_check, off_range_scan, phase,
    phase_identities_check, self_consistency, sp_scan, vdc_1d, vdc_polar,
)
from ..spectral_weight import (
    CompositeWeight, G_bound_scan, H_envelope_scan, SpectralWeight, V_decay_scan, contour_shift_check,
    plain_H, weight_probe,
)
from ..utils import get_logger, make_rng, parallel_map
from ..zi_core import GaussianInt, canonical_up_to_norm, coprime, elements_up_to_norm, factor
from .base_suite import BaseSuite

logger = get_logger(__name__)


def _complex_list(values) -> List[complex]:
    """配置中的复数以 Python 字面量字符串给出，如 "1+0.5j" """
    try:
        return [complex(str(v).replace(" ", "")) for v in values]
    except ValueError as e:
        raise ConfigError(f"无法解析复数列表 {values}: {e}") from e


def _is_prime(q: GaussianInt) -> bool:
    factors = factor(q)
    return len(factors) == 1 and factors[0][1] == 1


class GaussSumsSuite(BaseSuite):
    """可容许模上的 τ(χ_q) = √N(q) 与 ε(χ_q) = 1"""

    name = "gauss-sums"

    def collect(self) -> None:
        moduli = admissible_moduli(self.params["max_norm"])
        df = character_values_report(moduli, TOLERANCES["gauss_sum"])
        for record in df.to_dict("records"):
            inputs = {"q": record["q"], "norm": record["norm"]}
            root = math.sqrt(record["norm"])
            self.add_row("gauss_sum", inputs, record["tau"], root, abs(record["tau"] - root), record["pass"])
            self.add_row("root_number", inputs, record["epsilon"], 1.0, abs(record["epsilon"] - 1.0), record["pass"])
        self.summary = {"moduli": len(moduli)}


class KloostermanSuite(BaseSuite):
    """Weil 型界的经验扫描；扭曲乘性只作探索记录"""

    name = "kloosterman"

    def collect(self) -> None:
        p = self.params
        c_list = [c for c in canonical_up_to_norm(p["max_c_norm"]) if not c.is_unit()]
        n_list = canonical_up_to_norm(p["max_n_norm"])
        df = weil_bound_scan(c_list, n_list)
        df["pass"] = df["ratio"] <= TOLERANCES["envelope_cap"]
        self.add_frame("weil_bound", df, ["n1", "n2", "c"])

        small = [c for c in canonical_up_to_norm(p["twisted_max_norm"]) if not c.is_unit()]
        worst = 0.0
        for c1, c2 in combinations(small, 2):
            if not coprime(c1, c2):
                continue
            for n1, n2 in product(n_list[:3], repeat=2):
                worst = max(worst, kloosterman_twisted_multiplicativity(n1, n2, c1, c2)[2])
        self.summary = {"max_weil_ratio": float(df["ratio"].max()), "twisted_max_residual": worst}


class SKIdentitySuite(BaseSuite):
    """
    S(n₁n₂, 1; c) 的 Selberg–Kuznetsov 展开

    S(εn₁, n₂; c) = S(n₁, εn₂; c)，n₁ 只取规范伴随元即覆盖全部 (n₁, n₂)。
    """

    name = "sk-identity"

    def collect(self) -> None:
        p = self.params
        n1_list = canonical_up_to_norm(p["max_n_norm"])
        n2_list = elements_up_to_norm(p["max_n_norm"])

        def check(c):
            rows = []
            for n1, n2 in product(n1_list, n2_list):
                lhs, rhs, diff = selberg_kuznetsov_check(n1, n2, c)
                rows.append(({"c": str(c), "n1": str(n1), "n2": str(n2)}, lhs, rhs, diff))
            return rows

        for chunk in parallel_map(check, canonical_up_to_norm(p["max_c_norm"]), self.threads):
            for inputs, lhs, rhs, diff in chunk:
                self.add_row("selberg_kuznetsov", inputs, lhs, rhs, diff, diff < TOLERANCES["identity"])
        self.summary = {"checks": len(self.rows)}


class CIScanSuite(BaseSuite):
    """H_r 直接和与分解式（两种指数解释），以及素模上 max_ψ|g(χ,ψ)| ≤ 4N(q)"""

    name = "ci-scan"

    def collect(self) -> None:
        p = self.params
        grid = canonical_up_to_norm(p["max_param_norm"])
        items = list(product(grid, repeat=4))
        for q in map(GaussianInt.of, p["q_list"]):
            for variant in CI_VARIANTS:
                results = parallel_map(lambda args: ci_Hr(*args, q, variant), items, self.threads)
                for (r, m, m1, m2), res in zip(items, results):
                    inputs = {"q": str(q), "variant": variant, "r": str(r), "m": str(m), "m1": str(m1),
                              "m2": str(m2), "vanishes": res.vanishes}
                    self.add_row("H_r", inputs, res.direct, res.factored, res.residual,
                                 res.residual < TOLERANCES["identity"])
        primes = [q for q in admissible_moduli(p["g_max_norm"]) if _is_prime(q)]
        df = g_bound_scan(primes, self.threads)
        self.add_frame("g_bound", df, ["q", "characters"])
        self.summary = {"prime_moduli": len(primes),
                        "max_g_ratio": float(df["ratio"].max()) if len(df) else 0.0}


class PipelineVerifySuite(BaseSuite):
    """T = e·V 分解、同余检测恒等式与最终子和的双线性化"""

    name = "pipeline-verify"
    BILINEAR_KEYS = ("q", "epsilon", "delta0", "delta_prime", "g", "n1", "r", "s", "N", "D2", "N2")

    def collect(self) -> None:
        p = self.params
        grid = []
        for q in p["q_list"]:
            grid.extend(admissible_grid(q, p["max_c_norm"], p["max_delta_norm"], p["n2_list"]))
        df = pipeline_grid_check(grid, self.threads)
        label_cols = ["q", "delta", "epsilon", "c", "c1", "n1", "n2", "vanishes"]
        for record in df.to_dict("records"):
            self.add_row("T_eV", {c: record[c] for c in label_cols}, record["T"], record["rhs"],
                         record["residual"], record["pass"])

        rng = self.rng()
        for c in canonical_up_to_norm(p["detection_max_norm"]):
            for k in range(p["detection_arrays"]):
                F = random_detection_array(p["detection_support_norm"], rng)
                a = GaussianInt.of((int(rng.integers(-4, 5)), int(rng.integers(-4, 5))))
                lhs, rhs, diff = detection_identity_check(c, F, a)
                self.add_row("detection", {"c": str(c), "array": k, "a": str(a)}, lhs, rhs, diff,
                             diff < TOLERANCES["detection"] * (1 + abs(lhs)))

        coeffs = bi_coefficient_source(satake_family(self.seed))
        for case in p["bilinear_cases"]:
            missing = [k for k in self.BILINEAR_KEYS if k not in case]
            if missing:
                raise ConfigError(f"bilinear_cases 缺少键: {', '.join(missing)}")
            params = SubsumParams.of(*(case[k] for k in self.BILINEAR_KEYS[:8]))
            report = bilinear_reduction_report(params, coeffs, case["N"], case["D2"], case["N2"])
            self.add_row("bilinear_reduction", dict(case), report.bilinear, report.scale * report.subsum,
                         report.residual, report.residual < TOLERANCES["identity"] * (1 + abs(report.bilinear)))
        self.summary = {"grid_size": len(grid), "vanishing": int(df["vanishes"].sum()) if len(df) else 0}


class CoeffsSuite(BaseSuite):
    """合成 GL3 系数的 Hecke 关系、自对偶、Kim–Sarnak 型界与 η 的 Hecke 关系"""

    name = "coeffs"

    def collect(self) -> None:
        p = self.params
        for seed in p["seeds"]:
            df = hecke_relation_scan(satake_family(seed), p["hecke_max_norm"])
            df["seed"] = seed
            self.add_frame("hecke_relation", df, ["seed", "n1", "n2"], "lhs", "rhs", "residual")
        # 非 tempered 族：Hecke 关系仍精确成立，Kim–Sarnak 型界才有意义
        family = satake_family(p["seeds"][0], tempered=False)
        df = hecke_relation_scan(family, p["hecke_max_norm"])
        self.add_frame("hecke_relation_nontempered", df, ["n1", "n2"], "lhs", "rhs", "residual")
        df = kim_sarnak_scan(family, p["kim_sarnak_max_norm"])
        self.add_frame("kim_sarnak", df, ["n1", "n2"])

        s = complex(0.5, p["eta_s_imag"])
        df = eta_hecke_scan(p["hecke_max_norm"], s)
        self.add_frame("eta_hecke", df, ["n1", "n2"], "lhs", "rhs", "residual")
        self.summary = {"seeds": list(p["seeds"]), "eta_s": s}


class RSScanSuite(BaseSuite):
    """Σ_{|n|≤X}|A(n,1)|² 的对数-对数斜率与扭曲版本"""

    name = "rs-scan"

    def collect(self) -> None:
        p = self.params
        low, high = TOLERANCES["rs_slope_range"]
        slopes = {}
        for seed in p["seeds"]:
            df = rs_growth_scan(satake_family(seed), p["X_list"])
            slope = float(df["slope"].iloc[0])
            slopes[seed] = slope
            for record in df.to_dict("records"):
                X = record["X"]
                self.add_row("rs_partial_sum", {"seed": seed, "X": X}, record["sum"], X * X, record["sum"] / (X * X))
            self.add_row("rs_slope", {"seed": seed}, slope, 2.0, slope / 2.0, low <= slope <= high)
        family = satake_family(p["seeds"][0])
        for a1, a2 in p["twists"]:
            df = rs_twisted_scan(family, a1, a2, p["X_list"])
            df["pass"] = df["ratio"] <= TOLERANCES["envelope_cap"]
            self.add_frame("rs_twisted", df, ["a1", "a2", "X"], "sum", None, "ratio")
        self.summary = {"slopes": slopes}


class BesselScanSuite(BaseSuite):
    """GL2 Bessel 核：对偶路径、积分表示、渐近分解、导数递推与几条上界"""

    name = "bessel-scan"

    def _dual_points(self) -> List[tuple]:
        rng = self.rng()
        points = []
        for _ in range(self.params["dual_points"]):
            mu = complex(rng.uniform(-0.12, 0.12), rng.uniform(-1.0, 1.0))
            m = int(rng.integers(-2, 3))
            points.append((mu, m, float(rng.uniform(0.2, 3.0)), float(rng.uniform(0.0, 2 * math.pi))))
        return points

    def collect(self) -> None:
        p = self.params
        df = bessel_scan(p["t_list"], p["z_abs_list"], p["grid_points"], self.threads)
        self.add_frame("hankel_form", df, ["t", "x", "theta"], "value", "hankel", "residual")

        def dual(point):
            mu, m, x, phi = point
            direct = kernel_J(mu, m, cmath.rect(x, phi))
            integral = kernel_J_integral(mu, m, x, phi)
            return direct, integral, abs(direct - integral) / max(abs(direct), 1.0)

        points = self._dual_points()
        for (mu, m, x, phi), (direct, integral, rel) in zip(points, parallel_map(dual, points, self.threads)):
            self.add_row("integral_representation", {"mu": mu, "m": m, "x": x, "phi": phi}, direct, integral, rel,
                         rel < TOLERANCES["bessel_dual"])

        for t in p["asym_t_list"]:
            for scale in p["asym_scales"]:
                for angle in (0.3, 1.9):
                    z = cmath.rect(scale * (abs(t) + 1) ** 2, angle)
                    dec = asymptotic_decomposition(t, z, 1)
                    bound = 10 * dec.envelope
                    self.add_row("asymptotic_K1", {"t": t, "z": z}, dec.residual, bound, dec.residual / bound,
                                 dec.residual <= bound)

        for t in p["derivative_t_list"]:
            for z in _complex_list(p["derivative_z_list"]):
                for alpha, beta in ((1, 0), (0, 1), (1, 1), (2, 0), (0, 2)):
                    lhs, rhs, rel = derivative_recurrence_check(t, z, alpha, beta)
                    self.add_row("derivative_recurrence", {"t": t, "z": z, "alpha": alpha, "beta": beta},
                                 lhs, rhs, rel, rel < TOLERANCES["identity"])
        df = derivative_growth_scan(p["derivative_t_list"], _complex_list(p["derivative_z_list"]))
        df["pass"] = df["ratio"] <= TOLERANCES["envelope_cap"]
        self.add_frame("derivative_growth", df, ["t", "z", "alpha", "beta"])

        df = poisson_bound_scan(_complex_list(p["poisson_nu_list"]), _complex_list(p["poisson_z_list"]))
        self.add_frame("poisson_bound", df, ["nu", "z"])
        df = bound_for_J_mu_m_scan(p["bound_k"], _complex_list(p["bound_mu_list"]), [0, 1, 2],
                                   _complex_list(p["bound_z_list"]))
        self.add_frame("kernel_bound", df, ["k", "mu", "m", "z"])
        df = uniform_bound_scan([t for t in p["t_list"] if t], _complex_list(p["bound_z_list"]))
        self.add_frame("uniform_bound", df, ["t", "z"])
        self.summary = {"grid_points": len(p["t_list"]) * len(p["z_abs_list"]) * p["grid_points"],
                        "dual_points": len(points)}


class WeightProbeSuite(BaseSuite):
    """H(z) 的包络常数、围道平移、G 与 V 的界，以及 V(y,t) 关于 t 的偶性"""

    name = "weight-probe"

    def collect(self) -> None:
        p = self.params
        factor = TOLERANCES["envelope_factor"]
        z_list = [cmath.rect(r, a) for r in p["z_abs_list"] for a in p["angles"]]
        df = H_envelope_scan(p["T_list"], p["A_prime"], z_list, self.threads)
        constants = df.groupby("T")["ratio"].max()
        floor = float(constants.min())
        df["pass"] = df["ratio"] <= factor * floor
        self.add_frame("H_envelope", df, ["T", "z"], "abs", "envelope", "ratio")
        top = float(constants.max())
        self.add_row("H_envelope_constant", {"T_list": list(p["T_list"])}, top, factor * floor, top / floor,
                     top <= factor * floor)

        weight = SpectralWeight(A_prime=p["A_prime"])
        for z in p["contour_z"]:
            res = contour_shift_check(z, weight)
            self.add_row("contour_shift", {"z": z}, res["real_line"], res["shifted"], res["residual"],
                         res["residual"] < TOLERANCES["identity"])
            self.add_row("kernel_form", {"z": z}, res["real_line"], res["kernel_form"], res["kernel_residual"],
                         res["kernel_residual"] < TOLERANCES["identity"])

        cap = TOLERANCES["envelope_cap"]
        margin = p["A_prime"] + 9 / 32 - 0.05
        df = G_bound_scan(weight, p["t_re"], [-margin, 0.0, margin])
        df["pass"] = df["ratio"] <= cap
        self.add_frame("G_bound", df, ["t"])
        df = V_decay_scan(weight, p["y_list"], p["t_re"])
        df["pass"] = df["ratio"] <= cap
        self.add_frame("V_decay", df, ["t", "y"])

        probe = weight_probe(weight, p["t_re"], p["y_list"], [], self.threads)
        for record in probe["V"].to_dict("records"):
            diff = abs(record["V"] - record["V_minus_t"])
            self.add_row("V_even", {"y": record["y"], "t": record["t"]}, record["V"], record["V_minus_t"], diff,
                         diff < TOLERANCES["identity"] * (1 + abs(record["V"])))
        self.summary = {"C_T": {str(T): float(C) for T, C in constants.items()}, "plain_H": plain_H(weight)}


class HankelDecaySuite(BaseSuite):
    """W̃ 的衰减分区、B₀ 标定与 Mellin/核两条路线，以及两条上界与变量分离"""

    name = "hankel-decay"

    def collect(self) -> None:
        p = self.params
        controls = dict(p["controls"])
        cap = TOLERANCES["envelope_cap"]
        weight = SpectralWeight(T=p["T"], mu=p["mu"])
        df, summary = decay_report(weight, p["y_list"], p["points"], p["K"], p["off_factor"],
                                   threads=self.threads, **controls)
        df["pass"] = df["uniform_ratio"] <= cap
        self.add_frame("w_tilde", df, ["y", "kind", "lam", "theta", "regime"], "abs", "uniform_bound", "uniform_ratio")
        slope = summary["resonance_slope"]
        self.add_row("resonance_slope", {"y_list": list(p["y_list"])}, slope, -5 / 3, abs(slope + 5 / 3),
                     abs(slope + 5 / 3) <= TOLERANCES["resonance_slope"])
        suppression = summary["suppression"]
        self.add_row("off_resonance_suppression", {"off_factor": p["off_factor"]}, suppression,
                     TOLERANCES["suppression"], suppression / TOLERANCES["suppression"],
                     suppression <= TOLERANCES["suppression"])

        jobs = [HankelJob.bump(0, r1, r2, mu=p["mu"], **controls) for r1, r2 in p["calibration_bumps"]]
        n = p["dual_angles"]
        u_list = [cmath.rect(r, 2 * math.pi * (k + 0.5) / n) for r in p["dual_radii"] for k in range(n)]
        calibration = calibrate_B0(jobs, u_list)
        B0_sq = calibration.attrs["B0_sq"]
        spread = float(calibration["spread"].max())
        self.add_row("B0_calibration", {"bumps": [list(b) for b in p["calibration_bumps"]]}, B0_sq, None, spread,
                     spread <= TOLERANCES["b0_calibration"])
        df = dual_path_report(jobs[-1], u_list, B0_sq)
        self.add_frame("hankel_dual", df, ["u", "allowed"], "mellin", "kernel", "rel_error")

        probe = HankelJob.bump(0, mu=p["mu"])
        df = pre_bound_scan(probe, [cmath.rect(r, 0.4) for r in p["pre_u_abs"]])
        df["pass"] = df["ratio"] <= cap
        self.add_frame("pre_bound", df, ["u", "alpha", "beta"])
        df = small_z_bound_scan(probe, [cmath.rect(r, 0.4) for r in p["small_u_abs"]])
        df["pass"] = df["ratio"] <= cap
        self.add_frame("small_u_bound", df, ["u"], bound_col=None)

        y0 = p["y_list"][0]
        resonance = HankelJob.composite(weight, y0 ** (1 / 3) * 2 ** (-1 / 12), p["K"], **controls)
        df = hankel_of_E_scan(resonance, [cmath.rect(y0, a) for a in (0.0, 1.0, 2.5)], 1)
        df["pass"] = df["ratio"] <= cap
        self.add_frame("hankel_of_E", df, ["u", "A", "gamma", "delta"])

        n_log, n_theta = p["separation_grid"]
        mode = HankelJob.bump(2, mu=p["mu"])
        sep = separation_report(lambda u: hankel_transform(mode, u), p["separation_Y"], n_log, n_theta,
                                seed=self.seed)
        self.add_row("mellin_separation", {"Y": p["separation_Y"], "grid": [n_log, n_theta]},
                     sep["reconstruction_error"], TOLERANCES["hankel_dual"],
                     sep["aliasing"], sep["reconstruction_error"] <= TOLERANCES["hankel_dual"])
        self.summary = {**summary, "B0_sq": B0_sq, "separation": sep}


class OscintSuite(BaseSuite):
    """相位恒等式、Van der Corput 斜率、远离驻点与驻相包络、分部积分上界链"""

    name = "oscint"

    def _identities(self) -> None:
        rng = self.rng()
        n = self.params["identity_points"]
        tol = TOLERANCES["phase"]
        for k, theta in enumerate(rng.uniform(0, 2 * math.pi, 4)):
            x = rng.uniform(0.5, 2.0, n // 4)
            phi = rng.uniform(0, 2 * math.pi, n // 4)
            scale = 1.0 + float(np.max(np.abs(phase(x, phi, theta))))
            res = phase_identities_check(x, phi, theta)
            limits = {"decomposition": tol * scale, "g_identity": tol, "g_mixed": 1e-6, "stationary_value": tol,
                      "stationary_gradient": tol * 10, "stationary_det": tol * 100, "hessian_det": tol * 100}
            for key, limit in limits.items():
                self.add_row(f"phase_{key}", {"theta": float(theta), "points": n // 4}, res[key], limit,
                             res[key] / limit, res[key] <= limit)
        margins = g_lower_bound_check()
        for key, value in margins.items():
            self.add_row(f"g_{key}", {}, value, 0.0, None, value > 0)

    def _one_dimensional(self) -> None:
        cap = TOLERANCES["envelope_cap"]
        for gamma in self.params["vdc_gammas"]:
            df, summary = vdc_1d(_lambda_list("vdc"), gamma=gamma, threads=self.threads)
            df["pass"] = df["ratio"] <= cap
            self.add_frame("vdc_1d_value", df.assign(gamma=gamma), ["gamma", "lambda"], "abs")
            self.add_row("vdc_1d_slope", {"gamma": gamma}, summary["slope"], summary["expected"],
                         abs(summary["slope"] - summary["expected"]), summary["pass"])
            if gamma in (0, 1):
                for record in df.to_dict("records"):
                    oracle = fresnel_oracle(record["lambda"], 0.0, gamma)
                    scale = abs(fresnel_oracle(record["lambda"]))
                    err = abs(record["value"] - oracle) / scale
                    self.add_row("fresnel_oracle", {"gamma": gamma, "lambda": record["lambda"]}, record["value"],
                                 oracle, err, err < TOLERANCES["fresnel"])

    def _polar(self) -> None:
        theta = self.params["theta"]
        for alpha, beta in self.params["polar_orders"]:
            df, summary = vdc_polar(_lambda_list("polar"), alpha, beta, theta, threads=self.threads)
            self.add_row("vdc_polar_slope", {"alpha": alpha, "beta": beta, "theta": theta}, summary["slope"],
                         summary["expected"], abs(summary["slope"] - summary["expected"]), summary["pass"])

    def collect(self) -> None:
        p = self.params
        theta = p["theta"]
        cap = TOLERANCES["envelope_cap"]
        self._identities()
        self._one_dimensional()
        self._polar()

        summaries: Dict[str, Any] = {}
        for rho in p["rho_list"]:
            if 0.5 <= rho <= 2:
                df, summary = sp_scan(rho, theta, p["lambda_list"], threads=self.threads)
                df["pass"] = df["ratio"] <= cap
                self.add_frame("sp_envelope", df.assign(rho=rho), ["rho", "lambda", "gamma", "delta"], "abs",
                               None, "ratio")
                self.add_row("sp_envelope_max", {"rho": rho}, summary["max_ratio"], cap, summary["max_ratio"] / cap,
                             summary["pass"])
                job = OscJob.bump(p["lambda_list"][0], theta, rho)
                drift = self_consistency(job)
                self.add_row("self_consistency", {"rho": rho, "lambda": job.lam}, drift,
                             TOLERANCES["self_consistency"], drift / TOLERANCES["self_consistency"],
                             drift <= TOLERANCES["self_consistency"])
            else:
                df, summary = off_range_scan(rho, theta, threads=self.threads)
                df["pass"] = (df["ratio"] <= cap) | ~df["resolved"]
                self.add_frame("off_range", df, ["rho", "lambda", "resolved"], "abs")
                self.add_row("off_range_slope", {"rho": rho, "A": summary["A"]}, summary["slope"], -summary["A"],
                             summary["C"], summary["pass"])
                job = OscJob.bump(p["lambda_list"][0], theta, rho)
                for A in p["ibp_orders"]:
                    res = ibp_machinery_check(job, A)
                    self.add_row("ibp_chain", {"rho": rho, "A": A, "lambda": job.lam}, res["lhs"], res["l1_norm"],
                                 res["margin"], res["pass"])
            summaries[str(rho)] = summary
        self.summary = summaries


def _lambda_list(kind: str) -> List[float]:
    return list(OSC_DEFAULTS[f"{kind}_lambda_list"])


class GeometricSumSuite(BaseSuite):
    """截断几何侧和：逐 c 贡献不超过平凡包络，并给出截断尾项估计"""

    name = "geometric-sum"

    def collect(self) -> None:
        p = self.params
        q, delta, epsilon = (GaussianInt.of(p[k]) for k in ("q", "delta", "epsilon"))
        N, cap = float(p["N"]), int(p["c_norm_cap"])
        coeffs = synthetic_coefficients(int(math.ceil(4 * N * N)), make_rng(p["seed"]))
        root = abs(cmath.sqrt(complex(epsilon) * complex(delta) * N))
        lam_max = root / (2 * math.sqrt(q.norm()))
        lam_min = root / (2 * math.sqrt(2 * cap))
        nodes = p["interp_nodes"]
        weight = CompositeWeight(SpectralWeight()).with_interpolation(
            lam_min, lam_max, threads=self.threads, n_r=nodes, n_theta=nodes)
        result = geometric_sum(q, delta, epsilon, coeffs, N, cap, weight)
        df = result.contributions.copy()
        envelope = df["envelope"].to_numpy(dtype=float)
        df["ratio"] = np.divide(df["abs"].to_numpy(dtype=float), envelope, out=np.zeros_like(envelope),
                                where=envelope > 0)
        df["pass"] = df["abs"] <= df["envelope"] * (1 + 1e-9) + 1e-300
        self.add_frame("geometric_contribution", df, ["c", "norm"], "contribution", "envelope", "ratio")
        self.add_row("geometric_total", {"q": str(q), "delta": str(delta), "epsilon": str(epsilon), "N": N,
                                         "c_norm_cap": cap},
                     result.value, result.tail_bound, None, envelope_decay_check(result.contributions))
        self.summary = {"value": result.value, "tail_bound": result.tail_bound, "moduli": len(df)}
