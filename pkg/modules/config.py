"""
全局配置文件
"""

import os

# 应用基本信息
APP_TITLE = "ℚ(i) 次凸性机制验证工具"
APP_ICON = "🧮"
APP_VERSION = "1.0.0"

# 路径
BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# 用户数据目录（报告与缓存）
USER_DATA_PATH = os.path.join(BASE_DIR, "user_data")
REPORT_PATH = os.path.join(USER_DATA_PATH, "reports")
CACHE_DIR = os.path.join(USER_DATA_PATH, "cache")
for _path in (USER_DATA_PATH, REPORT_PATH):
    if not os.path.exists(_path):
        try:
            os.makedirs(_path)
        except Exception:
            pass

# 环境变量覆盖前缀，如 ZIVERIFY_SEED=7
ENV_PREFIX = "ZIVERIFY_"

# 报告中浮点数的有效数字
FLOAT_SIG_DIGITS = 17

# 退出码
EXIT_CODES = {
    "pass": 0,
    "fail": 1,
    "config_error": 2,
}

# 高斯整数分量上限（64 位下范数不溢出）
COMPONENT_LIMIT = 2 ** 31

# 验证套件映射
SUITE_MAPPING = {
    "gauss-sums": "Gauss 和与根数",
    "kloosterman": "Kloosterman 和",
    "sk-identity": "Selberg–Kuznetsov 恒等式",
    "ci-scan": "Conrey–Iwaniec 特征和",
    "pipeline-verify": "Voronoi 侧特征和管线",
    "coeffs": "自守系数与 Hecke 关系",
    "rs-scan": "Rankin–Selberg 增长",
    "bessel-scan": "GL2 Bessel 核",
    "weight-probe": "谱权重与 Bessel 积分",
    "hankel-decay": "GL3 Hankel 变换衰减",
    "oscint": "驻相振荡积分",
    "geometric-sum": "几何侧和",
}

# "all" 按此顺序运行
SUITE_ORDER = list(SUITE_MAPPING.keys())

# 数值容差
TOLERANCES = {
    "exact": 1e-10,
    "gauss_sum": 1e-9,
    "imag_part": 1e-9,
    "identity": 1e-6,
    "detection": 1e-10,
    "bessel_dual": 1e-6,
    "hankel_dual": 1e-4,
    "b0_calibration": 1e-2,
    "phase": 1e-12,
    "slope": 0.1,
    "resonance_slope": 0.15,
    "envelope_factor": 3.0,
    "envelope_cap": 100.0,
    # 非共振 / 共振峰值
    "suppression": 1e-6,
    "rs_slope_range": (1.7, 2.3),
    "fresnel": 1e-6,
    "self_consistency": 1e-3,
}

# 代价上限（项数）
COST_GUARDS = {
    "t_sum_max_norm": 50,
    "geometric_max_c_norm": 400,
    "osc_max_evals": 2_000_000_000,
}

# 谱权重默认参数
WEIGHT_DEFAULTS = {
    "T": 1.0,
    "A_prime": 2,
    "mu": 0.0,
    "eps": 0.05,
    "U": 6.0,
    "t_nodes": 32,
}

# GL3 Hankel 变换默认参数
HANKEL_DEFAULTS = {
    "mu": 0.0,
    "abscissa": 2.0 / 3.0,
    "min_orders": 8,
    "max_orders": 32,
    "radial_nodes": 192,
    "angular_nodes": 128,
    "tau_max": 300.0,
    "tau_step": 0.05,
    "tail_tol": 1e-8,
    "A_double_prime": 4,
}

# 振荡积分默认参数
OSC_DEFAULTS = {
    "min_x_cells": 64,
    "min_phi_nodes": 256,
    # 每个 Filon 单元内三次相位余项的上限（弧度）
    "phase_tol": 1e-4,
    "block_evals": 2_000_000,
    "line_cells": 4000,
    "vdc_lambda_list": [128.0, 256.0, 512.0, 1024.0, 2048.0],
    "polar_lambda_list": [64.0, 128.0, 256.0, 512.0],
    "off_scales": [80.0, 160.0, 320.0, 640.0],
    "ibp_grid": (400, 512),
}

# 各套件默认网格（桌面规模）
SUITE_DEFAULTS = {
    "gauss-sums": {"max_norm": 500},
    "kloosterman": {"max_c_norm": 100, "max_n_norm": 10, "twisted_max_norm": 10},
    "sk-identity": {"max_c_norm": 100, "max_n_norm": 10},
    "ci-scan": {"q_list": ["3", "4+i"], "max_param_norm": 5, "g_max_norm": 200},
    "pipeline-verify": {
        "q_list": ["3", "4+i"], "max_c_norm": 50, "max_delta_norm": 5, "n2_list": ["1", "1+i"],
        "detection_max_norm": 36, "detection_arrays": 100, "detection_support_norm": 50,
        "bilinear_cases": [
            {"q": "3", "epsilon": "1", "delta0": "1", "delta_prime": "2+i", "g": "1", "n1": "1", "r": "1",
             "s": "1", "N": 100.0, "D2": 1.0, "N2": 2.0},
            {"q": "3", "epsilon": "i", "delta0": "1", "delta_prime": "2+i", "g": "1+i", "n1": "1", "r": "1",
             "s": "1+i", "N": 400.0, "D2": 1.0, "N2": 2.0},
        ],
    },
    "coeffs": {"seeds": [1, 2, 3], "hecke_max_norm": 1000, "kim_sarnak_max_norm": 200, "eta_s_imag": 0.25,
               "dump_X": 30},
    "rs-scan": {"seeds": [1, 2, 3], "X_list": [30, 60, 120, 300], "twists": [["1+i", "1"], ["2+i", "3"]]},
    "bessel-scan": {
        "grid_points": 48, "t_list": [0.0, 0.5, 1.0], "z_abs_list": [0.5, 2.0, 10.0], "dual_points": 200,
        "asym_t_list": [0.0, 0.5, 1.0], "asym_scales": [4.0, 8.0, 16.0],
        "derivative_t_list": [0.5, 1.0], "derivative_z_list": ["2+1j", "5-2j"],
        "poisson_nu_list": ["0.3", "1+0.5j", "-0.7+0.2j"], "poisson_z_list": ["0.5", "2+1j", "8j"],
        "bound_k": 1, "bound_mu_list": ["0.1", "0.2+1j"], "bound_z_list": ["2", "5+5j", "30j"],
    },
    "weight-probe": {
        "T_list": [1.0, 2.0, 4.0], "A_prime": 2, "z_abs_list": [0.01, 0.1, 1.0, 10.0, 100.0],
        "angles": [0.0, 0.7], "contour_z": [0.1, 0.5], "t_re": [0.0, 1.0, 3.0, 10.0], "y_list": [0.5, 1.0, 10.0, 100.0],
    },
    "hankel-decay": {
        "mu": 0.0, "T": 1.0, "y_list": [1e3, 2e3, 4e3, 8e3], "points": 50, "K": 3, "off_factor": 0.45,
        "controls": {"radial_nodes": 416, "angular_nodes": 1024, "max_orders": 500, "tau_max": 800.0},
        "dual_radii": [2e3, 4e3, 8e3, 1.6e4, 3.2e4], "dual_angles": 10,
        "calibration_bumps": [[1.0, 2.0], [1.0, 1.5]],
        "pre_u_abs": [1.0, 10.0, 100.0], "small_u_abs": [1e-3, 1e-2, 1e-1],
        "separation_Y": 10.0, "separation_grid": [128, 32],
    },
    "oscint": {"rho_list": [0.25, 2 ** (-1 / 12), 4.0], "lambda_list": [100.0, 1000.0, 10000.0], "theta": 0.3,
               "identity_points": 10000, "vdc_gammas": [0, 1, 2], "polar_orders": [[0, 0], [1, 0], [0, 1]],
               "ibp_orders": [1, 2]},
    "geometric-sum": {"q": "3", "delta": "1", "epsilon": "1", "N": 4.0, "c_norm_cap": 81, "seed": 1,
                      "interp_nodes": 24},
}

# 通用运行参数
RUN_DEFAULTS = {
    "seed": 20240101,
    "threads": 1,
    "format": "json",
    "log_level": "INFO",
}

# 表格显示配置
TABLE_CONFIG = {
    "height": 500,
    "pass_color": "#10b981",
    "fail_color": "#ef4444",
}

# 数据格式化配置
FORMAT_CONFIG = {
    "float_columns": ["value", "bound", "ratio", "residual", "slope"],
    "bool_columns": ["pass"],
}
