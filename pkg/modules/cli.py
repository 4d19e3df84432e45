"""
命令行入口
运行命名验证套件，输出 JSON/CSV 报告；退出码 0 全部通过，1 存在验证失败，2 配置错误
"""

import argparse
import difflib
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import mpmath
import pandas as pd

from . import __version__
from .autoforms import A, satake_family
from .bessel_gl2 import kernel_J
from .config import EXIT_CODES, RUN_DEFAULTS, SUITE_DEFAULTS, SUITE_MAPPING, SUITE_ORDER
from .errors import ArithmeticDomainError, ConfigError, ConvergenceError, CostGuardError, RegimeError
from .hankel_gl3 import HankelJob, hankel_transform_grid
from .spectral_weight import SpectralWeight
from .suites import ROW_FIELDS, BaseSuite, SuiteFactory, SuiteManager
from .utils import (
    env_overrides, format_sig, from_serializable, get_logger, load_config_file, save_json, set_log_level,
    to_serializable,
)
from .zi_core import canonical_up_to_norm

logger = get_logger(__name__)

# 仅由运行器使用、不传给套件的键
RUN_KEYS = set(RUN_DEFAULTS) | {"suite", "out", "timing", "cache"}
FORMATS = ("json", "csv")

# 子命令专用标志: (标志, 套件参数, 转换函数)
SUITE_FLAGS = {
    "gauss-sums": [("--max-norm", "max_norm", int)],
    "kloosterman": [("--max-c-norm", "max_c_norm", int)],
    "sk-identity": [("--max-c-norm", "max_c_norm", int)],
    "pipeline-verify": [("--q", "q_list", lambda s: [s]), ("--max-c-norm", "max_c_norm", int)],
    "coeffs": [("--satake", "seeds", lambda s: [int(s)])],
    "rs-scan": [("--satake", "seeds", lambda s: [int(s)])],
    "weight-probe": [("--T", "T_list", lambda s: [float(s)]), ("--Aprime", "A_prime", int)],
    "oscint": [("--rho", "rho_list", lambda s: [float(s)]),
               ("--lambda-list", "lambda_list", lambda s: [float(v) for v in s.split(",")])],
}


@dataclass
class ExperimentReport:
    """
    一次运行的报告

    Attributes:
        suite: 套件名（或 "all"）
        params: 实际使用的参数
        rows: 检查行 {id, inputs, value, bound, ratio, pass}
        summary: 套件汇总量
        stamp: 复现信息（种子、线程数、精度、版本）
        wall_time: 墙钟时间（秒），默认不写入 JSON
    """

    suite: str
    params: Dict[str, Any]
    rows: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    stamp: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(row["pass"] for row in self.rows)

    @property
    def failed_count(self) -> int:
        return sum(1 for row in self.rows if not row["pass"])

    @staticmethod
    def make_stamp(seed: int, threads: int) -> Dict[str, Any]:
        return {
            "seed": int(seed),
            "threads": int(threads),
            "precision": {"float": "binary64", "mpmath_dps": int(mpmath.mp.dps)},
            "version": __version__,
        }

    @classmethod
    def from_suite(cls, suite: BaseSuite) -> "ExperimentReport":
        return cls(suite=suite.name, params=suite.params, rows=list(suite.rows), summary=dict(suite.summary),
                   stamp=cls.make_stamp(suite.seed, suite.threads), wall_time=suite.wall_time)

    @classmethod
    def combine(cls, reports: Sequence["ExperimentReport"], seed: int, threads: int) -> "ExperimentReport":
        """按固定顺序合并多个套件报告，行 id 加上 "套件/" 前缀"""
        rows = []
        for report in reports:
            rows.extend({**row, "id": f"{report.suite}/{row['id']}"} for row in report.rows)
        return cls(suite="all", params={r.suite: r.params for r in reports}, rows=rows,
                   summary={r.suite: r.summary for r in reports}, stamp=cls.make_stamp(seed, threads),
                   wall_time=sum(r.wall_time for r in reports))

    def to_dict(self, include_timing: bool = False) -> Dict[str, Any]:
        data = {
            "suite": self.suite,
            "params": self.params,
            "stamp": self.stamp,
            "summary": self.summary,
            "passed": self.passed,
            "rows": [{key: row.get(key) for key in ROW_FIELDS} for row in self.rows],
        }
        if include_timing:
            data["wall_time"] = self.wall_time
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentReport":
        try:
            return cls(suite=data["suite"], params=data.get("params", {}), rows=list(data.get("rows", [])),
                       summary=data.get("summary", {}), stamp=data.get("stamp", {}),
                       wall_time=float(data.get("wall_time", 0.0)))
        except (KeyError, TypeError) as e:
            raise ConfigError(f"报告格式错误: {e}") from e


def _suggest(name: str, choices: Sequence[str]) -> str:
    hint = difflib.get_close_matches(name, choices, n=3)
    return f"（是否想用 {', '.join(hint)}？）" if hint else f"（可用: {', '.join(choices)}）"


def validate_config(config: Dict[str, Any]) -> None:
    """
    检查配置键：运行键、任一套件的参数名或套件名（对应该套件的参数表）

    Raises:
        ConfigError: 未知键、格式或线程数无效
    """
    suite_params = set().union(*(d.keys() for d in SUITE_DEFAULTS.values()))
    known = RUN_KEYS | suite_params | set(SUITE_MAPPING)
    for key, value in config.items():
        if key not in known:
            raise ConfigError(f"未知配置键: {key}{_suggest(key, sorted(known))}")
        if key in SUITE_MAPPING and not isinstance(value, dict):
            raise ConfigError(f"配置键 {key} 应为该套件的参数表")
    if config.get("format", "json") not in FORMATS:
        raise ConfigError(f"不支持的输出格式: {config['format']}，可用 {', '.join(FORMATS)}")
    try:
        threads = int(config.get("threads", 1))
        int(config.get("seed", 0))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"seed/threads 须为整数: {e}") from e
    if threads < 1:
        raise ConfigError(f"threads 须 ≥ 1: {threads}")


def suite_params(name: str, config: Dict[str, Any]) -> Dict[str, Any]:
    """扁平键作用于所有拥有该参数的套件，同名参数表只作用于该套件"""
    defaults = SUITE_DEFAULTS.get(name, {})
    params = {k: v for k, v in config.items() if k in defaults and k not in RUN_KEYS}
    params.update(config.get(name, {}))
    return params


def run_suite(name: str, config: Optional[Dict[str, Any]] = None,
              manager: Optional[SuiteManager] = None) -> ExperimentReport:
    """
    运行命名套件（或按 SUITE_ORDER 依次运行全部）

    Args:
        name: 套件名或 "all"
        config: 合并后的配置（运行键 + 套件参数）
        manager: 提供时经其缓存运行

    Returns:
        ExperimentReport: 报告

    Raises:
        ConfigError: 未知套件或配置错误
    """
    config = {**RUN_DEFAULTS, **(config or {})}
    validate_config(config)
    if name != "all" and name not in SUITE_MAPPING:
        raise ConfigError(f"未知套件: {name}{_suggest(name, SUITE_ORDER + ['all'])}")
    seed, threads = int(config["seed"]), int(config["threads"])

    def run_one(suite_name: str) -> ExperimentReport:
        params = suite_params(suite_name, config)
        if manager is not None:
            suite = manager.run_suite(suite_name, params, seed=seed, threads=threads)
        else:
            suite = SuiteFactory.get_suite(suite_name, params, seed=seed, threads=threads)
            suite.run()
        return ExperimentReport.from_suite(suite)

    if name != "all":
        return run_one(name)
    reports = [run_one(suite_name) for suite_name in SUITE_ORDER]
    return ExperimentReport.combine(reports, seed, threads)


def _csv_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_sig(value)
    if isinstance(value, complex):
        imag = format_sig(value.imag)
        if not imag.startswith("-"):
            imag = "+" + imag
        return f"{format_sig(value.real)}{imag}j"
    if isinstance(value, str):
        return value
    return json.dumps(to_serializable(value), sort_keys=True, ensure_ascii=False)


def _frame_to_csv(df: pd.DataFrame, path: Optional[str]) -> str:
    df = df.apply(lambda col: col.map(_csv_cell)) if len(df) else df
    if path:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        df.to_csv(path, index=False)
    return df.to_csv(index=False)


def report_frame(report: ExperimentReport) -> pd.DataFrame:
    """报告行展平为表，inputs 列为排序键的 JSON"""
    records = [{
        "id": row["id"],
        "inputs": json.dumps(to_serializable(row["inputs"]), sort_keys=True, ensure_ascii=False),
        "value": row.get("value"),
        "bound": row.get("bound"),
        "ratio": row.get("ratio"),
        "pass": bool(row["pass"]),
    } for row in report.rows]
    # object 列保留 None 与各单元格原类型
    return pd.DataFrame(records, columns=list(ROW_FIELDS), dtype=object)


def emit(report: ExperimentReport, fmt: str = "json", path: Optional[str] = None,
         include_timing: bool = False) -> str:
    """
    输出报告

    Args:
        report: 已完成的报告
        fmt: "json" 或 "csv"
        path: 输出文件；None 时只返回文本
        include_timing: JSON 中是否写入墙钟时间（写入后重复运行不再逐字节一致）

    Returns:
        str: 输出文本
    """
    if fmt == "json":
        data = to_serializable(report.to_dict(include_timing))
        if path:
            save_json(path, data)
        return json.dumps(data, indent=2, ensure_ascii=False)
    if fmt == "csv":
        return _frame_to_csv(report_frame(report), path)
    raise ConfigError(f"不支持的输出格式: {fmt}")


def load_report(path: str) -> ExperimentReport:
    """读回 JSON 报告"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(f"报告文件格式错误 {path}: {e}") from e
    return ExperimentReport.from_dict(from_serializable(data))


def parse_complex(text: str) -> complex:
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError as e:
        raise ConfigError(f"无法解析复数: {text}") from e


def _common_parser() -> argparse.ArgumentParser:
    # SUPPRESS 使子命令不会用默认值覆盖顶层已给出的标志
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--suite", help="套件名（无子命令时使用）")
    common.add_argument("--config", help="扁平键值配置文件（.toml 或 .json）")
    common.add_argument("--out", help="输出文件，缺省时打印到标准输出")
    common.add_argument("--format", choices=FORMATS, help="输出格式")
    common.add_argument("--threads", type=int, help="线程数")
    common.add_argument("--seed", type=int, help="随机种子")
    common.add_argument("--log-level", dest="log_level", help="日志级别")
    common.add_argument("--timing", action="store_true", help="JSON 中写入墙钟时间")
    common.add_argument("--cache", action="store_true", help="启用 user_data/cache 结果缓存")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="verify", description="ℚ(i) 次凸性机制验证工具", parents=[common])
    sub = parser.add_subparsers(dest="command")

    sub.add_parser("run", parents=[common], help="运行 --suite 指定的套件")
    sub.add_parser("all", parents=[common], help="依次运行全部套件")
    for name in SUITE_ORDER:
        p = sub.add_parser(name, parents=[common], help=SUITE_MAPPING[name])
        for flag, param, _ in SUITE_FLAGS.get(name, []):
            p.add_argument(flag, dest=f"suite_{param}", help=f"覆盖参数 {param}")
        if name == "coeffs":
            p.add_argument("--dump", type=float, help="输出 |n| ≤ X 的 A(n,1) 表而不运行检查")

    p = sub.add_parser("bessel-eval", parents=[common], help="计算 𝐉_{μ,m}(z)")
    p.add_argument("--mu", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--z", required=True)

    p = sub.add_parser("hankel", parents=[common], help="输出 (u, W, W̃) 表")
    p.add_argument("--mu", default="0")
    p.add_argument("--lambda", dest="lam", help="复合测试函数的 Λ；缺省时用纯 bump")
    p.add_argument("--grid", required=True, help="逗号分隔的复数 u 列表，如 10,5+5j")
    return parser


def build_config(args: argparse.Namespace) -> Dict[str, Any]:
    """默认值 < 配置文件 < 环境变量 < 命令行标志"""
    config = dict(RUN_DEFAULTS)
    for layer in (load_config_file(getattr(args, "config", None)), env_overrides()):
        for key, value in layer.items():
            if key in SUITE_MAPPING and isinstance(value, dict) and isinstance(config.get(key), dict):
                config[key] = {**config[key], **value}
            else:
                config[key] = value
    for key in ("suite", "out", "format", "threads", "seed", "log_level", "timing", "cache"):
        if hasattr(args, key):
            config[key] = getattr(args, key)

    command = getattr(args, "command", None)
    for flag, param, convert in SUITE_FLAGS.get(command, []):
        raw = getattr(args, f"suite_{param}", None)
        if raw is None:
            continue
        try:
            value = convert(raw)
        except ValueError as e:
            raise ConfigError(f"{flag} 取值无效: {raw}") from e
        config[command] = {**config.get(command, {}), param: value}
    return config


def _write_text(text: str, path: Optional[str]) -> None:
    if not path:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _bessel_eval(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    mu, z = parse_complex(args.mu), parse_complex(args.z)
    result = {"mu": mu, "m": args.m, "z": z, "value": kernel_J(mu, args.m, z)}
    path = config.get("out")
    if path:
        save_json(path, result)
    _write_text(json.dumps(to_serializable(result), indent=2), path)
    return EXIT_CODES["pass"]


def _hankel(args: argparse.Namespace, config: Dict[str, Any]) -> int:
    mu = parse_complex(args.mu)
    grid = [parse_complex(v) for v in args.grid.split(",") if v.strip()]
    if args.lam is not None:
        job = HankelJob.composite(SpectralWeight(mu=mu), parse_complex(args.lam))
    else:
        job = HankelJob.bump(0, mu=mu)
    path = config.get("out")
    _write_text(_frame_to_csv(hankel_transform_grid(job, grid), path), path)
    return EXIT_CODES["pass"]


def _coeffs_dump(X: float, config: Dict[str, Any]) -> int:
    seed = suite_params("coeffs", config).get("seeds", SUITE_DEFAULTS["coeffs"]["seeds"])[0]
    coeffs = satake_family(int(seed))
    records = [{"n": str(n), "norm": n.norm(), "A": A(n, 1, coeffs)}
               for n in canonical_up_to_norm(int(X * X))]
    path = config.get("out")
    _write_text(_frame_to_csv(pd.DataFrame(records, columns=["n", "norm", "A"]), path), path)
    return EXIT_CODES["pass"]


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
        validate_config(config)
        set_log_level(config["log_level"])
        command = args.command or "run"

        if command == "bessel-eval":
            return _bessel_eval(args, config)
        if command == "hankel":
            return _hankel(args, config)
        if command == "coeffs" and getattr(args, "dump", None) is not None:
            return _coeffs_dump(args.dump, config)

        name = config.get("suite") if command == "run" else command
        if not name:
            raise ConfigError("未指定套件，请使用子命令或 --suite")
        manager = SuiteManager() if config.get("cache") else None
        report = run_suite(name, config, manager)
        path = config.get("out")
        text = emit(report, config["format"], path, include_timing=bool(config.get("timing")))
        _write_text(text, path)
    except ConvergenceError as e:
        logger.error(f"计算不收敛: {e}")
        return EXIT_CODES["fail"]
    except (ConfigError, ArithmeticDomainError, RegimeError, CostGuardError) as e:
        logger.error(f"配置错误: {e}")
        return EXIT_CODES["config_error"]
    except OSError as e:
        logger.error(f"读写失败: {e}")
        return EXIT_CODES["config_error"]

    if report.passed:
        logger.info(f"{report.suite}: 全部 {len(report.rows)} 项检查通过")
        return EXIT_CODES["pass"]
    logger.warning(f"{report.suite}: {report.failed_count}/{len(report.rows)} 项检查未通过")
    return EXIT_CODES["fail"]


if __name__ == "__main__":
    sys.exit(main())
