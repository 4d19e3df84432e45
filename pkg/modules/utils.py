"""
工具函数模块
提供日志、配置文件读写、数值格式化、斜率拟合与并行映射等通用工具
"""

import os
import json
import hashlib
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

import numpy as np
import pandas as pd
from sklearn.linear_model import LinearRegression

from modules.config import ENV_PREFIX, FLOAT_SIG_DIGITS, RUN_DEFAULTS
from modules.errors import ConfigError

_LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def get_logger(name: str) -> logging.Logger:
    """
    获取模块日志记录器，首次调用时配置根处理器

    Args:
        name: 日志记录器名称，一般为 __name__

    Returns:
        logging.Logger: 日志记录器
    """
    root = logging.getLogger("modules")
    if not root.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(_LOG_FORMAT))
        root.addHandler(handler)
        level = os.environ.get(f"{ENV_PREFIX}LOG_LEVEL", RUN_DEFAULTS["log_level"])
        root.setLevel(level.upper())
    return logging.getLogger(name)


logger = get_logger(__name__)


def set_log_level(level: str) -> None:
    """设置全局日志级别"""
    logging.getLogger("modules").setLevel(str(level).upper())


def format_number(number, decimal_places=6):
    """格式化数字显示"""
    if number is None:
        return "---"
    try:
        if isinstance(number, complex):
            return f"{number.real:.{decimal_places}g}{number.imag:+.{decimal_places}g}j"
        if pd.isna(number):
            return "---"
        return f"{float(number):.{decimal_places}g}"
    except (ValueError, TypeError):
        return str(number)


def format_sig(value: float) -> str:
    """按 17 位有效数字输出浮点数，保证往返无损"""
    return format(float(value), f".{FLOAT_SIG_DIGITS}g")


def to_serializable(value: Any) -> Any:
    """
    把报告中的值转换为可 JSON 序列化的形式

    复数写成 {"re": ..., "im": ...}，numpy 标量转成 Python 标量，
    浮点数保持 Python float（json 模块按 repr 输出，已是最短往返表示）。
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if np.isnan(value) or np.isinf(value):
            return str(value)
        return value
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": to_serializable(value.real), "im": to_serializable(value.imag)}
    if isinstance(value, dict):
        return {str(k): to_serializable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_serializable(v) for v in value]
    return str(value) if not isinstance(value, (str, type(None))) else value


def from_serializable(value: Any) -> Any:
    """to_serializable 的逆：{"re", "im"} 还原为复数，"nan"/"inf" 还原为浮点数"""
    if isinstance(value, dict):
        if set(value) == {"re", "im"}:
            return complex(from_serializable(value["re"]), from_serializable(value["im"]))
        return {k: from_serializable(v) for k, v in value.items()}
    if isinstance(value, list):
        return [from_serializable(v) for v in value]
    if value in ("nan", "inf", "-inf"):
        return float(value)
    return value


def load_config_file(path: Optional[str]) -> Dict[str, Any]:
    """
    读取扁平键值配置文件（.toml 或 .json）

    Args:
        path: 配置文件路径，None 表示不使用文件

    Returns:
        dict: 配置键值对

    Raises:
        ConfigError: 文件不存在或格式错误
    """
    if not path:
        return {}
    if not os.path.exists(path):
        raise ConfigError(f"配置文件不存在: {path}")
    try:
        if path.endswith(".json"):
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        else:
            with open(path, "rb") as f:
                data = tomllib.load(f)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"配置文件格式错误 {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件顶层必须是键值表: {path}")
    return data


def env_overrides(environ: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """
    读取以 ENV_PREFIX 开头的环境变量，值按 JSON 字面量解析，失败则保留字符串

    Returns:
        dict: 小写键名到值的映射
    """
    environ = os.environ if environ is None else environ
    result = {}
    for key, raw in environ.items():
        if not key.startswith(ENV_PREFIX):
            continue
        name = key[len(ENV_PREFIX):].lower()
        try:
            result[name] = json.loads(raw)
        except json.JSONDecodeError:
            result[name] = raw
    return result


def save_json(path: str, data: Any) -> None:
    """以稳定键序写出 JSON"""
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_serializable(data), f, indent=2, ensure_ascii=False)


def config_hash(config: Dict[str, Any]) -> str:
    """配置字典的稳定哈希，用于缓存键"""
    payload = json.dumps(to_serializable(config), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def fit_loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    对 log|y| 关于 log x 做最小二乘直线拟合，返回斜率

    Args:
        xs: 自变量（正数）
        ys: 因变量（取绝对值，零值被剔除）

    Returns:
        float: 拟合斜率；有效点少于 2 个时返回 nan
    """
    x = np.asarray(xs, dtype=float)
    y = np.abs(np.asarray(ys, dtype=complex))
    mask = (x > 0) & (y > 0) & np.isfinite(y)
    if mask.sum() < 2:
        return float("nan")
    model = LinearRegression()
    model.fit(np.log(x[mask]).reshape(-1, 1), np.log(y[mask]))
    return float(model.coef_[0])


def parallel_map(func: Callable, items: Iterable, threads: int = 1) -> List[Any]:
    """
    按输入顺序返回结果的并行映射，归约顺序与线程数无关

    Args:
        func: 作用于每个元素的函数
        items: 输入序列
        threads: 线程数，1 表示串行

    Returns:
        list: 与输入一一对应的结果
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


def make_rng(seed: int) -> np.random.Generator:
    """由种子构造确定性随机数生成器"""
    return np.random.default_rng(int(seed))
