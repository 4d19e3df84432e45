"""
验证套件基类
定义通用的参数合并、逐项检查行与运行接口
"""

import copy
import time
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List, Optional

import numpy as np
import pandas as pd

from ..config import RUN_DEFAULTS, SUITE_DEFAULTS, SUITE_MAPPING
from ..errors import ConfigError
from ..utils import get_logger, make_rng

logger = get_logger(__name__)

# 报告行的字段顺序
ROW_FIELDS = ("id", "inputs", "value", "bound", "ratio", "pass")


def _plain(value: Any) -> Any:
    """DataFrame 单元格转成 Python 标量"""
    if isinstance(value, np.generic):
        return value.item()
    if value is None:
        return None
    if isinstance(value, float) and np.isnan(value):
        return None
    return value


class BaseSuite(ABC):
    """
    验证套件基类

    每一行检查统一为 {id, inputs, value, bound, ratio, pass}：
    不等式检查中 bound 为上界、ratio = |value|/bound；
    恒等式检查中 bound 为另一端、ratio 为残差。
    """

    name: str = ""

    def __init__(self, params: Optional[Dict[str, Any]] = None, seed: int = RUN_DEFAULTS["seed"],
                 threads: int = RUN_DEFAULTS["threads"]):
        """
        初始化套件

        Args:
            params: 覆盖默认值的网格参数
            seed: 随机种子
            threads: 线程数

        Raises:
            ConfigError: 参数名未知或类型不符
        """
        self.params = self.resolve_params(params or {})
        self.seed = int(seed)
        self.threads = max(1, int(threads))
        self.rows: List[Dict[str, Any]] = []
        self.summary: Dict[str, Any] = {}
        self.wall_time = 0.0
        self._is_finished = False

    @property
    def display_name(self) -> str:
        return SUITE_MAPPING.get(self.name, self.name)

    @property
    def is_finished(self) -> bool:
        """套件是否已运行完毕"""
        return self._is_finished

    @property
    def passed(self) -> bool:
        return all(row["pass"] for row in self.rows)

    @classmethod
    def default_params(cls) -> Dict[str, Any]:
        return copy.deepcopy(SUITE_DEFAULTS.get(cls.name, {}))

    @classmethod
    def resolve_params(cls, params: Dict[str, Any]) -> Dict[str, Any]:
        """把用户参数合并进默认值；字典型参数（如 controls）逐键合并"""
        merged = cls.default_params()
        for key, value in params.items():
            if key not in merged:
                raise ConfigError(f"套件 {cls.name} 没有参数 {key}，可用参数: {', '.join(sorted(merged))}")
            default = merged[key]
            if isinstance(default, dict):
                if not isinstance(value, dict):
                    raise ConfigError(f"参数 {key} 应为键值表")
                merged[key] = {**default, **value}
            elif isinstance(default, list) and not isinstance(value, (list, tuple)):
                raise ConfigError(f"参数 {key} 应为列表")
            elif isinstance(default, (int, float)) and not isinstance(default, bool) \
                    and not isinstance(value, (int, float)):
                raise ConfigError(f"参数 {key} 应为数值: {value!r}")
            else:
                merged[key] = list(value) if isinstance(value, tuple) else value
        return merged

    def rng(self, offset: int = 0) -> np.random.Generator:
        return make_rng(self.seed + offset)

    def add_row(self, check_id: str, inputs: Dict[str, Any], value: Any, bound: Any = None,
                ratio: Any = None, passed: bool = True) -> None:
        self.rows.append({
            "id": check_id,
            "inputs": {k: _plain(v) for k, v in inputs.items()},
            "value": _plain(value),
            "bound": _plain(bound),
            "ratio": _plain(ratio),
            "pass": bool(passed),
        })

    def add_frame(self, check_id: str, df: pd.DataFrame, input_cols: Iterable[str], value_col: str = "value",
                  bound_col: Optional[str] = "bound", ratio_col: Optional[str] = "ratio",
                  pass_col: Optional[str] = "pass", passed: Optional[bool] = None) -> None:
        """
        把扫描函数返回的表逐行加入报告

        Args:
            pass_col: 通过列；为 None 时每行取 passed
        """
        input_cols = list(input_cols)
        for record in df.to_dict("records"):
            ok = record[pass_col] if pass_col else passed
            self.add_row(check_id, {c: record[c] for c in input_cols}, record[value_col],
                         record.get(bound_col) if bound_col else None,
                         record.get(ratio_col) if ratio_col else None,
                         True if ok is None else bool(ok))

    @abstractmethod
    def collect(self) -> None:
        """执行验证网格，填充 self.rows 与 self.summary"""
        pass

    def run(self) -> bool:
        """
        运行套件

        Returns:
            bool: 全部检查是否通过
        """
        logger.info(f"开始套件 {self.name}（{self.display_name}）")
        self.rows, self.summary = [], {}
        start = time.perf_counter()
        self.collect()
        self.wall_time = time.perf_counter() - start
        self._is_finished = True
        failed = sum(1 for row in self.rows if not row["pass"])
        logger.info(f"套件 {self.name} 完成: {len(self.rows) - failed}/{len(self.rows)} 项通过, "
                    f"用时 {self.wall_time:.1f}s")
        return failed == 0

    def get_rows(self, check_id: Optional[str] = None) -> List[Dict[str, Any]]:
        """
        获取检查行

        Args:
            check_id: 只返回该 id 的行，None 时返回全部
        """
        if check_id is None:
            return list(self.rows)
        return [row for row in self.rows if row["id"] == check_id]
