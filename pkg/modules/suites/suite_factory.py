"""
验证套件工厂类
负责按名称创建验证套件实例
"""

import difflib
from typing import Any, Dict, List, Optional

from ..config import RUN_DEFAULTS, SUITE_MAPPING
from ..errors import ConfigError
from .base_suite import BaseSuite
from .suite_types import (
    BesselScanSuite,
    CIScanSuite,
    CoeffsSuite,
    GaussSumsSuite,
    GeometricSumSuite,
    HankelDecaySuite,
    KloostermanSuite,
    OscintSuite,
    PipelineVerifySuite,
    RSScanSuite,
    SKIdentitySuite,
    WeightProbeSuite,
)


class SuiteFactory:
    """验证套件工厂类"""

    SUITE_TYPES = {
        suite_cls.name: {"class": suite_cls, "display_name": SUITE_MAPPING[suite_cls.name]}
        for suite_cls in (
            GaussSumsSuite,
            KloostermanSuite,
            SKIdentitySuite,
            CIScanSuite,
            PipelineVerifySuite,
            CoeffsSuite,
            RSScanSuite,
            BesselScanSuite,
            WeightProbeSuite,
            HankelDecaySuite,
            OscintSuite,
            GeometricSumSuite,
        )
    }

    @classmethod
    def get_suite(cls, name: str, params: Optional[Dict[str, Any]] = None, seed: int = RUN_DEFAULTS["seed"],
                  threads: int = RUN_DEFAULTS["threads"]) -> BaseSuite:
        """
        创建验证套件实例

        Args:
            name: 套件名称
            params: 套件参数，覆盖默认值
            seed: 随机种子
            threads: 线程数

        Returns:
            BaseSuite: 套件实例

        Raises:
            ConfigError: 未知套件名或参数错误
        """
        if name not in cls.SUITE_TYPES:
            hint = difflib.get_close_matches(name, cls.SUITE_TYPES.keys(), n=3)
            message = f"未知套件: {name}"
            if hint:
                message += f"（是否想用 {', '.join(hint)}？）"
            raise ConfigError(message)
        return cls.SUITE_TYPES[name]["class"](params, seed=seed, threads=threads)

    @classmethod
    def get_all_suite_types(cls) -> List[str]:
        return list(cls.SUITE_TYPES.keys())

    @classmethod
    def get_display_name(cls, name: str) -> str:
        if name in cls.SUITE_TYPES:
            return cls.SUITE_TYPES[name]["display_name"]
        return name
