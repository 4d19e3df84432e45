"""
验证套件包
每个套件把一组计算模块的检查整理成统一的报告行
"""

from .base_suite import ROW_FIELDS, BaseSuite
from .suite_factory import SuiteFactory
from .suite_manager import SuiteManager

__all__ = [
    'ROW_FIELDS',
    'BaseSuite',
    'SuiteFactory',
    'SuiteManager',
]
