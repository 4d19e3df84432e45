"""
验证套件管理器
统一运行套件，并以参数哈希为键在内存与磁盘两级缓存运行结果
"""

import os
import pickle
from typing import Any, Dict, Optional

from ..config import CACHE_DIR, RUN_DEFAULTS
from ..utils import config_hash, get_logger
from .base_suite import BaseSuite
from .suite_factory import SuiteFactory

logger = get_logger(__name__)


class SuiteManager:
    """验证套件管理器"""

    CACHE_DIR = CACHE_DIR

    def __init__(self, cache_dir: Optional[str] = None):
        if cache_dir is not None:
            self.CACHE_DIR = cache_dir
        self.suite_instances: Dict[str, BaseSuite] = {}
        os.makedirs(self.CACHE_DIR, exist_ok=True)

    @staticmethod
    def instance_key(name: str, params: Dict[str, Any], seed: int, threads: int) -> str:
        return f"{name}_{config_hash({'params': params, 'seed': seed, 'threads': threads})}"

    def run_suite(self, name: str, params: Optional[Dict[str, Any]] = None, seed: int = RUN_DEFAULTS["seed"],
                  threads: int = RUN_DEFAULTS["threads"], use_cache: bool = True) -> BaseSuite:
        """
        运行验证套件，优先使用缓存

        Args:
            name: 套件名称
            params: 套件参数
            seed: 随机种子
            threads: 线程数
            use_cache: 是否读写缓存

        Returns:
            BaseSuite: 已运行完毕的套件实例

        Raises:
            ConfigError: 未知套件名或参数错误
        """
        suite = SuiteFactory.get_suite(name, params, seed=seed, threads=threads)
        key = self.instance_key(name, suite.params, suite.seed, suite.threads)

        if use_cache:
            cached = self.suite_instances.get(key)
            if cached is not None and cached.is_finished:
                return cached
            cached = self._load_from_cache(key)
            if cached is not None:
                self.suite_instances[key] = cached
                return cached

        suite.run()
        self.suite_instances[key] = suite
        if use_cache:
            self._save_to_cache(key, suite)
        return suite

    def _get_cache_file_path(self, instance_key: str) -> str:
        return os.path.join(self.CACHE_DIR, f"{instance_key}.pkl")

    def _load_from_cache(self, instance_key: str) -> Optional[BaseSuite]:
        """从磁盘缓存加载；文件损坏时删除"""
        cache_file = self._get_cache_file_path(instance_key)
        if not os.path.exists(cache_file):
            return None
        try:
            with open(cache_file, "rb") as f:
                suite = pickle.load(f)
            logger.info(f"从缓存加载套件结果: {instance_key}")
            return suite
        except Exception as e:
            logger.warning(f"缓存文件损坏，已删除 {cache_file}: {e}")
            try:
                os.remove(cache_file)
            except OSError:
                pass
            return None

    def _save_to_cache(self, instance_key: str, suite: BaseSuite) -> bool:
        cache_file = self._get_cache_file_path(instance_key)
        try:
            with open(cache_file, "wb") as f:
                pickle.dump(suite, f)
            return True
        except Exception as e:
            logger.warning(f"写入缓存失败 {cache_file}: {e}")
            return False

    def clear_cache(self) -> None:
        self.suite_instances.clear()
        for file_name in os.listdir(self.CACHE_DIR):
            if file_name.endswith(".pkl"):
                os.remove(os.path.join(self.CACHE_DIR, file_name))
