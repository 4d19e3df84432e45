"""
测试验证套件的参数合并、工厂与缓存
"""

import pytest

from modules.config import SUITE_ORDER
from modules.errors import ConfigError
from modules.suites import ROW_FIELDS, SuiteFactory, SuiteManager
from modules.suites.suite_types import GaussSumsSuite, KloostermanSuite


def test_factory_knows_every_suite():
    assert sorted(SuiteFactory.get_all_suite_types()) == sorted(SUITE_ORDER)
    assert SuiteFactory.get_display_name("gauss-sums") == "Gauss 和与根数"
    assert SuiteFactory.get_display_name("nope") == "nope"


def test_factory_rejects_unknown_suite():
    with pytest.raises(ConfigError, match="gauss-sums"):
        SuiteFactory.get_suite("gauss-sum")


def test_resolve_params_merges_defaults():
    params = KloostermanSuite.resolve_params({"max_c_norm": 20})
    assert params["max_c_norm"] == 20
    assert params["max_n_norm"] == 10


@pytest.mark.parametrize("params", [
    {"bogus": 1},
    {"max_c_norm": "many"},
])
def test_resolve_params_errors(params):
    with pytest.raises(ConfigError):
        KloostermanSuite.resolve_params(params)


def test_resolve_params_type_checks():
    with pytest.raises(ConfigError):
        SuiteFactory.get_suite("ci-scan", {"q_list": "3"})
    with pytest.raises(ConfigError):
        SuiteFactory.get_suite("hankel-decay", {"controls": 5})


def test_gauss_sums_suite_rows():
    suite = SuiteFactory.get_suite("gauss-sums", {"max_norm": 30})
    assert not suite.is_finished
    assert suite.run()
    assert suite.is_finished
    assert suite.summary["moduli"] >= 1
    assert len(suite.rows) == 2 * suite.summary["moduli"]
    assert all(tuple(row) == ROW_FIELDS for row in suite.rows)
    assert {row["id"] for row in suite.rows} == {"gauss_sum", "root_number"}
    assert len(suite.get_rows("gauss_sum")) == suite.summary["moduli"]


def test_rerun_resets_rows():
    suite = GaussSumsSuite({"max_norm": 10})
    suite.run()
    first = len(suite.rows)
    suite.run()
    assert len(suite.rows) == first


def test_manager_caches_results(tmp_path):
    manager = SuiteManager(cache_dir=str(tmp_path))
    first = manager.run_suite("gauss-sums", {"max_norm": 20})
    assert manager.run_suite("gauss-sums", {"max_norm": 20}) is first
    assert len(list(tmp_path.glob("*.pkl"))) == 1

    reloaded = SuiteManager(cache_dir=str(tmp_path)).run_suite("gauss-sums", {"max_norm": 20})
    assert reloaded is not first
    assert reloaded.rows == first.rows

    other = manager.run_suite("gauss-sums", {"max_norm": 20}, seed=7)
    assert other is not first
    manager.clear_cache()
    assert not list(tmp_path.glob("*.pkl"))


def test_manager_drops_corrupt_cache(tmp_path):
    manager = SuiteManager(cache_dir=str(tmp_path))
    suite = manager.run_suite("gauss-sums", {"max_norm": 10})
    key = manager.instance_key("gauss-sums", suite.params, suite.seed, suite.threads)
    (tmp_path / f"{key}.pkl").write_bytes(b"not a pickle")
    fresh = SuiteManager(cache_dir=str(tmp_path)).run_suite("gauss-sums", {"max_norm": 10})
    assert fresh.is_finished
    assert fresh.rows == suite.rows
