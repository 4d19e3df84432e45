"""
测试命令行入口与报告输出
"""

import json

import pytest

from modules.bessel_gl2 import kernel_J
from modules.cli import (
    ExperimentReport, build_config, build_parser, emit, load_report, main, parse_complex, run_suite, suite_params,
    validate_config,
)
from modules.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("ZIVERIFY_SEED", "ZIVERIFY_THREADS", "ZIVERIFY_FORMAT", "ZIVERIFY_LOG_LEVEL"):
        monkeypatch.delenv(key, raising=False)


def _report():
    rows = [
        {"id": "gauss_sum", "inputs": {"q": "3"}, "value": 3.0000000000000004 + 1e-17j, "bound": 3.0,
         "ratio": 4.4e-16, "pass": True},
        {"id": "weil_bound", "inputs": {"c": "1+i", "n1": "1"}, "value": 0.1, "bound": None, "ratio": None,
         "pass": False},
    ]
    return ExperimentReport("gauss-sums", {"max_norm": 10}, rows, {"moduli": 1},
                            ExperimentReport.make_stamp(1, 1), wall_time=0.5)


def test_report_pass_counts():
    report = _report()
    assert not report.passed
    assert report.failed_count == 1
    assert ExperimentReport("x", {}).passed


def test_json_round_trip(tmp_path):
    path = tmp_path / "report.json"
    report = _report()
    emit(report, "json", str(path))
    loaded = load_report(str(path))
    assert loaded.rows == report.rows
    assert loaded.summary == report.summary
    assert loaded.wall_time == 0.0
    assert "wall_time" not in json.loads(path.read_text(encoding="utf-8"))


def test_json_timing_opt_in():
    data = json.loads(emit(_report(), "json", include_timing=True))
    assert data["wall_time"] == 0.5
    assert data["rows"][0]["value"] == {"re": 3.0000000000000004, "im": 1e-17}
    assert data["passed"] is False


def test_empty_report_csv_is_header_only():
    text = emit(ExperimentReport("gauss-sums", {}), "csv")
    assert text.strip() == "id,inputs,value,bound,ratio,pass"


def test_csv_cells():
    lines = emit(_report(), "csv").strip().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("gauss_sum,")
    assert "3.0000000000000004" in lines[1]
    assert lines[2].endswith(",,,False")


def test_unknown_format():
    with pytest.raises(ConfigError):
        emit(_report(), "xml")


def test_load_report_errors(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_report(str(path))
    path.write_text("{}", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_report(str(path))


def test_combine_prefixes_ids():
    first, second = _report(), ExperimentReport("kloosterman", {}, [dict(_report().rows[0])])
    combined = ExperimentReport.combine([first, second], 1, 1)
    assert combined.suite == "all"
    assert [row["id"] for row in combined.rows] == [
        "gauss-sums/gauss_sum", "gauss-sums/weil_bound", "kloosterman/gauss_sum"]
    assert set(combined.summary) == {"gauss-sums", "kloosterman"}


@pytest.mark.parametrize("config", [
    {"bogus": 1},
    {"gauss-sums": 5},
    {"format": "xml"},
    {"threads": 0},
    {"seed": "abc"},
])
def test_validate_config_errors(config):
    with pytest.raises(ConfigError):
        validate_config(config)


def test_suite_params_scoping():
    config = {"max_c_norm": 20, "seed": 3, "sk-identity": {"max_c_norm": 5}}
    assert suite_params("kloosterman", config) == {"max_c_norm": 20}
    assert suite_params("sk-identity", config) == {"max_c_norm": 5}
    assert suite_params("gauss-sums", config) == {}


def test_run_suite_unknown_name():
    with pytest.raises(ConfigError):
        run_suite("gauss")


def test_run_suite_is_reproducible():
    first = run_suite("gauss-sums", {"max_norm": 20, "seed": 5})
    second = run_suite("gauss-sums", {"max_norm": 20, "seed": 5})
    assert emit(first, "json") == emit(second, "json")
    assert first.stamp["seed"] == 5


def test_config_precedence(tmp_path, monkeypatch):
    path = tmp_path / "run.toml"
    path.write_text('seed = 3\nthreads = 2\n\n[gauss-sums]\nmax_norm = 40\n', encoding="utf-8")
    parser = build_parser()

    config = build_config(parser.parse_args(["gauss-sums", "--config", str(path)]))
    assert config["seed"] == 3 and config["threads"] == 2
    assert config["gauss-sums"] == {"max_norm": 40}

    monkeypatch.setenv("ZIVERIFY_SEED", "7")
    config = build_config(parser.parse_args(["gauss-sums", "--config", str(path)]))
    assert config["seed"] == 7

    config = build_config(parser.parse_args(["gauss-sums", "--config", str(path), "--seed", "9",
                                             "--max-norm", "12"]))
    assert config["seed"] == 9
    assert config["gauss-sums"] == {"max_norm": 12}


def test_missing_config_file(tmp_path):
    assert main(["gauss-sums", "--config", str(tmp_path / "missing.toml")]) == 2


def test_parse_complex():
    assert parse_complex("1+2i") == 1 + 2j
    assert parse_complex(" 3 - 1j ") == 3 - 1j
    with pytest.raises(ConfigError):
        parse_complex("x")


def test_main_unknown_suite():
    assert main(["--suite", "gauss-sumz"]) == 2


def test_main_without_suite():
    assert main([]) == 2


def test_main_runs_small_suite(tmp_path):
    out = tmp_path / "gauss.json"
    assert main(["gauss-sums", "--max-norm", "20", "--out", str(out)]) == 0
    report = load_report(str(out))
    assert report.suite == "gauss-sums"
    assert report.params == {"max_norm": 20}
    assert report.passed


def test_main_csv_output(tmp_path):
    out = tmp_path / "gauss.csv"
    assert main(["gauss-sums", "--max-norm", "20", "--format", "csv", "--out", str(out)]) == 0
    assert out.read_text(encoding="utf-8").startswith("id,inputs,value,bound,ratio,pass")


def test_bessel_eval(capsys):
    assert main(["bessel-eval", "--mu", "0.3i", "--m", "0", "--z", "0.4+0.2i"]) == 0
    data = json.loads(capsys.readouterr().out)
    expected = kernel_J(0.3j, 0, 0.4 + 0.2j)
    assert complex(data["value"]["re"], data["value"]["im"]) == pytest.approx(expected)


def test_bessel_eval_at_zero():
    assert main(["bessel-eval", "--mu", "0.3i", "--m", "0", "--z", "0"]) == 2
