#!/usr/bin/env python3
"""
测试命令行：实例文件解析、各命令的退出码、JSON 报告、超时与环境变量配置
"""
import json
import time
from pathlib import Path

import pytest

from src.cli import run
from src.cli.instance_file import format_instance, load_instance, parse_instance
from src.cli.report import Report
from src.errors import ParseError, ShapeError
from src.utils import config
from src.utils.timeout import timeout_decorator

FIXTURES = Path(__file__).resolve().parent / "fixtures"

SMALL = """\
vars: s t
a:
    s
    t
p: s
q: t
"""


def fixture(name):
    return str(FIXTURES / name)


# ---- 实例文件 ----
def test_parse_first_example():
    data = load_instance(fixture("ex51"))
    assert (data.m, data.n) == (4, 2)
    assert data.zero_dimensional
    instance = data.to_instance()
    assert instance.M.shape == (2, 4)
    assert instance.N.shape == (4, 2)


def test_empty_generator_block():
    with pytest.raises(ShapeError, match="at least two generators required"):
        parse_instance("vars: s t\na:\np: s\nq: t\n")


def test_wrong_matrix_shape():
    text = SMALL.replace("a:\n    s\n    t\n", "a1: s\na2: t\na3: s\na4: t\n") + \
        "M:\n    1; 0; 0\n    0; 1; 0\n"
    with pytest.raises(ShapeError):
        parse_instance(text)


def test_format_round_trip():
    data = load_instance(fixture("ex52"))
    assert parse_instance(format_instance(data)) == data


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_instance("vars: s t\na1: s\na2: t\np: s + x\nq: t\n")
    assert info.value.line == 4
    assert info.value.column == 5


def test_unknown_field():
    with pytest.raises(ParseError) as info:
        parse_instance(SMALL + "r: 1\n")
    assert info.value.line == 7


# ---- 命令 ----
def test_verify_fixture_basis():
    assert run(["verify", fixture("ex51"), "--basis", fixture("ex51_uhat_star")]) == 0


def test_verify_needs_basis():
    assert run(["verify", fixture("ex51")]) == 2


def test_check_command():
    assert run(["check", fixture("ex52")]) == 0


def test_basis_command(capsys):
    assert run(["basis", fixture("ex52"), "--strategy", "tilde-m", "--seed", "7", "--json"]) == 0
    report = Report.from_json(capsys.readouterr().out)
    assert report.ok
    assert report.strategy == "tilde-m"
    assert len(report.basis) == 4


def test_bounds_with_override(capsys):
    assert run(["bounds", fixture("ex51"), "--delta-a", "2", "--json"]) == 0
    report = Report.from_json(capsys.readouterr().out)
    values = {b["formula"]: b["value"] for b in report.bounds}
    assert values["MTT_1"] == 460992
    assert values["CITAM"] == 120000


def test_bounds_without_override(capsys):
    assert run(["bounds", fixture("ex51"), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    values = {b["formula"]: b["value"] for b in data["bounds"]}
    assert values["MTT_1"] == 786432


def test_missing_file():
    assert run(["check", fixture("does_not_exist")]) == 2


def test_unknown_demo():
    assert run(["demo", "ex99"]) == 2


def test_bad_instance_file(tmp_path):
    path = tmp_path / "bad"
    path.write_text("vars: s t\na1: s +\na2: t\np: s\nq: t\n", encoding="utf-8")
    assert run(["check", str(path)]) == 2


def test_json_is_deterministic(capsys, tmp_path):
    output = tmp_path / "report.json"
    args = ["basis", fixture("ex51"), "--strategy", "tilde-m", "--seed", "3", "--json"]
    assert run(args) == 0
    first = capsys.readouterr().out
    assert run(args + ["--output", str(output)]) == 0
    second = capsys.readouterr().out
    assert first == second
    assert output.read_text(encoding="utf-8").strip() == first.strip()


def test_report_round_trip():
    report = Report("demo", instance="ex51", seed=0, variables=["s", "t"])
    report.add_check("M̃ 单模", True)
    report.add_run(Report("basis", strategy="m", basis=[["1", "s"]]))
    restored = Report.from_json(report.to_json())
    assert restored == report
    assert restored.ok


def test_failed_check_marks_report():
    report = Report("demo")
    report.add_check("坏的检查", False, "detail")
    assert not report.ok
    assert "❌" in report.render()


@pytest.mark.slow
@pytest.mark.parametrize("name", ["ex51", "ex52"])
def test_demo(name):
    assert run(["demo", name, "--seed", "0"]) == 0


# ---- 工具 ----
def test_timeout_decorator():
    @timeout_decorator(0.05)
    def slow():
        time.sleep(1)

    with pytest.raises(TimeoutError):
        slow()

    @timeout_decorator(None)
    def fast(x):
        return x + 1

    assert fast(1) == 2


def test_timeout_decorator_reraises():
    @timeout_decorator(5)
    def broken():
        raise ValueError("boom")

    with pytest.raises(ValueError):
        broken()


def test_config_falls_back_on_invalid_values(monkeypatch):
    monkeypatch.setenv("SYZ_SEED", "abc")
    assert config.default_seed() == config.DEFAULT_SEED
    monkeypatch.setenv("SYZ_SEED", "42")
    assert config.default_seed() == 42
    monkeypatch.setenv("SYZ_MAX_RETRIES", "0")
    assert config.max_retries() == config.DEFAULT_MAX_RETRIES
    monkeypatch.setenv("SYZ_TIMEOUT", "slow")
    assert config.run_timeout() is None
    monkeypatch.delenv("SYZ_TIMEOUT")
    assert config.run_timeout() is None
    monkeypatch.setenv("SYZ_STRATEGY", "TILDE-M")
    assert config.default_strategy() == "tilde-m"


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
