"""Tests for the command line entry point."""

import json
import pathlib
import sys
from unittest.mock import patch

import pytest

import main


def _main(argv: list[str]) -> int:
    with patch.object(sys, "argv", ["main.py", *argv]), pytest.raises(SystemExit) as info:
        main.main()
    return info.value.code


@pytest.mark.fast
@pytest.mark.integration
def test_eval_prints_report(definitions_file: pathlib.Path, tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test the report on stdout and the default config created on first use."""
    config = tmp_path / "config.yaml"

    code = _main([str(definitions_file), "--config", str(config), "eval", "D", "aab"])

    assert code == 0
    assert capsys.readouterr().out == "word=aab\nvalue=1\n"
    assert config.exists()


@pytest.mark.fast
@pytest.mark.integration
def test_undefined_value_exits_one(definitions_file: pathlib.Path, tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test exit status 1 outside the domain."""
    only_b = tmp_path / "only_b.txt"
    only_b.write_text("alphabet a b\nwa B {\n  initial p; final p\n  p b p : 1\n}\n", encoding="utf-8")

    code = _main([str(only_b), "--config", str(tmp_path / "config.yaml"), "eval", "B", "ab"])

    assert code == 1
    assert capsys.readouterr().out == "word=ab\nvalue=none\n"


@pytest.mark.fast
@pytest.mark.integration
def test_errors_exit_two(definitions_file: pathlib.Path, tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that library errors and missing files are reported on stderr."""
    config = str(tmp_path / "config.yaml")

    assert _main([str(definitions_file), "--config", config, "eval", "nope", "a"]) == 2
    assert "Unknown expression" in capsys.readouterr().err
    assert _main([str(tmp_path / "missing.txt"), "--config", config, "eval", "D", "a"]) == 2
    assert "not found" in capsys.readouterr().err


@pytest.mark.fast
@pytest.mark.integration
def test_report_file(definitions_file: pathlib.Path, tmp_path: pathlib.Path, capsys: pytest.CaptureFixture[str]) -> None:
    """Test that --report saves the report with the writer of its extension."""
    report = tmp_path / "report.json"

    code = _main([str(definitions_file), "--config", str(tmp_path / "config.yaml"), "--report", str(report), "empty", "D", "--ge", "2"])

    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads(report.read_text(encoding="utf-8"))["witness_word"] == "aa"


@pytest.mark.fast
@pytest.mark.integration
def test_invalid_config(definitions_file: pathlib.Path, tmp_path: pathlib.Path) -> None:
    """Test that an invalid configuration stops the program."""
    config = tmp_path / "config.yaml"
    config.write_text("logging:\n  log_level: INFO\n", encoding="utf-8")

    argv = ["main.py", str(definitions_file), "--config", str(config), "range", "D"]
    with patch.object(sys, "argv", argv), pytest.raises(SystemExit, match="Configuration validation failed"):
        main.main()
