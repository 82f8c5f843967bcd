"""Tests for the key/value, JSON and YAML report writers."""

import json
import pathlib
from unittest.mock import patch

import pytest
import yaml

from src.formats.base import Report
from src.formats.json_handler import JSONWriter
from src.formats.kv_handler import KeyValueWriter
from src.formats.yaml_handler import YAMLWriter


@pytest.mark.fast
def test_key_value_lines(sample_report: Report) -> None:
    """Test one line per key in insertion order with dotted nested keys."""
    assert KeyValueWriter.render(sample_report) == (
        "verdict=yes\n"
        "witness_word=aab•\n"
        "witness_value=2\n"
        "status=exact\n"
        "bounds.step_bound=18\n"
        "bounds.exhausted=false\n"
        "values=0,1\n"
        "shortest_word=none\n"
    )


@pytest.mark.fast
def test_key_value_empty_report() -> None:
    """Test that an empty report renders as nothing."""
    assert KeyValueWriter.render({}) == ""


@pytest.mark.fast
def test_json_document(sample_report: Report) -> None:
    """Test that the JSON document keeps order and unicode symbols."""
    text = JSONWriter.render(sample_report)

    assert text.endswith("}\n")
    assert "aab•" in text
    assert list(json.loads(text)) == list(sample_report)
    assert json.loads(text)["bounds"] == {"step_bound": 18, "exhausted": False}


@pytest.mark.fast
def test_json_falls_back_to_strings() -> None:
    """Test that values JSON cannot represent are written as strings."""
    assert json.loads(JSONWriter.render({"path": pathlib.Path("out.txt")})) == {"path": "out.txt"}


@pytest.mark.fast
def test_yaml_document(sample_report: Report) -> None:
    """Test that the YAML document keeps order and unicode symbols."""
    text = YAMLWriter.render(sample_report)

    assert text.startswith("verdict: 'yes'\n")
    assert "aab•" in text
    assert yaml.safe_load(text) == sample_report


@pytest.mark.fast
def test_rendering_is_deterministic(sample_report: Report) -> None:
    """Test that the same report always gives the same text."""
    for writer in (KeyValueWriter(), JSONWriter(), YAMLWriter()):
        assert writer.render(sample_report) == writer.render(dict(sample_report))


@pytest.mark.fast
def test_save(tmp_path: pathlib.Path, sample_report: Report) -> None:
    """Test that save writes the rendered report."""
    file_path = tmp_path / "report.json"

    JSONWriter().save(sample_report, file_path)

    assert json.loads(file_path.read_text(encoding="utf-8")) == sample_report


@pytest.mark.fast
def test_save_os_error(tmp_path: pathlib.Path, sample_report: Report) -> None:
    """Test that save raises OSError for OS-level errors."""
    file_path = tmp_path / "nonexistent" / "report.txt"

    with pytest.raises(OSError, match="OS error"):
        KeyValueWriter().save(sample_report, file_path)


@pytest.mark.fast
def test_save_permission_error(tmp_path: pathlib.Path, sample_report: Report) -> None:
    """Test that save raises PermissionError for read-only files."""
    file_path = tmp_path / "readonly.yaml"

    with (
        patch("pathlib.Path.write_text", side_effect=PermissionError("read-only")),
        pytest.raises(PermissionError, match="Permission denied"),
    ):
        YAMLWriter().save(sample_report, file_path)
