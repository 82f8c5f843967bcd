"""Tests for the report writer registry in src.formats."""

import pathlib

import pytest

from src import formats
from src.formats.base import BaseReportWriter
from src.formats.json_handler import JSONWriter
from src.formats.kv_handler import KeyValueWriter
from src.formats.yaml_handler import YAMLWriter


@pytest.mark.fast
def test_get_supported_formats() -> None:
    """Test the supported format names and that a new list is returned."""
    result = formats.get_supported_formats()

    assert result == ["kv", "json", "yaml"]
    assert result is not formats.get_supported_formats()


@pytest.mark.fast
@pytest.mark.parametrize(
    ("name", "expected"),
    [
        ("kv", KeyValueWriter),
        ("json", JSONWriter),
        ("yaml", YAMLWriter),
        ("JSON", JSONWriter),
    ],
)
def test_get_report_writer(name: str, expected: type[BaseReportWriter]) -> None:
    """Test lookup by format name, ignoring case."""
    writer = formats.get_report_writer(name)

    assert isinstance(writer, expected)
    assert isinstance(writer, BaseReportWriter)


@pytest.mark.fast
def test_get_report_writer_unsupported() -> None:
    """Test that unknown names list the supported formats."""
    with pytest.raises(ValueError, match="Unsupported report format: xml") as exc_info:
        formats.get_report_writer("xml")

    assert "kv, json, yaml" in str(exc_info.value)


@pytest.mark.fast
@pytest.mark.parametrize(
    ("file_name", "expected"),
    [
        ("report.txt", KeyValueWriter),
        ("report.kv", KeyValueWriter),
        ("report.json", JSONWriter),
        ("report.YAML", YAMLWriter),
        ("report.yml", YAMLWriter),
    ],
)
def test_get_report_writer_for_path(file_name: str, expected: type[BaseReportWriter]) -> None:
    """Test lookup by file extension."""
    assert isinstance(formats.get_report_writer_for_path(pathlib.Path(file_name)), expected)


@pytest.mark.fast
@pytest.mark.parametrize("file_name", ["report.csv", "report.xml", "report"])
def test_get_report_writer_for_path_unsupported(file_name: str) -> None:
    """Test that unknown extensions list the supported ones."""
    with pytest.raises(ValueError, match="Unsupported report file") as exc_info:
        formats.get_report_writer_for_path(pathlib.Path(file_name))

    assert ".json" in str(exc_info.value)


@pytest.mark.fast
def test_registries_agree() -> None:
    """Test that every extension maps to a registered format."""
    assert set(formats.EXTENSION_REGISTRY.values()) == set(formats.FORMAT_REGISTRY)
