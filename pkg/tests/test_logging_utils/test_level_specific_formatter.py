"""Tests for the level specific and trace formatters."""

import logging

import pytest

import src.logging_utils as lu


def _record(level: int, msg: str) -> logging.LogRecord:
    record = logging.LogRecord(
        name="src.decision",
        level=level,
        pathname="decision.py",
        lineno=42,
        msg=msg,
        args=(),
        exc_info=None,
    )
    record.funcName = "decide"
    return record


@pytest.mark.fast
def test_formatter_initialization() -> None:
    """Test that LevelSpecificFormatter has one formatter per standard level."""
    formatter = lu.LevelSpecificFormatter()

    assert set(formatter.formatters) == {logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR, logging.CRITICAL}
    for fmt in formatter.formatters.values():
        assert isinstance(fmt, logging.Formatter)


@pytest.mark.fast
@pytest.mark.parametrize(
    ("level", "expected"),
    [
        (logging.DEBUG, "DEBUG - src.decision.decide in line 42 - Witness found"),
        (logging.INFO, "Witness found"),
        (logging.WARNING, "WARNING: Witness found"),
        (logging.ERROR, "ERROR: decide - Witness found"),
        (logging.CRITICAL, "CRITICAL: decide in decision.py:42 - Witness found"),
        (999, "Witness found"),
    ],
)
def test_format_by_level(level: int, expected: str) -> None:
    """Test the format of each level, unknown levels falling back to INFO."""
    assert lu.LevelSpecificFormatter().format(_record(level, "Witness found")) == expected


@pytest.mark.fast
def test_trace_formatter_is_bare() -> None:
    """Test that trace lines carry no level or location."""
    assert lu.TraceFormatter().format(_record(logging.INFO, "q3 [2, 0]")) == "q3 [2, 0]"
