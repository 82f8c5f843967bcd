"""Tests for the update_config function in config_utils module."""

import argparse

import pytest

import src.arg_parser as ap
import src.config_utils as cu


@pytest.mark.fast
def test_update_config_no_args(default_config: dict) -> None:
    """Test update_config when no arguments are provided."""
    result = cu.update_config(default_config, argparse.Namespace())

    assert result == default_config
    assert result is not default_config


@pytest.mark.fast
def test_update_config_does_not_modify_original(default_config: dict) -> None:
    """Test that the original configuration is left unchanged."""
    cu.update_config(default_config, argparse.Namespace(backend="cm", max_len=3))

    assert default_config["cli"]["backend"] == "semilinear"
    assert default_config["oracle"]["max_len"] == 6


@pytest.mark.fast
def test_update_config_from_command_line(default_config: dict) -> None:
    """Test the mapping of every global flag onto its section."""
    args = ap.run_arg_parser(
        ["defs.txt", "--backend", "cm", "--max-steps", "40", "--format", "yaml", "--tokens", "--trace", "--jobs", "4", "oracle", "D", "--max-len", "3"],
    )

    result = cu.update_config(default_config, args)

    assert result["cli"] == {"backend": "cm", "report_format": "yaml", "tokens": True, "jobs": 4}
    assert result["countermachine"]["step_bound"] == 40
    assert result["countermachine"]["trace"] is True
    assert result["oracle"]["max_len"] == 3
    assert result["semilinear"] == default_config["semilinear"]


@pytest.mark.fast
def test_update_config_none_values_are_ignored(default_config: dict) -> None:
    """Test that flags left at None keep the configured values."""
    args = argparse.Namespace(backend=None, report_format=None, tokens=None, max_steps=None)

    result = cu.update_config(default_config, args)

    assert result == default_config


@pytest.mark.fast
def test_update_config_false_flags_override(default_config: dict) -> None:
    """Test that --no-tokens overrides a configured true value."""
    default_config["cli"]["tokens"] = True

    result = cu.update_config(default_config, argparse.Namespace(tokens=False))

    assert result["cli"]["tokens"] is False


@pytest.mark.fast
def test_update_config_verbose(default_config: dict) -> None:
    """Test that --verbose switches the log level to DEBUG."""
    assert cu.update_config(default_config, argparse.Namespace(verbose=True))["logging"]["log_level"] == "DEBUG"
    assert cu.update_config(default_config, argparse.Namespace(verbose=False))["logging"]["log_level"] == "INFO"


@pytest.mark.fast
def test_update_config_creates_missing_sections() -> None:
    """Test that update_config creates missing sections when needed."""
    result = cu.update_config({"logging": {"log_level": "INFO"}}, argparse.Namespace(max_steps=12, jobs=2))

    assert result["countermachine"] == {"step_bound": 12}
    assert result["cli"] == {"jobs": 2}
    assert result["logging"] == {"log_level": "INFO"}
