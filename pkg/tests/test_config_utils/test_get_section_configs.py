"""Tests for the section extractors of config_utils."""

import pytest

import src.config_utils as cu


@pytest.mark.fast
def test_get_logging_config(default_config: dict) -> None:
    """Test the logging section and its fallback level."""
    assert cu.get_logging_config(default_config) == {"log_level": "INFO"}
    assert cu.get_logging_config({}) == {"log_level": "INFO"}


@pytest.mark.fast
def test_get_semilinear_config(default_config: dict) -> None:
    """Test the limits of the semi-linear procedures."""
    assert cu.get_semilinear_config(default_config) == {
        "membership_bound": 50,
        "witness_max_length": 12,
        "witness_max_words": 20000,
    }


@pytest.mark.fast
def test_get_countermachine_config(default_config: dict) -> None:
    """Test the counter machine section without command line overrides."""
    config = cu.get_countermachine_config(default_config)

    assert config["ibarra_constant"] == 1
    assert config["step_ceiling"] == 1_000_000
    assert config["max_configurations"] == 200_000
    assert config["step_bound"] is None
    assert config["trace"] is False


@pytest.mark.fast
def test_get_oracle_config(default_config: dict) -> None:
    """Test the oracle lengths."""
    assert cu.get_oracle_config(default_config) == {"max_len": 6, "max_len_ceiling": 10}


@pytest.mark.fast
def test_get_cli_config(default_config: dict) -> None:
    """Test the command line defaults."""
    assert cu.get_cli_config(default_config) == {"backend": "semilinear", "report_format": "kv", "tokens": False, "jobs": 1}


@pytest.mark.fast
def test_missing_sections_give_none() -> None:
    """Test that absent sections give empty values."""
    assert cu.get_cli_config({})["backend"] is None
    assert cu.get_oracle_config({"oracle": {"max_len": 3}}) == {"max_len": 3, "max_len_ceiling": None}
