"""Tests for the validation of configurations."""

import copy
import pathlib

import pytest

import src.config_utils as cu


@pytest.mark.fast
def test_validate_config_success(default_config: dict) -> None:
    """Test successful configuration validation."""
    assert cu.validate_config(default_config) is True


@pytest.mark.fast
@pytest.mark.parametrize("section", ["logging", "semilinear", "countermachine", "oracle", "cli"])
def test_validate_config_missing_section(default_config: dict, section: str) -> None:
    """Test configuration validation with a missing section."""
    config = copy.deepcopy(default_config)
    del config[section]

    assert cu.validate_config(config) is False


@pytest.mark.fast
@pytest.mark.parametrize(
    ("section", "field"),
    [
        ("semilinear", "witness_max_length"),
        ("countermachine", "step_ceiling"),
        ("oracle", "max_len_ceiling"),
        ("cli", "jobs"),
    ],
)
def test_validate_config_missing_field(default_config: dict, section: str, field: str) -> None:
    """Test configuration validation with a missing field."""
    config = copy.deepcopy(default_config)
    del config[section][field]

    assert cu.validate_config(config) is False


@pytest.mark.fast
def test_validate_config_unknown_backend(default_config: dict) -> None:
    """Test that only the two back ends are accepted."""
    config = copy.deepcopy(default_config)
    config["cli"]["backend"] = "z3"

    assert cu.validate_config(config) is False


@pytest.mark.fast
def test_validate_config_oracle_length_above_ceiling(default_config: dict) -> None:
    """Test that the default oracle length stays below its ceiling."""
    config = copy.deepcopy(default_config)
    config["oracle"]["max_len"] = 12

    assert cu.validate_config(config) is False


@pytest.mark.fast
def test_validate_config_actual_config_file() -> None:
    """Test that the actual config.yaml file passes validation."""
    config_path = pathlib.Path("config.yaml")
    if config_path.exists():
        config = cu.load_config(config_path)
        assert cu.validate_config(config) is True
    else:
        pytest.skip("config.yaml file not found")
