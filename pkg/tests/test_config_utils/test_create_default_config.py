"""Tests for the creation of the default configuration file."""

import pathlib
from unittest.mock import Mock, patch

import pytest
import yaml

import src.config_utils as cu


@pytest.mark.fast
def test_create_default_config_new_file(tmp_path: pathlib.Path) -> None:
    """Test that the default configuration is written section by section."""
    config_path = tmp_path / "config.yaml"

    cu.create_default_config(config_path)

    config = yaml.safe_load(config_path.read_text(encoding="utf-8"))
    assert list(config) == ["logging", "semilinear", "countermachine", "oracle", "cli"]
    assert config == cu.DEFAULT_CONFIG
    assert cu.validate_config(config) is True


@pytest.mark.fast
def test_create_default_config_existing_file(tmp_path: pathlib.Path) -> None:
    """Test that an existing configuration file is left alone."""
    config_path = tmp_path / "config.yaml"
    config_path.write_text("cli:\n  backend: cm\n", encoding="utf-8")

    cu.create_default_config(config_path)

    assert config_path.read_text(encoding="utf-8") == "cli:\n  backend: cm\n"


@patch("pathlib.Path.exists")
@patch("pathlib.Path.open")
@patch("yaml.safe_dump")
@pytest.mark.fast
def test_create_default_config_yaml_error(mock_yaml_dump: Mock, mock_open: Mock, mock_exists: Mock) -> None:
    """Test create_default_config raises YAMLError when yaml.safe_dump fails."""
    mock_exists.return_value = False
    mock_open.return_value.__enter__.return_value = Mock()
    mock_yaml_dump.side_effect = yaml.YAMLError("YAML serialization failed")

    with pytest.raises(yaml.YAMLError, match="YAML serialization failed"):
        cu.create_default_config(pathlib.Path("test_config.yaml"))

    mock_yaml_dump.assert_called_once()
