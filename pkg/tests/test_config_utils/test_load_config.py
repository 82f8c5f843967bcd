"""Tests for loading configuration files."""

import pathlib

import pytest
import yaml
from pytest_mock import MockerFixture

import src.config_utils as cu


def _write_config(path: pathlib.Path, content: dict | str) -> None:
    """Write config dict or raw string to a YAML file."""
    if isinstance(content, dict):
        path.write_text(yaml.safe_dump(content), encoding="utf-8")
    else:
        path.write_text(content, encoding="utf-8")


@pytest.mark.fast
def test_load_config_success(tmp_path: pathlib.Path) -> None:
    """Test successful configuration loading."""
    config_path = tmp_path / "config.yaml"
    _write_config(config_path, cu.DEFAULT_CONFIG)

    config = cu.load_config(config_path)

    assert config["semilinear"]["witness_max_length"] == 12
    assert config["cli"]["backend"] == "semilinear"


@pytest.mark.fast
def test_load_config_file_not_found() -> None:
    """Test configuration loading when file doesn't exist."""
    with pytest.raises(FileNotFoundError):
        cu.load_config(pathlib.Path("nonexistent_config.yaml"))


@pytest.mark.fast
def test_load_config_malformed_yaml(tmp_path: pathlib.Path) -> None:
    """Test configuration loading with malformed YAML."""
    config_path = tmp_path / "config.yaml"
    _write_config(config_path, "cli:\n  backend: 'cm'\ninvalid: yaml: :")

    with pytest.raises(yaml.YAMLError):
        cu.load_config(config_path)


@pytest.mark.fast
def test_load_config_empty_file(tmp_path: pathlib.Path) -> None:
    """Test configuration loading with empty YAML file."""
    config_path = tmp_path / "config.yaml"
    _write_config(config_path, "")

    assert cu.load_config(config_path) is None


@pytest.mark.fast
def test_load_config_comments_and_underscores(tmp_path: pathlib.Path) -> None:
    """Test inline comments and numbers with underscores."""
    config_path = tmp_path / "config.yaml"
    _write_config(config_path, "countermachine:\n  step_ceiling: 1_000  # hard ceiling\n  ibarra_constant: 2\n")

    config = cu.load_config(config_path)

    assert config["countermachine"]["ibarra_constant"] == 2
    assert config["countermachine"]["step_ceiling"] == 1000


@pytest.mark.fast
def test_load_config_os_error(tmp_path: pathlib.Path, mocker: MockerFixture) -> None:
    """Test that read errors are logged and raised."""
    config_path = tmp_path / "config.yaml"
    _write_config(config_path, cu.DEFAULT_CONFIG)
    mocker.patch("pathlib.Path.open", side_effect=PermissionError("denied"))
    mock_logger = mocker.patch("src.config_utils.logger")

    with pytest.raises(PermissionError):
        cu.load_config(config_path)
    mock_logger.exception.assert_called_once()
