"""
Configuration utilities for the quantitative expressions toolkit.

This module provides functionality to load and parse YAML configuration files,
with support for default values and configuration validation.
"""

import argparse
import copy
import pathlib

import yaml

import src.logging_utils as lu

# Set up logger
logger = lu.setup_logger(__name__)

DEFAULT_CONFIG: dict[str, dict] = {
    "logging": {
        "log_level": "INFO",
    },
    "semilinear": {
        "membership_bound": 50,
        "witness_max_length": 12,
        "witness_max_words": 20000,
    },
    "countermachine": {
        "ibarra_constant": 1,
        "step_ceiling": 1_000_000,
        "max_configurations": 200_000,
    },
    "oracle": {
        "max_len": 6,
        "max_len_ceiling": 10,
    },
    "cli": {
        "backend": "semilinear",
        "report_format": "kv",
        "tokens": False,
        "jobs": 1,
    },
}


def load_config(config_path: pathlib.Path) -> dict[str, dict]:
    """
    Load configuration from a YAML file.

    Parameters
    ----------
    config_path : pathlib.Path
        Path to the YAML configuration file.

    Returns
    -------
    Dict[str, Any]
        Dictionary containing the configuration parameters.

    Raises
    ------
    FileNotFoundError
        If the configuration file does not exist.
    yaml.YAMLError
        If the YAML file is malformed.
    """
    if not config_path.exists():
        msg = f"Configuration file not found: {config_path}"
        raise FileNotFoundError(msg)

    try:
        with config_path.open(encoding="utf-8") as file:
            config = yaml.safe_load(file)
    except yaml.YAMLError:
        msg = f"Error parsing YAML file {config_path}"
        logger.exception(msg)
        raise
    except OSError:
        msg = f"Error loading configuration file {config_path}"
        logger.exception(msg)
        raise
    else:
        msg = f"Configuration loaded from {config_path}"
        logger.debug(msg)
        return config


def get_logging_config(config: dict) -> dict:
    """
    Extract logging configuration from the main config.

    Parameters
    ----------
    config : dict
        The main configuration dictionary.

    Returns
    -------
    dict
        Dictionary containing logging parameters.
    """
    logging_config = config.get("logging", {})
    return {
        "log_level": logging_config.get("log_level", "INFO"),
    }


def get_semilinear_config(config: dict) -> dict:
    """
    Extract the limits of the semi-linear decision procedures from the main config.

    Parameters
    ----------
    config : dict
        The main configuration dictionary.

    Returns
    -------
    dict
        Dictionary containing membership and witness search parameters.
    """
    semilinear = config.get("semilinear", {})
    return {
        "membership_bound": semilinear.get("membership_bound"),
        "witness_max_length": semilinear.get("witness_max_length"),
        "witness_max_words": semilinear.get("witness_max_words"),
    }


def get_countermachine_config(config: dict) -> dict:
    """
    Extract counter machine back end configuration from the main config.

    Parameters
    ----------
    config : dict
        The main configuration dictionary.

    Returns
    -------
    dict
        Dictionary containing counter machine parameters. ``step_bound`` and
        ``trace`` are only present after command line overrides.
    """
    countermachine = config.get("countermachine", {})
    return {
        "ibarra_constant": countermachine.get("ibarra_constant"),
        "step_ceiling": countermachine.get("step_ceiling"),
        "max_configurations": countermachine.get("max_configurations"),
        "step_bound": countermachine.get("step_bound"),
        "trace": countermachine.get("trace", False),
    }


def get_oracle_config(config: dict) -> dict:
    """
    Extract oracle configuration from the main config.

    Parameters
    ----------
    config : dict
        The main configuration dictionary.

    Returns
    -------
    dict
        Dictionary containing the oracle enumeration lengths.
    """
    oracle = config.get("oracle", {})
    return {
        "max_len": oracle.get("max_len"),
        "max_len_ceiling": oracle.get("max_len_ceiling"),
    }


def get_cli_config(config: dict) -> dict:
    """
    Extract command line defaults from the main config.

    Parameters
    ----------
    config : dict
        The main configuration dictionary.

    Returns
    -------
    dict
        Dictionary containing back end, report format, word tokens and jobs.
    """
    cli = config.get("cli", {})
    return {
        "backend": cli.get("backend"),
        "report_format": cli.get("report_format"),
        "tokens": cli.get("tokens"),
        "jobs": cli.get("jobs"),
    }


def validate_config(config: dict) -> bool:
    """
    Validate the configuration dictionary.

    Parameters
    ----------
    config : dict
        The configuration dictionary to validate.

    Returns
    -------
    bool
        True if configuration is valid, False otherwise.
    """
    # Define required sections and their required fields
    required_fields = {
        "logging": ["log_level"],
        "semilinear": ["membership_bound", "witness_max_length", "witness_max_words"],
        "countermachine": ["ibarra_constant", "step_ceiling", "max_configurations"],
        "oracle": ["max_len", "max_len_ceiling"],
        "cli": ["backend", "report_format", "tokens", "jobs"],
    }

    # Validate all sections exist
    for section in required_fields:
        if section not in config:
            msg = f"Missing required configuration section: {section}"
            logger.error(msg)
            return False

    # Validate required fields in each section
    for section, fields in required_fields.items():
        section_config = config.get(section, {})
        for field in fields:
            if field not in section_config:
                msg = f"Missing required {section} field: {field}"
                logger.error(msg)
                return False

    if config["cli"]["backend"] not in {"semilinear", "cm"}:
        msg = f"Unknown cli backend: {config['cli']['backend']}"
        logger.error(msg)
        return False

    if config["oracle"]["max_len"] > config["oracle"]["max_len_ceiling"]:
        msg = f"oracle max_len {config['oracle']['max_len']} exceeds max_len_ceiling {config['oracle']['max_len_ceiling']}"
        logger.error(msg)
        return False

    logger.debug("Configuration validation passed")
    return True


def create_default_config(config_path: pathlib.Path) -> None:
    """
    Create a default configuration file if it doesn't exist.

    Parameters
    ----------
    config_path : pathlib.Path
        Path where the default configuration file should be created.

    Raises
    ------
    yaml.YAMLError
        If the YAML file is malformed.
    """
    if config_path.exists():
        msg = f"Configuration file already exists: {config_path}"
        logger.debug(msg)
        return

    try:
        with config_path.open("w", encoding="utf-8") as file:
            yaml.safe_dump(DEFAULT_CONFIG, file, default_flow_style=False, sort_keys=False)
        saved_path = config_path.resolve()
        msg = f"No configuration file found. Created default config at: {saved_path}"
        logger.info(msg)
    except yaml.YAMLError:
        logger.exception("Error creating default configuration file")
        raise


def update_config(config: dict, args: argparse.Namespace) -> dict[str, dict]:
    """
    Update the configuration dictionary with the values from the command line arguments.

    Parameters
    ----------
    config : dict
        The original configuration dictionary.
    args : argparse.Namespace
        Parsed command line arguments.

    Returns
    -------
    dict
        Updated configuration dictionary with command line argument values merged in.
    """
    # Copy the config to avoid modifying the original
    updated_config = copy.deepcopy(config)

    # Define argument mappings: (arg_name, config_path)
    arg_mappings = [
        # Command line defaults
        ("backend", "cli.backend"),
        ("report_format", "cli.report_format"),
        ("tokens", "cli.tokens"),
        ("jobs", "cli.jobs"),
        # Counter machine settings
        ("max_steps", "countermachine.step_bound"),
        ("trace", "countermachine.trace"),
        # Oracle settings
        ("max_len", "oracle.max_len"),
    ]

    def _set_nested_value(config_dict: dict, path: str, value: str | int | bool) -> None:  # noqa: FBT001
        """Set a value in a nested dictionary using dot notation."""
        keys = path.split(".")
        current = config_dict

        # Navigate to the parent of the target key
        for key in keys[:-1]:
            current = current.setdefault(key, {})

        # Set the final value
        current[keys[-1]] = value

    # Process each argument mapping
    for arg_name, config_path in arg_mappings:
        if hasattr(args, arg_name) and getattr(args, arg_name) is not None:
            value = getattr(args, arg_name)

            _set_nested_value(updated_config, config_path, value)

    if getattr(args, "verbose", False):
        _set_nested_value(updated_config, "logging.log_level", "DEBUG")

    logger.debug("Configuration updated with command line arguments")
    return updated_config
