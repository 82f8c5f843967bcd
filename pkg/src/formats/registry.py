"""
Report writer registry and lookup helpers.

Maps format names and file extensions to report writer classes and provides
get_report_writer, get_report_writer_for_path and get_supported_formats.
"""

from pathlib import Path

from .base import BaseReportWriter
from .json_handler import JSONWriter
from .kv_handler import KeyValueWriter
from .yaml_handler import YAMLWriter

# Format registry - maps format names to writer classes
FORMAT_REGISTRY: dict[str, type[BaseReportWriter]] = {
    "kv": KeyValueWriter,
    "json": JSONWriter,
    "yaml": YAMLWriter,
}

EXTENSION_REGISTRY: dict[str, str] = {
    ".txt": "kv",
    ".kv": "kv",
    ".json": "json",
    ".yaml": "yaml",
    ".yml": "yaml",
}


def get_report_writer(name: str) -> BaseReportWriter:
    """
    Get the report writer registered under ``name``.

    Parameters
    ----------
    name : str
        Format name (kv, json or yaml).

    Returns
    -------
    BaseReportWriter
        The writer instance.

    Raises
    ------
    ValueError
        If the format is not supported.
    """
    key = name.lower()
    if key not in FORMAT_REGISTRY:
        supported_formats = ", ".join(FORMAT_REGISTRY.keys())
        raise ValueError(f"Unsupported report format: {name}. Supported formats: {supported_formats}")
    return FORMAT_REGISTRY[key]()


def get_report_writer_for_path(file_path: Path) -> BaseReportWriter:
    """
    Get the report writer for a file extension.

    Parameters
    ----------
    file_path : Path
        Destination of the report.

    Returns
    -------
    BaseReportWriter
        The writer instance.

    Raises
    ------
    ValueError
        If the file extension is not supported.
    """
    extension = file_path.suffix.lower()
    if extension not in EXTENSION_REGISTRY:
        supported_extensions = ", ".join(EXTENSION_REGISTRY.keys())
        raise ValueError(f"Unsupported report file: {extension}. Supported extensions: {supported_extensions}")
    return get_report_writer(EXTENSION_REGISTRY[extension])


def get_supported_formats() -> list[str]:
    """
    Get list of supported report format names.

    Returns
    -------
    list[str]
        List of format names
    """
    return list(FORMAT_REGISTRY.keys())
