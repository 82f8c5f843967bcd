"""
Report writers of the command line layer.

Command reports are rendered as key/value lines, JSON or YAML through a
Strategy Pattern and a Format Registry.
"""

from .registry import (
    EXTENSION_REGISTRY,
    FORMAT_REGISTRY,
    get_report_writer,
    get_report_writer_for_path,
    get_supported_formats,
)

__all__ = [
    "EXTENSION_REGISTRY",
    "FORMAT_REGISTRY",
    "get_report_writer",
    "get_report_writer_for_path",
    "get_supported_formats",
]
