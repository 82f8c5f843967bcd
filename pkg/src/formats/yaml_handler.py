"""
YAML report writer.

This module renders command reports as YAML documents.
"""

import yaml

from .base import BaseReportWriter, Report


def _plain(value: object) -> object:
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(item) for item in value]
    if value is None or isinstance(value, bool | int | float | str):
        return value
    return str(value)


class YAMLWriter(BaseReportWriter):
    """
    YAML report writer.

    Handles key order and unicode symbols the same way as the configuration file.
    """

    @staticmethod
    def render(report: Report) -> str:
        """
        Render a report as a YAML document.

        Parameters
        ----------
        report : Report
            Report to render.

        Returns
        -------
        str
            The YAML text.
        """
        return yaml.safe_dump(_plain(report), sort_keys=False, default_flow_style=False, allow_unicode=True)
