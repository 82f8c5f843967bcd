"""
JSON report writer.

This module renders command reports as indented JSON documents.
"""

import json

from .base import BaseReportWriter, Report


class JSONWriter(BaseReportWriter):
    """
    JSON report writer.

    Keys keep their insertion order; non-ASCII symbols are written as is.
    """

    @staticmethod
    def render(report: Report) -> str:
        """
        Render a report as a JSON document.

        Parameters
        ----------
        report : Report
            Report to render.

        Returns
        -------
        str
            The JSON text.

        Raises
        ------
        ValueError
            If the report holds values JSON cannot represent.
        """
        try:
            return json.dumps(report, indent=2, ensure_ascii=False, default=str) + "\n"
        except (TypeError, ValueError) as e:
            raise ValueError(f"Report cannot be rendered as JSON: {e}") from e
