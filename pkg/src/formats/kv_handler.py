"""
Key/value report writer, the default command line output.

One ``key=value`` line per entry in insertion order; nested mappings use
dotted keys and lists are comma separated.
"""

from .base import BaseReportWriter, Report


def _flatten(report: Report, prefix: str = "") -> list[tuple[str, str]]:
    lines = []
    for key, value in report.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_flatten(value, f"{name}."))
        elif isinstance(value, list | tuple):
            lines.append((name, ",".join(str(item) for item in value)))
        elif isinstance(value, bool):
            lines.append((name, str(value).lower()))
        elif value is None:
            lines.append((name, "none"))
        else:
            lines.append((name, str(value)))
    return lines


class KeyValueWriter(BaseReportWriter):
    """Writer of ``key=value`` lines."""

    @staticmethod
    def render(report: Report) -> str:
        """Render ``report`` as ``key=value`` lines."""
        return "".join(f"{key}={value}\n" for key, value in _flatten(report))
