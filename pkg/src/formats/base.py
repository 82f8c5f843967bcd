"""
Base report writer of the quantitative expressions toolkit.

This module defines the abstract base class that all report writers must implement.
"""

from abc import ABC, abstractmethod
from pathlib import Path

Report = dict[str, object]


class BaseReportWriter(ABC):
    """
    Abstract base class for report writers.

    A report is an ordered mapping from keys to scalars, lists or nested
    mappings. Writers render it deterministically: same report, same text.
    """

    @abstractmethod
    def render(self, report: Report) -> str:
        """
        Render a report as text.

        Parameters
        ----------
        report : Report
            Ordered key/value report of one command.

        Returns
        -------
        str
            The rendered report, ending with a newline.
        """

    def save(self, report: Report, file_path: Path) -> None:
        """
        Write the rendered report to a file.

        Parameters
        ----------
        report : Report
            Report to save.
        file_path : Path
            Destination file.

        Raises
        ------
        PermissionError
            If the file cannot be written due to permissions.
        OSError
            If there's an OS-level error during writing.
        """
        try:
            file_path.write_text(self.render(report), encoding="utf-8")
        except PermissionError as e:
            raise PermissionError(f"Permission denied when saving report to {file_path}: {e}") from e
        except OSError as e:
            raise OSError(f"OS error while saving report to {file_path}: {e}") from e
