"""
Logging utilities for the quantitative expressions toolkit.

Provides the level specific console formatter used by every module and the
trace formatter of the counter machine simulator.
"""

import logging

TRACE_LOGGER_NAME = "src.countermachine.trace"

LEVEL_FORMATS = {
    logging.DEBUG: "%(levelname)s - %(name)s.%(funcName)s in line %(lineno)s - %(message)s",
    logging.INFO: "%(message)s",
    logging.WARNING: "%(levelname)s: %(message)s",
    logging.ERROR: "%(levelname)s: %(funcName)s - %(message)s",
    logging.CRITICAL: "%(levelname)s: %(funcName)s in %(filename)s:%(lineno)s - %(message)s",
}


class LevelSpecificFormatter(logging.Formatter):
    """Console formatter: plain messages for INFO, call sites for DEBUG and errors."""

    def __init__(self) -> None:
        super().__init__()
        self.formatters = {level: logging.Formatter(fmt) for level, fmt in LEVEL_FORMATS.items()}

    def format(self, record: logging.LogRecord) -> str:
        """
        Format a log record with the formatter of its level.

        Levels without a formatter of their own use the INFO format.

        Parameters
        ----------
        record : logging.LogRecord
            The log record to format.

        Returns
        -------
        str
            The formatted log message.
        """
        return self.formatters.get(record.levelno, self.formatters[logging.INFO]).format(record)


class TraceFormatter(logging.Formatter):
    """Bare formatter for counter machine configurations, one per line."""

    def __init__(self) -> None:
        super().__init__("%(message)s")


def setup_logger(name: str, level: int | None = None) -> logging.Logger:
    """Set up a logger with the standard configuration.

    Parameters
    ----------
    name : str
        The name of the logger (usually __name__)
    level : int, optional
        The logging level. If None, uses the root logger's level.

    Returns
    -------
    logging.Logger
        Configured logger instance
    """
    logger = logging.getLogger(name)

    # Only add handler if it doesn't already exist
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(LevelSpecificFormatter())
        logger.addHandler(handler)

    if level is not None:
        logger.setLevel(level)

    return logger


def setup_trace_logger(enabled: bool) -> logging.Logger:  # noqa: FBT001
    """Set up the counter machine trace logger.

    The trace logger does not propagate, so configuration lines are never
    decorated by the level specific formatter.

    Parameters
    ----------
    enabled : bool
        Emit trace lines when True, stay silent otherwise.

    Returns
    -------
    logging.Logger
        The trace logger.
    """
    logger = logging.getLogger(TRACE_LOGGER_NAME)
    logger.propagate = False
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(TraceFormatter())
        logger.addHandler(handler)
    logger.setLevel(logging.INFO if enabled else logging.WARNING)
    return logger


def set_global_log_level(level: int | str) -> None:
    """Set the global log level for all loggers in the application.

    The trace logger keeps its own level.

    Parameters
    ----------
    level : int or str
        The logging level to set (e.g., logging.DEBUG or "INFO")
    """
    root_logger = logging.getLogger()
    root_logger.setLevel(level)

    for logger_name in logging.root.manager.loggerDict:
        if logger_name == TRACE_LOGGER_NAME:
            continue
        logger = logging.getLogger(logger_name)
        logger.setLevel(level)
