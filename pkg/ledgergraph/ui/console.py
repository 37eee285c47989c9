"""Logging output for the command line."""

import logging
import sys
from typing import TextIO

from blessed import Terminal

from ledgergraph.ui.theme import Theme

LOGGER_NAME = "ledgergraph"


class ThemedHandler(logging.Handler):
    """Write log records to a stream with the level name styled by the theme."""

    def __init__(self, theme: Theme, stream: TextIO | None = None) -> None:
        super().__init__()
        self.theme = theme
        self.stream = stream if stream is not None else sys.stderr

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level = self.theme.level_color(record.levelname)
            message = record.getMessage()
            if record.levelno <= logging.DEBUG:
                message = self.theme.dim(f"{record.name}: {message}")
            self.stream.write(f"{level}: {message}\n")
            self.flush()
        except Exception:
            self.handleError(record)

    def flush(self) -> None:
        if hasattr(self.stream, "flush"):
            self.stream.flush()


def configure_logging(verbosity: int = 0, stream: TextIO | None = None) -> Theme:
    """Install a themed stderr handler on the package logger.

    verbosity < 0 shows warnings only, 0 adds info, > 0 adds debug.
    """
    stream = stream if stream is not None else sys.stderr
    theme = Theme(Terminal(stream=stream))
    logger = logging.getLogger(LOGGER_NAME)
    for handler in list(logger.handlers):
        if isinstance(handler, ThemedHandler):
            logger.removeHandler(handler)
    logger.addHandler(ThemedHandler(theme, stream))
    if verbosity < 0:
        logger.setLevel(logging.WARNING)
    elif verbosity == 0:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.DEBUG)
    return theme
