"""Logging setup: one ``qrr`` logger tree rendered through rich."""

from __future__ import annotations

import logging

from rich.console import Console
from rich.logging import RichHandler

LOGGER_NAME = 'qrr'


def get_logger(name: str) -> logging.Logger:
    """Return a child of the package logger, e.g. ``get_logger(__name__)``."""
    if name == LOGGER_NAME or name.startswith(LOGGER_NAME + '.'):
        return logging.getLogger(name)
    return logging.getLogger(f'{LOGGER_NAME}.{name}')


def setup_logging(level: str | int = 'WARNING') -> logging.Logger:
    """
    Attach a stderr RichHandler to the package logger.

    Safe to call more than once; the handler is installed a single time and
    only the level changes afterwards.
    """
    logger = logging.getLogger(LOGGER_NAME)
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.WARNING
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(
            console=Console(stderr=True),
            show_path=False,
            markup=False,
            rich_tracebacks=False,
        )
        handler.setFormatter(logging.Formatter('%(name)s: %(message)s'))
        logger.addHandler(handler)
        logger.propagate = False
    return logger


def level_for_verbosity(verbosity: int, configured: str) -> str:
    """Map -v/-vv on top of the configured level."""
    if verbosity >= 2:
        return 'DEBUG'
    if verbosity == 1:
        return 'INFO'
    return configured
