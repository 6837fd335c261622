"""Logging helpers for lindcert analyses and the command-line front end."""

from __future__ import annotations

import logging
import os
import sys
import time
from typing import Final

LOGGER_NAME: Final[str] = "lindcert"
LOG_FORMAT: Final[str] = "%(message)s"
LEVEL_ENV_VAR: Final[str] = "LINDBLAD_LOG_LEVEL"


def level_from_env(default: int = logging.INFO) -> int:
    """Resolve the log level named by LINDBLAD_LOG_LEVEL, falling back to ``default``."""

    name = os.environ.get(LEVEL_ENV_VAR, "").strip().upper()
    if not name:
        return default
    level = logging.getLevelName(name)
    return level if isinstance(level, int) else default


def configure_logging(level: int | None = None) -> logging.Logger:
    """Configure the stderr logger shared by every lindcert module."""

    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
    logger.setLevel(level_from_env() if level is None else level)
    logger.propagate = False
    return logger


def get_logger(module: str) -> logging.Logger:
    """Return the child logger for a lindcert module (``lindcert.<module>``)."""

    return logging.getLogger(f"{LOGGER_NAME}.{module.rsplit('.', 1)[-1]}")


def log_success(logger: logging.Logger, message: str) -> None:
    """Log a success message."""

    logger.info("✅ %s", message)


def log_info(logger: logging.Logger, message: str) -> None:
    """Log an informational message."""

    logger.info("ℹ️ %s", message)


def log_warning(logger: logging.Logger, message: str) -> None:
    """Log a warning message."""

    logger.warning("⚠️ %s", message)


def log_error(logger: logging.Logger, message: str, exc: Exception | None = None) -> None:
    """Log an error message with optional traceback."""

    if exc is None:
        logger.error("❌ %s", message)
        return
    logger.error("❌ %s", message, exc_info=(type(exc), exc, exc.__traceback__))


def log_result(logger: logging.Logger, label: str, value: float) -> None:
    """Log a numeric result with 17 significant digits."""

    logger.info("📐 %s = %.17g", label, value)


class _Timer:
    def __init__(self, logger: logging.Logger, label: str) -> None:
        self.logger = logger
        self.label = label
        self.start = 0.0

    def __enter__(self) -> _Timer:
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.logger.debug("⏱️ %s took %.3fs", self.label, time.perf_counter() - self.start)


def timed(logger: logging.Logger, label: str) -> _Timer:
    """Log the wall time spent inside the ``with`` block at DEBUG level."""

    return _Timer(logger, label)


__all__ = [
    "LEVEL_ENV_VAR",
    "LOGGER_NAME",
    "configure_logging",
    "get_logger",
    "level_from_env",
    "log_error",
    "log_info",
    "log_result",
    "log_success",
    "log_warning",
    "timed",
]
