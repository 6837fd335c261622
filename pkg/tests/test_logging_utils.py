"""Unit tests for lindcert logging utilities."""

from __future__ import annotations

import logging
import os
import sys
from collections.abc import Callable
from io import StringIO
from unittest.mock import patch

import pytest

from lindcert.logging_utils import (
    LOGGER_NAME,
    configure_logging,
    get_logger,
    level_from_env,
    log_error,
    log_info,
    log_result,
    log_success,
    log_warning,
    timed,
)


@pytest.fixture
def module_stream() -> tuple[logging.Logger, StringIO]:
    """A module logger whose records reach a captured copy of the package handler."""
    package = configure_logging(level=logging.DEBUG)
    stream = StringIO()
    (handler,) = package.handlers
    assert isinstance(handler, logging.StreamHandler)
    handler.setStream(stream)
    return get_logger("lindcert.certificates"), stream


def test_configure_logging_defaults() -> None:
    """One stderr handler on the non-propagating ``lindcert`` logger at INFO."""
    with patch.dict(os.environ, {"LINDBLAD_LOG_LEVEL": ""}, clear=False):
        logger = configure_logging()

    assert logger.name == LOGGER_NAME
    assert logger.level == logging.INFO
    assert not logger.propagate
    (handler,) = logger.handlers
    assert isinstance(handler, logging.StreamHandler)
    assert handler.stream is sys.stderr


def test_reconfiguring_changes_level_only() -> None:
    """A second call keeps the handler and applies the new level."""
    first = configure_logging()
    second = configure_logging(level=logging.DEBUG)

    assert first is second
    assert len(second.handlers) == 1
    assert second.level == logging.DEBUG


@pytest.mark.parametrize(
    ("value", "expected"),
    [("warning", logging.WARNING), (" DEBUG ", logging.DEBUG), ("LOUD", logging.ERROR), ("", logging.ERROR)],
)
def test_level_from_env(value: str, expected: int) -> None:
    """Level names are case-insensitive; unknown or empty names give the default."""
    with patch.dict(os.environ, {"LINDBLAD_LOG_LEVEL": value}, clear=False):
        assert level_from_env(logging.ERROR) == expected


def test_get_logger_strips_package_path() -> None:
    """Module loggers hang off the lindcert logger whatever path they are given."""
    assert get_logger("lindcert.superop").name == "lindcert.superop"
    assert get_logger("superop").name == "lindcert.superop"
    assert get_logger("lindcert.superop").parent is logging.getLogger(LOGGER_NAME)


@pytest.mark.parametrize(
    ("helper", "prefix"),
    [(log_success, "✅"), (log_info, "ℹ️"), (log_warning, "⚠️"), (log_error, "❌")],
)
def test_prefixed_helpers(
    module_stream: tuple[logging.Logger, StringIO],
    helper: Callable[[logging.Logger, str], None],
    prefix: str,
) -> None:
    """Module records reach the package handler with their emoji prefix."""
    logger, stream = module_stream

    helper(logger, "R search not saturated")

    assert stream.getvalue() == f"{prefix} R search not saturated\n"


def test_warnings_survive_warning_level(module_stream: tuple[logging.Logger, StringIO]) -> None:
    """At WARNING only the warning gets through."""
    logger, stream = module_stream
    logging.getLogger(LOGGER_NAME).setLevel(logging.WARNING)

    log_info(logger, "starting restarts")
    log_warning(logger, "kernel threshold ambiguous")

    assert stream.getvalue() == "⚠️ kernel threshold ambiguous\n"


def test_log_result_uses_full_precision(module_stream: tuple[logging.Logger, StringIO]) -> None:
    """log_result() prints 17 significant digits."""
    logger, stream = module_stream

    log_result(logger, "gamma", 1.0 / 3.0)

    assert "gamma = 0.33333333333333331" in stream.getvalue()


def test_log_error_attaches_traceback(module_stream: tuple[logging.Logger, StringIO]) -> None:
    """Passing the exception adds its traceback."""
    logger, stream = module_stream

    try:
        raise ArithmeticError("gap closed")
    except ArithmeticError as exc:
        log_error(logger, "propagation failed", exc)

    output = stream.getvalue()
    assert output.startswith("❌ propagation failed")
    assert "ArithmeticError: gap closed" in output
    assert "Traceback" in output


def test_timed_logs_duration_at_debug(module_stream: tuple[logging.Logger, StringIO]) -> None:
    """timed() reports the block duration at DEBUG level only."""
    logger, stream = module_stream

    with timed(logger, "eigendecomposition"):
        pass
    logging.getLogger(LOGGER_NAME).setLevel(logging.INFO)
    with timed(logger, "hidden"):
        pass

    output = stream.getvalue()
    assert "⏱️ eigendecomposition took" in output
    assert "hidden" not in output


def test_timed_does_not_swallow_exceptions(module_stream: tuple[logging.Logger, StringIO]) -> None:
    """Exceptions raised inside timed() propagate after the timing line."""
    logger, stream = module_stream

    with pytest.raises(KeyError), timed(logger, "lookup"):
        raise KeyError("missing")

    assert "lookup took" in stream.getvalue()
