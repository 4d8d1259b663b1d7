"""
zeno_ising.logs — Logging setup for command-line runs.

Library modules only create loggers; handlers are installed here, once,
by the CLI.
"""
from __future__ import annotations

import logging
from pathlib import Path

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def configure_logging(level: int | str = logging.INFO, log_file: Path | None = None) -> None:
    """Send log records to stderr and, optionally, to a UTF-8 log file."""
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file is not None:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(level=level, format=LOG_FORMAT, handlers=handlers, force=True)
    logging.captureWarnings(True)
