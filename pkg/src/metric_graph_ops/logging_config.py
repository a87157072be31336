"""Logging configuration with date-based directory structure and time rotation.

Diagnostics go to stderr; stdout is reserved for reports. With file logging on, a copy
at DEBUG level goes to {log_dir}/{YYYY}/{MM}/{DD}/metric-graph-ops.log, rotated at midnight.
"""

from __future__ import annotations

import logging
import os
import sys
from datetime import datetime
from logging.handlers import TimedRotatingFileHandler

_HANDLER_MARK = "_metric_graph_ops"


def setup_logging(
    level: str | int = "INFO", log_to_file: bool = False, log_dir: str | os.PathLike[str] = "logs"
) -> str | None:
    """Configure the root logger with a stderr handler and an optional file handler.

    Repeated calls replace the handlers installed by earlier calls.

    Args:
        level: Stderr level name or number.
        log_to_file: Also write DEBUG records to a dated log file.
        log_dir: Root of the dated log directory tree.

    Returns:
        Path of the log file, or None without file logging.
    """
    root = logging.getLogger()
    for handler in list(root.handlers):
        if getattr(handler, _HANDLER_MARK, False):
            root.removeHandler(handler)
            handler.close()

    formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")

    stderr_handler = logging.StreamHandler(sys.stderr)
    stderr_handler.setLevel(level.upper() if isinstance(level, str) else level)
    stderr_handler.setFormatter(formatter)
    setattr(stderr_handler, _HANDLER_MARK, True)
    root.addHandler(stderr_handler)

    log_file: str | None = None
    if log_to_file:
        now = datetime.now()
        directory = os.path.join(
            os.fspath(log_dir), now.strftime("%Y"), now.strftime("%m"), now.strftime("%d")
        )
        os.makedirs(directory, exist_ok=True)
        log_file = os.path.join(directory, "metric-graph-ops.log")

        # DEBUG level, rotate at midnight, keep 7 backups
        file_handler = TimedRotatingFileHandler(
            filename=log_file,
            when="midnight",
            interval=1,
            backupCount=7,
            encoding="utf-8",
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        setattr(file_handler, _HANDLER_MARK, True)
        root.addHandler(file_handler)

    root.setLevel(logging.DEBUG)
    return log_file
