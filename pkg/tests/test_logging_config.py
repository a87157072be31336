"""Tests for logging setup."""

from __future__ import annotations

import logging
from pathlib import Path

import pytest

from metric_graph_ops.logging_config import setup_logging


pytestmark = pytest.mark.usefixtures("isolated_logging")


class TestSetupLogging:
    """Tests for setup_logging."""

    def test_no_file_by_default(self) -> None:
        assert setup_logging("WARNING") is None

    def test_dated_log_file(self, tmp_path: Path) -> None:
        """Should create {log_dir}/YYYY/MM/DD/metric-graph-ops.log."""
        log_file = setup_logging("INFO", log_to_file=True, log_dir=tmp_path)

        assert log_file is not None
        path = Path(log_file)
        assert path.name == "metric-graph-ops.log"
        assert path.parent.parent.parent.parent == tmp_path
        logging.getLogger("metric_graph_ops.test").debug("written at debug level")
        for handler in logging.getLogger().handlers:
            handler.flush()
        assert "written at debug level" in path.read_text(encoding="utf-8")

    def test_repeated_calls_do_not_stack_handlers(self, tmp_path: Path) -> None:
        setup_logging("INFO", log_to_file=True, log_dir=tmp_path)
        count = len(logging.getLogger().handlers)
        setup_logging("DEBUG", log_to_file=True, log_dir=tmp_path)

        assert len(logging.getLogger().handlers) == count

    def test_stderr_level(self, capsys: pytest.CaptureFixture[str]) -> None:
        setup_logging("WARNING")
        logger = logging.getLogger("metric_graph_ops.test")
        logger.info("quiet")
        logger.warning("loud")

        err = capsys.readouterr().err
        assert "loud" in err
        assert "quiet" not in err
