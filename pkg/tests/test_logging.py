import logging
import sys

import pytest

from helmsim.logging import setup_logging


@pytest.fixture(autouse=True)
def restore_root():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def test_debug_logs_to_file_and_console(tmp_path):
    log_file = tmp_path / "helmsim.log"
    root = setup_logging(log_file=str(log_file), debug=True)
    assert root.level == logging.DEBUG
    assert sorted(type(h).__name__ for h in root.handlers) == ["FileHandler", "StreamHandler"]
    logging.getLogger("helmsim.test").debug("segment scored")
    for handler in root.handlers:
        handler.flush()
    line = log_file.read_text(encoding="UTF-8").strip()
    assert line.endswith("segment scored")
    assert "helmsim.test DEBUG [test_logging.py:" in line


def test_log_file_only_without_debug(tmp_path):
    root = setup_logging(log_file=str(tmp_path / "helmsim.log"))
    assert [type(h) for h in root.handlers] == [logging.FileHandler]
    assert root.level == logging.INFO


def test_console_goes_to_stderr():
    root = setup_logging()
    assert len(root.handlers) == 1
    assert root.handlers[0].stream is sys.stderr
