# helmsim/logging.py
import logging
import sys

import multiprocessing_logging


def setup_logging(log_file=None, debug=False):
    datefmt = '%Y-%m-%d %H:%M:%S'

    # Set log level based on debug flag
    log_level = logging.DEBUG if debug else logging.INFO

    # Create formatters
    if debug:
        formatter = logging.Formatter(
            '%(asctime)s %(name)s %(levelname)s [%(filename)s:%(lineno)d] %(message)s',
            datefmt=datefmt
        )
    else:
        formatter = logging.Formatter(
            '%(asctime)s %(levelname)s %(message)s',
            datefmt=datefmt
        )

    # Configure root logger
    root_logger = logging.getLogger()
    root_logger.setLevel(log_level)

    # Clear existing handlers
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    # Add file handler
    if log_file:
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    # Console goes to stderr; stdout may carry CSV or JSON output
    if debug or not log_file:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(log_level)
        console_handler.setFormatter(formatter)
        root_logger.addHandler(console_handler)

    return root_logger


def share_with_workers():
    """
    Route records from worker processes through the parent's handlers.

    Must be called after setup_logging() and before the worker pool starts.
    """
    root_logger = logging.getLogger()
    if any(isinstance(h, multiprocessing_logging.MultiProcessingHandler) for h in root_logger.handlers):
        return
    multiprocessing_logging.install_mp_handler()
