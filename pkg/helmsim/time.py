# helmsim/time.py
"""Timestamp utilities for voyage logs and weather series."""

import time
from datetime import datetime, timezone

import pandas as pd


def parse_timestamps(f_values):
    """
    Convert ISO-8601 strings to UTC epoch seconds.

    Args:
        f_values (iterable): ISO-8601 timestamps; naive values are taken as UTC

    Returns:
        numpy.ndarray: float64 epoch seconds

    Raises:
        ValueError: If any value cannot be parsed
    """
    f_parsed = pd.to_datetime(pd.Series(list(f_values), dtype="object"), utc=True, format="ISO8601")
    f_epoch = pd.Timestamp("1970-01-01", tz="UTC")
    return ((f_parsed - f_epoch) / pd.Timedelta(seconds=1)).to_numpy(dtype=float)


def format_timestamp(f_epoch_seconds):
    """
    Format epoch seconds as an ISO-8601 UTC string.

    Returns:
        str: Timestamp in 'YYYY-MM-DDTHH:MM:SS(.ffffff)Z' format
    """
    f_dt = datetime.fromtimestamp(f_epoch_seconds, tz=timezone.utc)
    if f_dt.microsecond:
        return f_dt.strftime("%Y-%m-%dT%H:%M:%S.%fZ")
    return f_dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def exec_timestamp():
    """
    Generate execution timestamp for run-time measurement.

    Returns:
        float: Current monotonic clock value in seconds
    """
    return time.perf_counter()
