# helmsim/validation.py
"""Input validation utilities for vessel parameters and harness settings."""

import math

from .errors import ConfigError


def require_finite(field, value):
    """
    Validate that a value is a finite real number.

    Args:
        field (str): Dotted field name used in the error message
        value: Value to validate

    Returns:
        float: The value as float

    Raises:
        ConfigError: If the value is not numeric or not finite
    """
    try:
        f_value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"expected a number, got {value!r}", field=field)
    if not math.isfinite(f_value):
        raise ConfigError(f"must be finite, got {f_value}", field=field)
    return f_value


def require_positive(field, value):
    """
    Validate that a value is finite and strictly positive.

    Args:
        field (str): Dotted field name used in the error message
        value: Value to validate

    Returns:
        float: The value as float
    """
    f_value = require_finite(field, value)
    if f_value <= 0.0:
        raise ConfigError(f"must be > 0, got {f_value}", field=field)
    return f_value


def require_range(field, value, low, high, high_inclusive=False):
    """
    Validate that low <= value < high (or <= high when high_inclusive).

    Args:
        field (str): Dotted field name used in the error message
        value: Value to validate
        low (float): Inclusive lower bound
        high (float): Upper bound
        high_inclusive (bool): Whether the upper bound is allowed

    Returns:
        float: The value as float
    """
    f_value = require_finite(field, value)
    above = f_value > high if high_inclusive else f_value >= high
    if f_value < low or above:
        closing = "]" if high_inclusive else ")"
        raise ConfigError(f"must lie in [{low}, {high}{closing}, got {f_value}", field=field)
    return f_value
