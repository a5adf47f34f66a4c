"""
Utility module for formatting result values.
"""
from typing import Any

import numpy as np

SIGNIFICANT_DIGITS = 17


def format_value(value: Any) -> str:
    """Convert a table cell to its CSV text form.

    Floats are written with 17 significant digits so that they parse back
    to the same binary value.

    Args:
        value: Cell value (float, int, bool, str or numpy scalar)

    Returns:
        Text representation of the value
    """
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), f".{SIGNIFICANT_DIGITS}g")
    return str(value)


def to_micrometers(meters: Any) -> Any:
    """Convert lengths in meters to micrometers."""
    return np.asarray(meters) * 1e6


def to_femtoseconds(seconds: Any) -> Any:
    """Convert times in seconds to femtoseconds."""
    return np.asarray(seconds) * 1e15
