"""Input validation helpers used across the package.

These keep argument checking consistent between the functional core, the
sklearn-style estimators, and the CLI/HTTP layers.
"""

from __future__ import annotations

import numbers

import numpy as np

__all__ = [
    "as_float_vector",
    "check_equal_length",
    "check_positive_int",
    "check_unit_interval",
]


def as_float_vector(values, name="values"):
    """Coerce ``values`` to a 1-D float64 array, rejecting non-finite entries."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must not be empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_equal_length(a, b, names=("a", "b")):
    """Raise ValueError unless the two vectors have the same length."""
    if len(a) != len(b):
        raise ValueError(
            f"length mismatch: {names[0]} has {len(a)} entries, "
            f"{names[1]} has {len(b)}"
        )


def check_positive_int(value, name):
    """Raise ValueError unless ``value`` is an integer >= 1."""
    if not isinstance(value, numbers.Integral) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return int(value)


def check_unit_interval(value, name):
    """Raise ValueError unless ``value`` lies in [0, 1]."""
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)
