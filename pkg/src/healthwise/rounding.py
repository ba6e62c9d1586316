"""Whole-kCal rounding used across energy computations."""

import math


def round_half_up(value: float) -> int:
    """Round to the nearest integer, halves away from zero upward."""
    return math.floor(value + 0.5)
