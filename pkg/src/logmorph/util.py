"""Small shared helpers."""

import math


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero.

    Python's built-in round() rounds halves to even, which is the wrong
    convention for the discard-count rules used by the tolerant distance
    maps and the area thresholds.
    """
    if x >= 0:
        return int(math.floor(x + 0.5))
    return -int(math.floor(-x + 0.5))
