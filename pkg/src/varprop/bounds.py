"""Closed-form bounds on probability-valued random variables.

For p with 0 <= p <= 1, V(p) = E(p^2) - E(p)^2 <= E(p) - E(p)^2, and the
ratio of the standard deviation to E(p) is at most sqrt(1/E(p) - 1).
"""

from __future__ import annotations

import math


def variance_upper_bound(expected: float) -> float:
    """E - E^2, the largest variance a probability with mean E can have."""
    if not 0.0 <= expected <= 1.0:
        raise ValueError(f"expected value {expected} outside [0, 1]")
    return expected - expected**2


def relative_std_bound(expected: float) -> float:
    """sqrt(1/E - 1), an upper bound on std(p) / E(p)."""
    if not 0.0 < expected <= 1.0:
        raise ValueError(f"expected value {expected} outside (0, 1]")
    return math.sqrt(1.0 / expected - 1.0)
