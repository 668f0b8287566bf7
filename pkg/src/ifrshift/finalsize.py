"""Final epidemic size of a homogeneous SIR outbreak.

The fraction ever infected, ``z``, solves ``z = 1 - exp(-r0 * z)``.  Below
threshold (``r0 <= 1``) the only root in ``[0, 1)`` is zero.
"""

import math

import numpy as np

from .errors import NonPositiveR0

_UPPER = float(np.nextafter(1.0, 0.0))


def _excess(z: float, r0: float) -> float:
    # 1 - exp(-r0 z) - z, written with expm1 so tiny z keeps its digits
    return -math.expm1(-r0 * z) - z


def residual(z: float, r0: float) -> float:
    """Absolute fixed-point residual ``|z - (1 - exp(-r0 z))|``."""
    return abs(_excess(z, r0))


def attack_rate(r0: float, width: float = 1e-14) -> float:
    """Largest root in ``[0, 1)`` of the final-size equation, by bisection."""
    r0 = float(r0)
    if not math.isfinite(r0) or r0 <= 0:
        raise NonPositiveR0(f"R0 must be positive and finite, got {r0}")
    if r0 <= 1.0:
        return 0.0
    if _excess(_UPPER, r0) >= 0:
        # root is closer to 1 than double precision can resolve
        return _UPPER

    # the excess is positive just above zero for r0 > 1
    lo = 1e-300
    while _excess(lo, r0) <= 0:
        lo *= 0.5
        if lo == 0.0:
            return 0.0
    hi = _UPPER
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if _excess(mid, r0) > 0:
            lo = mid
        else:
            hi = mid
    return lo if residual(lo, r0) <= residual(hi, r0) else hi
