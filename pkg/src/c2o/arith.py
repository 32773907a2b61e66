"""Integer division conventions shared by the oracle and the observer.

``div`` truncates toward zero; ``mod`` takes the sign of the divisor.
The two are deliberately not a Euclidean pair: ``a == b*div(a,b) + mod(a,b)``
only holds when the operands share a sign.
"""

from __future__ import annotations

import ctypes
from fractions import Fraction


def int_div(a: int, b: int) -> int:
    """Quotient truncated toward zero. ``b`` must be nonzero."""
    q = abs(a) // abs(b)
    return q if (a >= 0) == (b >= 0) else -q


def int_mod(a: int, b: int) -> int:
    """Remainder with the sign of the divisor (floor modulo)."""
    return a % b


def wrap(v: int, width: int, signed: bool) -> int:
    """Two's-complement wrap of ``v`` into ``width`` bits."""
    m = (1 << width) - 1
    v &= m
    if signed and v >> (width - 1):
        v -= 1 << width
    return v


def to_single(x: float) -> float:
    """Round a double to the nearest IEEE single."""
    return ctypes.c_float(x).value


def round_float(x, precision: str) -> float:
    x = float(x)
    return to_single(x) if precision == "single" else x


def exact(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)
