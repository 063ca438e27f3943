"""Directed-rounding brackets for log2 and sqrt over exact rationals.

The bound machinery compares quantities like q^beta against towers such
as (2Mqm)^((m^2+1)^i) whose integer values cannot be materialized.  All
comparisons therefore happen in log2 space on [lo, hi] Fraction
brackets with outward rounding: a strict verdict is only issued when
the brackets separate, and precision is doubled until they do.  No
floating point is involved anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Callable

from .errors import DomainError, InconsistencyError

Interval = tuple[Fraction, Fraction]

_GUARD_BITS = 16


def log2_bracket(x: int, frac_bits: int = 48) -> Interval:
    """[lo, hi] with lo <= log2(x) <= hi and hi - lo about 2 ulps.

    Binary digit extraction on the mantissa, run twice: once with floor
    rounding (sound lower bound) and once with ceiling rounding plus one
    ulp of tail slack (sound upper bound).
    """
    if x < 1:
        raise DomainError(f"log2_bracket requires x >= 1, got {x}")
    if x & (x - 1) == 0:
        exact = Fraction(x.bit_length() - 1)
        return exact, exact
    int_part = x.bit_length() - 1
    scale = frac_bits + _GUARD_BITS
    one = 1 << scale

    def digits(round_up: bool) -> int:
        # mantissa m/2^scale tracks x / 2^int_part in [1, 2)
        num = x << scale
        den = 1 << int_part
        m = -(-num // den) if round_up else num // den
        acc = 0
        for _ in range(frac_bits):
            m = m * m
            m = -(-m // one) if round_up else m // one
            acc <<= 1
            if m >= 2 * one:
                acc |= 1
                m = -(-m // 2) if round_up else m // 2
        return acc

    lo = int_part + Fraction(digits(False), 1 << frac_bits)
    hi = int_part + Fraction(digits(True) + 1, 1 << frac_bits)
    return lo, hi


def sqrt_bracket(x: int, frac_bits: int = 48) -> Interval:
    """[lo, hi] with lo <= sqrt(x) <= hi, one-ulp wide (exact when square)."""
    if x < 0:
        raise DomainError(f"sqrt_bracket requires x >= 0, got {x}")
    root = isqrt(x << (2 * frac_bits))
    lo = Fraction(root, 1 << frac_bits)
    if lo * lo == x:
        return lo, lo
    return lo, Fraction(root + 1, 1 << frac_bits)


def iv_exact(value) -> Interval:
    f = Fraction(value)
    return f, f


def iv_add(a: Interval, b: Interval) -> Interval:
    return a[0] + b[0], a[1] + b[1]


def iv_sub(a: Interval, b: Interval) -> Interval:
    return a[0] - b[1], a[1] - b[0]


def iv_mul(a: Interval, b: Interval) -> Interval:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(products), max(products)


def certainly_less(
    lhs: Callable[[int], Interval],
    rhs: Callable[[int], Interval],
    start_bits: int = 48,
    max_bits: int = 1 << 14,
) -> bool:
    """Decide lhs < rhs where both are bracket factories over precision.

    Doubles the working precision until the brackets separate.  The
    callers only compare quantities that cannot be exactly equal (an odd
    prime power against an even one, or a transcendental against a
    rational), so separation is guaranteed; the precision ceiling is a
    tripwire for misuse, not a rounding fallback.
    """
    bits = start_bits
    while bits <= max_bits:
        a = lhs(bits)
        b = rhs(bits)
        if a[1] < b[0]:
            return True
        if a[0] >= b[1]:
            return False
        bits *= 2
    raise InconsistencyError(
        f"bracket comparison failed to separate below {max_bits} fractional bits; "
        "the compared quantities may be exactly equal"
    )
