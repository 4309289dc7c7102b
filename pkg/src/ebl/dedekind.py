"""Sawtooth function and Dedekind sums in exact arithmetic."""

from __future__ import annotations

import math
from fractions import Fraction

from .cf_engine import convergents, ordinary_cf
from .errors import OutOfRange, ZeroDenominator


def sawtooth(x) -> Fraction:
    """((x)) = x - floor(x) - 1/2 off the integers, 0 on them."""
    x = Fraction(x)
    if x.denominator == 1:
        return Fraction(0)
    return x - math.floor(x) - Fraction(1, 2)


def dedekind_naive(a: int, b: int) -> Fraction:
    """D(a, b) = sum_{n=1}^{|b|} ((n/b)) ((na/b)), term by term."""
    if b == 0:
        raise ZeroDenominator("Dedekind sum with b = 0")
    if b < 0:
        a, b = -a, -b
    # ((k/b)) with an integer numerator: 0 if b | k else (k mod b)/b - 1/2
    total = 0
    for n in range(1, b):
        r = (n * a) % b
        if r:
            total += (2 * n - b) * (2 * r - b)
    return Fraction(total, 4 * b * b)


def dedekind_cf(x) -> Fraction:
    """D(x) from the continued fraction of x.

    D(x) = ((-1)^n - 1)/8 + (x - (-1)^n [0; a_n, ..., a_1] + Sigma_pm(x)) / 12
    where x = [0; a_1, ..., a_n].  Values outside [0, 1) are reduced by
    periodicity first.
    """
    x = Fraction(x)
    x -= math.floor(x)
    if not 0 <= x < 1:
        raise OutOfRange(f"cannot reduce {x} into [0, 1)")
    digits = ordinary_cf(x)
    n = len(digits)
    sign = -1 if n % 2 else 1
    alternating = sum(digits[0::2]) - sum(digits[1::2])
    # reversed expansion [0; a_n, ..., a_1]; equals q_{n-1}/q_n
    p_rev, q_rev = convergents(digits[::-1])[-1]
    reversed_value = Fraction(p_rev, q_rev)
    return Fraction(sign - 1, 8) + (x - sign * reversed_value + alternating) / 12
