"""Ordinary and minus continued fractions of rationals in [0, 1).

Ordinary:  a/b = [0; a_1, ..., a_n],  a_i >= 1,  a_n >= 2  (empty for 0).
Minus:     a/b = <1; b_1, ..., b_m> = 1 - 1/(b_1 - 1/(b_2 - ... - 1/b_m)),  b_i >= 2.

Digit sequences are plain tuples of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import MalformedDigits, OutOfRange

CFExpansion = tuple[int, ...]
MinusCF = tuple[int, ...]


def _as_fraction(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def ordinary_cf(x: Fraction) -> CFExpansion:
    x = _as_fraction(x)
    if not 0 <= x < 1:
        raise OutOfRange(f"ordinary_cf expects 0 <= x < 1, got {x}")
    a, b = x.numerator, x.denominator
    digits = []
    while a:
        q, r = divmod(b, a)
        digits.append(q)
        a, b = r, a
    return tuple(digits)


def convergents(digits: Sequence[int]) -> list[tuple[int, int]]:
    """Convergents p_k/q_k of [0; a_1, ..., a_k], starting with p_0/q_0 = 0/1."""
    p_prev, q_prev, p, q = 1, 0, 0, 1
    out = [(p, q)]
    for a in digits:
        p_prev, q_prev, p, q = p, q, a * p + p_prev, a * q + q_prev
        out.append((p, q))
    return out


def eval_ordinary(digits: Sequence[int], *, strict: bool = True) -> Fraction:
    """Exact value of [0; a_1, ..., a_n].

    With ``strict=False`` a trailing 1 is accepted; the value is still well
    defined and is needed for reversed expansions.
    """
    if any(int(a) < 1 for a in digits):
        raise MalformedDigits(f"partial quotients must be >= 1: {list(digits)}")
    if strict and digits and digits[-1] < 2:
        raise MalformedDigits(f"last partial quotient must be >= 2: {list(digits)}")
    p, q = convergents(digits)[-1]
    return Fraction(p, q)


def minus_cf(x: Fraction) -> MinusCF:
    """Digits of the minus expansion, extracted by by-excess division.

    The pair (p, q) starts at (b, b - a) and steps to (q, ceil(p/q)*q - p)
    until q vanishes; each ceil(p/q) is one digit.
    """
    x = _as_fraction(x)
    if not 0 < x < 1:
        raise OutOfRange(f"minus_cf expects 0 < x < 1, got {x}")
    p, q = x.denominator, x.denominator - x.numerator
    digits = []
    while q:
        c = -(-p // q)
        digits.append(c)
        p, q = q, c * q - p
    return tuple(digits)


def minus_length(x: Fraction) -> int:
    """ell(x) without materialising the digits; 0 by convention at x = 0.

    A digit 2 keeps p - q fixed, so each run of 2s is consumed in one division.
    """
    x = _as_fraction(x)
    if x == 0:
        return 0
    if not 0 < x < 1:
        raise OutOfRange(f"minus_length expects 0 <= x < 1, got {x}")
    p, q = x.denominator, x.denominator - x.numerator
    m = 0
    while q:
        d = p - q
        if d <= q:
            t, r = divmod(q, d)
            m += t
            p, q = r + d, r
        else:
            c = -(-p // q)
            p, q = q, c * q - p
            m += 1
    return m


def eval_minus(digits: Sequence[int]) -> Fraction:
    if not digits:
        raise MalformedDigits("a minus expansion needs at least one digit")
    if any(int(b) < 2 for b in digits):
        raise MalformedDigits(f"minus digits must be >= 2: {list(digits)}")
    tail = Fraction(digits[-1])
    for b in reversed(digits[:-1]):
        tail = b - 1 / tail
    return 1 - 1 / tail


@dataclass(frozen=True)
class CFStats:
    s: int
    ell: int
    sigma_odd: int
    sigma_even: int
    sigma_pm: int
    epsilon: int

    @property
    def steps_sub(self) -> int:
        return self.sigma_odd + self.sigma_even


def cf_stats(x: Fraction) -> CFStats:
    """Per-fraction statistics bundle; every field is 0 at x = 0.

    epsilon is the residual sigma_odd - ell and must land in {0, 1}.
    """
    x = _as_fraction(x)
    digits = ordinary_cf(x)
    odd = sum(digits[0::2])
    even = sum(digits[1::2])
    ell = len(minus_cf(x)) if x else 0
    eps = odd - ell
    if eps not in (0, 1):
        raise AssertionError(f"epsilon({x}) = {eps} outside {{0, 1}}")
    return CFStats(
        s=len(digits),
        ell=ell,
        sigma_odd=odd,
        sigma_even=even,
        sigma_pm=odd - even,
        epsilon=eps,
    )
