"""Exact rationals, gcd utilities, the totient sieve and Farey enumeration.

``fractions.Fraction`` is the value type throughout the package: it is always
reduced, keeps the sign on the numerator and uses unbounded integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import BothZero, NotCoprime, ZeroDenominator


class Region(str, Enum):
    """Value ranges a Farey sweep can be restricted to.

    ``lower`` is [0, 1/2), ``upper`` is [1/2, 1] and ``full`` is [0, 1].
    """

    LOWER = "lower"
    UPPER = "upper"
    FULL = "full"

    def contains(self, x: Fraction) -> bool:
        if self is Region.LOWER:
            return 0 <= x < Fraction(1, 2)
        if self is Region.UPPER:
            return Fraction(1, 2) <= x <= 1
        return 0 <= x <= 1


def make_fraction(num: int, den: int) -> Fraction:
    if den == 0:
        raise ZeroDenominator(f"denominator of {num}/{den} is zero")
    return Fraction(num, den)


def parse_fraction(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` into a Fraction."""
    num, sep, den = text.strip().partition("/")
    return make_fraction(int(num), int(den) if sep else 1)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``g = gcd(a, b) > 0`` and ``a*x + b*y = g``."""
    if a == 0 and b == 0:
        raise BothZero("ext_gcd(0, 0) is undefined")
    x0, y0, x1, y1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if r0 < 0:
        r0, x0, y0 = -r0, -x0, -y0
    return r0, x0, y0


def mod_inverse(a: int, q: int) -> int:
    """Smallest positive r with ``a*r = 1 (mod q)``.

    For q = 1 every integer is an inverse and the smallest positive one, 1, is
    returned.
    """
    if q < 1:
        raise ValueError(f"modulus must be positive, got {q}")
    if q == 1:
        return 1
    g, x, _ = ext_gcd(a % q, q)
    if g != 1:
        raise NotCoprime(f"gcd({a}, {q}) = {g}")
    return x % q


@dataclass(frozen=True)
class TotientTable:
    """phi[n] for 0 <= n <= limit (phi[0] is a 0 placeholder)."""

    limit: int
    phi: np.ndarray

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise IndexError(f"{n} outside 1..{self.limit}")
        return int(self.phi[n])

    def prefix_sums(self) -> np.ndarray:
        """Exact running sums ``sum_{m<=n} phi(m)`` as an int64 array."""
        return np.cumsum(self.phi)


def totient_table(Q: int) -> TotientTable:
    """Euler sieve over the primes up to Q, vectorised per prime."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    phi = np.arange(Q + 1, dtype=np.int64)
    composite = np.zeros(Q + 1, dtype=bool)
    for p in range(2, Q + 1):
        if composite[p]:
            continue
        composite[p * p :: p] = True
        phi[p::p] -= phi[p::p] // p
    phi.flags.writeable = False
    return TotientTable(Q, phi)


def farey_count(Q: int) -> int:
    """#F(Q) = 1 + sum_{b<=Q} phi(b); the 1 accounts for 0/1."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    return 1 + int(totient_table(Q).phi.sum())


def farey_counts(Q: int, table: TotientTable | None = None) -> list[int]:
    """``[#F(0), #F(1), ..., #F(Q)]`` with the convention #F(0) = 1."""
    table = table if table is not None and table.limit >= Q else totient_table(max(Q, 1))
    out = [1]
    acc = 1
    for n in range(1, Q + 1):
        acc += int(table.phi[n])
        out.append(acc)
    return out


def farey_successor(a: int, b: int, Q: int) -> tuple[int, int]:
    """Right neighbour of a/b in F(Q), for 0 <= a/b < 1 with b <= Q."""
    # neighbours satisfy b*c - a*d = 1, so d = -a^{-1} (mod b); take the largest d <= Q
    r = (-mod_inverse(a, b)) % b if b > 1 else 0
    d = Q - ((Q - r) % b)
    c = (1 + a * d) // b
    return c, d


def farey_sequence(Q: int, region: Region | str = Region.FULL) -> Iterator[Fraction]:
    """Yield F(Q) restricted to ``region`` in increasing order.

    Uses the neighbour recurrence: from consecutive a/b < c/d the next term is
    (k*c - a)/(k*d - b) with k = (Q + b) // d.
    """
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    region = Region(region)
    if region is Region.UPPER:
        if Q == 1:
            yield Fraction(1)
            return
        a, b = 1, 2
    else:
        a, b = 0, 1
    c, d = farey_successor(a, b, Q)
    stop_before_half = region is Region.LOWER
    while True:
        if stop_before_half and 2 * a >= b:
            return
        yield Fraction(a, b)
        if a == b:
            return
        k = (Q + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
