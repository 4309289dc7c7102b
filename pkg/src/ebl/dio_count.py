"""Counters for the Diophantine systems behind the restricted length average.

Systems, with inv_p(q) the least positive inverse of q mod p (inv_1 := 1):

T0 (8 unknowns)   a1*q2 - a2*q1 = 1, 1 <= a1 <= q1, 1 <= a2 <= q2/2,
                  n*a2 - m*a1 = a, n*q2 - m*q1 = b, 1 <= a < b <= Q,
                  1 <= m < n, 1 <= q1 < q2
S11 (4 unknowns)  gcd(q1, q2) = 1, 1 <= q1 < q2, inv_q1(q2) <= q1/2,
                  2 <= n*q2 - m*q1 <= Q, 1 <= m < n
R  (4 unknowns)   gcd(p, q) = 1, inv_p(q) <= p/2,
                  2 <= n*q + k*p <= Q, 1 <= k < n

Solutions of T0 with q1 >= 2 correspond one-to-one to S11 by dropping
(a1, a2, a, b), and S11 maps onto R via (p, q, k, n) = (q1, q2 - q1, n - m, n).
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import asdict, dataclass, field
from enum import IntEnum
from fractions import Fraction

import numpy as np

from . import _kernels
from .rational_core import mod_inverse


@dataclass(frozen=True)
class SystemCount:
    system: str
    bound: int
    count: int

    def to_json(self) -> dict:
        return {"schema": 1, "system": self.system, "bound": self.bound, "count": self.count}


class CaseId(IntEnum):
    """Partition of the R-solutions for Q = U**2.

    1: p <= q <= U        2: p <= q, U < q      3: q < p <= U
    4: q < p, U < p, n <= U                     5: q < p, U < p, U < n
    """

    P_LE_Q_SMALL = 1
    P_LE_Q_LARGE = 2
    Q_LT_P_SMALL = 3
    Q_LT_P_SHORT_N = 4
    Q_LT_P_LONG_N = 5


@dataclass
class BijectionReport:
    Q: int
    count_sys7_q1ge2: int = 0
    count_sys11: int = 0
    count_sysCC: int = 0
    witness_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.count_sys7_q1ge2 == self.count_sys11 == self.count_sysCC
                and not self.witness_failures)

    def to_json(self) -> dict:
        out = {"schema": 1, **asdict(self), "ok": self.ok}
        out["witness_failures"] = [list(w) for w in self.witness_failures]
        return out


# --------------------------------------------------------------------------- T0

def _t0_pairs(Q: int):
    """Yield (q1, q2, a1, a2) admissible in T0 before (m, n) are chosen."""
    for q2 in range(2, Q + 1):
        for q1 in range(1, q2):
            if math.gcd(q1, q2) != 1:
                continue
            # a1*q2 = 1 (mod q1) with 1 <= a1 <= q1 leaves exactly one candidate
            a1 = mod_inverse(q2, q1)
            a2, rem = divmod(a1 * q2 - 1, q1)
            if rem or not 1 <= a2 or 2 * a2 > q2:
                continue
            yield q1, q2, a1, a2


def _t0_mn(Q: int, q1: int, q2: int, a1: int, a2: int):
    """Yield (m, n) completing a T0 solution for fixed (q1, q2, a1, a2)."""
    n = 2
    while n * (q2 - q1) + q1 <= Q:
        # b <= Q  <=>  m >= (n*q2 - Q)/q1 ;  a >= 1  <=>  m*a1 <= n*a2 - 1
        m_lo = max(1, -((Q - n * q2) // q1))
        m_hi = min(n - 1, (n * a2 - 1) // a1)
        for m in range(m_lo, m_hi + 1):
            a = n * a2 - m * a1
            b = n * q2 - m * q1
            if 1 <= a < b <= Q:
                yield m, n
        n += 1


def count_T0(Q: int) -> SystemCount:
    total = 0
    for q1, q2, a1, a2 in _t0_pairs(Q):
        total += sum(1 for _ in _t0_mn(Q, q1, q2, a1, a2))
    return SystemCount("T0", Q, total)


# ---------------------------------------------------------------------------- R

def count_R(Q: int) -> SystemCount:
    """Count R(Q); the (n, k) count per (p, q) is a closed floor sum."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    big = np.iinfo(np.int64).max // 4
    count = _kernels.count_cc(Q, 2, Q, 1, Q, 2, big, 0)
    return SystemCount("R", Q, int(count))


def count_R_case(U: int, case: CaseId | int) -> SystemCount:
    """Solutions of R(U**2) falling into one of the five cases."""
    if U < 1:
        raise ValueError(f"U must be >= 1, got {U}")
    case = CaseId(case)
    Q = U * U
    big = np.iinfo(np.int64).max // 4
    args = {
        CaseId.P_LE_Q_SMALL: (2, Q, 1, U, 2, big, 1),
        CaseId.P_LE_Q_LARGE: (2, Q, U + 1, Q, 2, big, 1),
        CaseId.Q_LT_P_SMALL: (2, U, 1, Q, 2, big, 2),
        CaseId.Q_LT_P_SHORT_N: (U + 1, Q, 1, Q, 2, U, 2),
        CaseId.Q_LT_P_LONG_N: (U + 1, Q, 1, Q, U + 1, big, 2),
    }[case]
    return SystemCount(f"R_case{int(case)}", U, int(_kernels.count_cc(Q, *args)))


# -------------------------------------------------------------------- bijection

def _solutions_sys7(Q: int) -> list[tuple[int, ...]]:
    """T0 solutions with q1 >= 2, found by scanning a1 (no inverses used)."""
    sols = []
    for q2 in range(3, Q + 1):
        for q1 in range(2, q2):
            for a1 in range(1, q1 + 1):
                a2, rem = divmod(a1 * q2 - 1, q1)
                if rem or not 1 <= a2 or 2 * a2 > q2:
                    continue
                for m, n in _t0_mn(Q, q1, q2, a1, a2):
                    sols.append((a1, q1, a2, q2, m, n, n * a2 - m * a1, n * q2 - m * q1))
    return sols


def _solutions_sys11(Q: int) -> set[tuple[int, int, int, int]]:
    sols = set()
    for q2 in range(2, Q + 1):
        for q1 in range(1, q2):
            if math.gcd(q1, q2) != 1 or 2 * mod_inverse(q2, q1) > q1:
                continue
            n = 2
            while n * (q2 - q1) + q1 <= Q:
                for m in range(1, n):
                    if 2 <= n * q2 - m * q1 <= Q:
                        sols.add((q1, q2, m, n))
                n += 1
    return sols


def _solutions_sysCC(Q: int) -> set[tuple[int, int, int, int]]:
    sols = set()
    for p in range(1, Q + 1):
        for q in range(1, Q + 1):
            if 2 * q + p > Q:
                break
            if math.gcd(p, q) != 1 or 2 * mod_inverse(q, p) > p:
                continue
            n = 2
            while n * q + p <= Q:
                for k in range(1, n):
                    if n * q + k * p > Q:
                        break
                    sols.add((p, q, k, n))
                n += 1
    return sols


def verify_bijection(Q: int) -> BijectionReport:
    """Check the T0 -> S11 -> R correspondences exhaustively for one Q."""
    report = BijectionReport(Q)
    sys7 = _solutions_sys7(Q)
    sys11 = _solutions_sys11(Q)
    sysCC = _solutions_sysCC(Q)
    report.count_sys7_q1ge2 = len(sys7)
    report.count_sys11 = len(sys11)
    report.count_sysCC = len(sysCC)

    images11 = set()
    imagesCC = set()
    for u in sys7:
        a1, q1, a2, q2, m, n, a, b = u
        if a1 != mod_inverse(q2, q1):
            report.witness_failures.append(("a1", *u))
        if a2 != q2 - mod_inverse(q1, q2):
            report.witness_failures.append(("a2", *u))
        if q1 * a != a1 * b - n:
            report.witness_failures.append(("a<b", *u))
        v = (q1, q2, m, n)
        if v not in sys11:
            report.witness_failures.append(("psi", *u))
        images11.add(v)
        w = (q1, q2 - q1, n - m, n)
        if w not in sysCC:
            report.witness_failures.append(("cc", *u))
        imagesCC.add(w)
    if len(images11) != len(sys7):
        report.witness_failures.append(("psi not injective",))
    if len(imagesCC) != len(sys7):
        report.witness_failures.append(("change of variables not injective",))
    return report


# ----------------------------------------------------------- half intervals etc.

def delta_half(q: int, side: str) -> int:
    """delta+(q) = #{q/2 < b <= q coprime to q}; delta-(q) = #{b <= q/2 coprime}."""
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    b = np.arange(1, q + 1)
    coprime = np.gcd(b, q) == 1
    lower = 2 * b <= q
    if side in ("minus", "-"):
        return int(np.count_nonzero(coprime & lower))
    if side in ("plus", "+"):
        return int(np.count_nonzero(coprime & ~lower))
    raise ValueError(f"side must be 'plus' or 'minus', got {side!r}")


@lru_cache(maxsize=256)
def _residue_flags(p: int) -> np.ndarray:
    """flags[r] for 0 <= r < p: 1 if inv_p(r) <= p/2, -1 if > p/2, 0 if not coprime."""
    flags = np.zeros(p, dtype=np.int8)
    for r in range(p):
        if math.gcd(r, p) == 1:
            flags[r] = 1 if 2 * mod_inverse(r, p) <= p else -1
    flags.flags.writeable = False
    return flags


def hyperbola_count(p: int, y, x, side: str) -> int:
    """A_p(y, x) (side 'A') or B_p(y, x) (side 'B') over integers y < q <= x."""
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    lo = math.floor(Fraction(y)) + 1
    hi = math.floor(Fraction(x))
    if hi < lo:
        return 0
    want = {"A": 1, "B": -1}[side.upper()]
    hits = _residue_flags(p) == want
    # q runs over lo..hi; count residues with wrap-around
    period = int(np.count_nonzero(hits))
    full, extra = divmod(hi - lo + 1, p)
    start = lo % p
    idx = (start + np.arange(extra)) % p
    return full * period + int(np.count_nonzero(hits[idx]))


def N0_direct(Q: int) -> int:
    """Sum of ell(a/q) over 1 <= a < q/2, q <= Q (pairs need not be reduced)."""
    if Q < 1:
        raise ValueError(f"Q must be >= 1, got {Q}")
    return int(_kernels.n0_direct(Q))
