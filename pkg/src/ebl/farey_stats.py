"""Region-restricted sums of per-fraction statistics over Farey fractions.

Every statistic is summed per denominator in one pass up to max(Q); running
sums then give the record for each requested Q.  Means are always divided by
the full count #F(Q), also for the restricted regions.

Boundary conventions: all statistics vanish at 0; at 1 they are
s = steps_sub = 1 and 0 for everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from . import _kernels
from .cf_engine import cf_stats
from .dedekind import dedekind_cf
from .rational_core import Region, farey_counts, farey_sequence, totient_table

STATISTICS = tuple(_kernels.STAT_CODES)

# value of each statistic at x = 1 (x = 0 contributes 0 everywhere)
_AT_ONE = {"s": 1, "steps_sub": 1}

Number = Union[int, Fraction, float]


@dataclass(frozen=True)
class SweepRecord:
    Q: int
    region: Region
    statistic: str
    exact_sum: Number
    farey_count: int

    @property
    def mean(self) -> float:
        if isinstance(self.exact_sum, float):
            return self.exact_sum / self.farey_count
        return float(Fraction(self.exact_sum) / self.farey_count)


def _check_statistic(statistic: str) -> str:
    statistic = statistic.replace("-", "_")
    if statistic not in _kernels.STAT_CODES:
        raise ValueError(f"unknown statistic {statistic!r}; choose from {', '.join(STATISTICS)}")
    return statistic


def fraction_stat(x: Fraction, statistic: str) -> Number:
    """Value of one statistic at a single x in [0, 1], conventions included."""
    statistic = _check_statistic(statistic)
    x = Fraction(x)
    if x == 1:
        return _AT_ONE.get(statistic, 0)
    if statistic == "dedekind":
        return dedekind_cf(x)
    st = cf_stats(x)
    return st.steps_sub if statistic == "steps_sub" else getattr(st, statistic)


def denominator_bins(qmax: int, statistic: str, region: Region | str = Region.FULL,
                     threads: int | None = None) -> np.ndarray:
    """``bins[b]`` = exact sum of the statistic over reduced a/b in the region.

    For ``dedekind`` the entries are 24*b times the sum, which is an integer.
    """
    statistic = _check_statistic(statistic)
    region = Region(region)
    threads = _kernels.resolve_threads(threads)
    bins = np.zeros(qmax + 1, dtype=np.int64)
    if region in (Region.LOWER, Region.FULL):
        bins += _kernels.subtree_bins(_kernels.ROOT_LOWER, qmax, statistic, threads)
    if region in (Region.UPPER, Region.FULL):
        if qmax >= 2:
            bins[2] += _kernels.node_value(*_kernels.ROOT_HALF, _kernels.STAT_CODES[statistic])
            bins += _kernels.subtree_bins(_kernels.ROOT_UPPER, qmax, statistic, threads)
        bins[1] += _AT_ONE.get(statistic, 0)
    return bins


def _running_sums(bins: np.ndarray, statistic: str, qs: list[int], exact: bool) -> dict[int, Number]:
    out: dict[int, Number] = {}
    if statistic != "dedekind":
        acc = 0
        b = 0
        for Q in sorted(qs):
            acc += int(bins[b + 1 : Q + 1].sum(dtype=object)) if Q > b else 0
            b = max(b, Q)
            out[Q] = acc
        return out
    if exact:
        acc_f = Fraction(0)
        b = 0
        for Q in sorted(qs):
            for d in range(b + 1, Q + 1):
                if bins[d]:
                    acc_f += Fraction(int(bins[d]), 24 * d)
            b = max(b, Q)
            out[Q] = acc_f
        return out
    terms = [float(bins[d]) / (24 * d) if d else 0.0 for d in range(len(bins))]
    for Q in qs:
        out[Q] = math.fsum(terms[1 : Q + 1])
    return out


def sweep(Q_values: Iterable[int], statistic: str, region: Region | str = Region.FULL, *,
          exact_dedekind: bool = False, threads: int | None = None) -> list[SweepRecord]:
    """One SweepRecord per Q, sorted by Q.

    Integer statistics are summed exactly.  Dedekind sums are exact per
    denominator and combined across denominators with ``math.fsum`` unless
    ``exact_dedekind`` asks for a Fraction (only sensible for small Q).
    """
    qs = sorted(set(int(q) for q in Q_values))
    if not qs:
        return []
    if qs[0] < 1:
        raise ValueError(f"all Q must be >= 1, got {qs[0]}")
    statistic = _check_statistic(statistic)
    region = Region(region)
    qmax = qs[-1]
    bins = denominator_bins(qmax, statistic, region, threads)
    sums = _running_sums(bins, statistic, qs, exact_dedekind)
    counts = farey_counts(qmax, totient_table(qmax))
    return [SweepRecord(Q, region, statistic, sums[Q], counts[Q]) for Q in qs]


def sweep_reference(Q: int, statistic: str, region: Region | str = Region.FULL) -> Number:
    """Slow per-fraction sum over ``farey_sequence``; the oracle for ``sweep``."""
    statistic = _check_statistic(statistic)
    return sum((fraction_stat(x, statistic) for x in farey_sequence(Q, region)), 0)


def ito_statistic(Q: int, *, threads: int | None = None) -> float:
    """Sigma(Q) = (sum of D(x) over F(Q) in [0, 1/2)) / #F(Q)."""
    return sweep([Q], "dedekind", Region.LOWER, threads=threads)[0].mean


def ito_series(Q_values: Iterable[int], *, threads: int | None = None) -> list[tuple[int, float]]:
    return [(r.Q, r.mean) for r in sweep(Q_values, "dedekind", Region.LOWER, threads=threads)]


def numerator_profile(b: int, statistic: str) -> float:
    """(1/phi(b)) * sum over 1 <= a <= b, gcd(a, b) = 1 of stat(a/b)."""
    if b < 1:
        raise ValueError(f"b must be >= 1, got {b}")
    statistic = _check_statistic(statistic)
    total = Fraction(0)
    count = 0
    for a in range(1, b + 1):
        if math.gcd(a, b) == 1:
            total += Fraction(fraction_stat(Fraction(a, b), statistic))
            count += 1
    return float(total / count)
