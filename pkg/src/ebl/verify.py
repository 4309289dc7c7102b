"""Exhaustive verification suites shared by the ``verify`` command and tests.

Each suite returns a JSON-ready report with ``ok`` set only if every check
passed.  Failures are listed (truncated to the first few) rather than raised.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

import numpy as np

from . import asym_const, dio_count
from .cf_engine import cf_stats, eval_minus, eval_ordinary, minus_cf, ordinary_cf
from .dedekind import dedekind_cf, dedekind_naive
from .euclid_sim import run_euclid
from .rational_core import farey_sequence, mod_inverse, totient_table

MAX_LISTED_FAILURES = 20

# Fixture bounds recorded from exact runs (observed maximum times 1.5).
HYPERBOLA_DEVIATION_BOUND = 0.75
HYPERBOLA_SAMPLE_SEED = 20240611
APPENDIX_RATIO_BOUNDS = {
    "phi_sum_quadratic": 0.12,
    "phi_over_q": 0.12,
    "phi_over_q2": 0.12,
    "phi_log_over_q2": 0.14,
    "double_sum_n_nk": 1.51,
    "double_sum_k_nk": 0.71,
    "kq_phi_over_kq2": 0.95,
    "kq_phi_over_q2": 0.14,
    "kq_phi_over_qk": 0.41,
    "kq_phi_k_over_q2": 0.19,
    "kq_phi_over_k": 0.44,
}
APPENDIX_PHI_POINTS = (10**2, 10**3, 10**4, 10**5, 10**6)
APPENDIX_U_POINTS = (10**2, 10**3, 10**4)


class _Report:
    def __init__(self, suite: str, **params):
        self.suite = suite
        self.params = params
        self.checked = 0
        self.failures: list = []
        self.n_failures = 0
        self.details: dict = {}

    def check(self, condition: bool, *witness) -> None:
        self.checked += 1
        if not condition:
            self.n_failures += 1
            if len(self.failures) < MAX_LISTED_FAILURES:
                self.failures.append([str(w) for w in witness])

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "suite": self.suite,
            "params": self.params,
            "checked": self.checked,
            "n_failures": self.n_failures,
            "failures": self.failures,
            "details": self.details,
            "ok": self.n_failures == 0,
        }


def identities(qmax: int = 500) -> dict:
    """CF round trips, the ell / sigma identities and the step-count identities."""
    rep = _Report("identities", qmax=qmax)
    for x in farey_sequence(qmax):
        if not 0 < x < 1:
            continue
        a, b = x.numerator, x.denominator
        digits = ordinary_cf(x)
        minus = minus_cf(x)
        rep.check(eval_ordinary(digits) == x, "ordinary round trip", x)
        rep.check(eval_minus(minus) == x, "minus round trip", x)
        st = cf_stats(x)
        rep.check(st.epsilon in (0, 1), "epsilon", x)
        rep.check(st.ell == st.sigma_odd - st.epsilon, "ell = odd - eps", x)
        rep.check(cf_stats(1 - x).ell == st.sigma_even + st.epsilon, "ell(1-x)", x)
        if 2 * x < 1:
            rep.check(st.s == cf_stats(1 - x).s - 1, "s(x) = s(1-x) - 1", x)
        rep.check(run_euclid(a, b, "div").steps == st.s, "div steps", x)
        rep.check(run_euclid(a, b, "excess").steps == st.ell + 1, "excess steps", x)
        rep.check(run_euclid(a, b, "sub").steps == sum(digits), "sub steps", x)
    return rep.to_json()


def dedekind(qmax: int = 300, sum_qmax: int = 100, scale_qmax: int = 100) -> dict:
    """CF formula against the definition, reflection, Farey sum and scaling."""
    rep = _Report("dedekind", qmax=qmax, sum_qmax=sum_qmax, scale_qmax=scale_qmax)
    for x in farey_sequence(qmax):
        a, b = x.numerator, x.denominator
        d = dedekind_cf(x)
        rep.check(d == dedekind_naive(a, b), "cf vs naive", x)
        rep.check(dedekind_cf(1 - x) == -d if x else True, "reflection", x)
        if b <= scale_qmax:
            for k in range(2, 6):
                rep.check(dedekind_naive(k * a, k * b) == dedekind_naive(a, b), "scaling", x, k)
    for Q in range(1, sum_qmax + 1):
        total = sum((dedekind_cf(x) for x in farey_sequence(Q)), Fraction(0))
        rep.check(total == 0, "Farey sum", Q, total)
    return rep.to_json()


def bijection(qmax: int = 120) -> dict:
    rep = _Report("bijection", qmax=qmax)
    counts = {}
    for Q in range(1, qmax + 1):
        r = dio_count.verify_bijection(Q)
        counts[Q] = [r.count_sys7_q1ge2, r.count_sys11, r.count_sysCC]
        rep.check(r.ok, "bijection", Q, counts[Q], r.witness_failures[:3])
    rep.details["counts_at_qmax"] = counts.get(qmax)
    return rep.to_json()


def inversion(qmax: int = 400) -> dict:
    """inv_p(q) <= p/2 iff inv_q(p) > q/2, and inv_p(q) q + inv_q(p) p = 1 + pq."""
    rep = _Report("inversion", qmax=qmax)
    for p in range(3, qmax + 1):
        for q in range(2, p):
            if math.gcd(p, q) != 1:
                continue
            ip, iq = mod_inverse(q, p), mod_inverse(p, q)
            rep.check((2 * ip <= p) == (2 * iq > q), "equivalence", p, q)
            rep.check(ip * q + iq * p == 1 + p * q, "identity", p, q)
    return rep.to_json()


def hyperbola_deviation(p: int, y: int, x: int) -> float:
    """|A_p(y, x) - phi(p)(x - y)/(2p)| / ((1 + (x - y)/p) p^0.6)."""
    phi = int(totient_table(p).phi[p])
    main = phi * (x - y) / (2 * p)
    return abs(dio_count.hyperbola_count(p, y, x, "A") - main) / ((1 + (x - y) / p) * p**0.6)


def hyperbola_samples(n: int = 2000, seed: int = HYPERBOLA_SAMPLE_SEED):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        p = int(rng.integers(1, 501))
        y = int(rng.integers(0, 5000))
        x = y + int(rng.integers(1, 5001))
        yield p, y, x


def hyperbola(qmax: int = 10_000, pmax: int = 2000) -> dict:
    """delta values, the A/B boundary identities and the sampled main term."""
    rep = _Report("hyperbola", qmax=qmax, pmax=pmax)
    phi = totient_table(max(qmax, pmax)).phi
    for q in range(1, qmax + 1):
        plus, minus = dio_count.delta_half(q, "plus"), dio_count.delta_half(q, "minus")
        rep.check(plus + minus == phi[q], "delta sum", q)
        if q >= 3:
            rep.check(2 * plus == phi[q] and 2 * minus == phi[q], "delta halves", q)
    rep.check(dio_count.delta_half(1, "plus") == 1 and dio_count.delta_half(2, "minus") == 1,
              "delta small 1")
    rep.check(dio_count.delta_half(2, "plus") == 0 and dio_count.delta_half(1, "minus") == 0,
              "delta small 0")
    for p in range(1, pmax + 1):
        A = dio_count.hyperbola_count(p, 0, p, "A")
        B = dio_count.hyperbola_count(p, 0, p, "B")
        rep.check(A == dio_count.delta_half(p, "minus"), "A_p(0,p) = delta-", p)
        rep.check(B == dio_count.delta_half(p, "plus"), "B_p(0,p) = delta+", p)
        rep.check(A + B == phi[p], "A + B", p)
    worst = max(hyperbola_deviation(p, y, x) for p, y, x in hyperbola_samples())
    rep.details["max_normalized_deviation"] = worst
    rep.check(worst <= HYPERBOLA_DEVIATION_BOUND, "main term deviation", worst)
    return rep.to_json()


def partition(umax: int = 40) -> dict:
    rep = _Report("partition", umax=umax)
    for U in sorted({u for u in (2, 5, 10, 20, 40) if u <= umax} | {umax}):
        parts = [dio_count.count_R_case(U, c).count for c in dio_count.CaseId]
        total = dio_count.count_R(U * U).count
        rep.check(sum(parts) == total, "case partition", U, parts, total)
    return rep.to_json()


def appendix(xmax: int = 10**6) -> dict:
    """Residual / envelope ratios against the recorded bounds."""
    rep = _Report("appendix", xmax=xmax)
    ratios = {}
    for lid in asym_const.APPENDIX_IDS:
        pts = APPENDIX_PHI_POINTS if lid in asym_const.PHI_LEMMAS else APPENDIX_U_POINTS
        vals = [asym_const.appendix_ratio(lid, x) for x in pts if x <= xmax]
        ratios[lid] = vals
        for v in vals:
            rep.check(v <= APPENDIX_RATIO_BOUNDS[lid], lid, v)
    k = asym_const.constants()
    ratio = k.zeta2_prime / k.zeta2
    n0 = (1 / (8 * k.zeta2), (2 * k.gamma - ratio - 1.5 + 3 * k.zeta2 / 4) / (4 * k.zeta2))
    want = (1 / (8 * k.zeta2**2),
            (2 * k.gamma - 1.5 - 2 * ratio + 3 * k.zeta2 / 4) / (4 * k.zeta2**2))
    got = asym_const.mobius_transfer(*n0)
    for g, w in zip(got, want):
        rep.check(abs(g - w) <= 1e-12, "mobius transfer", g, w)
    rep.details["ratios"] = ratios
    return rep.to_json()


SUITES: dict[str, Callable[..., dict]] = {
    "identities": identities,
    "dedekind": dedekind,
    "bijection": bijection,
    "hyperbola": hyperbola,
    "inversion": inversion,
    "partition": partition,
    "appendix": appendix,
}


def run_suite(name: str, qmax: int | None = None) -> dict:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name]() if qmax is None else SUITES[name](qmax)
