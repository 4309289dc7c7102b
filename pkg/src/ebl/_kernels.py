"""Compiled inner loops for the large sweeps and counters.

Sweeps walk the Stern-Brocot tree of (0, 1).  A node is the fraction
p/q = [0; a_1, ..., a_n] (a_n >= 2) carried together with the previous
convergent pp/pq and the odd/even digit sums, so every statistic except ell
is updated in O(1) per node:

    child A = [0; a_1, ..., a_n + 1]        (p + pp) / (q + pq)
    child B = [0; a_1, ..., a_n - 1, 2]     (2p - pp) / (2q - pq)

Both children have strictly larger denominators, so a subtree can be pruned
once q exceeds the bound.  Per-denominator sums are exact int64.
"""

from __future__ import annotations

import os

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old for numba; prefer OpenMP or the builtin pool
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

STAT_CODES = {
    "steps_sub": 0,
    "s": 1,
    "ell": 2,
    "sigma_pm": 3,
    "sigma_odd": 4,
    "sigma_even": 5,
    "epsilon": 6,
    "dedekind": 7,
}

# node layout: p, q, pp, pq, n, sigma_odd, sigma_even
ROOT_HALF = np.array([1, 2, 0, 1, 1, 2, 0], dtype=np.int64)    # 1/2 = [0; 2]
ROOT_LOWER = np.array([1, 3, 0, 1, 1, 3, 0], dtype=np.int64)   # 1/3 = [0; 3]
ROOT_UPPER = np.array([2, 3, 1, 1, 2, 1, 2], dtype=np.int64)   # 2/3 = [0; 1, 2]


def resolve_threads(threads: int | None) -> int:
    if threads is None:
        env = os.environ.get("EBL_THREADS")
        threads = int(env) if env else 1
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


@njit(cache=True)
def minus_length_pair(a, b):
    """ell(a/b) for 0 < a < b (a, b need not be coprime)."""
    p = b
    r = b - a
    m = 0
    while r > 0:
        d = p - r
        if d <= r:
            t = r // d
            m += t
            r = r - t * d
            p = r + d
        else:
            c = (p + r - 1) // r
            nr = c * r - p
            p = r
            r = nr
            m += 1
    return m


@njit(cache=True)
def node_value(p, q, pp, pq, n, so, se, stat):
    if stat == 0:
        return so + se
    if stat == 1:
        return n
    if stat == 2:
        return minus_length_pair(p, q)
    if stat == 3:
        return so - se
    if stat == 4:
        return so
    if stat == 5:
        return se
    if stat == 6:
        return so - minus_length_pair(p, q)
    # 24*q*D(p/q) from the reversed expansion [0; a_n, ..., a_1] = pq/q
    sg = 1 if n % 2 == 0 else -1
    return 3 * q * (sg - 1) + 2 * (p - sg * pq + q * (so - se))


@njit(cache=True)
def _walk(root, qmax, stat, bins):
    stack = np.empty((qmax + 64, 7), dtype=np.int64)
    for j in range(7):
        stack[0, j] = root[j]
    top = 1
    while top > 0:
        top -= 1
        p = stack[top, 0]
        q = stack[top, 1]
        pp = stack[top, 2]
        pq = stack[top, 3]
        n = stack[top, 4]
        so = stack[top, 5]
        se = stack[top, 6]
        bins[q] += node_value(p, q, pp, pq, n, so, se, stat)
        qa = q + pq
        if qa <= qmax:
            stack[top, 0] = p + pp
            stack[top, 1] = qa
            stack[top, 2] = pp
            stack[top, 3] = pq
            stack[top, 4] = n
            if n % 2 == 1:
                stack[top, 5] = so + 1
                stack[top, 6] = se
            else:
                stack[top, 5] = so
                stack[top, 6] = se + 1
            top += 1
        qb = 2 * q - pq
        if qb <= qmax:
            stack[top, 0] = 2 * p - pp
            stack[top, 1] = qb
            stack[top, 2] = p - pp
            stack[top, 3] = q - pq
            stack[top, 4] = n + 1
            if n % 2 == 1:
                stack[top, 5] = so - 1
                stack[top, 6] = se + 2
            else:
                stack[top, 5] = so + 2
                stack[top, 6] = se - 1
            top += 1


@njit(cache=True)
def _expand(roots, qmax, stat, bins):
    """Replace every root by its children, accumulating the roots themselves."""
    out = np.empty((2 * roots.shape[0], 7), dtype=np.int64)
    k = 0
    for i in range(roots.shape[0]):
        p, q, pp, pq, n, so, se = roots[i]
        bins[q] += node_value(p, q, pp, pq, n, so, se, stat)
        if q + pq <= qmax:
            out[k, 0] = p + pp
            out[k, 1] = q + pq
            out[k, 2] = pp
            out[k, 3] = pq
            out[k, 4] = n
            out[k, 5] = so + 1 if n % 2 == 1 else so
            out[k, 6] = se if n % 2 == 1 else se + 1
            k += 1
        if 2 * q - pq <= qmax:
            out[k, 0] = 2 * p - pp
            out[k, 1] = 2 * q - pq
            out[k, 2] = p - pp
            out[k, 3] = q - pq
            out[k, 4] = n + 1
            out[k, 5] = so - 1 if n % 2 == 1 else so + 2
            out[k, 6] = se + 2 if n % 2 == 1 else se - 1
            k += 1
    return out[:k]


@njit(parallel=True, cache=True)
def _walk_many(roots, qmax, stat, nchunks):
    bins = np.zeros((nchunks, qmax + 1), dtype=np.int64)
    for c in prange(nchunks):
        for i in range(c, roots.shape[0], nchunks):
            _walk(roots[i], qmax, stat, bins[c])
    return bins


def subtree_bins(root: np.ndarray, qmax: int, stat: str, threads: int = 1) -> np.ndarray:
    """Per-denominator sums of ``stat`` over the subtree below ``root``.

    The subtree is split into independent sub-subtrees (value sub-intervals)
    that are walked in parallel with private bins; integer addition makes the
    result independent of the thread count.
    """
    code = STAT_CODES[stat]
    bins = np.zeros(qmax + 1, dtype=np.int64)
    if root[1] > qmax:
        return bins
    if threads <= 1:
        _walk(root, qmax, code, bins)
        return bins
    roots = root.reshape(1, 7).copy()
    target = 8 * threads
    for _ in range(32):
        if roots.shape[0] >= target or roots.shape[0] == 0:
            break
        roots = _expand(roots, qmax, code, bins)
    if roots.shape[0]:
        previous = numba.get_num_threads()
        numba.set_num_threads(min(threads, numba.config.NUMBA_NUM_THREADS))
        try:
            parts = _walk_many(roots, qmax, code, threads)
        finally:
            numba.set_num_threads(previous)
        bins += parts.sum(axis=0)
    return bins


@njit(cache=True)
def n0_direct(Q):
    """sum_{q<=Q} sum_{1<=a<q/2} ell(a/q), pairs not reduced."""
    total = 0
    for q in range(3, Q + 1):
        for a in range(1, (q + 1) // 2):
            total += minus_length_pair(a, q)
    return total


@njit(cache=True)
def floor_sum(n, m, a, b):
    """sum_{i=0}^{n-1} floor((a*i + b) / m) for n, m >= 1 and a, b >= 0."""
    ans = 0
    while True:
        if a >= m:
            ans += (n - 1) * n // 2 * (a // m)
            a %= m
        if b >= m:
            ans += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            break
        n = y_max // m
        b = y_max % m
        a, m = m, a
    return ans


@njit(cache=True)
def inverse_mod(q, p):
    """inv_p(q) for p >= 2, or 0 when gcd(p, q) != 1."""
    r0 = p
    r1 = q % p
    x0 = 0
    x1 = 1
    while r1 != 0:
        t = r0 // r1
        r0, r1 = r1, r0 - t * r1
        x0, x1 = x1, x0 - t * x1
    if r0 != 1:
        return 0
    x0 %= p
    return x0


@njit(cache=True)
def kn_count(Q, p, q, n_lo, n_hi):
    """#{(n, k): 1 <= k < n, n_lo <= n <= n_hi, n*q + k*p <= Q}."""
    if n_lo < 2:
        n_lo = 2
    n_max = (Q - p) // q
    if n_hi > n_max:
        n_hi = n_max
    if n_hi < n_lo:
        return 0
    total = 0
    # k = n - 1 is admissible while n*(p + q) <= Q + p
    n0 = (Q + p) // (p + q)
    a_hi = n0 if n0 < n_hi else n_hi
    if a_hi >= n_lo:
        total += (a_hi - 1) * a_hi // 2 - (n_lo - 2) * (n_lo - 1) // 2
    b_lo = n0 + 1 if n0 + 1 > n_lo else n_lo
    if n_hi >= b_lo:
        cnt = n_hi - b_lo + 1
        # n = n_hi - i turns floor((Q - n*q)/p) into an increasing floor sum
        total += floor_sum(cnt, p, q, Q - n_hi * q)
    return total


@njit(cache=True)
def count_cc(Q, p_lo, p_hi, q_lo, q_hi, n_lo, n_hi, relation):
    """Solutions (p, q, k, n) of the reduced system with box constraints.

    relation: 0 none, 1 requires p <= q, 2 requires q < p.
    p = 1 never contributes since inv_1 := 1 > 1/2.
    """
    total = 0
    if p_lo < 2:
        p_lo = 2
    if p_hi > Q:
        p_hi = Q
    for p in range(p_lo, p_hi + 1):
        qa = q_lo if q_lo > 1 else 1
        qb = (Q - p) // 2
        if q_hi < qb:
            qb = q_hi
        if relation == 1 and qa < p:
            qa = p
        if relation == 2 and qb > p - 1:
            qb = p - 1
        for q in range(qa, qb + 1):
            inv = inverse_mod(q, p)
            if inv == 0 or 2 * inv > p:
                continue
            total += kn_count(Q, p, q, n_lo, n_hi)
    return total
