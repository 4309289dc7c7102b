"""Closed-form constants, asymptotic main terms, log-model fits and
residuals of the totient / double-sum asymptotics.

Only pi is taken as given.  Euler's gamma and zeta'(2) come from
Euler-Maclaurin summation with enough correction terms that the first
omitted term is below 1e-15.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateDesign, UnknownFormula
from .rational_core import totient_table

# B_2, B_4, ..., B_14
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6)


def euler_gamma(N: int = 1000) -> float:
    """gamma = H_N - log N - 1/(2N) + sum_k B_2k / (2k N^2k)."""
    h = math.fsum(1.0 / n for n in range(1, N + 1))
    corr = [b / (2 * k * N ** (2 * k)) for k, b in enumerate(_BERNOULLI[:4], start=1)]
    assert abs(_BERNOULLI[4] / (10 * N**10)) < 1e-15
    return math.fsum([h, -math.log(N), -1.0 / (2 * N), *corr])


def _log_over_square_derivative(j: int, x: float) -> float:
    """d^j/dx^j (log x / x^2) = (-1)^j (j+1)! x^(-2-j) (log x - H_{j+1} + 1)."""
    h = math.fsum(1.0 / i for i in range(1, j + 2))
    return (-1) ** j * math.factorial(j + 1) * x ** (-2 - j) * (math.log(x) - h + 1)


def zeta2_prime(N: int = 60) -> float:
    """zeta'(2) = -sum_{n>=1} log(n)/n^2, tail from n = N by Euler-Maclaurin."""
    head = math.fsum(math.log(n) / (n * n) for n in range(2, N))
    tail = [(math.log(N) + 1) / N, math.log(N) / (2 * N * N)]
    for k, b in enumerate(_BERNOULLI[:5], start=1):
        tail.append(-b / math.factorial(2 * k) * _log_over_square_derivative(2 * k - 1, N))
    nxt = _BERNOULLI[5] / math.factorial(12) * _log_over_square_derivative(11, N)
    assert abs(nxt) < 1e-15
    return -math.fsum([head, *tail])


@dataclass(frozen=True)
class ConstantSet:
    gamma: float
    zeta2: float
    zeta2_prime: float
    B1: float
    B2: float
    C1: float
    C2: float
    c1: float
    c2: float
    b1: float
    b2: float

    def as_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=1)
def constants() -> ConstantSet:
    g = euler_gamma()
    z2 = math.pi**2 / 6
    z2p = zeta2_prime()
    ratio = z2p / z2
    log2 = math.log(2)
    B1 = log2 / (2 * z2)
    B2 = log2 / (4 * z2) * (3 * log2 + 4 * g - 2 * ratio - 3) - 0.25
    C1 = 1 / (2 * z2)
    C2 = (2 * g - 1.5 - 2 * ratio) / z2
    c1 = 1 / (4 * z2)
    c2 = (2 * g - 1.5 - 2 * ratio + 3 * z2 / 4) / (2 * z2)
    return ConstantSet(g, z2, z2p, B1, B2, C1, C2, c1, c2, B1 / 2, (B2 - 0.5) / 2)


# ------------------------------------------------------------------ main terms

def _main_terms() -> dict[str, Callable[[float], float]]:
    k = constants()
    g, z2, ratio = k.gamma, k.zeta2, k.zeta2_prime / k.zeta2
    log2 = math.log(2)
    L = math.log
    n0_lin = (2 * g - ratio - 1.5 + 3 * z2 / 4) / (4 * z2)
    return {
        "ito": lambda Q: L(Q) / 16,
        "ustinov": lambda Q: k.B1 * L(Q) + k.B2,
        "zhabitskaya": lambda Q: k.C1 * L(Q) ** 2 + k.C2 * L(Q),
        "zhabitskaya_leading_only": lambda Q: k.C1 * L(Q) ** 2,
        "bias_ell": lambda Q: k.c1 * L(Q) ** 2 + k.c2 * L(Q),
        "bias_s": lambda Q: k.b1 * L(Q) + k.b2,
        "sigma_pm": lambda Q: 0.75 * L(Q),
        "bias_delta": lambda Q: (2 * k.c2 - k.C2) * L(Q),
        "N0": lambda Q: Q**2 * L(Q) ** 2 / (8 * z2) + Q**2 * L(Q) * n0_lin,
        "restricted_ell_sum": lambda Q: (
            Q**2 * L(Q) ** 2 / (8 * z2**2)
            + Q**2 * L(Q) * (2 * g - 1.5 - 2 * ratio + 3 * z2 / 4) / (4 * z2**2)
        ),
        "r1": lambda U: log2 / (4 * z2) * U**4 * L(U),
        "r2": lambda U: log2 / (4 * z2) * U**4 * L(U),
        "r3": lambda U: (U**4 * L(U) ** 2 / (8 * z2)
                         + U**4 * L(U) * (g - ratio + 3 * z2 / 4 - log2) / (4 * z2)),
        "r4": lambda U: U**4 * L(U) ** 2 / (8 * z2) + U**4 * L(U) * (g - log2) / (4 * z2),
        "r5": lambda U: (U**4 * L(U) ** 2 / (4 * z2)
                         + U**4 * L(U) * (g - ratio / 2 - 1.5 + 3 * z2 / 8) / (2 * z2)),
        "r5_leading_only": lambda U: U**4 * L(U) ** 2 / (4 * z2),
        "aggregate_R": lambda U: (U**4 * L(U) ** 2 / (2 * z2)
                                  + U**4 * L(U) * (2 * g - ratio - 1.5 + 3 * z2 / 4) / (2 * z2)),
    }


FORMULA_IDS = tuple(_main_terms())


def main_term(formula_id: str, arg: float) -> float:
    """Displayed main terms; the r* and aggregate_R formulas take U, the rest Q."""
    terms = _main_terms()
    if formula_id not in terms:
        raise UnknownFormula(formula_id)
    if arg <= 0:
        raise ValueError(f"argument must be positive, got {arg}")
    return terms[formula_id](arg)


def mobius_transfer(a: float, b: float) -> tuple[float, float]:
    """Coefficients of sum_d mu(d) Psi(Q/d) for Psi = a Q^2 log^2 Q + b Q^2 log Q."""
    k = constants()
    return a / k.zeta2, (b - 2 * a * k.zeta2_prime / k.zeta2) / k.zeta2


def mobius_transfer_inverse(a: float, b: float) -> tuple[float, float]:
    k = constants()
    a0 = a * k.zeta2
    return a0, b * k.zeta2 + 2 * a0 * k.zeta2_prime / k.zeta2


# ------------------------------------------------------------------------- fit

@dataclass(frozen=True)
class FitResult:
    """Coefficients highest power first: (a2, a1, a0) or (a1, a0)."""

    coeffs: tuple[float, ...]
    rms_residual: float
    Q_range: tuple[int, int]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def predict(self, Q: float) -> float:
        L = math.log(Q)
        return math.fsum(c * L ** (self.degree - i) for i, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"schema": 1, "degree": self.degree, "coeffs": list(self.coeffs),
                "rms_residual": self.rms_residual, "Q_range": list(self.Q_range)}


def fit_log_model(samples: Iterable[tuple[float, float]], degree: int = 2) -> FitResult:
    """Least squares fit of y against polynomials in log Q.

    The basis is centred at the mean of log Q before solving, which keeps the
    quadratic fit well conditioned over short ranges of Q.
    """
    if degree not in (1, 2):
        raise ValueError(f"degree must be 1 or 2, got {degree}")
    pts = [(float(q), float(y)) for q, y in samples]
    if any(q <= 1 for q, _ in pts):
        raise ValueError("all Q must exceed 1")
    if len(pts) < degree + 2 or len({q for q, _ in pts}) < degree + 1:
        raise DegenerateDesign(f"need at least {degree + 2} samples with distinct Q")
    L = np.log([q for q, _ in pts])
    y = np.array([v for _, v in pts])
    centre = float(L.mean())
    t = L - centre
    design = np.vander(t, degree + 1)
    beta, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ beta
    rms = float(np.sqrt(np.mean(resid**2)))
    if degree == 1:
        b1, b0 = beta
        coeffs = (float(b1), float(b0 - b1 * centre))
    else:
        b2, b1, b0 = beta
        coeffs = (float(b2), float(b1 - 2 * b2 * centre),
                  float(b2 * centre**2 - b1 * centre + b0))
    qs = [q for q, _ in pts]
    return FitResult(coeffs, rms, (int(min(qs)), int(max(qs))))


# ------------------------------------------------------------ auxiliary sums

def _harmonic(n: int) -> np.ndarray:
    """H[0..n] as floats."""
    h = np.zeros(n + 1)
    h[1:] = np.cumsum(1.0 / np.arange(1, n + 1))
    return h


def _phi_below(x: float) -> tuple[np.ndarray, int]:
    """phi(q) for 1 <= q < x, as float64 indexed from q = 1."""
    top = math.ceil(x) - 1
    return totient_table(max(top, 1)).phi[1 : top + 1].astype(np.float64), top


def _lhs_phi_sum(x):
    top = math.ceil(x) - 1
    return int(totient_table(max(top, 1)).phi[1 : top + 1].sum(dtype=object)) if top else 0


def _lhs_phi_over_q(x):
    phi, top = _phi_below(x)
    return math.fsum(phi / np.arange(1, top + 1))


def _lhs_phi_over_q2(x):
    phi, top = _phi_below(x)
    q = np.arange(1, top + 1, dtype=np.float64)
    return math.fsum(phi / q**2)


def _lhs_phi_log_over_q2(x):
    phi, top = _phi_below(x)
    q = np.arange(1, top + 1, dtype=np.float64)
    return math.fsum(phi * np.log(q) / q**2)


def _nk_ranges(U):
    """n < U and the largest k with k < n, n + k <= U (0 if none)."""
    n = np.arange(1, math.ceil(U))
    kmax = np.minimum(n - 1, math.floor(U) - n)
    keep = kmax >= 1
    return n[keep], kmax[keep]


def _lhs_n_nk(U):
    n, kmax = _nk_ranges(U)
    if n.size == 0:
        return 0.0
    H = _harmonic(int((n + kmax).max()))
    return math.fsum((H[n + kmax] - H[n]) / n)


def _lhs_k_nk(U):
    n, kmax = _nk_ranges(U)
    if n.size == 0:
        return 0.0
    H = _harmonic(int((n + kmax).max()))
    # 1/(k(n+k)) = (1/n)(1/k - 1/(n+k))
    return math.fsum((H[kmax] - (H[n + kmax] - H[n])) / n)


def _kq(U):
    """q with some k >= 1 such that k + q < U, and the largest such k."""
    top = math.ceil(U) - 1
    q = np.arange(1, max(top, 1))
    K = top - q
    phi = totient_table(max(top, 1)).phi[1 : q.size + 1].astype(np.float64)
    return q.astype(np.float64), K, phi


def _lhs_kq(weight: Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], np.ndarray]):
    def lhs(U):
        q, K, phi = _kq(U)
        if q.size == 0:
            return 0.0
        H = _harmonic(int(K.max()))
        return math.fsum(weight(q, K.astype(np.float64), H[K], phi))
    return lhs


def _appendix_table():
    k = constants()
    z2, g, ratio = k.zeta2, k.gamma, k.zeta2_prime / k.zeta2
    L = math.log
    log2 = math.log(2)
    # id -> (exact or float LHS, displayed main term, displayed error envelope)
    return {
        "phi_sum_quadratic": (_lhs_phi_sum, lambda x: x * x / (2 * z2), lambda x: x * L(x)),
        "phi_over_q": (_lhs_phi_over_q, lambda x: x / z2, lambda x: L(x)),
        "phi_over_q2": (_lhs_phi_over_q2, lambda x: (L(x) + g - ratio) / z2, lambda x: L(x) / x),
        "phi_log_over_q2": (_lhs_phi_log_over_q2, lambda x: L(x) ** 2 / (2 * z2), lambda x: 1.0),
        "double_sum_n_nk": (_lhs_n_nk, lambda U: log2 * L(U), lambda U: 1.0),
        "double_sum_k_nk": (_lhs_k_nk, lambda U: L(U) ** 2 / 2 + (g - log2) * L(U), lambda U: 1.0),
        "kq_phi_over_kq2": (
            _lhs_kq(lambda q, K, HK, phi: phi / q**2 * HK),
            lambda U: L(U) ** 2 / z2 + L(U) * (2 * g - ratio) / z2,
            lambda U: 1.0,
        ),
        "kq_phi_over_q2": (
            _lhs_kq(lambda q, K, HK, phi: phi / q**2 * K),
            lambda U: U * L(U) / z2,
            lambda U: U,
        ),
        "kq_phi_over_qk": (
            _lhs_kq(lambda q, K, HK, phi: phi / q * HK),
            lambda U: U * L(U) / z2,
            lambda U: U,
        ),
        "kq_phi_k_over_q2": (
            _lhs_kq(lambda q, K, HK, phi: phi / q**2 * K * (K + 1) / 2),
            lambda U: U * U * L(U) / (2 * z2),
            lambda U: U * U,
        ),
        "kq_phi_over_k": (
            _lhs_kq(lambda q, K, HK, phi: phi * HK),
            lambda U: U * U * L(U) / (2 * z2),
            lambda U: U * U,
        ),
    }


APPENDIX_IDS = (
    "phi_sum_quadratic", "phi_over_q", "phi_over_q2", "phi_log_over_q2",
    "double_sum_n_nk", "double_sum_k_nk", "kq_phi_over_kq2", "kq_phi_over_q2",
    "kq_phi_over_qk", "kq_phi_k_over_q2", "kq_phi_over_k",
)
PHI_LEMMAS = APPENDIX_IDS[:4]


def _appendix_entry(lemma_id: str):
    table = _appendix_table()
    if lemma_id not in table:
        raise UnknownFormula(lemma_id)
    return table[lemma_id]


def appendix_lhs(lemma_id: str, x: float):
    return _appendix_entry(lemma_id)[0](x)


def appendix_residual(lemma_id: str, x: float) -> float:
    """Left-hand side minus displayed main term, at x (totient sums) or U."""
    if x < 2:
        raise ValueError(f"argument must be >= 2, got {x}")
    lhs, main, _ = _appendix_entry(lemma_id)
    value = lhs(x)
    if isinstance(value, int):
        return float(value - main(x)) if abs(value) < 2**52 else math.fsum([value, -main(x)])
    return value - main(x)


def appendix_envelope(lemma_id: str, x: float) -> float:
    """The displayed error term (without its implied constant)."""
    return _appendix_entry(lemma_id)[2](x)


def appendix_ratio(lemma_id: str, x: float) -> float:
    return abs(appendix_residual(lemma_id, x)) / appendix_envelope(lemma_id, x)


def compare_fit(fit: FitResult, targets: Sequence[float | None]) -> list[dict]:
    """Relative deviation of each fitted coefficient from a target value."""
    out = []
    for got, want in zip(fit.coeffs, targets):
        if want is None:
            out.append({"fitted": got, "target": None, "rel_error": None})
        else:
            out.append({"fitted": got, "target": want,
                        "rel_error": abs(got - want) / abs(want) if want else abs(got)})
    return out
