import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from ebl import (DegenerateDesign, UnknownFormula, appendix_residual, constants, fit_log_model,
                 main_term, mobius_transfer, mobius_transfer_inverse, totient_table)
from ebl.asym_const import (APPENDIX_IDS, FORMULA_IDS, PHI_LEMMAS, appendix_lhs, appendix_ratio,
                            euler_gamma, zeta2_prime)
from ebl.verify import APPENDIX_PHI_POINTS, APPENDIX_RATIO_BOUNDS, APPENDIX_U_POINTS

K = constants()


def test_series_constants_against_mpmath():
    mpmath.mp.dps = 30
    assert euler_gamma() == pytest.approx(float(mpmath.euler), abs=1e-14)
    assert zeta2_prime() == pytest.approx(float(mpmath.zeta(2, derivative=1)), abs=1e-14)
    assert K.zeta2 == pytest.approx(1.644934066848, abs=1e-12)


def test_constant_identities():
    assert K.B1 == pytest.approx(math.log(2) / (2 * K.zeta2), abs=1e-15)
    assert K.C1 == pytest.approx(1 / (2 * K.zeta2), abs=1e-15)
    assert abs(2 * K.c1 - K.C1) < 1e-15
    assert abs(K.c2 - (K.C2 / 2 + 3 / 8)) < 1e-12
    assert abs(K.b1 - K.B1 / 2) < 1e-15
    assert abs(K.b2 - (K.B2 - 0.5) / 2) < 1e-15
    assert 2 * K.c2 > K.C2


def test_b2_closed_form():
    ratio = K.zeta2_prime / K.zeta2
    L2 = math.log(2)
    want = L2 / (4 * K.zeta2) * (3 * L2 + 4 * K.gamma - 2 * ratio - 3) - 0.25
    assert K.B2 == pytest.approx(want, abs=1e-15)


def test_main_term_examples():
    assert main_term("ito", math.exp(16)) == pytest.approx(1.0, abs=1e-14)
    assert main_term("zhabitskaya_leading_only", math.e) == pytest.approx(K.C1, abs=1e-15)
    assert main_term("r1", 1) == 0
    with pytest.raises(UnknownFormula):
        main_term("nope", 10)
    with pytest.raises(ValueError):
        main_term("ito", 0)


def test_main_terms_relations():
    Q = 12345.0
    assert main_term("sigma_pm", Q) == pytest.approx(0.75 * math.log(Q))
    assert main_term("bias_delta", Q) == pytest.approx(0.75 * math.log(Q), rel=1e-12)
    assert main_term("bias_s", Q) == pytest.approx((main_term("ustinov", Q) - 0.5) / 2)
    U = 321.0
    cases = sum(main_term(f"r{i}", U) for i in range(1, 6))
    assert cases == pytest.approx(main_term("aggregate_R", U), rel=1e-12)
    for fid in FORMULA_IDS:
        assert math.isfinite(main_term(fid, 1000.0))


def test_n0_transfers_to_restricted_sum():
    Q = 5000.0
    a, b = 1 / (8 * K.zeta2), (2 * K.gamma - K.zeta2_prime / K.zeta2 - 1.5 + 3 * K.zeta2 / 4) / (4 * K.zeta2)
    assert main_term("N0", Q) == pytest.approx(a * Q**2 * math.log(Q) ** 2 + b * Q**2 * math.log(Q))
    A, B = mobius_transfer(a, b)
    assert A * Q**2 * math.log(Q) ** 2 + B * Q**2 * math.log(Q) == pytest.approx(
        main_term("restricted_ell_sum", Q), rel=1e-12)


def test_mobius_examples():
    assert mobius_transfer(0, 0) == (0, 0)
    one, zero = mobius_transfer(K.zeta2, 2 * K.zeta2_prime)
    assert one == pytest.approx(1, abs=1e-15) and abs(zero) < 1e-15
    ratio = K.zeta2_prime / K.zeta2
    n0 = (1 / (8 * K.zeta2), (2 * K.gamma - ratio - 1.5 + 3 * K.zeta2 / 4) / (4 * K.zeta2))
    want = (1 / (8 * K.zeta2**2), (2 * K.gamma - 1.5 - 2 * ratio + 3 * K.zeta2 / 4) / (4 * K.zeta2**2))
    for got, exp in zip(mobius_transfer(*n0), want):
        assert abs(got - exp) <= 1e-12


@given(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3))
def test_mobius_round_trip(a, b):
    a2, b2 = mobius_transfer(*mobius_transfer_inverse(a, b))
    assert abs(a2 - a) <= 1e-12 * max(1, abs(a)) and abs(b2 - b) <= 1e-12 * max(1, abs(a), abs(b))


def test_fit_recovers_exact_model():
    qs = [10 * 2**k for k in range(14)]
    samples = [(q, 2 * math.log(q) ** 2 + 3 * math.log(q) + 5) for q in qs]
    fit = fit_log_model(samples, 2)
    assert fit.coeffs == pytest.approx((2, 3, 5), abs=1e-9)
    assert fit.rms_residual < 1e-9 and fit.Q_range == (10, qs[-1])
    again = fit_log_model([(q, fit.predict(q)) for q in qs], 2)
    assert again.coeffs == pytest.approx(fit.coeffs, abs=1e-9)


def test_fit_examples():
    fit = fit_log_model([(q, 7.0) for q in (10, 100, 1000, 10**4)], 1)
    assert fit.coeffs == pytest.approx((0, 7), abs=1e-12)
    slope = fit_log_model([(q, main_term("ito", q)) for q in (100, 1000, 10**4, 10**5)], 1).coeffs[0]
    assert slope == pytest.approx(1 / 16, abs=1e-9)
    assert fit.to_json()["schema"] == 1


def test_fit_errors():
    with pytest.raises(DegenerateDesign):
        fit_log_model([(10, 1.0), (10, 2.0), (10, 3.0), (10, 4.0)], 1)
    with pytest.raises(DegenerateDesign):
        fit_log_model([(10, 1.0), (20, 2.0)], 1)
    with pytest.raises(ValueError):
        fit_log_model([(1, 1.0), (20, 2.0), (30, 2.0)], 1)
    with pytest.raises(ValueError):
        fit_log_model([(10, 1.0), (20, 2.0), (30, 2.0)], 3)


def exact_lhs(lemma_id, x):
    """Rational left-hand sides by plain double loops (small arguments only)."""
    phi = totient_table(int(x) + 2).phi
    top = math.ceil(x) - 1
    F = Fraction
    if lemma_id == "phi_sum_quadratic":
        return sum(int(phi[q]) for q in range(1, top + 1))
    if lemma_id == "phi_over_q":
        return sum(F(int(phi[q]), q) for q in range(1, top + 1))
    if lemma_id == "phi_over_q2":
        return sum(F(int(phi[q]), q * q) for q in range(1, top + 1))
    if lemma_id == "phi_log_over_q2":
        return math.fsum(int(phi[q]) * math.log(q) / q**2 for q in range(1, top + 1))
    if lemma_id.startswith("double"):
        total = F(0)
        for n in range(1, top + 1):
            for k in range(1, n):
                if n + k <= x:
                    total += F(1, n * (n + k)) if lemma_id.endswith("n_nk") else F(1, k * (n + k))
        return total
    weight = {
        "kq_phi_over_kq2": lambda k, q: F(int(phi[q]), k * q * q),
        "kq_phi_over_q2": lambda k, q: F(int(phi[q]), q * q),
        "kq_phi_over_qk": lambda k, q: F(int(phi[q]), q * k),
        "kq_phi_k_over_q2": lambda k, q: F(int(phi[q]) * k, q * q),
        "kq_phi_over_k": lambda k, q: F(int(phi[q]), k),
    }[lemma_id]
    return sum((weight(k, q) for k in range(1, top + 1) for q in range(1, top + 1) if k + q < x), F(0))


@pytest.mark.parametrize("lemma_id", APPENDIX_IDS)
def test_appendix_lhs_against_exact_loops(lemma_id):
    for x in (2, 3, 10, 47, 80.5):
        assert appendix_lhs(lemma_id, x) == pytest.approx(float(exact_lhs(lemma_id, x)), rel=1e-12, abs=1e-12)


def test_appendix_edge_and_errors():
    # no (n, k) with k < n and n + k <= 2: the residual is minus the main term log 2 * log 2
    assert appendix_residual("double_sum_n_nk", 2) == -math.log(2) * math.log(2)
    with pytest.raises(UnknownFormula):
        appendix_residual("phi_cubed", 100)
    with pytest.raises(ValueError):
        appendix_residual("phi_over_q", 1)


@pytest.mark.parametrize("lemma_id", APPENDIX_IDS)
def test_appendix_ratios_within_recorded_bounds(lemma_id):
    pts = APPENDIX_PHI_POINTS if lemma_id in PHI_LEMMAS else APPENDIX_U_POINTS
    for x in pts:
        assert appendix_ratio(lemma_id, x) <= APPENDIX_RATIO_BOUNDS[lemma_id]


def test_phi_sum_residual_is_exact_integer_difference():
    x = 10**4
    lhs = exact_lhs("phi_sum_quadratic", x)
    assert appendix_residual("phi_sum_quadratic", x) == pytest.approx(lhs - x * x / (2 * K.zeta2), abs=1e-6)
