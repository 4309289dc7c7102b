"""Exact continued-fraction, Euclidean-algorithm and Farey statistics,
Diophantine counters and the asymptotic constants they are compared with."""

from .errors import (BothZero, DegenerateDesign, EblError, MalformedDigits, NotCoprime,
                     OutOfRange, UnknownFormula, ZeroDenominator)
from .rational_core import (Region, TotientTable, ext_gcd, farey_count, farey_counts,
                            farey_sequence, farey_successor, make_fraction, mod_inverse,
                            parse_fraction, totient_table)
from .cf_engine import (CFStats, cf_stats, convergents, eval_minus, eval_ordinary,
                        minus_cf, minus_length, ordinary_cf)
from .euclid_sim import StepTrace, Variant, run_euclid
from .dedekind import dedekind_cf, dedekind_naive, sawtooth
from .farey_stats import (STATISTICS, SweepRecord, fraction_stat, ito_series, ito_statistic,
                          numerator_profile, sweep, sweep_reference)
from .dio_count import (BijectionReport, CaseId, N0_direct, SystemCount, count_R, count_R_case,
                        count_T0, delta_half, hyperbola_count, verify_bijection)
from .asym_const import (ConstantSet, FitResult, appendix_residual, constants, fit_log_model,
                         main_term, mobius_transfer, mobius_transfer_inverse)

__version__ = "0.1.0"
