"""Command-line front end.

Exact rationals print as ``num/den``; floats print with 12 significant digits.
Tables go to stdout (or ``--out``), progress goes to stderr.  Exit codes:
0 success, 1 usage or input error, 2 failed verification suite.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import asym_const, dio_count, farey_stats, verify
from .cf_engine import (cf_stats, convergents, eval_minus, eval_ordinary, minus_cf,
                        ordinary_cf)
from .dedekind import dedekind_cf, dedekind_naive, sawtooth
from .errors import EblError
from .euclid_sim import run_euclid
from .rational_core import (Region, ext_gcd, farey_count, farey_sequence, farey_successor,
                            mod_inverse, parse_fraction, totient_table)

EXIT_OK, EXIT_USAGE, EXIT_VERIFY = 0, 1, 2

# dedekind sweeps are summed exactly up to this Q unless --exact says otherwise
EXACT_DEDEKIND_LIMIT = 2000

CSV_HEADER = ["Q", "region", "statistic", "sum_num", "sum_den", "farey_count", "mean"]


# targets for `fit --model`, highest power first; None = not compared
def _fit_targets(model: str, degree: int) -> list:
    k = asym_const.constants()
    table = {
        "ito": {1: [1 / 16, None]},
        "s-full": {1: [k.B1, k.B2]},
        "s-lower": {1: [k.b1, k.b2]},
        "ell-full": {2: [k.C1, k.C2, None]},
        "ell-lower": {2: [k.c1, k.c2, None]},
        "bias-ell": {1: [0.75, None]},
        "sigma-pm-lower": {1: [0.75, None]},
    }
    if model not in table:
        raise ValueError(f"unknown model {model!r}; choose from {', '.join(table)}")
    if degree not in table[model]:
        raise ValueError(f"model {model!r} is fitted with degree {next(iter(table[model]))}")
    return table[model][degree]


FIT_MODELS = ("ito", "s-full", "s-lower", "ell-full", "ell-lower", "bias-ell", "sigma-pm-lower")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_default(value):
    if isinstance(value, Fraction):
        return fmt(value)
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _dump_json(obj, out) -> None:
    json.dump(_round_floats(obj), out, default=_json_default, indent=2)
    out.write("\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _progress(message: str) -> None:
    print(message, file=sys.stderr, flush=True)


def _open_out(path: str | None, out):
    return open(path, "w", newline="") if path else _NoClose(out)


class _NoClose:
    def __init__(self, stream):
        self.stream = stream

    def __enter__(self):
        return self.stream

    def __exit__(self, *exc):
        self.stream.flush()
        return False


# ------------------------------------------------------------------ commands

def cmd_expand(args, out):
    x = args.x
    digits = minus_cf(x) if args.minus else ordinary_cf(x)
    print(",".join(map(str, digits)), file=out)


def cmd_eval(args, out):
    digits = args.digits
    print(fmt(eval_minus(digits) if args.minus else eval_ordinary(digits)), file=out)


def cmd_convergents(args, out):
    for p, q in convergents(ordinary_cf(args.x)):
        print(f"{p}/{q}", file=out)


def cmd_stats(args, out):
    x = args.x
    st = cf_stats(x)
    _dump_json({"schema": 1, "x": fmt(x), "s": st.s, "ell": st.ell, "sigma_odd": st.sigma_odd,
                "sigma_even": st.sigma_even, "sigma_pm": st.sigma_pm, "epsilon": st.epsilon,
                "steps_sub": st.steps_sub}, out)


def cmd_steps(args, out):
    x = args.x
    trace = run_euclid(x.numerator, x.denominator, args.algo)
    if args.trace:
        print(" -> ".join(f"({a},{b})" for a, b in trace.states)
              + (" ..." if trace.truncated else ""), file=out)
    print(trace.steps, file=out)


def cmd_dedekind(args, out):
    x = args.x
    value = dedekind_naive(x.numerator, x.denominator) if args.method == "naive" else dedekind_cf(x)
    print(fmt(value), file=out)


def cmd_sawtooth(args, out):
    print(fmt(sawtooth(args.x)), file=out)


def _exact_for(args, qmax):
    return args.exact if args.exact is not None else qmax <= EXACT_DEDEKIND_LIMIT


def cmd_sweep(args, out):
    stat = args.stat.replace("-", "_")
    if args.reference:
        region = Region(args.region)
        records = [farey_stats.SweepRecord(Q, region, stat, farey_stats.sweep_reference(Q, stat, region),
                                           farey_count(Q)) for Q in sorted(set(args.qs))]
    else:
        _progress(f"sweep {stat}/{args.region} up to Q={max(args.qs)}")
        records = farey_stats.sweep(args.qs, stat, args.region, threads=args.threads,
                                    exact_dedekind=_exact_for(args, max(args.qs)))
    with _open_out(args.out, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in records:
            total = r.exact_sum
            if isinstance(total, float):
                num, den = fmt(total), "1"
            else:
                total = Fraction(total)
                num, den = str(total.numerator), str(total.denominator)
            w.writerow([r.Q, r.region.value, r.statistic.replace("_", "-"), num, den,
                        r.farey_count, fmt(r.mean)])


def cmd_bias(args, out):
    stat = args.stat.replace("-", "_")
    _progress(f"bias {stat} up to Q={max(args.qs)}")
    lower = farey_stats.sweep(args.qs, stat, "lower", threads=args.threads)
    upper = farey_stats.sweep(args.qs, stat, "upper", threads=args.threads)
    with _open_out(args.out, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Q", "statistic", "sum_lower", "sum_upper", "farey_count", "mean"])
        for lo, up in zip(lower, upper):
            delta = Fraction(lo.exact_sum) - Fraction(up.exact_sum)
            w.writerow([lo.Q, stat.replace("_", "-"), fmt(lo.exact_sum), fmt(up.exact_sum),
                        lo.farey_count, fmt(float(delta / lo.farey_count))])


def cmd_ito(args, out):
    _progress(f"ito up to Q={max(args.qs)}")
    with _open_out(args.out, out) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["Q", "mean"])
        if len(set(args.qs)) == 1:
            series = [(args.qs[0], farey_stats.ito_statistic(args.qs[0], threads=args.threads))]
        else:
            series = farey_stats.ito_series(args.qs, threads=args.threads)
        for Q, value in series:
            w.writerow([Q, fmt(value)])


def cmd_profile(args, out):
    print(fmt(farey_stats.numerator_profile(args.b, args.stat.replace("-", "_"))), file=out)


def cmd_count(args, out):
    system = args.system
    if system == "t0":
        result = dio_count.count_T0(args.q)
    elif system == "r":
        result = dio_count.count_R(args.q)
    elif system == "n0":
        result = dio_count.SystemCount("N0", args.q, dio_count.N0_direct(args.q))
    else:
        result = dio_count.count_R_case(args.q, int(system[1:]))
    if args.json:
        _dump_json(result.to_json(), out)
    else:
        print(result.count, file=out)


def cmd_bijection(args, out):
    _dump_json(dio_count.verify_bijection(args.q).to_json(), out)


def cmd_verify(args, out):
    _progress(f"verify {args.suite}")
    report = verify.run_suite(args.suite, args.qmax)
    _dump_json(report, out)
    return EXIT_OK if report["ok"] else EXIT_VERIFY


def _read_samples(path: str) -> list[tuple[float, float]]:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no rows")
    ycol = "mean" if "mean" in rows[0] else "y" if "y" in rows[0] else None
    if "Q" not in rows[0] or ycol is None:
        raise ValueError(f"{path}: need columns Q and mean (or y)")
    return [(float(r["Q"]), float(r[ycol])) for r in rows]


def cmd_fit(args, out):
    fit = asym_const.fit_log_model(_read_samples(args.input), args.degree)
    report = {"schema": 1, "fit": fit.to_json()}
    if args.model:
        report["model"] = args.model
        report["comparison"] = asym_const.compare_fit(fit, _fit_targets(args.model, args.degree))
    report["constants"] = asym_const.constants().as_dict()
    _dump_json(report, out)


def cmd_farey(args, out):
    if args.successor:
        a, b = farey_successor(args.successor.numerator, args.successor.denominator, args.q)
        print(f"{a}/{b}", file=out)
        return
    if args.count:
        print(farey_count(args.q), file=out)
        return
    for x in farey_sequence(args.q, args.region):
        print(f"{x.numerator}/{x.denominator}", file=out)


def cmd_totient(args, out):
    table = totient_table(args.n)
    values = table.prefix_sums() if args.prefix else table.phi
    print(",".join(str(int(v)) for v in values[1:]), file=out)


def cmd_gcd(args, out):
    g, x, y = ext_gcd(args.a, args.b)
    print(f"{g} {x} {y}", file=out)


def cmd_inverse(args, out):
    print(mod_inverse(args.a, args.q), file=out)


def cmd_delta(args, out):
    print(dio_count.delta_half(args.q, args.side), file=out)


def cmd_hyperbola(args, out):
    print(dio_count.hyperbola_count(args.p, args.y, args.x, args.side), file=out)


def cmd_constants(args, out):
    _dump_json({"schema": 1, **asym_const.constants().as_dict()}, out)


def cmd_main_term(args, out):
    print(fmt(asym_const.main_term(args.formula, args.arg)), file=out)


def cmd_mobius(args, out):
    f = asym_const.mobius_transfer_inverse if args.inverse else asym_const.mobius_transfer
    print(" ".join(fmt(v) for v in f(args.a, args.b)), file=out)


def cmd_residual(args, out):
    value = asym_const.appendix_residual(args.lemma, args.x)
    if args.ratio:
        value = asym_const.appendix_ratio(args.lemma, args.x)
    print(fmt(value), file=out)


# -------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ebl", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for sweeps (default: $EBL_THREADS or 1)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    stats = [s.replace("_", "-") for s in farey_stats.STATISTICS]
    regions = [r.value for r in Region]

    p = sub.add_parser("expand", help="ordinary or minus continued fraction digits")
    p.add_argument("x", type=_fraction)
    p.add_argument("--minus", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("eval", help="evaluate a digit list")
    p.add_argument("digits", type=_int_list)
    p.add_argument("--minus", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("convergents", help="convergents of the ordinary expansion")
    p.add_argument("x", type=_fraction)
    p.set_defaults(func=cmd_convergents)

    p = sub.add_parser("stats", help="per-fraction statistics as JSON")
    p.add_argument("x", type=_fraction)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("steps", help="Euclidean algorithm step count")
    p.add_argument("x", type=_fraction)
    p.add_argument("--algo", choices=["sub", "div", "excess"], default="div")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_steps)

    p = sub.add_parser("dedekind", help="Dedekind sum D(a, b)")
    p.add_argument("x", type=_fraction)
    p.add_argument("--method", choices=["naive", "cf"], default="cf")
    p.set_defaults(func=cmd_dedekind)

    p = sub.add_parser("sawtooth", help="sawtooth function ((x))")
    p.add_argument("x", type=_fraction)
    p.set_defaults(func=cmd_sawtooth)

    p = sub.add_parser("sweep", help="region sums over Farey fractions (CSV)")
    p.add_argument("--qs", type=_int_list, required=True)
    p.add_argument("--stat", choices=stats, required=True)
    p.add_argument("--region", choices=regions, default="full")
    p.add_argument("--out")
    p.add_argument("--exact", action=argparse.BooleanOptionalAction, default=None,
                   help=f"exact Dedekind sums (default: only when Q <= {EXACT_DEDEKIND_LIMIT})")
    p.add_argument("--reference", action="store_true", help="slow per-fraction summation")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("bias", help="(lower sum - upper sum) / #F(Q) (CSV)")
    p.add_argument("--qs", type=_int_list, required=True)
    p.add_argument("--stat", choices=stats, default="ell")
    p.add_argument("--out")
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("ito", help="Sigma(Q): Dedekind sums over [0, 1/2) divided by #F(Q) (CSV)")
    p.add_argument("--qs", type=_int_list, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_ito)

    p = sub.add_parser("profile", help="mean statistic over numerators of a fixed denominator")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--stat", choices=stats, default="s")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("count", help="Diophantine system counts")
    p.add_argument("--system", choices=["t0", "r", "r1", "r2", "r3", "r4", "r5", "n0"],
                   required=True)
    p.add_argument("--q", type=int, required=True, help="bound Q (U for r1..r5)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("bijection", help="bijection report for one Q (JSON)")
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=cmd_bijection)

    p = sub.add_parser("verify", help="run a verification suite (JSON)")
    p.add_argument("--suite", choices=list(verify.SUITES), required=True)
    p.add_argument("--qmax", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("fit", help="least squares log model fit (JSON)")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--degree", type=int, choices=[1, 2], default=2)
    p.add_argument("--model", choices=FIT_MODELS)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("farey", help="Farey fractions of order Q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--region", choices=regions, default="full")
    p.add_argument("--successor", type=_fraction)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_farey)

    p = sub.add_parser("totient", help="phi(1..n)")
    p.add_argument("n", type=int)
    p.add_argument("--prefix", action="store_true", help="running sums instead")
    p.set_defaults(func=cmd_totient)

    p = sub.add_parser("gcd", help="extended gcd: g x y with a*x + b*y = g")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.set_defaults(func=cmd_gcd)

    p = sub.add_parser("inverse", help="least positive inverse of a mod q")
    p.add_argument("a", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(func=cmd_inverse)

    p = sub.add_parser("delta", help="coprime residues in the upper/lower half")
    p.add_argument("q", type=int)
    p.add_argument("--side", choices=["plus", "minus"], required=True)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("hyperbola", help="modular hyperbola counts A_p / B_p")
    p.add_argument("p", type=int)
    p.add_argument("y", type=_fraction)
    p.add_argument("x", type=_fraction)
    p.add_argument("--side", choices=["A", "B"], required=True)
    p.set_defaults(func=cmd_hyperbola)

    p = sub.add_parser("constants", help="closed-form constants (JSON)")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("main-term", help="evaluate an asymptotic main term")
    p.add_argument("formula", choices=asym_const.FORMULA_IDS)
    p.add_argument("arg", type=float)
    p.set_defaults(func=cmd_main_term)

    p = sub.add_parser("mobius", help="coefficient transfer under Moebius inversion")
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.add_argument("--inverse", action="store_true")
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("residual", help="auxiliary totient or harmonic sum minus its main term")
    p.add_argument("lemma", choices=asym_const.APPENDIX_IDS)
    p.add_argument("x", type=float)
    p.add_argument("--ratio", action="store_true", help="divide by the error envelope")
    p.set_defaults(func=cmd_residual)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    buffer = io.StringIO()
    try:
        code = args.func(args, buffer)
    except (EblError, ValueError, ZeroDivisionError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ebl {args.command}: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(buffer.getvalue())
    sys.stdout.flush()
    return code or EXIT_OK


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
