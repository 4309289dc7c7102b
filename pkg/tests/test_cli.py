import csv
import io
import json
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

import pytest

import ebl
from ebl import cli


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = cli.main(list(argv))
        except SystemExit as exc:
            code = exc.code
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return out


def test_examples():
    assert ok("steps", "11/3", "--algo", "sub") == "6\n"
    assert ok("dedekind", "1/3") == "1/18\n"
    assert ok("count", "--system", "r", "--q", "4") == "1\n"


def test_simple_commands():
    assert ok("expand", "3/11") == "3,1,2\n"
    assert ok("expand", "3/11", "--minus") == "2,2,3,2\n"
    assert ok("eval", "2,2,3,2", "--minus") == "3/11\n"
    assert ok("eval", "3,1,2") == "3/11\n"
    assert ok("convergents", "3/11").split() == ["0/1", "1/3", "1/4", "3/11"]
    assert json.loads(ok("stats", "3/11"))["ell"] == 4
    assert ok("steps", "11/3", "--algo", "excess", "--trace") == "(11,3) -> (3,1) -> (1,0)\n2\n"
    assert ok("dedekind", "3/11", "--method", "naive") == ok("dedekind", "3/11")
    assert ok("sawtooth", "--", "-1/4") == "1/4\n"
    assert ok("count", "--system", "t0", "--q", "4") == "3\n"
    assert ok("count", "--system", "n0", "--q", "4") == "5\n"
    assert ok("count", "--system", "r1", "--q", "1") == "0\n"
    assert json.loads(ok("count", "--system", "r", "--q", "4", "--json"))["count"] == 1
    assert json.loads(ok("bijection", "--q", "4"))["ok"] is True
    assert ok("profile", "--b", "5", "--stat", "s") == "2\n"
    assert ok("farey", "--q", "5", "--region", "lower").split() == ["0/1", "1/5", "1/4", "1/3", "2/5"]
    assert ok("farey", "--q", "5", "--count") == "11\n"
    assert ok("farey", "--q", "5", "--successor", "1/3") == "2/5\n"
    assert ok("totient", "6") == "1,1,2,2,4,2\n"
    assert ok("totient", "6", "--prefix") == "1,2,4,6,10,12\n"
    assert ok("gcd", "11", "3") == "1 -1 4\n"
    assert ok("inverse", "3", "5") == "2\n"
    assert ok("delta", "5", "--side", "plus") == "2\n"
    assert ok("hyperbola", "5", "0", "5", "--side", "A") == "2\n"
    assert ok("main-term", "ito", "8886110.520507872") == "1\n"
    assert ok("mobius", "0", "0") == "0 0\n"
    assert ok("mobius", "1", "2", "--inverse") != ""
    assert float(ok("residual", "double_sum_n_nk", "2")) == pytest.approx(-0.480453013918)
    assert float(ok("residual", "phi_over_q", "1000", "--ratio")) < 1
    assert json.loads(ok("constants"))["zeta2"] == pytest.approx(1.64493406685)


def test_sweep_csv(tmp_path):
    rows = list(csv.reader(io.StringIO(ok("sweep", "--qs", "5,3", "--stat", "ell", "--region", "lower"))))
    assert rows[0] == cli.CSV_HEADER
    assert rows[1] == ["3", "lower", "ell", "2", "1", "5", "0.4"]
    assert rows[2] == ["5", "lower", "ell", "11", "1", "11", "1"]
    out = tmp_path / "d.csv"
    assert ok("sweep", "--qs", "3", "--stat", "dedekind", "--region", "lower", "--out", str(out)) == ""
    assert out.read_text().splitlines()[1] == "3,lower,dedekind,1,18,5,0.0111111111111"
    ref = ok("sweep", "--qs", "10", "--stat", "sigma-pm", "--region", "full", "--reference")
    assert ref == ok("sweep", "--qs", "10", "--stat", "sigma-pm", "--region", "full")
    approx = ok("sweep", "--qs", "10", "--stat", "dedekind", "--region", "lower", "--no-exact")
    assert approx.splitlines()[1].split(",")[4] == "1"


def test_ito_bias_and_fit(tmp_path):
    path = tmp_path / "ito.csv"
    ok("ito", "--qs", "100,200,400,800,1600", "--out", str(path))
    report = json.loads(ok("fit", "--in", str(path), "--degree", "1", "--model", "ito"))
    assert report["schema"] == 1
    assert report["comparison"][0]["rel_error"] < 0.05
    assert ok("ito", "--qs", "3") == "Q,mean\n3,0.0111111111111\n"
    rows = list(csv.DictReader(io.StringIO(ok("bias", "--qs", "50,100"))))
    assert [r["Q"] for r in rows] == ["50", "100"]
    code, _, err = run("fit", "--in", str(path), "--degree", "2", "--model", "ito")
    assert code == 1 and "degree" in err


def test_verify_exit_codes():
    code, out, _ = run("verify", "--suite", "partition", "--qmax", "10")
    assert code == 0 and json.loads(out)["ok"] is True
    with mock.patch.object(ebl.verify, "run_suite", return_value={"schema": 1, "ok": False}):
        code, out, _ = run("verify", "--suite", "identities", "--qmax", "5")
    assert code == 2 and json.loads(out)["ok"] is False


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["steps", "11/3", "--algo", "binary"], ["sweep", "--qs", "x", "--stat", "s"],
    ["steps", "1/0"], ["count", "--system", "t0"],
])
def test_usage_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and err


@pytest.mark.parametrize("argv", [
    ["inverse", "2", "4"], ["expand", "3/2"], ["sweep", "--qs", "0", "--stat", "s"],
    ["fit", "--in", "/nonexistent.csv"], ["residual", "phi_over_q", "1"],
])
def test_input_errors_exit_1(argv):
    code, out, err = run(*argv)
    assert code == 1 and out == "" and "error" in err


def test_progress_goes_to_stderr():
    code, out, err = run("sweep", "--qs", "5", "--stat", "s")
    assert code == 0 and "sweep" in err and "sweep" not in out


def test_threads_do_not_change_output():
    base = ok("sweep", "--qs", "300,2500", "--stat", "dedekind", "--region", "lower")
    assert ok("--threads", "3", "sweep", "--qs", "300,2500", "--stat", "dedekind",
              "--region", "lower") == base


def test_byte_identical_subprocess_runs():
    argv = [sys.executable, "-m", "ebl", "sweep", "--qs", "20,40", "--stat", "ell", "--region", "full"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"Q,region")


# every library operation and one command that reaches it
COVERAGE = {
    "ebl.rational_core.make_fraction": ["steps", "11/3"],
    "ebl.cli.parse_fraction": ["dedekind", "1/3"],
    "ebl.cli.ext_gcd": ["gcd", "4", "6"],
    "ebl.cli.mod_inverse": ["inverse", "3", "5"],
    "ebl.cli.totient_table": ["totient", "10"],
    "ebl.cli.farey_count": ["farey", "--q", "5", "--count"],
    "ebl.cli.farey_sequence": ["farey", "--q", "5"],
    "ebl.cli.farey_successor": ["farey", "--q", "5", "--successor", "1/3"],
    "ebl.cli.ordinary_cf": ["expand", "3/11"],
    "ebl.cli.eval_ordinary": ["eval", "3,1,2"],
    "ebl.cli.minus_cf": ["expand", "3/11", "--minus"],
    "ebl.cli.eval_minus": ["eval", "2,2", "--minus"],
    "ebl.cli.convergents": ["convergents", "3/11"],
    "ebl.cli.cf_stats": ["stats", "3/11"],
    "ebl.cli.run_euclid": ["steps", "11/3", "--algo", "div"],
    "ebl.cli.sawtooth": ["sawtooth", "1/3"],
    "ebl.cli.dedekind_naive": ["dedekind", "1/3", "--method", "naive"],
    "ebl.cli.dedekind_cf": ["dedekind", "1/3"],
    "ebl.farey_stats.sweep": ["sweep", "--qs", "5", "--stat", "s"],
    "ebl.farey_stats.sweep_reference": ["sweep", "--qs", "5", "--stat", "s", "--reference"],
    "ebl.farey_stats.ito_statistic": ["ito", "--qs", "5"],
    "ebl.farey_stats.ito_series": ["ito", "--qs", "5,6"],
    "ebl.farey_stats.numerator_profile": ["profile", "--b", "5"],
    "ebl.dio_count.count_T0": ["count", "--system", "t0", "--q", "4"],
    "ebl.dio_count.count_R": ["count", "--system", "r", "--q", "4"],
    "ebl.dio_count.count_R_case": ["count", "--system", "r3", "--q", "3"],
    "ebl.dio_count.N0_direct": ["count", "--system", "n0", "--q", "4"],
    "ebl.dio_count.verify_bijection": ["bijection", "--q", "4"],
    "ebl.dio_count.delta_half": ["delta", "5", "--side", "minus"],
    "ebl.dio_count.hyperbola_count": ["hyperbola", "5", "0", "5", "--side", "B"],
    "ebl.asym_const.constants": ["constants"],
    "ebl.asym_const.main_term": ["main-term", "ustinov", "100"],
    "ebl.asym_const.mobius_transfer": ["mobius", "1", "1"],
    "ebl.asym_const.mobius_transfer_inverse": ["mobius", "1", "1", "--inverse"],
    "ebl.asym_const.appendix_residual": ["residual", "phi_over_q", "50"],
    "ebl.verify.run_suite": ["verify", "--suite", "inversion", "--qmax", "20"],
}


@pytest.mark.parametrize("target", sorted(COVERAGE))
def test_every_operation_is_reachable(target):
    module_name, attr = target.rsplit(".", 1)
    module = sys.modules[module_name]
    real = getattr(module, attr)
    with mock.patch.object(module, attr, wraps=real) as spy:
        ok(*COVERAGE[target])
    assert spy.called


def test_fit_is_reachable(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("Q,y\n10,1\n100,2\n1000,3\n10000,4\n")
    with mock.patch.object(ebl.asym_const, "fit_log_model", wraps=ebl.asym_const.fit_log_model) as spy:
        report = json.loads(ok("fit", "--in", str(path), "--degree", "1"))
    assert spy.called and report["fit"]["coeffs"][0] == pytest.approx(1 / 2.302585093, rel=1e-9)


def test_suites_cover_all_names():
    assert set(ebl.verify.SUITES) == {"identities", "dedekind", "bijection", "hyperbola",
                                      "inversion", "partition", "appendix"}
