import json
import os

import pytest

from paramark.core.config import settings
from paramark.main import main
from paramark.modelio import parse_model

from .conftest import KNUTH_YAO, TWO_COINS, TWO_COINS_PMDP, UNREALISABLE

posix_only = pytest.mark.skipif(os.name != "posix", reason="fake solver is a shell script")

FAIR_MODEL = "sat\n((define-fun x () Real (/ 1 2))\n (define-fun y () Real (/ 1 2)))\n"


@pytest.fixture(autouse=True)
def no_configured_solver(monkeypatch):
    monkeypatch.setattr(settings, "SOLVER", None)


@pytest.fixture
def run(capsys):
    """Run the CLI and return (exit code, stdout, stderr)."""
    def invoke(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


# --- instantiate / solution-function ---

def test_instantiate_pmc(run, write_file):
    code, out, _ = run("instantiate", "-m", write_file("ky.pm", KNUTH_YAO), "--val", "x=2/5,y=7/10")
    assert code == 0
    assert out == "1/10\n"


def test_instantiate_pmdp_with_verdict(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    code, out, _ = run("instantiate", "-m", path, "--val", "x=1/2,y=1/2", "--relop", "ge")
    assert code == 0
    assert out.splitlines() == ["min: 1/2", "max: 3/4", ">= 1/2: true"]


def test_instantiate_json(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("instantiate", "-m", path, "--val", "x=1/2,y=1/2", "--json")
    assert code == 0
    assert json.loads(out)["value"] == "3/4"


def test_instantiate_ill_defined(run, write_file):
    code, out, err = run("instantiate", "-m", write_file("bad.pm", UNREALISABLE), "--val", "x=1/2")
    assert code == 1
    assert out == ""
    assert err.startswith("error: valuation is not well-defined")


def test_solution_function(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    assert run("solution-function", "-m", path)[1] == "x*y - x + 1\n"
    _, out, _ = run("solution-function", "-m", path, "--per-state")
    assert "s1: y" in out.splitlines()


def test_solution_function_rejects_pmdp(run, write_file):
    code, _, err = run("solution-function", "-m", write_file("coins.pm", TWO_COINS_PMDP))
    assert code == 1
    assert err.startswith("error: ")


# --- check ---

def test_check_by_oracle_grid(run, write_file):
    path = write_file("ky.pm", KNUTH_YAO)
    code, out, _ = run("check", "-m", path, "--relop", "gt", "--threshold", "3/20", "--grid", "3")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "sat"
    assert "verified: true" in lines
    assert lines[-1] == "method: oracle"


def test_check_oracle_without_witness(run, write_file):
    path = write_file("ky.pm", KNUTH_YAO)
    code, out, _ = run("check", "-m", path, "--relop", "gt", "--threshold", "9/10", "--grid", "3")
    assert code == 0
    assert out.startswith("unknown: no-witness-at-resolution (9 point(s) checked)")


def test_check_qualitative_bound(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("check", "-m", path, "--relop", "le", "--threshold", "0")
    assert code == 0
    assert out.splitlines() == ["unsat", "method: qualitative"]


def test_check_boolean_domain(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    _, out, _ = run("check", "-m", path, "--relop", "le", "--threshold", "0", "--domain", "bool")
    assert out.splitlines()[:3] == ["sat", "witness: x=1,y=0", "verified: true"]


def test_check_json_report(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    _, out, _ = run("check", "-m", path, "--relop", "gt", "--threshold", "0", "--json")
    report = json.loads(out)
    assert report["method"] == "qualitative"
    assert report["answer"] is True


def test_check_threshold_outside_unit_interval(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("check", "-m", path, "--relop", "ge", "--threshold", "3/2")
    assert code == 0
    assert out.splitlines() == ["unsat", "method: trivial"]
    _, out, _ = run("check", "-m", path, "--relop", "ge", "--threshold", "0")
    assert out.splitlines() == ["sat", "witness: x=1/2,y=1/2", "verified: true", "method: trivial"]


@posix_only
def test_check_with_solver_verifies_witness(run, write_file, fake_solver):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("check", "-m", path, "--relop", "ge", "--solver", fake_solver(FAIR_MODEL))
    assert code == 0
    assert out.splitlines() == ["sat", "witness: x=1/2,y=1/2", "verified: true", "method: solver"]


@posix_only
def test_check_with_solver_unsat(run, write_file, fake_solver):
    path = write_file("coins.pm", TWO_COINS)
    _, out, _ = run("check", "-m", path, "--relop", "lt", "--threshold", "1/100", "--solver", fake_solver("unsat\n"))
    assert out.splitlines() == ["unsat", "method: solver"]


@posix_only
def test_check_rejects_bad_solver_witness(run, write_file, fake_solver):
    path = write_file("coins.pm", TWO_COINS)
    lying = "sat\n((define-fun x () Real 1.0)\n (define-fun y () Real 0.0))\n"
    code, _, err = run("check", "-m", path, "--relop", "ge", "--solver", fake_solver(lying))
    assert code == 3
    assert "re-verification" in err


@posix_only
def test_check_solver_unknown(run, write_file, fake_solver):
    path = write_file("coins.pm", TWO_COINS)
    code, _, _ = run("check", "-m", path, "--relop", "ge", "--solver", fake_solver("unknown\n"))
    assert code == 2


def test_check_missing_solver(run, write_file, tmp_path):
    path = write_file("coins.pm", TWO_COINS)
    code, _, err = run("check", "-m", path, "--relop", "ge", "--solver", str(tmp_path / "no-such-solver"))
    assert code == 2
    assert err.startswith("error: cannot run solver")


# --- qualitative ---

def test_qualitative_decision(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    code, out, _ = run("qualitative", "-m", path, "--kind", "safety")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "yes"
    assert lines[-1].startswith("strategy: ")


def test_qualitative_state_sets(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    _, out, _ = run("qualitative", "-m", path, "--val", "x=1/2,y=1/2")
    lines = out.splitlines()
    assert "zero_forall: s3" in lines
    assert "one_exists: s2" in lines


# --- encode ---

def test_encode_smtlib(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("encode", "-m", path, "--relop", "ge")
    assert code == 0
    assert out.startswith("; paramark encode: pmc-gp, >= 1/2")
    assert "(set-logic QF_NRA)" in out
    assert out.rstrip().endswith("(get-model)")


def test_encode_infix_and_json(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    _, out, _ = run("encode", "-m", path, "--relop", "lt", "--infix")
    assert "p_s0" in out
    _, out, _ = run("encode", "-m", path, "--relop", "lt", "--json")
    data = json.loads(out)
    assert data["size"] > 0 and "(check-sat)" in data["script"]


def test_encode_strategy_certificate(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    code, out, _ = run("encode", "-m", path, "--relop", "ge", "--strategy", "s0=beta,s1=alpha,s2=alpha,s3=alpha")
    assert code == 0
    assert "minimality certificate" in out.splitlines()[0]


def test_encode_bad_strategy_text(run, write_file):
    code, _, err = run("encode", "-m", write_file("coins.pm", TWO_COINS_PMDP), "--relop", "ge", "--strategy", "s0")
    assert code == 1
    assert "STATE=ACTION" in err


# --- reduce ---

def test_reduce_poly(run, tmp_path):
    out_path = tmp_path / "chain.pm"
    code, out, _ = run("reduce", "--gadget", "poly", "--poly", "x", "--out", str(out_path))
    assert code == 0 and out == ""
    text = out_path.read_text()
    assert "value = (f + 0) / 2" in text.splitlines()[0]
    assert parse_model(text).params == ("x",)


def test_reduce_sat3(run, write_file):
    cnf = write_file("f.cnf", "p cnf 2 2\n1 -2 0\n-1 2 0\n")
    code, out, _ = run("reduce", "--gadget", "sat3-positive", "--cnf", cnf)
    assert code == 0
    assert parse_model(out).init == "c1"


def test_reduce_threshold(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    _, out, _ = run("reduce", "--gadget", "threshold", "-m", path, "--threshold", "1/3")
    assert parse_model(out).init == "thr_init"


def test_reduce_needs_its_input(run):
    code, _, err = run("reduce", "--gadget", "threshold")
    assert code == 1
    assert "needs --model" in err


# --- oracle ---

def test_oracle_sweep(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    _, out, _ = run("oracle", "-m", path, "--relop", "ge", "--grid", "3")
    lines = out.splitlines()
    assert lines[:3] == ["checked: 9", "skipped: 0", "witnesses: 8 (grid search, not exhaustive)"]
    assert "  x=1/4,y=1/4: 13/16" in lines


def test_oracle_cross_check(run, write_file):
    path = write_file("coins.pm", TWO_COINS_PMDP)
    code, out, _ = run(
        "oracle", "-m", path, "--relop", "le", "--quantifier", "forall", "--domain", "wd",
        "--grid", "2", "--cross-check",
    )
    assert code == 0
    assert out.splitlines() == ["checked: 9", "counterexamples: 0"]


def test_oracle_cross_check_mutant(run, write_file):
    path = write_file("coins.pm", TWO_COINS)
    code, out, _ = run("oracle", "-m", path, "--relop", "ge", "--grid", "2", "--cross-check", "--mutate")
    assert code == 0
    # every interior grid point is in the domain, so the negated threshold disagrees everywhere
    assert out.splitlines()[:2] == ["checked: 4", "counterexamples: 4"]


# --- errors and usage ---

def test_parse_error_exit_code(run, write_file):
    path = write_file("broken.pm", "@type pmc\n@params x\n@states a\n@init a\na -> a : x $ 1\n")
    code, _, err = run("instantiate", "-m", path, "--val", "x=1")
    assert code == 1
    assert err.startswith("error: line 5, column 12")


def test_unreadable_model_file(run, tmp_path):
    code, _, err = run("solution-function", "-m", str(tmp_path / "missing.pm"))
    assert code == 1
    assert "cannot read" in err


def test_usage_errors(run):
    assert run("check")[0] == 1
    assert run("--version")[0] == 0
