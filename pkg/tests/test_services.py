from fractions import Fraction

import pytest

from paramark.core.config import settings
from paramark.errors import SemanticError
from paramark.services import run_check
from paramark.schemas import Domain, Quantifier, Relop

HALF = Fraction(1, 2)


@pytest.fixture(autouse=True)
def no_configured_solver(monkeypatch):
    monkeypatch.setattr(settings, "SOLVER", None)


@pytest.mark.parametrize("domain", [Domain.GP, Domain.WD])
@pytest.mark.parametrize("relop, threshold", [
    (Relop.GE, Fraction(0)),
    (Relop.LE, Fraction(1)),
    (Relop.GT, Fraction(-1)),
    (Relop.LT, Fraction(3, 2)),
])
def test_threshold_met_everywhere(two_coins, relop, threshold, domain):
    report = run_check(two_coins, None, Quantifier.EXISTS, relop, threshold, domain=domain)
    assert report.answer is True
    assert report.status == "decided"
    assert report.witness == {"x": "1/2", "y": "1/2"}
    assert report.verified


@pytest.mark.parametrize("domain", [Domain.GP, Domain.WD])
@pytest.mark.parametrize("relop, threshold", [
    (Relop.GT, Fraction(1)),
    (Relop.LT, Fraction(0)),
    (Relop.GE, Fraction(3, 2)),
    (Relop.LE, Fraction(-1)),
    (Relop.EQ, Fraction(2)),
])
def test_threshold_met_nowhere(two_coins, relop, threshold, domain):
    report = run_check(two_coins, None, Quantifier.EXISTS, relop, threshold, domain=domain)
    assert report.answer is False
    assert report.method == "trivial"
    assert report.witness is None


@pytest.mark.parametrize("quantifier", list(Quantifier))
def test_trivial_thresholds_on_pmdp(two_coins_pmdp, quantifier):
    assert run_check(two_coins_pmdp, None, quantifier, Relop.LE, Fraction(1)).answer is True
    assert run_check(two_coins_pmdp, None, quantifier, Relop.GT, Fraction(1)).answer is False
    assert run_check(two_coins_pmdp, None, quantifier, Relop.LT, Fraction(0)).answer is False


def test_empty_domain_has_no_point(unrealisable):
    report = run_check(unrealisable, None, Quantifier.EXISTS, Relop.GE, Fraction(0), domain=Domain.WD, grid=4)
    assert report.answer is None
    assert report.status == "no-witness-at-resolution"
    assert report.checked == 5


def test_equality_with_qualitative_bounds(two_coins):
    # 1 - x*(1 - y) is 0 only at x = 1, y = 0 and 1 only when x*(1 - y) = 0
    zero_wd = run_check(two_coins, None, Quantifier.EXISTS, Relop.EQ, Fraction(0), domain=Domain.WD)
    assert zero_wd.method == "qualitative" and zero_wd.answer is True
    assert run_check(two_coins, None, Quantifier.EXISTS, Relop.EQ, Fraction(0), domain=Domain.GP).answer is False
    assert run_check(two_coins, None, Quantifier.EXISTS, Relop.EQ, Fraction(1), domain=Domain.WD).answer is True
    assert run_check(two_coins, None, Quantifier.EXISTS, Relop.EQ, Fraction(1), domain=Domain.GP).answer is False


def test_equality_needs_a_pmc(two_coins_pmdp):
    with pytest.raises(SemanticError):
        run_check(two_coins_pmdp, None, Quantifier.EXISTS, Relop.EQ, Fraction(0))


def test_interior_threshold_uses_the_oracle(two_coins):
    report = run_check(two_coins, None, Quantifier.EXISTS, Relop.GE, HALF, grid=1)
    assert report.method == "oracle"
    assert report.answer is True
    assert report.witness == {"x": "1/2", "y": "1/2"}
