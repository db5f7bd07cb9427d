import random
from dataclasses import replace
from fractions import Fraction

import pytest

from paramark.core.config import settings
from paramark.errors import MissingVariable, SemanticError
from paramark.etr.encoder import EncodingRequest, encode
from paramark.etr.formula import BoolVar, atom, conj
from paramark.modelio import Cnf3, parse_polynomial
from paramark.models import validate
from paramark.oracle import (
    GridSpec, brute_force_sat, cross_check, eval_formula, flip_threshold, random_simple_model, sweep,
)
from paramark.schemas import Domain, EncodingStyle, GridDomain, Quantifier, Relop

HALF = Fraction(1, 2)


def test_grid_values():
    assert GridSpec(3).values() == [Fraction(1, 4), HALF, Fraction(3, 4)]
    assert GridSpec(2, GridDomain.WD_CLOSED).values() == [Fraction(0), HALF, Fraction(1)]
    boolean = GridSpec(7, GridDomain.BOOLEAN)
    assert boolean.values() == [0, 1] and boolean.exhaustive
    assert len(list(GridSpec(3).valuations(["x", "y"]))) == 9
    with pytest.raises(ValueError):
        GridSpec(0)


def test_sweep_two_coins(two_coins):
    report = sweep(two_coins, None, Quantifier.EXISTS, Relop.GE, HALF, GridSpec(3))
    assert report.checked == 9 and report.skipped == 0
    # 1 - x*(1 - y) < 1/2 only at x = 3/4, y = 1/4
    assert len(report.witnesses) == 8
    values = {tuple(w.val.values()): w.value for w in report.witnesses}
    assert values[(Fraction(1, 4), Fraction(1, 4))] == Fraction(13, 16)
    assert not report.exhaustive


def test_sweep_skips_ill_defined_points(unrealisable):
    report = sweep(unrealisable, None, Quantifier.EXISTS, Relop.GT, Fraction(0), GridSpec(5, GridDomain.WD_CLOSED))
    assert report.checked == 0
    assert report.skipped == 6
    assert not report.found


def test_sweep_pmdp_uses_deciding_extremum(two_coins_pmdp):
    fair_only = GridSpec(1)
    exists = sweep(two_coins_pmdp, None, Quantifier.EXISTS, Relop.GE, Fraction(3, 4), fair_only)
    forall = sweep(two_coins_pmdp, None, Quantifier.FORALL, Relop.GE, Fraction(3, 4), fair_only)
    assert exists.found and not forall.found


def test_eval_formula():
    formula = conj(atom(parse_polynomial("x*y"), Relop.GT, HALF), BoolVar("q"))
    assert eval_formula(formula, {"x": Fraction(1), "y": Fraction(3, 4), "q": True})
    assert not eval_formula(formula, {"x": Fraction(1), "y": Fraction(3, 4), "q": False})
    with pytest.raises(MissingVariable):
        eval_formula(formula, {"x": Fraction(1), "q": True})


@pytest.mark.parametrize("domain, grid", [
    (Domain.GP, GridSpec(4)),
    (Domain.WD, GridSpec(4, GridDomain.WD_CLOSED)),
])
@pytest.mark.parametrize("relop", list(Relop))
def test_cross_check_pmc(two_coins, domain, grid, relop):
    report = cross_check(EncodingRequest(model=two_coins, relop=relop, domain=domain), grid)
    assert report.checked == 25
    assert report.counterexamples == []


@pytest.mark.parametrize("relop", list(Relop))
def test_cross_check_solution_function_style(knuth_yao, relop):
    request = EncodingRequest(model=knuth_yao, relop=relop, style=EncodingStyle.SOLUTION_FUNCTION)
    assert cross_check(request, GridSpec(3)).counterexamples == []


@pytest.mark.parametrize("domain, grid", [
    (Domain.GP, GridSpec(3)),
    (Domain.WD, GridSpec(3, GridDomain.WD_CLOSED)),
])
@pytest.mark.parametrize("quantifier", list(Quantifier))
@pytest.mark.parametrize("relop", [Relop.LT, Relop.LE, Relop.GE, Relop.GT])
def test_cross_check_pmdp(two_coins_pmdp, zero_sets_pmdp, domain, grid, quantifier, relop):
    for model in (two_coins_pmdp, zero_sets_pmdp):
        request = EncodingRequest(model=model, relop=relop, quantifier=quantifier, domain=domain)
        assert cross_check(request, grid).counterexamples == []


def _seeds(count, fast):
    return [seed if seed < fast else pytest.param(seed, marks=pytest.mark.slow) for seed in range(count)]


def _random_requests(seed):
    rng = random.Random(seed)
    pmdp = seed % 2 == 1
    model = random_simple_model(rng, states=rng.randint(2, 6), params=rng.randint(1, 2), pmdp=pmdp)
    assert validate(model) == []
    quantifiers = list(Quantifier) if pmdp else [Quantifier.EXISTS]
    for quantifier in quantifiers:
        for relop in (Relop.LT, Relop.LE, Relop.GE, Relop.GT):
            for domain, grid in (
                (Domain.GP, GridSpec(settings.PROPERTY_GRID)),
                (Domain.WD, GridSpec(settings.PROPERTY_GRID, GridDomain.WD_CLOSED)),
            ):
                yield EncodingRequest(model=model, relop=relop, quantifier=quantifier, domain=domain), grid


@pytest.mark.parametrize("seed", _seeds(100, fast=10))
def test_cross_check_random_models(seed):
    for request, grid in _random_requests(seed):
        assert cross_check(request, grid).counterexamples == [], request


def test_cross_check_catches_a_wrong_encoding(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.GE)
    wrong = encode(replace(request, relop=Relop.LT))
    report = cross_check(request, GridSpec(3), formula=wrong)
    assert len(report.counterexamples) == report.checked == 9
    assert report.witnesses == []


def test_flip_threshold(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.GE)
    assert flip_threshold(encode(request), two_coins.init) == encode(replace(request, relop=Relop.LT))
    with pytest.raises(SemanticError):
        flip_threshold(encode(replace(request, relop=Relop.EQ)), two_coins.init)
    with pytest.raises(SemanticError):
        flip_threshold(encode(request), "s1")


@pytest.mark.parametrize("count", [20, pytest.param(100, marks=pytest.mark.slow)])
def test_flipped_relop_is_caught(count):
    caught = 0
    for seed in range(count):
        requests = list(_random_requests(seed))
        if any(
            cross_check(request, grid, formula=flip_threshold(encode(request), request.model.init)).counterexamples
            for request, grid in requests
        ):
            caught += 1
    assert caught >= 0.9 * count


def test_brute_force_sat():
    assert brute_force_sat(Cnf3(2, ((1, 2, 2), (-1, -1, -1))))
    assert not brute_force_sat(Cnf3(1, ((1, 1, 1), (-1, -1, -1))))


def test_report_read_model(two_coins):
    report = sweep(two_coins, None, Quantifier.EXISTS, Relop.GE, HALF, GridSpec(1))
    read = report.to_read()
    assert read.checked == 1
    assert read.witnesses[0].val == {"x": "1/2", "y": "1/2"}
    assert read.witnesses[0].value == "3/4"
