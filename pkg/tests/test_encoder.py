import random
from dataclasses import replace
from fractions import Fraction

import pytest

from paramark.errors import NotPmc, NotPmdp, SemanticError
from paramark.etr.encoder import (
    EncodingRequest, Variant, encode, encode_gp, encode_pmdp, encode_strategy_optimality, encode_wd, p_var,
    q_var,
)
from paramark.etr.formula import TRUE, And, BoolVar, conj, disj, render, variables
from paramark.modelio import parse_model
from paramark.models import ModelKind, enumerate_strategies, induced_pmc, instantiate
from paramark.oracle import canonical_assignment, eval_formula, random_simple_model
from paramark.quantitative import mc_reach_values, mdp_reach_extremum_values
from paramark.schemas import Domain, EncodingStyle, ExtremumMode, Quantifier, Relop

HALF = Fraction(1, 2)
FAIR = {"x": HALF, "y": HALF}


@pytest.mark.parametrize("quantifier, relop, variant", [
    (Quantifier.EXISTS, Relop.LT, Variant.EXISTS_UPPER),
    (Quantifier.EXISTS, Relop.GE, Variant.EXISTS_LOWER),
    (Quantifier.FORALL, Relop.LE, Variant.FORALL_UPPER),
    (Quantifier.FORALL, Relop.GT, Variant.FORALL_LOWER),
])
def test_pmdp_variants(two_coins_pmdp, quantifier, relop, variant):
    request = EncodingRequest(model=two_coins_pmdp, relop=relop, quantifier=quantifier)
    assert request.variant == variant


def test_pmc_variants(two_coins):
    assert EncodingRequest(model=two_coins, relop=Relop.GE).variant == Variant.PMC_GP
    assert EncodingRequest(model=two_coins, relop=Relop.GE, domain=Domain.WD).variant == Variant.PMC_WD
    styled = EncodingRequest(model=two_coins, relop=Relop.GE, style=EncodingStyle.SOLUTION_FUNCTION)
    assert styled.variant == Variant.SOLUTION_FUNCTION


def test_pmc_file_encoded_as_pmdp(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.LE, kind=ModelKind.PMDP)
    assert request.variant == Variant.EXISTS_UPPER
    encode(request)


def test_rejected_requests(two_coins, two_coins_pmdp):
    with pytest.raises(SemanticError):
        EncodingRequest(model=two_coins, relop=Relop.GE, domain=Domain.BOOL)
    with pytest.raises(SemanticError):
        EncodingRequest(model=two_coins_pmdp, relop=Relop.GE, style=EncodingStyle.SOLUTION_FUNCTION)
    with pytest.raises(SemanticError):
        encode(EncodingRequest(model=two_coins_pmdp, relop=Relop.EQ))
    with pytest.raises(NotPmc):
        encode(EncodingRequest(model=two_coins_pmdp, relop=Relop.GE, kind=ModelKind.PMC))
    with pytest.raises(NotPmdp):
        encode_pmdp(EncodingRequest(model=two_coins, relop=Relop.GE))


def test_auxiliary_name_clash():
    model = parse_model("@type pmc\n@params p_a\n@states a\n@init a\n@targets a\na -> a : 1\n")
    with pytest.raises(SemanticError):
        encode(EncodingRequest(model=model, relop=Relop.GE))


def test_domain_formulas(two_coins):
    wd = encode_wd(two_coins)
    gp = encode_gp(two_coins)
    corner = {"x": Fraction(1), "y": Fraction(0)}
    assert eval_formula(wd, corner)
    assert not eval_formula(gp, corner)
    assert eval_formula(gp, FAIR)
    assert not eval_formula(wd, {"x": Fraction(3, 2), "y": HALF})


def test_pmc_gp_encoding_holds_under_canonical_values(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.GE)
    formula = encode(request)
    assignment = canonical_assignment(request, FAIR)
    assert assignment[p_var("s0")] == Fraction(3, 4)
    assert eval_formula(formula, assignment)
    assert not eval_formula(encode(replace(request, relop=Relop.LT)), assignment)


def test_pmc_wd_encoding_flags_reachable_states(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.GE, domain=Domain.WD)
    formula = encode(request)
    _, bools = variables(formula)
    assert q_var("s3") in bools
    corner = {"x": Fraction(1), "y": Fraction(1)}
    assignment = canonical_assignment(request, corner)
    assert assignment[q_var("s1")] and not assignment[q_var("s3")]
    assert eval_formula(formula, assignment)


def test_solution_function_style(two_coins):
    request = EncodingRequest(model=two_coins, relop=Relop.GE, style=EncodingStyle.SOLUTION_FUNCTION)
    formula = encode(request)
    reals, bools = variables(formula)
    assert set(reals) == {"x", "y"}
    assert bools == []
    assert eval_formula(formula, FAIR)
    assert not eval_formula(formula, {"x": Fraction(9, 10), "y": Fraction(1, 10)})


def test_strategy_optimality_certificate(two_coins_pmdp):
    minimal = encode_strategy_optimality(two_coins_pmdp, {"s0": "beta"}, None, Relop.GE, ExtremumMode.MIN)
    assert eval_formula(minimal, FAIR)
    not_minimal = encode_strategy_optimality(two_coins_pmdp, {"s0": "alpha"}, None, Relop.GE, ExtremumMode.MIN)
    assert not eval_formula(not_minimal, FAIR)
    maximal = encode_strategy_optimality(two_coins_pmdp, {"s0": "alpha"}, None, Relop.GE, ExtremumMode.MAX)
    assert eval_formula(maximal, FAIR)


def test_certificate_without_threshold(two_coins_pmdp):
    bare = encode_strategy_optimality(two_coins_pmdp, {"s0": "beta"}, None, None)
    assert eval_formula(bare, FAIR)
    # the minimum at the fair coins is exactly 1/2
    assert not eval_formula(encode_strategy_optimality(two_coins_pmdp, {"s0": "beta"}, None, Relop.GT), FAIR)


@pytest.mark.parametrize("seed", range(20))
def test_minimality_certificate_on_random_pmdps(seed):
    rng = random.Random(seed)
    pmdp = random_simple_model(rng, states=rng.randint(2, 5), params=1, pmdp=True)
    strategies = list(enumerate_strategies(pmdp))
    certificates = [encode_strategy_optimality(pmdp, strategy, None, None) for strategy in strategies]
    for k in range(1, 11):
        val = {x: Fraction(k, 11) for x in pmdp.params}
        minimum, _ = mdp_reach_extremum_values(instantiate(pmdp, val), None, ExtremumMode.MIN)
        minimal = 0
        for strategy, certificate in zip(strategies, certificates):
            values = mc_reach_values(instantiate(induced_pmc(pmdp, strategy), val))
            attains = values == minimum
            minimal += attains
            assert eval_formula(certificate, val) == attains, (strategy, val)
        assert minimal >= 1


def test_formula_builders_flatten():
    a, b, c = BoolVar("a"), BoolVar("b"), BoolVar("c")
    nested = conj(a, conj(b, c), TRUE)
    assert isinstance(nested, And) and nested.args == (a, b, c)
    assert conj(a) == a
    assert disj(a, TRUE) == TRUE
    assert render(conj(a, disj(b, c))) == "(a & (b | c))"
