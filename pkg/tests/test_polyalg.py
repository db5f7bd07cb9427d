from fractions import Fraction

import pytest

from paramark.core.config import settings
from paramark.errors import ExponentLimitExceeded, MissingParameter
from paramark.modelio import parse_polynomial
from paramark.polyalg import (
    ONE, ZERO, Polynomial, RationalFunction, canonical_monomial, poly_arith, poly_eval, rf_equal,
)

x = Polynomial.var("x")
y = Polynomial.var("y")


def test_printing_is_grlex_descending_with_constant_last():
    assert str(x * y + 1 - x) == "x*y - x + 1"
    assert str(-x) == "-x"
    assert str(ZERO) == "0"
    assert str(Fraction(1, 2) * x ** 2 + Fraction(1, 3) * y) == "1/2*x^2 + 1/3*y"


def test_zero_coefficients_are_dropped():
    assert (x - x).is_zero()
    assert (x + y - y) == x
    assert Polynomial({(("x", 1),): 0}).term_count() == 0


def test_canonical_monomial_merges_and_sorts():
    assert canonical_monomial([("y", 1), ("x", 2), ("y", 2)]) == (("x", 2), ("y", 3))
    assert canonical_monomial({"x": 0}) == ()
    with pytest.raises(ValueError):
        canonical_monomial({"x": -1})


def test_eval_is_exact():
    f = x * y + 1 - x
    assert poly_eval(f, {"x": Fraction(2, 5), "y": Fraction(7, 10)}) == Fraction(22, 25)


def test_eval_missing_parameter():
    with pytest.raises(MissingParameter) as exc:
        poly_eval(x + y, {"x": Fraction(1)})
    assert exc.value.param == "y"


def test_arith_ring_laws():
    f = parse_polynomial("x^2 - 2*x*y + 3")
    g = parse_polynomial("y - 1/2")
    assert f * (g + ONE) == f * g + f
    assert poly_arith("sub", f, f).is_zero()
    assert poly_arith("mul", x, x, x) == x ** 3
    assert poly_arith("pow", x - 1, 2) == x * x - 2 * x + 1
    assert poly_arith("neg", f) == -f


def test_unknown_operation():
    with pytest.raises(ValueError):
        poly_arith("div", x, y)


def test_pow_zero_is_one():
    assert (x + y) ** 0 == ONE


def test_exponent_limit(monkeypatch):
    monkeypatch.setattr(settings, "EXPONENT_LIMIT", 4)
    with pytest.raises(ExponentLimitExceeded):
        x ** 5
    with pytest.raises(ExponentLimitExceeded):
        (x ** 3) * (x ** 2)


def test_degree_and_variables():
    f = parse_polynomial("x^3*y + y^2 - 7")
    assert f.degree() == 4
    assert f.max_exponent() == 3
    assert f.variables() == ["x", "y"]
    assert f.constant_value() == -7


def test_rational_function_equality_is_cross_multiplication():
    r1 = RationalFunction(x, x + y)
    r2 = RationalFunction(2 * x, 2 * x + 2 * y)
    assert rf_equal(r1, r2)
    assert r1 == r2
    assert not rf_equal(r1, RationalFunction(y, x + y))


def test_rational_function_is_not_gcd_reduced():
    r = RationalFunction(x * x - 1, x - 1)
    assert r.den == x - 1
    assert r == RationalFunction(x + 1)


def test_rational_function_arithmetic():
    r = RationalFunction(x, 1 - y)
    s = 1 - r
    assert s.evaluate({"x": Fraction(1, 4), "y": Fraction(1, 2)}) == Fraction(1, 2)
    assert (r / r) == RationalFunction(ONE)
    with pytest.raises(ZeroDivisionError):
        RationalFunction(x, ZERO)
    with pytest.raises(ZeroDivisionError):
        r.evaluate({"x": Fraction(1), "y": Fraction(1)})


def test_constant_denominator_is_folded():
    r = RationalFunction(x, 2)
    assert r.is_polynomial()
    assert r.num == Fraction(1, 2) * x
