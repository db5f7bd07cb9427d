# paramark/polyalg.py
"""Exact sparse multivariate polynomials and (unreduced) rational functions over Q.

A monomial is a tuple of ``(parameter, exponent)`` pairs sorted by parameter id,
with no zero exponents; the empty tuple is the constant monomial. Polynomials map
monomials to non-zero ``Fraction`` coefficients and are immutable.
"""
import functools
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Tuple, Union

from .core.config import settings
from .errors import ExponentLimitExceeded, MissingParameter

Monomial = Tuple[Tuple[str, int], ...]
Valuation = Mapping[str, Fraction]
Scalar = Union[int, Fraction]

CONSTANT_MONOMIAL: Monomial = ()


# --- Monomials ---

def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def canonical_monomial(exponents: Union[Monomial, Mapping[str, int]]) -> Monomial:
    items = exponents.items() if isinstance(exponents, Mapping) else exponents
    merged: Dict[str, int] = {}
    for var, exp in items:
        if exp < 0:
            raise ValueError(f"negative exponent {exp} for {var}")
        merged[var] = merged.get(var, 0) + exp
    return tuple(sorted((v, e) for v, e in merged.items() if e))


def _mono_mul(a: Monomial, b: Monomial, limit: int) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for var, exp in b:
        exps[var] = exps.get(var, 0) + exp
        if exps[var] > limit:
            raise ExponentLimitExceeded(
                f"exponent of {var} would reach {exps[var]}, limit is {limit}"
            )
    return tuple(sorted(exps.items()))


def _grlex_cmp(a: Monomial, b: Monomial) -> int:
    da, db = monomial_degree(a), monomial_degree(b)
    if da != db:
        return -1 if da < db else 1
    ea, eb = dict(a), dict(b)
    for var in sorted(set(ea) | set(eb)):
        xa, xb = ea.get(var, 0), eb.get(var, 0)
        if xa != xb:
            return -1 if xa < xb else 1
    return 0


grlex_key = functools.cmp_to_key(_grlex_cmp)


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    return "*".join(var if exp == 1 else f"{var}^{exp}" for var, exp in m)


# --- Polynomials ---

class Polynomial:
    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] = None):
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = canonical_monomial(mono)
            clean[key] = clean.get(key, Fraction(0)) + Fraction(coeff)
        self._terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        poly = cls.__new__(cls)
        poly._terms = {m: c for m, c in terms.items() if c}
        return poly

    @classmethod
    def constant(cls, value: Scalar) -> "Polynomial":
        return cls._raw({CONSTANT_MONOMIAL: Fraction(value)})

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        return cls._raw({((name, 1),): Fraction(1)})

    # -- inspection --

    @property
    def terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(canonical_monomial(mono), Fraction(0))

    def term_count(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == CONSTANT_MONOMIAL for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(CONSTANT_MONOMIAL, Fraction(0))

    def degree(self) -> int:
        return max((monomial_degree(m) for m in self._terms), default=0)

    def max_exponent(self) -> int:
        return max((e for m in self._terms for _, e in m), default=0)

    def variables(self) -> List[str]:
        return sorted({v for m in self._terms for v, _ in m})

    def evaluate(self, val: Valuation) -> Fraction:
        total = Fraction(0)
        for mono, coeff in self._terms.items():
            value = coeff
            for var, exp in mono:
                if var not in val:
                    raise MissingParameter(var)
                value *= Fraction(val[var]) ** exp
            total += value
        return total

    # -- arithmetic --

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, coeff in other._terms.items():
            out[mono] = out.get(mono, Fraction(0)) + coeff
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        limit = settings.EXPONENT_LIMIT
        out: Dict[Monomial, Fraction] = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                mono = _mono_mul(ma, mb, limit)
                out[mono] = out.get(mono, Fraction(0)) + ca * cb
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {n!r}")
        if n == 0:
            return ONE
        limit = settings.EXPONENT_LIMIT
        if self.max_exponent() * n > limit:
            raise ExponentLimitExceeded(
                f"raising to the power {n} exceeds the exponent limit {limit}"
            )
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- comparison / hashing --

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- printing --

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (mono, coeff) in enumerate(self.terms):
            negative = coeff < 0
            magnitude = -coeff if negative else coeff
            if mono == CONSTANT_MONOMIAL:
                body = format_rational(magnitude)
            elif magnitude == 1:
                body = format_monomial(mono)
            else:
                body = f"{format_rational(magnitude)}*{format_monomial(mono)}"
            if i == 0:
                parts.append(f"-{body}" if negative else body)
            else:
                parts.append(f" - {body}" if negative else f" + {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Polynomial.constant(value)
    return NotImplemented


def as_polynomial(value: Union[Polynomial, Scalar]) -> Polynomial:
    poly = _coerce(value)
    if poly is NotImplemented:
        raise TypeError(f"cannot use {value!r} as a polynomial")
    return poly


ZERO = Polynomial()
ONE = Polynomial.constant(1)


# --- Rational functions ---

class RationalFunction:
    """num/den, deliberately not gcd-reduced; equality is by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = as_polynomial(num)
        den = ONE if den is None else as_polynomial(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            den = ONE
        elif den.is_constant():
            scale = den.constant_value()
            if scale != 1:
                num = num * (1 / scale)
                den = ONE
        elif num == den:
            num = den = ONE
        self.num = num
        self.den = den

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def term_count(self) -> int:
        return self.num.term_count() + self.den.term_count()

    def evaluate(self, val: Valuation) -> Fraction:
        d = self.den.evaluate(val)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at this valuation")
        return self.num.evaluate(val) / d

    def __add__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RationalFunction(ZERO)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __eq__(self, other):
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return rf_equal(self, other)

    __hash__ = None

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _coerce_rf(value):
    if isinstance(value, RationalFunction):
        return value
    poly = _coerce(value)
    if poly is NotImplemented:
        return NotImplemented
    return RationalFunction(poly)


# --- Operations ---

def poly_eval(f: Polynomial, val: Valuation) -> Fraction:
    return f.evaluate(val)


def poly_arith(op: str, *operands) -> Polynomial:
    polys = [operands[0]] if op == "pow" else [as_polynomial(o) for o in operands]
    if op == "add":
        return sum(polys, ZERO)
    if op == "sub":
        first, *rest = polys
        return first - sum(rest, ZERO)
    if op == "mul":
        result = ONE
        for p in polys:
            result = result * p
        return result
    if op == "neg":
        (only,) = polys
        return -only
    if op == "pow":
        base, exponent = as_polynomial(operands[0]), operands[1]
        return base ** exponent
    raise ValueError(f"unknown polynomial operation {op!r}")


def rf_equal(r1: RationalFunction, r2: RationalFunction) -> bool:
    return (r1.num * r2.den - r2.num * r1.den).is_zero()


def product(polys: Iterable[Polynomial]) -> Polynomial:
    result = ONE
    for p in polys:
        result = result * p
    return result
