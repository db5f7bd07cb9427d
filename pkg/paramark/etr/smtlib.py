# paramark/etr/smtlib.py
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Union

from ..errors import UnparseableModel
from ..models import ParametricModel
from ..polyalg import Polynomial
from ..quantitative import compare_at
from ..schemas import Quantifier, Relop, SolverStatus
from .formula import And, Atom, BoolConst, BoolVar, Formula, Iff, Implies, Not, Or, conjuncts, variables

logger = logging.getLogger(__name__)

_SIMPLE_SYMBOL = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")
_RESERVED = {"true", "false", "and", "or", "not", "let", "forall", "exists", "par", "as", "_", "!"}


# --- Writing ---

def smt_symbol(name: str) -> str:
    if _SIMPLE_SYMBOL.match(name) and name not in _RESERVED:
        return name
    return f"|{name}|"


def smt_rational(value: Fraction) -> str:
    value = Fraction(value)
    magnitude = abs(value)
    text = str(magnitude.numerator) if magnitude.denominator == 1 else (
        f"(/ {magnitude.numerator} {magnitude.denominator})"
    )
    return f"(- {text})" if value < 0 else text


def smt_polynomial(poly: Polynomial) -> str:
    terms = []
    for mono, coeff in poly.terms:
        factors = [smt_symbol(var) for var, exp in mono for _ in range(exp)]
        if not factors:
            terms.append(smt_rational(coeff))
            continue
        body = factors[0] if len(factors) == 1 else f"(* {' '.join(factors)})"
        if coeff == 1:
            terms.append(body)
        elif coeff == -1:
            terms.append(f"(- {body})")
        else:
            terms.append(f"(* {smt_rational(coeff)} {' '.join(factors)})")
    if not terms:
        return "0"
    return terms[0] if len(terms) == 1 else f"(+ {' '.join(terms)})"


def smt_formula(formula: Formula) -> str:
    if isinstance(formula, BoolConst):
        return "true" if formula.value else "false"
    if isinstance(formula, BoolVar):
        return smt_symbol(formula.name)
    if isinstance(formula, Atom):
        return f"({formula.relop.symbol} {smt_polynomial(formula.lhs)} {smt_polynomial(formula.rhs)})"
    if isinstance(formula, Not):
        return f"(not {smt_formula(formula.arg)})"
    if isinstance(formula, And):
        if not formula.args:
            return "true"
        return f"(and {' '.join(smt_formula(a) for a in formula.args)})"
    if isinstance(formula, Or):
        if not formula.args:
            return "false"
        return f"(or {' '.join(smt_formula(a) for a in formula.args)})"
    if isinstance(formula, Implies):
        return f"(=> {smt_formula(formula.lhs)} {smt_formula(formula.rhs)})"
    if isinstance(formula, Iff):
        return f"(= {smt_formula(formula.lhs)} {smt_formula(formula.rhs)})"
    raise TypeError(f"not a formula node: {formula!r}")


def to_smt_script(formula: Formula, header: Optional[str] = None) -> str:
    reals, bools = variables(formula)
    lines: List[str] = []
    if header:
        lines.extend(f"; {h}" for h in header.splitlines())
    lines.append("(set-option :produce-models true)")
    lines.append("(set-logic QF_NRA)")
    lines.extend(f"(declare-const {smt_symbol(v)} Real)" for v in reals)
    lines.extend(f"(declare-const {smt_symbol(v)} Bool)" for v in bools)
    lines.extend(f"(assert {smt_formula(part)})" for part in conjuncts(formula))
    lines.append("(check-sat)")
    lines.append("(get-model)")
    return "\n".join(lines) + "\n"


# --- Reading ---

SExpr = Union[str, List["SExpr"]]

_SEXPR_TOKEN = re.compile(r'\s*(?:(\()|(\))|(\|[^|]*\|)|("(?:[^"]|"")*")|([^\s()|";]+)|(;[^\n]*))')


def read_sexprs(text: str) -> List[SExpr]:
    stack: List[List[SExpr]] = [[]]
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _SEXPR_TOKEN.match(text, pos)
        if not m:
            raise UnparseableModel(f"unexpected solver output near {text[pos:pos + 20]!r}")
        pos = m.end()
        opening, closing, quoted, string, atom_, comment = m.groups()
        if comment:
            continue
        if opening:
            stack.append([])
        elif closing:
            if len(stack) == 1:
                raise UnparseableModel("unbalanced ')' in solver output")
            done = stack.pop()
            stack[-1].append(done)
        elif quoted:
            stack[-1].append(quoted[1:-1])
        else:
            stack[-1].append(string or atom_)
    if len(stack) != 1:
        raise UnparseableModel("unbalanced '(' in solver output")
    return stack[0]


class _Irrational(Exception):
    pass


def _real_value(expr: SExpr) -> Fraction:
    if isinstance(expr, str):
        try:
            return Fraction(expr)
        except ValueError:
            raise _Irrational(expr)
    if not expr:
        raise _Irrational("()")
    head, *args = expr
    if head == "-" and len(args) == 1:
        return -_real_value(args[0])
    if head == "-" and args:
        first, *rest = (_real_value(a) for a in args)
        return first - sum(rest, Fraction(0))
    if head == "+":
        return sum((_real_value(a) for a in args), Fraction(0))
    if head == "*":
        out = Fraction(1)
        for a in args:
            out *= _real_value(a)
        return out
    if head == "/" and len(args) == 2:
        den = _real_value(args[1])
        if den == 0:
            raise _Irrational("division by zero")
        return _real_value(args[0]) / den
    raise _Irrational(str(head))


@dataclass(frozen=True)
class SolverVerdict:
    status: SolverStatus
    witness: Optional[Dict[str, Fraction]] = None
    raw_model: str = ""
    irrational: bool = False


def _definitions(exprs: Iterable[SExpr]):
    for expr in exprs:
        if not isinstance(expr, list):
            continue
        if expr and expr[0] == "define-fun" and len(expr) == 5:
            yield expr
        else:
            yield from _definitions(expr)


def parse_solver_model(text: str, params: Optional[Sequence[str]] = None) -> SolverVerdict:
    """Read a solver's check-sat/get-model output. ``params`` restricts and completes the witness."""
    exprs = read_sexprs(text)
    status = None
    for expr in exprs:
        if expr in ("sat", "unsat", "unknown"):
            status = SolverStatus(expr)
            break
        if isinstance(expr, list) and expr and expr[0] == "error":
            status = SolverStatus.ERROR
            break
    if status is None:
        raise UnparseableModel("solver output has no sat/unsat/unknown verdict")
    if status != SolverStatus.SAT:
        return SolverVerdict(status=status, raw_model=text)

    values: Dict[str, Fraction] = {}
    irrational = False
    for _, name, args, sort, body in _definitions(exprs):
        if args or sort != "Real" or (params is not None and name not in params):
            continue
        try:
            values[name] = _real_value(body)
        except _Irrational:
            logger.info("solver value for %s is not a rational literal", name)
            irrational = True
    if irrational:
        return SolverVerdict(status=status, raw_model=text, irrational=True)
    if params is not None:
        missing = [x for x in params if x not in values]
        if missing:
            logger.info("solver model leaves %s unassigned", ", ".join(missing))
            return SolverVerdict(status=status, raw_model=text)
        values = {x: values[x] for x in params}
    return SolverVerdict(status=status, witness=values, raw_model=text)


def check_witness(
    model: ParametricModel,
    targets: Optional[Iterable[str]],
    quantifier: Quantifier,
    relop: Relop,
    val: Dict[str, Fraction],
    threshold: Fraction = Fraction(1, 2),
) -> bool:
    """Re-verify a witness by exact computation, independent of any solver."""
    return compare_at(model, val, quantifier, relop, threshold, targets)
