# paramark/etr/formula.py
"""Quantifier-free real-arithmetic formulas. All variables are implicitly existential."""
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Tuple, Union

from ..polyalg import Polynomial, as_polynomial
from ..schemas import Relop


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class BoolVar:
    name: str


@dataclass(frozen=True)
class Atom:
    lhs: Polynomial
    relop: Relop
    rhs: Polynomial

    def __str__(self):
        return f"{self.lhs} {self.relop.symbol} {self.rhs}"


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: Tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


@dataclass(frozen=True)
class Iff:
    lhs: "Formula"
    rhs: "Formula"


Formula = Union[BoolConst, BoolVar, Atom, Not, And, Or, Implies, Iff]

TRUE = BoolConst(True)
FALSE = BoolConst(False)


# --- Builders ---

def atom(lhs, relop: Relop, rhs=0) -> Atom:
    return Atom(as_polynomial(lhs), relop, as_polynomial(rhs))


def conj(*args: Formula) -> Formula:
    """And with nested Ands flattened and TRUE dropped."""
    flat: List[Formula] = []
    for a in args:
        if isinstance(a, And):
            flat.extend(a.args)
        elif a == TRUE:
            continue
        elif a == FALSE:
            return FALSE
        else:
            flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat: List[Formula] = []
    for a in args:
        if isinstance(a, Or):
            flat.extend(a.args)
        elif a == FALSE:
            continue
        elif a == TRUE:
            return TRUE
        else:
            flat.append(a)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def conjuncts(formula: Formula) -> List[Formula]:
    if isinstance(formula, And):
        return list(formula.args)
    return [formula]


# --- Traversal ---

def walk(formula: Formula) -> Iterator[Formula]:
    yield formula
    if isinstance(formula, Not):
        yield from walk(formula.arg)
    elif isinstance(formula, (And, Or)):
        for a in formula.args:
            yield from walk(a)
    elif isinstance(formula, (Implies, Iff)):
        yield from walk(formula.lhs)
        yield from walk(formula.rhs)


def variables(formula: Formula) -> Tuple[List[str], List[str]]:
    """(real variables, Boolean variables), each in order of first appearance."""
    reals: List[str] = []
    bools: List[str] = []
    for node in walk(formula):
        if isinstance(node, BoolVar) and node.name not in bools:
            bools.append(node.name)
        elif isinstance(node, Atom):
            for side in (node.lhs, node.rhs):
                for mono, _ in side.terms:
                    for var, _ in mono:
                        if var not in reals:
                            reals.append(var)
    return reals, bools


def size(formula: Formula) -> int:
    return sum(1 for _ in walk(formula))


def render(formula: Formula) -> str:
    """Human-readable infix rendering, used in logs and debug output."""
    if isinstance(formula, BoolConst):
        return "true" if formula.value else "false"
    if isinstance(formula, BoolVar):
        return formula.name
    if isinstance(formula, Atom):
        return str(formula)
    if isinstance(formula, Not):
        return f"!{render(formula.arg)}"
    if isinstance(formula, And):
        return "(" + " & ".join(render(a) for a in formula.args) + ")" if formula.args else "true"
    if isinstance(formula, Or):
        return "(" + " | ".join(render(a) for a in formula.args) + ")" if formula.args else "false"
    if isinstance(formula, Implies):
        return f"({render(formula.lhs)} -> {render(formula.rhs)})"
    return f"({render(formula.lhs)} <-> {render(formula.rhs)})"


def map_atoms(formula: Formula, fn) -> Formula:
    """Rebuild the formula with every atom replaced by fn(atom)."""
    if isinstance(formula, Atom):
        return fn(formula)
    if isinstance(formula, Not):
        return Not(map_atoms(formula.arg, fn))
    if isinstance(formula, And):
        return And(tuple(map_atoms(a, fn) for a in formula.args))
    if isinstance(formula, Or):
        return Or(tuple(map_atoms(a, fn) for a in formula.args))
    if isinstance(formula, Implies):
        return Implies(map_atoms(formula.lhs, fn), map_atoms(formula.rhs, fn))
    if isinstance(formula, Iff):
        return Iff(map_atoms(formula.lhs, fn), map_atoms(formula.rhs, fn))
    return formula
