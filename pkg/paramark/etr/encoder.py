# paramark/etr/encoder.py
"""Compile reachability queries into existential real-arithmetic formulas.

Every encoding compares against the fixed threshold 1/2; other thresholds go
through ``reductions.normalize_threshold`` first.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional

from ..errors import NotPmc, NotPmdp, SemanticError
from ..models import ModelKind, ParametricModel, center_valuation, induced_pmc, resolve_targets
from ..polyalg import ONE, Polynomial, RationalFunction, product
from ..quantitative import per_state_solution_functions, solution_function
from ..qualitative import zero_exists, zero_forall
from ..schemas import Domain, EncodingStyle, ExtremumMode, Quantifier, Relop
from .formula import (
    FALSE, TRUE, Atom, BoolVar, Formula, Iff, Implies, Not, atom, conj, disj, size,
)

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


class Variant(str, enum.Enum):
    PMC_GP = "pmc-gp"
    PMC_WD = "pmc-wd"
    SOLUTION_FUNCTION = "solution-function"
    EXISTS_UPPER = "exists-upper"
    EXISTS_LOWER = "exists-lower"
    FORALL_UPPER = "forall-upper"
    FORALL_LOWER = "forall-lower"


@dataclass(frozen=True)
class EncodingRequest:
    model: ParametricModel
    relop: Relop
    targets: Optional[FrozenSet[str]] = None
    kind: Optional[ModelKind] = None
    quantifier: Quantifier = Quantifier.EXISTS
    domain: Domain = Domain.GP
    style: EncodingStyle = EncodingStyle.EQUATIONS

    __hash__ = None

    def __post_init__(self):
        if self.domain == Domain.BOOL:
            raise SemanticError("the Boolean domain is decided by enumeration, not by encoding")
        if self.style == EncodingStyle.SOLUTION_FUNCTION and (
            self.model_kind != ModelKind.PMC or self.domain != Domain.GP
        ):
            raise SemanticError("the solution-function style needs a pmc and the gp domain")

    @property
    def model_kind(self) -> ModelKind:
        return self.kind or self.model.kind

    @property
    def resolved_targets(self) -> FrozenSet[str]:
        return resolve_targets(self.model, self.targets)

    @property
    def variant(self) -> Variant:
        if self.style == EncodingStyle.SOLUTION_FUNCTION:
            return Variant.SOLUTION_FUNCTION
        if self.model_kind == ModelKind.PMC:
            return Variant.PMC_GP if self.domain == Domain.GP else Variant.PMC_WD
        return pmdp_variant(self.quantifier, self.relop)


def pmdp_variant(quantifier: Quantifier, relop: Relop) -> Variant:
    if relop == Relop.EQ:
        raise SemanticError("pmdp encodings need a one-sided relop")
    if quantifier == Quantifier.EXISTS:
        return Variant.EXISTS_UPPER if relop.is_upper else Variant.EXISTS_LOWER
    return Variant.FORALL_UPPER if relop.is_upper else Variant.FORALL_LOWER


# --- Auxiliary variable names ---

def p_var(state: str) -> str:
    return f"p_{state}"


def q_var(state: str) -> str:
    return f"q_{state}"


def r_var(state: str) -> str:
    return f"r_{state}"


def _p(state: str) -> Polynomial:
    return Polynomial.var(p_var(state))


def _r(state: str) -> Polynomial:
    return Polynomial.var(r_var(state))


def _q(state: str) -> BoolVar:
    return BoolVar(q_var(state))


def _check_names(model: ParametricModel) -> None:
    aux = {name for s in model.states for name in (p_var(s), q_var(s), r_var(s))}
    clash = sorted(aux & set(model.params))
    if clash:
        raise SemanticError(f"parameter name(s) clash with auxiliary variables: {', '.join(clash)}")


# --- Parameter domains ---

def encode_wd(model: ParametricModel) -> Formula:
    parts: List[Formula] = []
    for (s, a), row in model.transitions.items():
        total = Polynomial()
        for _, label in row:
            parts.append(atom(label, Relop.GE, 0))
            parts.append(atom(label, Relop.LE, 1))
            total = total + label
        parts.append(atom(total, Relop.EQ, 1))
    return conj(*parts)


def encode_gp(model: ParametricModel) -> Formula:
    strict = [
        atom(label, Relop.GT, 0)
        for row in model.transitions.values()
        for _, label in row
        if not label.is_constant()
    ]
    return conj(encode_wd(model), *strict)


def domain_formula(model: ParametricModel, domain: Domain) -> Formula:
    return encode_gp(model) if domain == Domain.GP else encode_wd(model)


# --- Shared pieces ---

def _weighted_sum(model: ParametricModel, state: str, action: str) -> Polynomial:
    total = Polynomial()
    for succ, label in model.row(state, action):
        total = total + label * _p(succ)
    return total


def _progress(model: ParametricModel, state: str, action: str) -> Formula:
    """Some positive successor is flagged and ranked strictly lower."""
    return disj(*(
        conj(atom(label, Relop.GT, 0), _q(succ), atom(_r(state), Relop.GT, _r(succ)))
        for succ, label in model.row(state, action)
    ))


def _all_successors_unflagged(model: ParametricModel, state: str, action: str) -> Formula:
    return conj(*(
        Implies(atom(label, Relop.GT, 0), Not(_q(succ)))
        for succ, label in model.row(state, action)
    ))


def _threshold(model: ParametricModel, relop: Relop) -> Atom:
    return atom(_p(model.init), relop, HALF)


def _target_constraints(targets: Iterable[str]) -> List[Formula]:
    parts: List[Formula] = []
    for t in targets:
        parts.append(atom(_p(t), Relop.EQ, 1))
        parts.append(_q(t))
    return parts


# --- pMC encodings ---

def _encode_pmc_gp(model: ParametricModel, targets: FrozenSet[str], relop: Relop) -> Formula:
    zero = zero_forall(model, targets)
    parts: List[Formula] = []
    for s in model.states:
        if s in targets:
            parts.append(atom(_p(s), Relop.EQ, 1))
        elif s in zero:
            parts.append(atom(_p(s), Relop.EQ, 0))
        else:
            (action,) = model.available(s)
            parts.append(atom(_p(s), Relop.EQ, _weighted_sum(model, s, action)))
    return conj(*parts, _threshold(model, relop), encode_gp(model))


def _encode_pmc_wd(model: ParametricModel, targets: FrozenSet[str], relop: Relop) -> Formula:
    parts: List[Formula] = _target_constraints(t for t in model.states if t in targets)
    for s in model.states:
        if s in targets:
            continue
        (action,) = model.available(s)
        parts.append(Iff(_q(s), _progress(model, s, action)))
        parts.append(Implies(Not(_q(s)), _all_successors_unflagged(model, s, action)))
        parts.append(Implies(Not(_q(s)), atom(_p(s), Relop.EQ, 0)))
        parts.append(Implies(_q(s), atom(_p(s), Relop.EQ, _weighted_sum(model, s, action))))
    return conj(*parts, _threshold(model, relop), encode_wd(model))


def encode_pmc(request: EncodingRequest) -> Formula:
    model = request.model
    if not model.is_pmc:
        raise NotPmc("the pmc encodings need a single action in every state")
    _check_names(model)
    targets = request.resolved_targets
    if request.domain == Domain.GP:
        formula = _encode_pmc_gp(model, targets, request.relop)
    else:
        formula = _encode_pmc_wd(model, targets, request.relop)
    logger.info("pmc encoding (%s) has %d nodes", request.domain.value, size(formula))
    return formula


def encode_pmc_solution_function(
    pmc: ParametricModel, targets: Optional[Iterable[str]], relop: Relop
) -> Formula:
    value = solution_function(pmc, targets).value
    f, g = value.num, value.den
    half_g = g * HALF
    return conj(
        disj(
            conj(atom(g, Relop.GT, 0), atom(f, relop, half_g)),
            conj(atom(g, Relop.LT, 0), atom(half_g, relop, f)),
        ),
        encode_gp(pmc),
    )


# --- pMDP encodings ---

def encode_pmdp(request: EncodingRequest) -> Formula:
    model = request.model
    if request.model_kind == ModelKind.PMC:
        raise NotPmdp("the pmdp encodings need a model declared as pmdp")
    _check_names(model)
    targets = request.resolved_targets
    variant = pmdp_variant(request.quantifier, request.relop)
    every_action_progresses = variant in (Variant.EXISTS_UPPER, Variant.FORALL_LOWER)

    parts: List[Formula] = _target_constraints(t for t in model.states if t in targets)
    for s in model.states:
        if s in targets:
            continue
        actions = model.available(s)
        q_s = _q(s)
        if every_action_progresses:
            definition = conj(*(_progress(model, s, a) for a in actions))
            closure = disj(*(_all_successors_unflagged(model, s, a) for a in actions))
        else:
            definition = disj(*(_progress(model, s, a) for a in actions))
            closure = conj(*(_all_successors_unflagged(model, s, a) for a in actions))
        parts.append(Iff(q_s, definition))
        parts.append(Implies(Not(q_s), closure))
        parts.append(Implies(Not(q_s), atom(_p(s), Relop.EQ, 0)))

        if variant == Variant.EXISTS_UPPER:
            value = disj(*(atom(_p(s), Relop.EQ, _weighted_sum(model, s, a)) for a in actions))
        elif variant == Variant.EXISTS_LOWER:
            value = disj(*(
                conj(_progress(model, s, a), atom(_p(s), Relop.EQ, _weighted_sum(model, s, a)))
                for a in actions
            ))
        elif variant == Variant.FORALL_UPPER:
            value = conj(*(atom(_p(s), Relop.GE, _weighted_sum(model, s, a)) for a in actions))
        else:
            value = conj(*(atom(_p(s), Relop.LE, _weighted_sum(model, s, a)) for a in actions))
        parts.append(Implies(q_s, value))

    formula = conj(*parts, _threshold(model, request.relop), domain_formula(model, request.domain))
    logger.info("pmdp encoding (%s, %s) has %d nodes", variant.value, request.domain.value, size(formula))
    return formula


# --- Strategy optimality certificates ---

def _normalized_functions(pmc: ParametricModel, targets) -> Dict[str, RationalFunction]:
    functions = per_state_solution_functions(pmc, targets)
    center = center_valuation(pmc)
    out = {}
    for s, fn in functions.items():
        if fn.den.evaluate(center) < 0:
            fn = RationalFunction(-fn.num, -fn.den)
        out[s] = fn
    return out


def encode_strategy_optimality(
    pmdp: ParametricModel,
    strategy: Mapping[str, str],
    targets: Optional[Iterable[str]],
    relop: Optional[Relop],
    mode: ExtremumMode = ExtremumMode.MIN,
) -> Formula:
    """Atoms that hold at a graph-preserving valuation iff ``strategy`` attains the extremum in every state.

    With a relop the initial value is also compared against 1/2; without one the
    formula is the bare certificate.
    """
    targets = resolve_targets(pmdp, targets)
    functions = _normalized_functions(induced_pmc(pmdp, strategy), targets)
    h = {s: fn.num for s, fn in functions.items()}
    g = {s: fn.den for s, fn in functions.items()}
    zero = zero_exists(pmdp, targets) if mode == ExtremumMode.MIN else frozenset()
    bellman = Relop.LE if mode == ExtremumMode.MIN else Relop.GE

    parts: List[Formula] = []
    for s in pmdp.states:
        if s in targets:
            continue
        if s in zero:
            parts.append(atom(h[s], Relop.EQ, 0))
            continue
        for a in pmdp.available(s):
            involved = [s] + [succ for succ, _ in pmdp.row(s, a) if succ != s]
            lhs = h[s] * product(g[u] for u in involved if u != s)
            rhs = Polynomial()
            for succ, label in pmdp.row(s, a):
                rhs = rhs + label * h[succ] * product(g[u] for u in involved if u != succ)
            parts.append(atom(lhs, bellman, rhs))

    if relop is not None:
        parts.append(atom(h[pmdp.init], relop, g[pmdp.init] * HALF))
    parts.extend(atom(den, Relop.GT, 0) for den in dict.fromkeys(g.values()) if not den.is_constant())
    return conj(*parts, encode_gp(pmdp))


def encode_strategy_minimality(
    pmdp: ParametricModel,
    strategy: Mapping[str, str],
    targets: Optional[Iterable[str]],
    relop: Optional[Relop],
) -> Formula:
    return encode_strategy_optimality(pmdp, strategy, targets, relop, ExtremumMode.MIN)


# --- Dispatch ---

def encode(request: EncodingRequest) -> Formula:
    if request.variant == Variant.SOLUTION_FUNCTION:
        return encode_pmc_solution_function(request.model, request.resolved_targets, request.relop)
    if request.model_kind == ModelKind.PMC:
        return encode_pmc(request)
    return encode_pmdp(request)
