# paramark/reductions.py
"""Model constructions used to move between problems.

Every builder returns a plain ParametricModel that validates, so its output can
be printed with ``print_model`` and fed back into any analysis.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import InvalidModel, NotSimple, SemanticError, ThresholdOutOfRange
from .models import (
    DEFAULT_ACTION, ModelKind, ParametricModel, build_model, is_simple, validate,
)
from .modelio import Cnf3, PolySystem
from .polyalg import CONSTANT_MONOMIAL, ONE, Monomial, Polynomial, canonical_monomial, product
from .schemas import Sat3Variant

logger = logging.getLogger(__name__)

Row = List[Tuple[str, Polynomial]]


def _const(value) -> Polynomial:
    return Polynomial.constant(Fraction(value))


def _var(name: str) -> Polynomial:
    return Polynomial.var(name)


def _co(name: str) -> Polynomial:
    return ONE - Polynomial.var(name)


def fresh_name(base: str, taken: Iterable[str]) -> str:
    """``base``, or ``base`` with underscores appended until it is unused."""
    taken = set(taken)
    name = base
    while name in taken:
        name += "_"
    return name


def _pmc(states, init, rows: Dict[str, Row], targets, params=None) -> ParametricModel:
    model = build_model(
        states=states,
        init=init,
        transitions={(s, DEFAULT_ACTION): row for s, row in rows.items()},
        targets=targets,
        params=params,
        kind=ModelKind.PMC,
        actions=[DEFAULT_ACTION],
    )
    violations = validate(model)
    if violations:
        raise InvalidModel(violations)
    return model


# --- Threshold normalization ---

def normalize_threshold(model: ParametricModel, threshold: Fraction) -> ParametricModel:
    """Rewrite "Pr ⋈ threshold" into "Pr′ ⋈ 1/2" by prepending one probabilistic branch.

    Pr′ = Pr/2 + (1 - threshold)/2, which compares to 1/2 exactly as Pr compares to threshold.
    """
    threshold = Fraction(threshold)
    if not 0 < threshold < 1:
        raise ThresholdOutOfRange(f"threshold must lie strictly between 0 and 1, got {threshold}")
    taken = set(model.states)
    init = fresh_name("thr_init", taken)
    goal = fresh_name("thr_goal", taken | {init})
    sink = fresh_name("thr_sink", taken | {init, goal})
    half = Fraction(1, 2)
    transitions = dict(model.transitions)
    transitions[(init, DEFAULT_ACTION)] = (
        (model.init, _const(half)),
        (goal, _const(half * (1 - threshold))),
        (sink, _const(half * threshold)),
    )
    transitions[(goal, DEFAULT_ACTION)] = ((goal, ONE),)
    transitions[(sink, DEFAULT_ACTION)] = ((sink, ONE),)
    actions = list(model.actions)
    if DEFAULT_ACTION not in actions:
        actions.append(DEFAULT_ACTION)
    logger.info("normalized threshold %s to 1/2", threshold)
    return build_model(
        states=(init,) + tuple(model.states) + (goal, sink),
        init=init,
        transitions=transitions,
        targets=set(model.targets) | {goal},
        params=model.params,
        kind=model.kind,
        actions=actions,
    )


# --- Graph-preservation gadget ---

def gp_gadget(pmc: ParametricModel) -> ParametricModel:
    """Prepend, per parameter, two states that are passed surely iff the parameter lies in (0, 1)."""
    if not is_simple(pmc):
        raise NotSimple("the graph-preservation gadget needs a simple model")
    if not pmc.params:
        return pmc
    taken = set(pmc.states)
    heads: List[Tuple[str, str]] = []
    for i, _ in enumerate(pmc.params):
        first = fresh_name(f"gp{i}", taken)
        taken.add(first)
        second = fresh_name(f"gp{i}b", taken)
        taken.add(second)
        heads.append((first, second))
    transitions = dict(pmc.transitions)
    for i, (x, (first, second)) in enumerate(zip(pmc.params, heads)):
        onward = heads[i + 1][0] if i + 1 < len(heads) else pmc.init
        transitions[(first, DEFAULT_ACTION)] = ((first, _var(x)), (second, _co(x)))
        transitions[(second, DEFAULT_ACTION)] = ((second, _co(x)), (onward, _var(x)))
    gadget_states = tuple(s for pair in heads for s in pair)
    return build_model(
        states=gadget_states + tuple(pmc.states),
        init=heads[0][0],
        transitions=transitions,
        targets=pmc.targets,
        params=pmc.params,
        kind=pmc.kind,
        actions=pmc.actions,
    )


# --- Polynomials as non-negative combinations ---

@dataclass(frozen=True)
class CombinationTerm:
    """coeff · ∏ x^ones · ∏ (1 - x)^complements"""
    coeff: Fraction
    ones: Monomial
    complements: Monomial

    def polynomial(self) -> Polynomial:
        factors = [_var(x) ** e for x, e in self.ones]
        factors += [_co(x) ** e for x, e in self.complements]
        return product(factors) * self.coeff

    def factors(self) -> List[Tuple[str, bool]]:
        """Unit factors in chain order: per parameter, the (1 - x) factors first. True marks x."""
        ones, comps = dict(self.ones), dict(self.complements)
        out: List[Tuple[str, bool]] = []
        for x in sorted(set(ones) | set(comps)):
            out.extend([(x, False)] * comps.get(x, 0))
            out.extend([(x, True)] * ones.get(x, 0))
        return out


@dataclass(frozen=True)
class NonNegCombination:
    terms: Tuple[CombinationTerm, ...]
    b: Fraction

    def reconstruct(self) -> Polynomial:
        return sum((t.polynomial() for t in self.terms), _const(self.b))

    @property
    def coefficient_sum(self) -> Fraction:
        return sum((t.coeff for t in self.terms), Fraction(0))


def _negative_monomial_terms(mono: Monomial) -> List[Tuple[Monomial, Monomial]]:
    """-x1···xd = -1 + Σ_i (1 - x_i)·x_{i+1}···x_d, as (ones, complements) pairs."""
    unit = [x for x, e in mono for _ in range(e)]
    out = []
    for i, x in enumerate(unit):
        out.append((canonical_monomial([(y, 1) for y in unit[i + 1:]]), ((x, 1),)))
    return out


def rewrite_nonneg_combination(f: Polynomial) -> NonNegCombination:
    """Write f as Σ a·∏x^e·(1-x)^e′ + b with every a > 0 and b ≤ 0."""
    merged: Dict[Tuple[Monomial, Monomial], Fraction] = {}

    def add(ones: Monomial, comps: Monomial, coeff: Fraction):
        key = (ones, comps)
        merged[key] = merged.get(key, Fraction(0)) + coeff

    b = Fraction(0)
    for mono, coeff in f.terms:
        if mono == CONSTANT_MONOMIAL:
            b += coeff
        elif coeff > 0:
            add(mono, CONSTANT_MONOMIAL, coeff)
        else:
            for ones, comps in _negative_monomial_terms(mono):
                add(ones, comps, -coeff)
            b += coeff
    if b > 0:
        names = f.variables()
        if names:
            x = names[0]
            add(((x, 1),), CONSTANT_MONOMIAL, b)
            add(CONSTANT_MONOMIAL, ((x, 1),), b)
        else:
            add(CONSTANT_MONOMIAL, CONSTANT_MONOMIAL, b)
        b = Fraction(0)
    terms = tuple(
        CombinationTerm(coeff=c, ones=ones, complements=comps)
        for (ones, comps), c in merged.items()
        if c
    )
    return NonNegCombination(terms=terms, b=b)


# --- Polynomial to pMC ---

@dataclass(frozen=True)
class PolyPmcResult:
    pmc: ParametricModel
    A: Fraction
    B: Fraction
    targets: FrozenSet[str]
    combination: Optional[NonNegCombination] = None


def _poly_chain(
    f: Polynomial, midpoint: bool, prefix: str
) -> Tuple[List[str], Dict[str, Row], str, Fraction, Fraction, NonNegCombination]:
    combo = rewrite_nonneg_combination(f)
    b = combo.b
    if midpoint:
        A = max(-b, combo.coefficient_sum + b + 1)
        B = 2 * A
    else:
        A = -b
        B = combo.coefficient_sum + (b + A) + 1
    shift = b + A
    init, goal, sink = f"{prefix}init", f"{prefix}goal", f"{prefix}sink"
    states = [init]
    rows: Dict[str, Row] = {}
    init_row: Row = []
    direct = shift
    for i, term in enumerate(combo.terms):
        factors = term.factors()
        if not factors:
            direct += term.coeff
            continue
        chain = [f"{prefix}h{i}_{j}" for j in range(len(factors))]
        states.extend(chain)
        init_row.append((chain[0], _const(term.coeff / B)))
        for j, (x, is_one) in enumerate(factors):
            onward = chain[j + 1] if j + 1 < len(chain) else goal
            if is_one:
                rows[chain[j]] = [(onward, _var(x)), (sink, _co(x))]
            else:
                rows[chain[j]] = [(onward, _co(x)), (sink, _var(x))]
    if direct:
        init_row.append((goal, _const(direct / B)))
    rest = 1 - (combo.coefficient_sum + shift) / B
    if rest:
        init_row.append((sink, _const(rest)))
    rows[init] = init_row
    rows[goal] = [(goal, ONE)]
    rows[sink] = [(sink, ONE)]
    states.extend([goal, sink])
    return states, rows, goal, A, B, combo


def poly_to_pmc(f: Polynomial, midpoint: bool = False, prefix: str = "") -> PolyPmcResult:
    """A simple acyclic-until-absorbing pMC whose solution function is (f + A)/B.

    With ``midpoint`` the shift and scale are chosen so that (f + A)/B ⋈ 1/2 iff f ⋈ 0.
    """
    states, rows, goal, A, B, combo = _poly_chain(f, midpoint, prefix)
    pmc = _pmc(states, states[0], rows, {goal}, params=f.variables())
    logger.info("polynomial chain: %d state(s), A=%s, B=%s", len(states), A, B)
    return PolyPmcResult(pmc=pmc, A=A, B=B, targets=frozenset({goal}), combination=combo)


# --- 3SAT ---

def _literal(lit: int) -> Tuple[Polynomial, Polynomial]:
    """(probability the literal holds, its complement)."""
    x = f"xt{abs(lit)}"
    return (_var(x), _co(x)) if lit > 0 else (_co(x), _var(x))


def _clause_chain(cnf: Cnf3) -> Tuple[List[str], Dict[str, Row], List[str]]:
    m = len(cnf.clauses)
    states = [f"c{i}" for i in range(1, m + 2)]
    rows: Dict[str, Row] = {}
    params = [f"xt{k}" for k in range(1, cnf.num_vars + 1)]
    for i, clause in enumerate(cnf.clauses, start=1):
        choice: Row = []
        for j, lit in enumerate(clause, start=1):
            state, y = f"l{i}_{j}", f"y{i}_{j}"
            states.append(state)
            params.append(y)
            choice.append((state, _var(y)))
            holds, fails = _literal(lit)
            rows[state] = [(f"c{i + 1}", holds), ("bot", fails)]
        rows[f"c{i}"] = choice
    states.append("bot")
    rows["bot"] = [("bot", ONE)]
    return states, rows, params


def _variable_gadget(cnf: Cnf3) -> Tuple[List[str], Dict[str, Row], List[str]]:
    k, m = cnf.num_vars, len(cnf.clauses)
    states = [f"v{i}" for i in range(k + 1)]
    rows: Dict[str, Row] = {}
    params = [f"xt{i}" for i in range(1, k + 1)]
    for i in range(1, k + 1):
        x = f"xt{i}"
        states.extend([f"x{i}", f"xbar{i}"])
        rows[f"v{i - 1}"] = [(f"x{i}", _var(x)), (f"xbar{i}", _co(x))]
        rows[f"x{i}"] = [(f"v{i}", _var(x)), ("bot", _co(x))]
        rows[f"xbar{i}"] = [(f"v{i}", _co(x)), ("bot", _var(x))]
    fan = _const(Fraction(1, m + 1))
    rows[f"v{k}"] = [(f"c{j}", fan) for j in range(1, m + 1)] + [("T", fan)]
    for j, clause in enumerate(cnf.clauses, start=1):
        states.append(f"c{j}")
        choice: Row = []
        seen = set()
        for r, lit in enumerate(clause, start=1):
            if lit in seen:
                continue
            seen.add(lit)
            y = f"y{j}_{r}"
            params.append(y)
            target = f"x{lit}" if lit > 0 else f"xbar{-lit}"
            choice.append((target, _var(y)))
        rows[f"c{j}"] = choice
    states.extend(["T", "bot"])
    rows["T"] = [("T", ONE)]
    rows["bot"] = [("bot", ONE)]
    return states, rows, params


def sat3_to_pmc(cnf: Cnf3, variant: Sat3Variant) -> Tuple[ParametricModel, FrozenSet[str]]:
    """The pMC whose qualitative question of the given kind is equivalent to satisfiability of cnf.

    positive: Boolean valuation reaching c_{m+1} with positive probability.
    unsure: the positive chain looped back to c1; well-defined valuation avoiding bot surely.
    almost-sure: variable gadget plus clause fan; well-defined valuation reaching T surely.
    """
    if variant == Sat3Variant.ALMOST_SURE:
        states, rows, params = _variable_gadget(cnf)
        targets = frozenset({"T"})
        init = "v0"
    else:
        states, rows, params = _clause_chain(cnf)
        last = f"c{len(cnf.clauses) + 1}"
        init = "c1"
        if variant == Sat3Variant.UNSURE:
            rows[last] = [("c1", ONE)]
            targets = frozenset({"bot"})
        else:
            rows[last] = [(last, ONE)]
            targets = frozenset({last})
    model = _pmc(states, init, rows, targets, params=params)
    logger.info(
        "3SAT (%s): %d clause(s), %d variable(s) -> %d state(s), %d parameter(s)",
        variant.value, len(cnf.clauses), cnf.num_vars, len(model.states), len(model.params),
    )
    return model, targets


# --- Polynomial inequality systems ---

def bcon4ineq_to_pmdp(system: PolySystem) -> Tuple[ParametricModel, FrozenSet[str]]:
    """One action per polynomial, each entering that polynomial's midpoint chain.

    The maximal reach probability is below 1/2 at a valuation iff every polynomial is negative there.
    """
    states = ["init"]
    transitions: Dict[Tuple[str, str], Row] = {}
    targets = set()
    actions: List[str] = []
    for i, f in enumerate(system.polys):
        sub_states, sub_rows, goal, _, _, _ = _poly_chain(f, midpoint=True, prefix=f"f{i}_")
        action = f"a{i}"
        actions.append(action)
        transitions[("init", action)] = [(sub_states[0], ONE)]
        states.extend(sub_states)
        for s, row in sub_rows.items():
            transitions[(s, DEFAULT_ACTION)] = row
        targets.add(goal)
    actions.append(DEFAULT_ACTION)
    params = list(system.variables)
    for f in system.polys:
        params.extend(x for x in f.variables() if x not in params)
    model = build_model(
        states=states,
        init="init",
        transitions=transitions,
        targets=targets,
        params=params,
        kind=ModelKind.PMDP,
        actions=actions,
    )
    violations = validate(model)
    if violations:
        raise InvalidModel(violations)
    return model, frozenset(targets)


# --- Nondeterminism as parameters ---

def pmdp_exists_to_pmc(pmdp: ParametricModel) -> ParametricModel:
    """Replace every k-way action choice by a tree of k - 1 parametric coin flips.

    Setting every coin parameter to 0 or 1 selects one action per state, so the
    existential strategy question becomes a question over the enlarged parameter set.
    """
    if not is_simple(pmdp):
        raise NotSimple("the strategy-to-parameter reduction needs a simple model")
    if all(len(pmdp.available(s)) <= 1 for s in pmdp.states):
        return pmdp
    taken = set(pmdp.states) | set(pmdp.params)
    states: List[str] = []
    params: List[str] = list(pmdp.params)
    rows: Dict[str, Row] = {}

    def claim(name: str) -> str:
        if name in taken:
            raise SemanticError(f"name {name!r} already used; rename it before the reduction")
        taken.add(name)
        return name

    for s in pmdp.states:
        states.append(s)
        actions = pmdp.available(s)
        if len(actions) == 1:
            rows[s] = list(pmdp.row(s, actions[0]))
            continue
        counter = [0]

        def grow(node: str, choices: Tuple[str, ...]):
            z = claim(f"z_{s}_{counter[0]}")
            params.append(z)
            counter[0] += 1
            half = (len(choices) + 1) // 2
            children = []
            for part in (choices[:half], choices[half:]):
                if len(part) == 1:
                    leaf = claim(f"{s}__{part[0]}")
                    states.append(leaf)
                    rows[leaf] = list(pmdp.row(s, part[0]))
                    children.append(leaf)
                else:
                    inner = claim(f"{s}__n{counter[0]}")
                    states.append(inner)
                    grow(inner, part)
                    children.append(inner)
            rows[node] = [(children[0], _var(z)), (children[1], _co(z))]

        grow(s, actions)
    logger.info("replaced nondeterminism by %d coin parameter(s)", len(params) - len(pmdp.params))
    return _pmc(states, pmdp.init, rows, pmdp.targets, params=params)
