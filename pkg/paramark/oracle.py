# paramark/oracle.py
"""Brute-force ground truth: grid sweeps, exact formula evaluation and encoding cross-checks.

Everything here is exact. A witness found by a sweep is definitive; finding none
only means there is none at the chosen resolution (except on the Boolean grid).
"""
import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Union

from .errors import MissingParameter, MissingVariable, SemanticError
from .etr.encoder import EncodingRequest, Variant, encode, p_var, q_var, r_var
from .etr.formula import And, Atom, BoolConst, BoolVar, Formula, Iff, Implies, Not, Or, map_atoms
from .modelio import Cnf3
from .models import (
    DEFAULT_ACTION, ModelKind, ParametricModel, build_model, classify_valuation, induced_pmc,
    instantiate, resolve_targets,
)
from .polyalg import ONE, Polynomial, Valuation
from .qualitative import attractor_layers, backward_distances
from .quantitative import compare_at, mc_reach_values, mdp_reach_extremum_values, reach_value
from .schemas import Domain, ExtremumMode, GridDomain, OracleReportRead, Quantifier, Relop

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# --- Grids ---

@dataclass(frozen=True)
class GridSpec:
    resolution: int
    domain: GridDomain = GridDomain.GP_INTERIOR

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("grid resolution must be positive")

    def values(self) -> List[Fraction]:
        n = self.resolution
        if self.domain == GridDomain.GP_INTERIOR:
            return [Fraction(k, n + 1) for k in range(1, n + 1)]
        if self.domain == GridDomain.WD_CLOSED:
            return [Fraction(k, n) for k in range(n + 1)]
        return [Fraction(0), Fraction(1)]

    @property
    def exhaustive(self) -> bool:
        return self.domain == GridDomain.BOOLEAN

    def valuations(self, params: Sequence[str]) -> Iterator[Dict[str, Fraction]]:
        values = self.values()
        for point in itertools.product(values, repeat=len(params)):
            yield dict(zip(params, point))


# --- Reports ---

@dataclass(frozen=True)
class Witness:
    val: Dict[str, Fraction]
    value: Fraction
    verdict: bool = True


@dataclass(frozen=True)
class Counterexample:
    val: Dict[str, Fraction]
    expected: bool
    actual: bool


@dataclass
class OracleReport:
    checked: int = 0
    skipped: int = 0
    exhaustive: bool = False
    witnesses: List[Witness] = field(default_factory=list)
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.witnesses)

    def to_read(self) -> OracleReportRead:
        return OracleReportRead.model_validate(self, from_attributes=True)


# --- Sweeps ---

def sweep(
    model: ParametricModel,
    targets: Optional[Iterable[str]],
    quantifier: Quantifier,
    relop: Relop,
    threshold: Fraction,
    grid: GridSpec,
) -> OracleReport:
    """Instantiate at every grid point, compute the deciding extremum exactly and compare."""
    targets = resolve_targets(model, targets)
    threshold = Fraction(threshold)
    report = OracleReport(exhaustive=grid.exhaustive)
    for val in grid.valuations(model.params):
        if not classify_valuation(model, val).well_defined:
            report.skipped += 1
            continue
        report.checked += 1
        value = reach_value(model, val, quantifier, relop, targets)
        if relop.holds(value, threshold):
            report.witnesses.append(Witness(val=val, value=value))
    logger.info(
        "sweep over %d point(s): %d checked, %d skipped, %d witness(es)",
        report.checked + report.skipped, report.checked, report.skipped, len(report.witnesses),
    )
    return report


# --- Formula evaluation ---

Assignment = Mapping[str, Union[Fraction, bool]]


def _poly_value(poly: Polynomial, assignment: Assignment) -> Fraction:
    try:
        return poly.evaluate(assignment)
    except MissingParameter as exc:
        raise MissingVariable(exc.param)


def eval_formula(formula: Formula, assignment: Assignment) -> bool:
    if isinstance(formula, BoolConst):
        return formula.value
    if isinstance(formula, BoolVar):
        if formula.name not in assignment:
            raise MissingVariable(formula.name)
        return bool(assignment[formula.name])
    if isinstance(formula, Atom):
        return formula.relop.holds(_poly_value(formula.lhs, assignment), _poly_value(formula.rhs, assignment))
    if isinstance(formula, Not):
        return not eval_formula(formula.arg, assignment)
    if isinstance(formula, And):
        return all(eval_formula(a, assignment) for a in formula.args)
    if isinstance(formula, Or):
        return any(eval_formula(a, assignment) for a in formula.args)
    if isinstance(formula, Implies):
        return not eval_formula(formula.lhs, assignment) or eval_formula(formula.rhs, assignment)
    if isinstance(formula, Iff):
        return eval_formula(formula.lhs, assignment) == eval_formula(formula.rhs, assignment)
    raise TypeError(f"not a formula node: {formula!r}")


# --- Encoding cross-check ---

def canonical_assignment(request: EncodingRequest, val: Valuation) -> Dict[str, Union[Fraction, bool]]:
    """Parameters plus the auxiliary p/q/r values that satisfy an encoding whenever the query holds.

    p is the exact value of the deciding extremum, q marks positive value and r is a
    ranking that strictly decreases towards the targets: BFS distance for encodings
    whose q needs one progressing action, the attractor layer for those needing all.
    """
    model = request.model
    targets = request.resolved_targets
    assignment: Dict[str, Union[Fraction, bool]] = {x: Fraction(v) for x, v in val.items()}
    if not classify_valuation(model, val).well_defined:
        for s in model.states:
            assignment[p_var(s)] = Fraction(0)
            assignment[q_var(s)] = False
            assignment[r_var(s)] = Fraction(0)
        return assignment

    concrete = instantiate(model, val)
    variant = request.variant
    if variant in (Variant.PMC_GP, Variant.PMC_WD, Variant.SOLUTION_FUNCTION):
        values = mc_reach_values(concrete, targets)
        ranks = backward_distances(concrete, targets)
    elif variant in (Variant.EXISTS_UPPER, Variant.FORALL_LOWER):
        values, _ = mdp_reach_extremum_values(concrete, targets, ExtremumMode.MIN)
        ranks = attractor_layers(concrete, targets)
    elif variant == Variant.EXISTS_LOWER:
        values, strategy = mdp_reach_extremum_values(concrete, targets, ExtremumMode.MAX)
        ranks = backward_distances(induced_pmc(concrete, strategy), targets)
    else:
        values, _ = mdp_reach_extremum_values(concrete, targets, ExtremumMode.MAX)
        ranks = backward_distances(concrete, targets)

    unranked = len(model.states) + 1
    for s in model.states:
        assignment[p_var(s)] = values[s]
        assignment[q_var(s)] = s in ranks
        assignment[r_var(s)] = Fraction(ranks.get(s, unranked))
    return assignment


def _in_domain(model: ParametricModel, val: Valuation, domain: Domain) -> bool:
    verdict = classify_valuation(model, val)
    return verdict.graph_preserving if domain == Domain.GP else verdict.well_defined


def cross_check(
    request: EncodingRequest, grid: GridSpec, formula: Optional[Formula] = None
) -> OracleReport:
    """Evaluate the encoding under the canonical assignment at every grid point.

    The result must equal "val is in the domain and the query holds at val"; every
    disagreement is a counterexample. ``formula`` overrides the encoding under test.
    """
    model = request.model
    targets = request.resolved_targets
    if formula is None:
        formula = encode(request)
    report = OracleReport(exhaustive=grid.exhaustive)
    for val in grid.valuations(model.params):
        report.checked += 1
        expected = _in_domain(model, val, request.domain) and compare_at(
            model, val, request.quantifier, request.relop, HALF, targets
        )
        assignment = canonical_assignment(request, val)
        actual = eval_formula(formula, assignment)
        if actual != expected:
            logger.warning("encoding disagrees at %s: expected %s, got %s", val, expected, actual)
            report.counterexamples.append(Counterexample(val=val, expected=expected, actual=actual))
        elif expected:
            report.witnesses.append(Witness(val=val, value=assignment[p_var(model.init)]))
    logger.info(
        "cross-check (%s): %d point(s), %d counterexample(s)",
        request.variant.value, report.checked, len(report.counterexamples),
    )
    return report


def flip_threshold(formula: Formula, init: str) -> Formula:
    """The formula with the relop of its threshold atom on p_<init> negated.

    A cross-check of the result against the unflipped request should report
    counterexamples; an encoding that survives the flip is not pinned down by the grid.
    """
    lhs = Polynomial.var(p_var(init))
    rhs = Polynomial.constant(HALF)
    flipped = []

    def flip(a: Atom) -> Atom:
        if a.lhs != lhs or a.rhs != rhs:
            return a
        if a.relop == Relop.EQ:
            raise SemanticError("eq thresholds have no flipped relop")
        flipped.append(a)
        return Atom(a.lhs, a.relop.negate(), a.rhs)

    mutant = map_atoms(formula, flip)
    if not flipped:
        raise SemanticError(f"formula has no threshold atom on {p_var(init)}")
    return mutant


# --- Generators and brute force ---

def random_simple_model(
    rng: random.Random, states: int = 5, params: int = 2, pmdp: bool = False
) -> ParametricModel:
    """A random simple model: s0 is initial, the last state is an absorbing target.

    Every row is either a Bernoulli row (x, 1 - x) between two distinct successors or
    a constant row. In pmdp mode every state gets one or two actions.
    """
    if states < 2:
        raise ValueError("need at least an initial and a target state")
    names = [f"s{i}" for i in range(states)]
    xs = [f"x{i}" for i in range(params)]
    target = names[-1]
    transitions: Dict[tuple, list] = {(target, DEFAULT_ACTION): [(target, ONE)]}
    actions = [DEFAULT_ACTION]
    for s in names[:-1]:
        count = rng.choice((1, 2)) if pmdp else 1
        for k in range(count):
            action = DEFAULT_ACTION if k == 0 else "b"
            if action not in actions:
                actions.append(action)
            first, second = rng.sample(names, 2)
            if xs and rng.random() < 0.7:
                x = rng.choice(xs)
                row = [(first, Polynomial.var(x)), (second, ONE - Polynomial.var(x))]
            elif rng.random() < 0.5:
                row = [(first, Polynomial.constant(HALF)), (second, Polynomial.constant(HALF))]
            else:
                row = [(first, ONE)]
            transitions[(s, action)] = row
    return build_model(
        states=names,
        init=names[0],
        transitions=transitions,
        targets=[target],
        params=xs,
        kind=ModelKind.PMDP if pmdp else ModelKind.PMC,
        actions=actions,
    )


def brute_force_sat(cnf: Cnf3) -> bool:
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        if cnf.satisfied_by(dict(enumerate(bits, start=1))):
            return True
    return False
