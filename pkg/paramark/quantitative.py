# paramark/quantitative.py
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .core.config import settings
from .errors import EliminationBlowup, NotGraphPreserving, NotPmc, SelfCheckFailed
from .models import (
    AnyModel, ConcreteModel, ParametricModel, classify_valuation, enumerate_strategies,
    induced_pmc, instantiate, resolve_targets,
)
from .polyalg import RationalFunction, Valuation
from .qualitative import zero_exists, zero_forall
from .schemas import ExtremumMode, Quantifier, Relop

logger = logging.getLogger(__name__)

_GOAL = "<goal>"


# --- Exact linear algebra ---

def solve_linear_system(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """Gauss-Jordan elimination over Q for a square non-singular system."""
    n = len(matrix)
    m = [row[:] + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular reachability system")
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
        lead = m[col][col]
        if lead != 1:
            m[col] = [v / lead for v in m[col]]
        for r in range(n):
            factor = m[r][col]
            if r == col or factor == 0:
                continue
            pivot_row = m[col]
            m[r] = [a - factor * b for a, b in zip(m[r], pivot_row)]
    return [m[i][n] for i in range(n)]


# --- Markov chains ---

def _require_chain(model: AnyModel) -> None:
    if not model.is_pmc:
        raise NotPmc("expected a single action in every state")


def mc_reach_values(mc: ConcreteModel, targets: Optional[Iterable[str]] = None) -> Dict[str, Fraction]:
    _require_chain(mc)
    targets = resolve_targets(mc, targets)
    zero = zero_forall(mc, targets)
    unknown = [s for s in mc.states if s not in targets and s not in zero]
    index = {s: i for i, s in enumerate(unknown)}
    matrix = [[Fraction(0)] * len(unknown) for _ in unknown]
    rhs = [Fraction(0)] * len(unknown)
    for s in unknown:
        i = index[s]
        matrix[i][i] += 1
        (action,) = mc.available(s)
        for succ, prob in mc.row(s, action):
            if succ in targets:
                rhs[i] += prob
            elif succ in index:
                matrix[i][index[succ]] -= prob
    solution = solve_linear_system(matrix, rhs) if unknown else []
    values = {s: Fraction(1) if s in targets else Fraction(0) for s in mc.states}
    values.update(zip(unknown, solution))
    return values


def mc_reach_exact(mc: ConcreteModel, targets: Optional[Iterable[str]] = None) -> Fraction:
    return mc_reach_values(mc, targets)[mc.init]


# --- MDP extrema ---

def _action_value(mdp: ConcreteModel, state: str, action: str, values: Dict[str, Fraction]) -> Fraction:
    return sum((prob * values[succ] for succ, prob in mdp.row(state, action)), Fraction(0))


def mdp_reach_extremum_values(
    mdp: ConcreteModel, targets: Optional[Iterable[str]], mode: ExtremumMode
) -> Tuple[Dict[str, Fraction], Dict[str, str]]:
    """Exact policy iteration. Returns the optimal values of every state and an optimal DM strategy."""
    targets = resolve_targets(mdp, targets)
    strategy = {s: mdp.available(s)[0] for s in mdp.states}
    pinned: Set[str] = set()
    if mode == ExtremumMode.MIN:
        zero = zero_exists(mdp, targets)
        for s in mdp.states:
            if s in zero:
                strategy[s] = next(
                    a for a in mdp.available(s)
                    if all(t in zero for t, p in mdp.row(s, a) if p)
                )
                pinned.add(s)
    better = (lambda q, v: q > v) if mode == ExtremumMode.MAX else (lambda q, v: q < v)
    rounds = 0
    while True:
        rounds += 1
        values = mc_reach_values(induced_pmc(mdp, strategy), targets)
        switched = False
        for s in mdp.states:
            if s in targets or s in pinned:
                continue
            current = _action_value(mdp, s, strategy[s], values)
            for a in mdp.available(s):
                if better(_action_value(mdp, s, a, values), current):
                    logger.debug("round %d: %s switches %s -> %s", rounds, s, strategy[s], a)
                    strategy[s] = a
                    switched = True
                    break
        if not switched:
            break
    logger.debug("policy iteration (%s) stable after %d round(s)", mode.value, rounds)
    if settings.SELF_CHECK and len(mdp.states) <= settings.SELF_CHECK_STATES:
        expected, _ = mdp_reach_by_enumeration(mdp, targets, mode)
        if expected != values[mdp.init]:
            logger.error("policy iteration gave %s, enumeration gave %s", values[mdp.init], expected)
            raise SelfCheckFailed(
                f"policy iteration gave {values[mdp.init]}, strategy enumeration gave {expected}"
            )
    return values, strategy


def mdp_reach_extremum_exact(
    mdp: ConcreteModel, targets: Optional[Iterable[str]], mode: ExtremumMode
) -> Tuple[Fraction, Dict[str, str]]:
    values, strategy = mdp_reach_extremum_values(mdp, targets, mode)
    return values[mdp.init], strategy


def mdp_reach_by_enumeration(
    mdp: ConcreteModel, targets: Optional[Iterable[str]], mode: ExtremumMode
) -> Tuple[Fraction, Dict[str, str]]:
    targets = resolve_targets(mdp, targets)
    best = None
    for strategy in enumerate_strategies(mdp):
        value = mc_reach_exact(induced_pmc(mdp, strategy), targets)
        if best is None or (value > best[0] if mode == ExtremumMode.MAX else value < best[0]):
            best = (value, strategy)
    return best


def extremum_for(quantifier: Quantifier, relop: Relop) -> ExtremumMode:
    """The extremum deciding the query: favourable for Exists, adverse for Forall."""
    if relop == Relop.EQ:
        raise ValueError("equality thresholds are only defined for single-action models")
    wants_small = relop.is_upper
    if quantifier == Quantifier.FORALL:
        wants_small = not wants_small
    return ExtremumMode.MIN if wants_small else ExtremumMode.MAX


def concrete_reach_value(
    concrete: ConcreteModel, targets: Iterable[str], quantifier: Quantifier, relop: Relop
) -> Fraction:
    if concrete.is_pmc:
        return mc_reach_exact(concrete, targets)
    value, _ = mdp_reach_extremum_exact(concrete, targets, extremum_for(quantifier, relop))
    return value


def reach_value(
    model: ParametricModel, val: Valuation, quantifier: Quantifier, relop: Relop,
    targets: Optional[Iterable[str]] = None,
) -> Fraction:
    targets = resolve_targets(model, targets)
    return concrete_reach_value(instantiate(model, val), targets, quantifier, relop)


def compare_at(
    model: ParametricModel, val: Valuation, quantifier: Quantifier, relop: Relop,
    threshold: Fraction, targets: Optional[Iterable[str]] = None,
) -> bool:
    return relop.holds(reach_value(model, val, quantifier, relop, targets), Fraction(threshold))


# --- Solution functions ---

@dataclass(frozen=True)
class SolutionFunction:
    value: RationalFunction
    model: ParametricModel
    valid_domain: str = "graph-preserving"

    def evaluate(self, val: Valuation) -> Fraction:
        if not classify_valuation(self.model, val).graph_preserving:
            raise NotGraphPreserving("solution functions are only valid on graph-preserving valuations")
        return self.value.evaluate(val)

    def __str__(self):
        return str(self.value)


def _elimination_graph(pmc: ParametricModel, targets, zero, keep: str) -> Dict[str, Dict[str, RationalFunction]]:
    graph: Dict[str, Dict[str, RationalFunction]] = {}
    for s in pmc.states:
        if s in targets or s in zero:
            continue
        out: Dict[str, RationalFunction] = {}
        (action,) = pmc.available(s)
        for succ, label in pmc.row(s, action):
            if succ in zero:
                continue
            key = _GOAL if succ in targets else succ
            term = RationalFunction(label)
            out[key] = out[key] + term if key in out else term
        graph[s] = out
    # restrict to what the kept state can reach
    reachable = {keep}
    stack = [keep]
    while stack:
        s = stack.pop()
        for t in graph[s]:
            if t != _GOAL and t not in reachable:
                reachable.add(t)
                stack.append(t)
    return {s: out for s, out in graph.items() if s in reachable}


def _eliminate(
    pmc: ParametricModel, targets, zero, keep: str, order: Optional[Sequence[str]] = None
) -> RationalFunction:
    graph = _elimination_graph(pmc, targets, zero, keep)
    position = pmc.state_index
    preds: Dict[str, Set[str]] = {s: set() for s in graph}
    for s, out in graph.items():
        for t in out:
            if t != _GOAL:
                preds[t].add(s)
    limit = settings.ELIMINATION_TERM_LIMIT
    queue = [s for s in (order or []) if s in graph and s != keep]

    while len(graph) > 1:
        if queue:
            victim = queue.pop(0)
        elif order is not None:
            victim = min((s for s in graph if s != keep), key=lambda s: position[s])
        else:
            victim = min(
                (s for s in graph if s != keep),
                key=lambda s: (len(preds[s] - {s}) * len(set(graph[s]) - {s}), position[s]),
            )
        out = graph.pop(victim)
        loop = out.pop(victim, None)
        factor = None if loop is None else 1 / (1 - loop)
        for p in sorted(preds[victim] - {victim}, key=position.get):
            weight = graph[p].pop(victim)
            if factor is not None:
                weight = weight * factor
            for t, prob in out.items():
                contrib = weight * prob
                merged = graph[p][t] + contrib if t in graph[p] else contrib
                if merged.term_count() > limit:
                    raise EliminationBlowup(
                        f"eliminating {victim} produced {merged.term_count()} terms (limit {limit})"
                    )
                graph[p][t] = merged
                if t != _GOAL:
                    preds[t].add(p)
        for t in out:
            if t != _GOAL:
                preds[t].discard(victim)
        del preds[victim]
        logger.debug("eliminated %s, %d state(s) left", victim, len(graph))

    out = graph[keep]
    goal = out.get(_GOAL, RationalFunction(0))
    loop = out.get(keep)
    return goal if loop is None else goal / (1 - loop)


def _state_function(pmc, targets, zero, state, order=None) -> RationalFunction:
    if state in targets:
        return RationalFunction(1)
    if state in zero:
        return RationalFunction(0)
    return _eliminate(pmc, targets, zero, state, order)


def solution_function(
    pmc: ParametricModel, targets: Optional[Iterable[str]] = None, order: Optional[Sequence[str]] = None
) -> SolutionFunction:
    """Reachability probability from init as one rational function, valid on graph-preserving valuations.

    ``order`` fixes the elimination order; states it omits follow in declaration order.
    """
    _require_chain(pmc)
    targets = resolve_targets(pmc, targets)
    zero = zero_forall(pmc, targets)
    value = _state_function(pmc, targets, zero, pmc.init, order)
    logger.info("solution function has %d term(s)", value.term_count())
    return SolutionFunction(value=value, model=pmc)


def per_state_solution_functions(
    pmc: ParametricModel, targets: Optional[Iterable[str]] = None
) -> Dict[str, RationalFunction]:
    _require_chain(pmc)
    targets = resolve_targets(pmc, targets)
    zero = zero_forall(pmc, targets)
    return {s: _state_function(pmc, targets, zero, s) for s in pmc.states}
