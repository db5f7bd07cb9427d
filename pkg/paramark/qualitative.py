# paramark/qualitative.py
"""Graph-based zero/one state sets and the qualitative reachability deciders."""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import networkx as nx

from .core.config import settings
from .errors import EnumerationCapExceeded, NotSimple
from .models import (
    AnyModel, ParametricModel, RowKind, center_valuation, classify_valuation,
    enumerate_boolean_valuations, instantiate, resolve_targets, row_structure, underlying_graph,
)
from .schemas import Domain, ExtremumMode, QualKind, Quantifier

logger = logging.getLogger(__name__)


# --- State sets ---

@dataclass(frozen=True)
class StateSetReport:
    zero_exists: FrozenSet[str]
    zero_forall: FrozenSet[str]
    one_exists: FrozenSet[str]
    one_forall: FrozenSet[str]


def _predecessors(model: AnyModel) -> Dict[str, Set[str]]:
    pred: Dict[str, Set[str]] = {s: set() for s in model.states}
    for s, _, succ, label in model.edges():
        if label:
            pred[succ].add(s)
    return pred


def _live_successors(model: AnyModel, state: str, action: str) -> List[str]:
    return [succ for succ, label in model.row(state, action) if label]


def backward_distances(model: AnyModel, targets: Iterable[str]) -> Dict[str, int]:
    """BFS distance to the target set along edges of any action; unreachable states are absent."""
    targets = list(targets)
    if not targets:
        return {}
    reverse = underlying_graph(model).reverse(copy=False)
    return dict(nx.multi_source_dijkstra_path_length(reverse, targets))


def attractor_layers(model: AnyModel, targets: Iterable[str]) -> Dict[str, int]:
    """Layer at which each state enters the set of states where every action has a successor inside."""
    layers = {t: 0 for t in targets}
    layer = 0
    while True:
        layer += 1
        added = [
            s for s in model.states
            if s not in layers
            and all(any(t in layers for t in _live_successors(model, s, a)) for a in model.available(s))
        ]
        if not added:
            return layers
        for s in added:
            layers[s] = layer


def zero_forall(model: AnyModel, targets: Iterable[str]) -> FrozenSet[str]:
    """States where even the maximal probability is 0."""
    reach = backward_distances(model, targets)
    return frozenset(s for s in model.states if s not in reach)


def zero_exists(model: AnyModel, targets: Iterable[str]) -> FrozenSet[str]:
    """States where the minimal probability is 0."""
    attractor = attractor_layers(model, targets)
    return frozenset(s for s in model.states if s not in attractor)


def one_exists(model: AnyModel, targets: Iterable[str]) -> FrozenSet[str]:
    targets = frozenset(targets)
    candidates = set(model.states)
    while True:
        reached = set(targets)
        changed = True
        while changed:
            changed = False
            for s in model.states:
                if s in reached:
                    continue
                for a in model.available(s):
                    succ = _live_successors(model, s, a)
                    if all(t in candidates for t in succ) and any(t in reached for t in succ):
                        reached.add(s)
                        changed = True
                        break
        if reached == candidates:
            return frozenset(reached)
        candidates = reached


def one_forall(model: AnyModel, targets: Iterable[str]) -> FrozenSet[str]:
    targets = frozenset(targets)
    pred = _predecessors(model)
    bad = set(zero_exists(model, targets))
    frontier = list(bad)
    while frontier:
        t = frontier.pop()
        for s in pred[t]:
            if s not in bad and s not in targets:
                bad.add(s)
                frontier.append(s)
    return frozenset(s for s in model.states if s not in bad)


def qualitative_states(model: AnyModel, targets: Optional[Iterable[str]] = None) -> StateSetReport:
    targets = resolve_targets(model, targets)
    return StateSetReport(
        zero_exists=zero_exists(model, targets),
        zero_forall=zero_forall(model, targets),
        one_exists=one_exists(model, targets),
        one_forall=one_forall(model, targets),
    )


# --- Graph-consistent classes ---

def _grid_groups(model: ParametricModel) -> List[Tuple[Tuple[str, ...], List[Tuple[Fraction, ...]]]]:
    kinds = row_structure(model)
    if any(kind == RowKind.OTHER for kind in kinds.values()):
        raise NotSimple("model has rows that are neither Bernoulli experiments nor parameter choices")
    used = set()
    groups = []
    for key, kind in kinds.items():
        row = model.row(*key)
        if kind != RowKind.CHOICE:
            continue
        names = tuple(label.variables()[0] for _, label in row)
        used.update(names)
        options = []
        for size in range(1, len(names) + 1):
            for support in itertools.combinations(range(len(names)), size):
                options.append(tuple(
                    Fraction(1, size) if i in support else Fraction(0) for i in range(len(names))
                ))
        groups.append((names, options))
    mentioned = {v for _, _, _, label in model.edges() for v in label.variables()}
    half = Fraction(1, 2)
    for x in model.params:
        if x in used:
            continue
        values = [Fraction(0), half, Fraction(1)] if x in mentioned else [half]
        groups.append(((x,), [(v,) for v in values]))
    groups.sort(key=lambda g: model.params.index(g[0][0]))
    return groups


def graph_consistent_partition(model: ParametricModel) -> List[Tuple[Dict[str, Fraction], FrozenSet]]:
    """One representative valuation per non-empty graph-consistent class, with its vanish-set."""
    cap = settings.WD_PARAM_CAP
    if len(model.params) > cap:
        raise EnumerationCapExceeded(f"{len(model.params)} parameters exceed the class cap of {cap}")
    groups = _grid_groups(model)
    seen = set()
    classes = []
    for picks in itertools.product(*(options for _, options in groups)):
        val: Dict[str, Fraction] = {}
        for (names, _), values in zip(groups, picks):
            val.update(zip(names, values))
        val = {x: val[x] for x in model.params}
        verdict = classify_valuation(model, val)
        if not verdict.well_defined or verdict.vanish in seen:
            continue
        seen.add(verdict.vanish)
        classes.append((val, verdict.vanish))
    logger.info("found %d graph-consistent classes over %d parameters", len(classes), len(model.params))
    return classes


# --- Deciders ---

@dataclass(frozen=True)
class QualProblem:
    kind: QualKind
    quantifier: Quantifier = Quantifier.EXISTS
    domain: Domain = Domain.WD


@dataclass(frozen=True)
class QualitativeResult:
    answer: bool
    witness: Optional[Dict[str, Fraction]] = None
    strategy_witness: Optional[Dict[str, str]] = None


def holds_at(report: StateSetReport, init: str, kind: QualKind, quantifier: Quantifier) -> bool:
    exists = quantifier == Quantifier.EXISTS
    if kind == QualKind.POSITIVE:
        return init not in (report.zero_forall if exists else report.zero_exists)
    if kind == QualKind.SAFETY:
        return init in (report.zero_exists if exists else report.zero_forall)
    if kind == QualKind.ALMOST_SURE:
        return init in (report.one_exists if exists else report.one_forall)
    return init not in (report.one_forall if exists else report.one_exists)


def _candidates(model: ParametricModel, problem: QualProblem) -> Iterator[Dict[str, Fraction]]:
    if problem.domain == Domain.BOOL:
        yield from enumerate_boolean_valuations(model)
        return
    if problem.domain == Domain.GP or problem.kind == QualKind.POSITIVE:
        _grid_groups(model)  # simplicity check
        yield center_valuation(model)
        return
    for val, _ in graph_consistent_partition(model):
        yield val


def decide_qualitative(
    model: ParametricModel, problem: QualProblem, targets: Optional[Iterable[str]] = None
) -> QualitativeResult:
    from .quantitative import mdp_reach_extremum_exact

    targets = resolve_targets(model, targets)
    checked = 0
    for val in _candidates(model, problem):
        checked += 1
        concrete = instantiate(model, val)
        report = qualitative_states(concrete, targets)
        if not holds_at(report, model.init, problem.kind, problem.quantifier):
            continue
        logger.info("qualitative %s holds after %d candidate(s)", problem.kind.value, checked)
        strategy = None
        if problem.quantifier == Quantifier.EXISTS:
            favours_max = problem.kind in (QualKind.POSITIVE, QualKind.ALMOST_SURE)
            mode = ExtremumMode.MAX if favours_max else ExtremumMode.MIN
            _, strategy = mdp_reach_extremum_exact(concrete, targets, mode)
        return QualitativeResult(True, witness=val, strategy_witness=strategy)
    logger.info("qualitative %s fails on all %d candidate(s)", problem.kind.value, checked)
    return QualitativeResult(False)
