# paramark/models.py
import enum
import itertools
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

import networkx as nx

from .core.config import settings
from .errors import EnumerationCapExceeded, InvalidStrategy, NotWellDefined, SemanticError
from .polyalg import CONSTANT_MONOMIAL, ONE, Polynomial, Valuation

logger = logging.getLogger(__name__)

DEFAULT_ACTION = "tau"

# (state, action, successor)
Edge = Tuple[str, str, str]
Strategy = Mapping[str, str]


# --- Enums ---

class ModelKind(str, enum.Enum):
    PMC = "pmc"
    PMDP = "pmdp"


class ValuationClass(str, enum.Enum):
    GRAPH_PRESERVING = "graph-preserving"
    WELL_DEFINED = "well-defined"
    NOT_WELL_DEFINED = "not-well-defined"


class RowKind(str, enum.Enum):
    BERNOULLI = "bernoulli"
    CHOICE = "choice"
    OTHER = "other"


# --- Core Models ---

class _ModelShape:
    """Accessors shared by parametric and concrete models."""

    @cached_property
    def _available(self) -> Dict[str, Tuple[str, ...]]:
        out = {s: [] for s in self.states}
        for action in self.actions:
            for s in self.states:
                if (s, action) in self.transitions:
                    out[s].append(action)
        return {s: tuple(acts) for s, acts in out.items()}

    def available(self, state: str) -> Tuple[str, ...]:
        return self._available.get(state, ())

    def row(self, state: str, action: str):
        return self.transitions.get((state, action), ())

    def successors(self, state: str, action: Optional[str] = None) -> List[str]:
        actions = self.available(state) if action is None else (action,)
        seen = []
        for a in actions:
            for succ, _ in self.row(state, a):
                if succ not in seen:
                    seen.append(succ)
        return seen

    def edges(self) -> Iterator[Tuple[str, str, str, object]]:
        for s in self.states:
            for a in self.available(s):
                for succ, label in self.row(s, a):
                    yield s, a, succ, label

    @property
    def is_pmc(self) -> bool:
        return all(len(self.available(s)) == 1 for s in self.states)

    @property
    def state_index(self) -> Dict[str, int]:
        return {s: i for i, s in enumerate(self.states)}


@dataclass(frozen=True, eq=True)
class ParametricModel(_ModelShape):
    states: Tuple[str, ...]
    init: str
    actions: Tuple[str, ...]
    params: Tuple[str, ...]
    transitions: Mapping[Tuple[str, str], Tuple[Tuple[str, Polynomial], ...]]
    targets: FrozenSet[str]
    kind: ModelKind = ModelKind.PMDP

    __hash__ = None


@dataclass(frozen=True, eq=True)
class ConcreteModel(_ModelShape):
    states: Tuple[str, ...]
    init: str
    actions: Tuple[str, ...]
    transitions: Mapping[Tuple[str, str], Tuple[Tuple[str, Fraction], ...]]
    targets: FrozenSet[str]
    kind: ModelKind = ModelKind.PMDP

    __hash__ = None

    def probability(self, state: str, action: str, succ: str) -> Fraction:
        for t, p in self.row(state, action):
            if t == succ:
                return p
        return Fraction(0)


AnyModel = Union[ParametricModel, ConcreteModel]


def build_model(
    states: Iterable[str],
    init: str,
    transitions: Mapping[Tuple[str, str], Iterable[Tuple[str, Polynomial]]],
    targets: Iterable[str],
    params: Optional[Iterable[str]] = None,
    kind: ModelKind = ModelKind.PMDP,
    actions: Optional[Iterable[str]] = None,
) -> ParametricModel:
    """Assemble a model, deriving the action list (first appearance) and the params when not given."""
    states = tuple(states)
    rows = {key: tuple(row) for key, row in transitions.items()}
    actions: List[str] = list(actions or ())
    for (_, action) in rows:
        if action not in actions:
            actions.append(action)
    if params is None:
        found = set()
        for row in rows.values():
            for _, label in row:
                found.update(label.variables())
        params = sorted(found)
    order = {s: i for i, s in enumerate(states)}
    act_order = {a: i for i, a in enumerate(actions)}
    rows = dict(sorted(rows.items(), key=lambda kv: (order.get(kv[0][0], len(order)), act_order[kv[0][1]])))
    return ParametricModel(
        states=states,
        init=init,
        actions=tuple(actions),
        params=tuple(params),
        transitions=rows,
        targets=frozenset(targets),
        kind=kind,
    )


def resolve_targets(model: AnyModel, targets: Optional[Iterable[str]] = None) -> FrozenSet[str]:
    if targets is None:
        return model.targets
    chosen = frozenset(targets)
    unknown = sorted(chosen - set(model.states))
    if unknown:
        raise SemanticError(f"unknown target state(s): {', '.join(unknown)}")
    return chosen


def with_targets(model: AnyModel, targets: Optional[Iterable[str]]) -> AnyModel:
    chosen = resolve_targets(model, targets)
    return model if chosen == model.targets else replace(model, targets=chosen)


# --- Validation ---

@dataclass(frozen=True)
class Violation:
    kind: str
    state: Optional[str] = None
    action: Optional[str] = None
    successor: Optional[str] = None
    detail: Optional[str] = None

    def __str__(self):
        where = ",".join(x for x in (self.state, self.action, self.successor) if x is not None)
        text = f"{self.kind}({where})"
        return f"{text}: {self.detail}" if self.detail else text


def validate(model: ParametricModel) -> List[Violation]:
    """All structural violations; an empty list means the model is valid."""
    violations: List[Violation] = []
    known = set(model.states)
    if not model.states:
        violations.append(Violation("NoStates"))
    if len(known) != len(model.states):
        violations.append(Violation("DuplicateState"))
    if model.init not in known:
        violations.append(Violation("UnknownState", state=model.init, detail="initial state"))
    for t in sorted(model.targets - known):
        violations.append(Violation("UnknownState", state=t, detail="target state"))
    params = set(model.params)
    for (s, a), row in model.transitions.items():
        if s not in known:
            violations.append(Violation("UnknownState", state=s, action=a))
            continue
        if a not in model.actions:
            violations.append(Violation("UnknownAction", state=s, action=a))
        if not row:
            violations.append(Violation("EmptyRow", state=s, action=a))
        seen = set()
        for succ, label in row:
            if succ not in known:
                violations.append(Violation("UnknownState", state=s, action=a, successor=succ))
            if succ in seen:
                violations.append(Violation("DuplicateSuccessor", state=s, action=a, successor=succ))
            seen.add(succ)
            if label.is_zero():
                violations.append(Violation("ZeroLabel", state=s, action=a, successor=succ))
            stray = [v for v in label.variables() if v not in params]
            if stray:
                violations.append(Violation(
                    "UnknownParameter", state=s, action=a, successor=succ, detail=", ".join(stray)
                ))
    for s in model.states:
        count = len(model.available(s))
        if count == 0:
            violations.append(Violation("NoAction", state=s))
        elif model.kind == ModelKind.PMC and count > 1:
            violations.append(Violation("MultipleActions", state=s))
    return violations


# --- Row shapes ---

def label_shape(label: Polynomial) -> Optional[Tuple[str, object]]:
    """('const', c) for c >= 0, ('var', x) for x, ('co', x) for 1 - x, else None."""
    if label.is_constant():
        c = label.constant_value()
        return ("const", c) if c >= 0 else None
    terms = dict(label.terms)
    if len(terms) == 1:
        (mono, coeff), = terms.items()
        if coeff == 1 and len(mono) == 1 and mono[0][1] == 1:
            return ("var", mono[0][0])
        return None
    if len(terms) == 2 and terms.get(CONSTANT_MONOMIAL) == 1:
        mono = next(m for m in terms if m != CONSTANT_MONOMIAL)
        if terms[mono] == -1 and len(mono) == 1 and mono[0][1] == 1:
            return ("co", mono[0][0])
    return None


def _is_bernoulli_row(row) -> bool:
    total = Polynomial()
    for _, label in row:
        if label_shape(label) is None:
            return False
        total = total + label
    return total == ONE


def row_structure(model: ParametricModel) -> Dict[Tuple[str, str], RowKind]:
    """Classify each row as a Bernoulli experiment, an exclusive parameter choice, or neither."""
    occurrences: Dict[str, set] = {}
    for key, row in model.transitions.items():
        for _, label in row:
            for var in label.variables():
                occurrences.setdefault(var, set()).add(key)
    kinds = {}
    for key, row in model.transitions.items():
        if _is_bernoulli_row(row):
            kinds[key] = RowKind.BERNOULLI
            continue
        shapes = [label_shape(label) for _, label in row]
        names = [shape[1] for shape in shapes if shape and shape[0] == "var"]
        if (
            len(names) == len(row)
            and len(set(names)) == len(names)
            and all(occurrences[n] == {key} for n in names)
        ):
            kinds[key] = RowKind.CHOICE
        else:
            kinds[key] = RowKind.OTHER
    return kinds


def is_simple(model: ParametricModel) -> bool:
    return all(kind == RowKind.BERNOULLI for kind in row_structure(model).values())


def is_choice_simple(model: ParametricModel) -> bool:
    return all(kind != RowKind.OTHER for kind in row_structure(model).values())


def center_valuation(model: ParametricModel) -> Dict[str, Fraction]:
    """½ for Bernoulli parameters, 1/w on a choice row of width w."""
    val = {x: Fraction(1, 2) for x in model.params}
    for key, kind in row_structure(model).items():
        if kind == RowKind.CHOICE:
            row = model.row(*key)
            for _, label in row:
                val[label.variables()[0]] = Fraction(1, len(row))
    return val


# --- Valuations ---

@dataclass(frozen=True)
class Classification:
    status: ValuationClass
    vanish: FrozenSet[Edge] = frozenset()
    boolean: bool = False
    reason: Optional[str] = None

    @property
    def well_defined(self) -> bool:
        return self.status != ValuationClass.NOT_WELL_DEFINED

    @property
    def graph_preserving(self) -> bool:
        return self.status == ValuationClass.GRAPH_PRESERVING


def _evaluated_rows(model: ParametricModel, val: Valuation):
    for (s, a), row in model.transitions.items():
        yield s, a, [(succ, label.evaluate(val)) for succ, label in row]


def classify_valuation(model: ParametricModel, val: Valuation) -> Classification:
    boolean = all(Fraction(val[x]) in (0, 1) for x in model.params if x in val)
    vanish = set()
    for s, a, values in _evaluated_rows(model, val):
        total = Fraction(0)
        for succ, value in values:
            if value < 0:
                return Classification(
                    ValuationClass.NOT_WELL_DEFINED, boolean=boolean,
                    reason=f"P({s}, {a}, {succ}) = {value} is negative",
                )
            if value == 0:
                vanish.add((s, a, succ))
            total += value
        if total != 1:
            return Classification(
                ValuationClass.NOT_WELL_DEFINED, boolean=boolean,
                reason=f"row ({s}, {a}) sums to {total}",
            )
    status = ValuationClass.WELL_DEFINED if vanish else ValuationClass.GRAPH_PRESERVING
    return Classification(status, frozenset(vanish), boolean)


def instantiate(model: ParametricModel, val: Valuation) -> ConcreteModel:
    verdict = classify_valuation(model, val)
    if not verdict.well_defined:
        raise NotWellDefined(verdict.reason)
    rows = {}
    for s, a, values in _evaluated_rows(model, val):
        rows[(s, a)] = tuple((succ, value) for succ, value in values if value != 0)
    return ConcreteModel(
        states=model.states,
        init=model.init,
        actions=model.actions,
        transitions=rows,
        targets=model.targets,
        kind=model.kind,
    )


def enumerate_boolean_valuations(model: ParametricModel) -> Iterator[Dict[str, Fraction]]:
    """{0,1}^X in lexicographic order, keeping only well-defined points."""
    cap = settings.WD_PARAM_CAP
    if len(model.params) > cap:
        raise EnumerationCapExceeded(
            f"{len(model.params)} parameters exceed the enumeration cap of {cap}"
        )
    for bits in itertools.product((Fraction(0), Fraction(1)), repeat=len(model.params)):
        val = dict(zip(model.params, bits))
        if classify_valuation(model, val).well_defined:
            yield val


# --- Strategies ---

def check_strategy(model: AnyModel, strategy: Strategy) -> None:
    for s in model.states:
        choice = strategy.get(s)
        if choice is None and len(model.available(s)) == 1:
            continue
        if choice not in model.available(s):
            raise InvalidStrategy(s)


def induced_pmc(model: AnyModel, strategy: Strategy) -> AnyModel:
    """Keep only the chosen action per state; the result is single-action with action ``tau``."""
    check_strategy(model, strategy)
    rows = {}
    for s in model.states:
        action = strategy.get(s) or model.available(s)[0]
        rows[(s, DEFAULT_ACTION)] = model.row(s, action)
    return replace(model, actions=(DEFAULT_ACTION,), transitions=rows, kind=ModelKind.PMC)


def enumerate_strategies(model: AnyModel) -> Iterator[Dict[str, str]]:
    choices = [model.available(s) for s in model.states]
    for picks in itertools.product(*choices):
        yield dict(zip(model.states, picks))


def strategy_count(model: AnyModel) -> int:
    count = 1
    for s in model.states:
        count *= len(model.available(s))
    return count


def underlying_graph(model: AnyModel) -> nx.DiGraph:
    graph = nx.DiGraph()
    graph.add_nodes_from(model.states)
    for s, _, succ, label in model.edges():
        if label:
            graph.add_edge(s, succ)
    return graph
