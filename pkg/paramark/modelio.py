# paramark/modelio.py
import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import DegreeExceeded, InvalidModel, NotThreeCnf, ParseError, SemanticError
from .models import DEFAULT_ACTION, ModelKind, ParametricModel, build_model, validate
from .polyalg import Polynomial, format_rational

logger = logging.getLogger(__name__)

IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
NAMED_DEGREE_BOUND = 4

_TOKEN = re.compile(
    rf"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>{IDENT})|(?P<op>[-+*^()]))"
)
_RATIONAL = re.compile(r"\s*(-?)(\d+)(?:/(\d+))?\s*$")


# --- Polynomial grammar ---

class _PolyParser:
    """expr := term (('+'|'-') term)*; term := unary ('*' unary)*;
    unary := '-' unary | power; power := atom ('^' INT)?; atom := NUM | IDENT | '(' expr ')'."""

    def __init__(self, text: str, line: int, col: int, params: Optional[Iterable[str]]):
        self.text = text
        self.line = line
        self.col = col
        self.params = None if params is None else set(params)
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self) -> List[Tuple[str, str, int]]:
        tokens = []
        i = 0
        while i < len(self.text):
            if self.text[i:].strip() == "":
                break
            m = _TOKEN.match(self.text, i)
            if not m:
                offset = i + len(self.text[i:]) - len(self.text[i:].lstrip())
                self._fail(offset, f"unexpected character {self.text[offset]!r}")
            kind = m.lastgroup
            tokens.append((kind, m.group(kind), m.start(kind)))
            i = m.end()
        tokens.append(("end", "", len(self.text)))
        return tokens

    def _fail(self, offset: int, message: str):
        raise ParseError(self.line, self.col + offset + 1, message)

    def _peek(self):
        return self.tokens[self.pos]

    def _take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _expect(self, value: str):
        kind, text, offset = self._take()
        if text != value or kind == "end":
            self._fail(offset, f"expected {value!r}, found {text or 'end of input'!r}")

    def parse(self) -> Polynomial:
        if self._peek()[0] == "end":
            self._fail(0, "empty polynomial")
        result = self._expr()
        kind, text, offset = self._peek()
        if kind != "end":
            self._fail(offset, f"unexpected {text!r}")
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._peek()[1] in ("+", "-") and self._peek()[0] == "op":
            _, op, _ = self._take()
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> Polynomial:
        result = self._unary()
        while self._peek()[:2] == ("op", "*"):
            self._take()
            result = result * self._unary()
        return result

    def _unary(self) -> Polynomial:
        if self._peek()[:2] == ("op", "-"):
            self._take()
            return -self._unary()
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._peek()[:2] == ("op", "^"):
            self._take()
            kind, text, offset = self._take()
            if kind != "num" or "/" in text:
                self._fail(offset, "exponent must be a non-negative integer")
            return base ** int(text)
        return base

    def _atom(self) -> Polynomial:
        kind, text, offset = self._take()
        if kind == "num":
            num, _, den = text.partition("/")
            if den and int(den) == 0:
                self._fail(offset, "zero denominator")
            return Polynomial.constant(Fraction(int(num), int(den or 1)))
        if kind == "ident":
            if self.params is not None and text not in self.params:
                raise SemanticError(f"undeclared parameter {text}", line=self.line)
            return Polynomial.var(text)
        if (kind, text) == ("op", "("):
            inner = self._expr()
            self._expect(")")
            return inner
        self._fail(offset, f"unexpected {text or 'end of input'!r}")


def parse_polynomial(
    text: str, line: int = 1, col: int = 0, params: Optional[Iterable[str]] = None
) -> Polynomial:
    """Parse one polynomial. ``col`` is the 0-based offset of ``text`` within its line."""
    return _PolyParser(text, line, col, params).parse()


def parse_rational(text: str) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise ParseError(1, 1, f"not a rational literal: {text!r}")
    sign, num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ParseError(1, 1, f"zero denominator in {text!r}")
    value = Fraction(int(num), int(den or 1))
    return -value if sign else value


def parse_valuation(text: str) -> Dict[str, Fraction]:
    """``x=2/5,y=7/10`` -> {x: 2/5, y: 7/10}."""
    val: Dict[str, Fraction] = {}
    if not text.strip():
        return val
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(IDENT, name):
            raise ParseError(1, text.find(item) + 1, f"expected name=value, got {item.strip()!r}")
        if name in val:
            raise ParseError(1, text.find(item) + 1, f"parameter {name} assigned twice")
        val[name] = parse_rational(value)
    return val


def format_valuation(val: Dict[str, Fraction]) -> str:
    return ",".join(f"{k}={format_rational(v)}" for k, v in val.items())


# --- Model files ---

_DIRECTIVE = re.compile(r"@(\w+)(.*)$")
_TRANSITION = re.compile(
    rf"(?P<src>{IDENT})\s*(?:\[\s*(?P<act>{IDENT})\s*\])?\s*->\s*(?P<dst>{IDENT})\s*:\s*(?P<label>.*)$"
)
_DIRECTIVES = ("type", "params", "states", "init", "targets", "actions")


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_model(text: str) -> ParametricModel:
    directives: Dict[str, Tuple[List[str], int]] = {}
    raw_transitions = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("@"):
            m = _DIRECTIVE.match(body)
            name = m.group(1) if m else ""
            if name not in _DIRECTIVES:
                raise ParseError(lineno, indent + 1, f"unknown directive @{name}")
            if name in directives:
                raise ParseError(lineno, indent + 1, f"duplicate @{name}")
            args = m.group(2).split()
            for arg in args:
                if not re.fullmatch(IDENT, arg):
                    raise ParseError(lineno, indent + line.strip().find(arg) + 1, f"bad identifier {arg!r}")
            directives[name] = (args, lineno)
            continue
        m = _TRANSITION.match(body)
        if not m:
            raise ParseError(lineno, indent + 1, "expected a directive or a transition")
        label = parse_polynomial(m.group("label"), line=lineno, col=indent + m.start("label"))
        raw_transitions.append((lineno, m.group("src"), m.group("act"), m.group("dst"), label))

    for required in ("type", "states", "init"):
        if required not in directives:
            raise ParseError(len(text.splitlines()) + 1, 1, f"missing @{required}")

    (type_args, type_line) = directives["type"]
    if len(type_args) != 1 or type_args[0] not in ("pmc", "pmdp"):
        raise ParseError(type_line, 1, "@type must be pmc or pmdp")
    kind = ModelKind(type_args[0])
    states, _ = directives["states"]
    params, _ = directives.get("params", ([], 0))
    init_args, init_line = directives["init"]
    if len(init_args) != 1:
        raise ParseError(init_line, 1, "@init takes exactly one state")
    targets, targets_line = directives.get("targets", ([], 0))
    declared_actions, _ = directives.get("actions", ([], 0))

    known = set(states)
    for name in [init_args[0], *targets]:
        if name not in known:
            raise SemanticError(f"undeclared state {name}", line=init_line if name == init_args[0] else targets_line)
    declared_params = set(params)

    rows: Dict[Tuple[str, str], List[Tuple[str, Polynomial]]] = {}
    for lineno, src, act, dst, label in raw_transitions:
        for name in (src, dst):
            if name not in known:
                raise SemanticError(f"undeclared state {name}", line=lineno)
        if kind == ModelKind.PMC and act is not None:
            raise SemanticError("pmc transitions carry no action", line=lineno)
        if kind == ModelKind.PMDP and act is None:
            raise SemanticError("pmdp transitions need an [action]", line=lineno)
        if declared_actions and act not in declared_actions:
            raise SemanticError(f"undeclared action {act}", line=lineno)
        stray = [v for v in label.variables() if v not in declared_params]
        if stray:
            raise SemanticError(f"undeclared parameter {stray[0]}", line=lineno)
        row = rows.setdefault((src, act or DEFAULT_ACTION), [])
        if any(succ == dst for succ, _ in row):
            raise SemanticError(f"duplicate transition {src} -> {dst}", line=lineno)
        row.append((dst, label))

    model = build_model(
        states, init_args[0], rows, targets, params=params, kind=kind, actions=declared_actions or None
    )
    violations = validate(model)
    if violations:
        raise InvalidModel(violations)
    logger.debug("parsed %s with %d states, %d params", kind.value, len(states), len(params))
    return model


def print_model(model: ParametricModel, header: Optional[str] = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append(f"@type {model.kind.value}")
    lines.append(" ".join(["@params", *model.params]))
    lines.append(" ".join(["@states", *model.states]))
    if model.kind == ModelKind.PMDP:
        lines.append(" ".join(["@actions", *model.actions]))
    lines.append(f"@init {model.init}")
    lines.append(" ".join(["@targets", *[s for s in model.states if s in model.targets]]))
    for s in model.states:
        for action in model.available(s):
            tag = f" [{action}]" if model.kind == ModelKind.PMDP else ""
            for succ, label in model.row(s, action):
                lines.append(f"{s}{tag} -> {succ} : {label}")
    return "\n".join(lines) + "\n"


# --- DIMACS ---

@dataclass(frozen=True)
class Cnf3:
    num_vars: int
    clauses: Tuple[Tuple[int, int, int], ...]

    def satisfied_by(self, assignment: Dict[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in clause) for clause in self.clauses)


def parse_dimacs(text: str) -> Cnf3:
    num_vars = None
    declared_clauses = 0
    clauses: List[Tuple[int, int, int]] = []
    pending: List[int] = []

    def close(lineno: int):
        if not pending:
            raise ParseError(lineno, 1, "empty clause")
        if len(pending) > 3:
            raise NotThreeCnf(f"line {lineno}: clause with {len(pending)} literals")
        padded = pending + [pending[-1]] * (3 - len(pending))
        clauses.append(tuple(padded))
        pending.clear()

    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError(lineno, 1, "duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf" or not all(p.isdigit() for p in parts[2:]):
                raise ParseError(lineno, 1, f"invalid problem line: {line}")
            num_vars, declared_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ParseError(lineno, 1, "clause before the 'p cnf' header")
        for token in line.split():
            try:
                lit = int(token)
            except ValueError:
                raise ParseError(lineno, raw.find(token) + 1, f"not an integer literal: {token!r}")
            if lit == 0:
                close(lineno)
            elif abs(lit) > num_vars:
                raise ParseError(lineno, raw.find(token) + 1, f"literal {lit} exceeds {num_vars} variables")
            else:
                pending.append(lit)
    if num_vars is None:
        raise ParseError(max(lineno, 1), 1, "missing 'p cnf' header")
    if pending:
        logger.warning("last clause is not terminated by 0; accepting it")
        close(lineno)
    if len(clauses) != declared_clauses:
        logger.warning("header declares %d clauses, found %d", declared_clauses, len(clauses))
    return Cnf3(num_vars=num_vars, clauses=tuple(clauses))


def print_dimacs(cnf: Cnf3) -> str:
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines.extend(" ".join(str(l) for l in clause) + " 0" for clause in cnf.clauses)
    return "\n".join(lines) + "\n"


# --- Polynomial systems ---

@dataclass(frozen=True)
class PolySystem:
    polys: Tuple[Polynomial, ...]
    variables: Tuple[str, ...]


def parse_poly_system(text: str, max_degree: Optional[int] = None) -> PolySystem:
    variables: Optional[List[str]] = None
    polys: List[Polynomial] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        if body.startswith("@vars"):
            if variables is not None:
                raise ParseError(lineno, indent + 1, "duplicate @vars")
            variables = body[len("@vars"):].split()
            continue
        if variables is None:
            raise ParseError(lineno, indent + 1, "expected @vars before the first polynomial")
        poly = parse_polynomial(body, line=lineno, col=indent, params=variables)
        if max_degree is not None and poly.degree() > max_degree:
            raise DegreeExceeded(f"line {lineno}: degree {poly.degree()} exceeds {max_degree}")
        polys.append(poly)
    if variables is None:
        variables = []
    return PolySystem(polys=tuple(polys), variables=tuple(variables))
