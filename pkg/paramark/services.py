# paramark/services.py
"""Orchestration shared by the subcommands: loading inputs, the check pipeline, report shaping."""
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

from .errors import (
    ParamarkError, SemanticError, SolverInconclusive, WitnessRejected,
)
from .etr.encoder import EncodingRequest, encode
from .etr.smtlib import check_witness, parse_solver_model, to_smt_script
from .modelio import parse_model, parse_rational, parse_valuation
from .models import (
    ParametricModel, center_valuation, classify_valuation, instantiate, resolve_targets,
    with_targets,
)
from .oracle import GridSpec, sweep
from .polyalg import Polynomial, RationalFunction, Valuation
from .qualitative import QualProblem, StateSetReport, decide_qualitative
from .quantitative import concrete_reach_value, mc_reach_exact, mdp_reach_extremum_exact
from .reductions import normalize_threshold
from .schemas import (
    CheckReport, Domain, EncodingStyle, ExtremumMode, GridDomain, QualKind, Quantifier, Relop,
    SolutionFunctionRead, SolverStatus, StateSetRead, TermRead, ValueRead,
)
from .solver import resolve_solver, run_solver

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


# --- Inputs ---

def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SemanticError(f"cannot read {path}: {exc.strerror or exc}")


def load_model(path: str) -> ParametricModel:
    return parse_model(read_text(path))


def parse_targets(text: Optional[str]) -> Optional[List[str]]:
    if not text:
        return None
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_threshold(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParamarkError:
        raise SemanticError(f"threshold must be a rational a/b, got {text!r}")


def load_valuation(text: str, model: ParametricModel) -> Dict[str, Fraction]:
    val = parse_valuation(text)
    unknown = sorted(set(val) - set(model.params))
    if unknown:
        raise SemanticError(f"valuation names unknown parameter(s): {', '.join(unknown)}")
    return val


# --- Report shaping ---

def _terms_read(poly: Polynomial) -> List[TermRead]:
    return [TermRead(coeff=c, monomial=dict(m)) for m, c in poly.terms]


def solution_function_read(value: RationalFunction) -> SolutionFunctionRead:
    return SolutionFunctionRead(text=str(value), num=_terms_read(value.num), den=_terms_read(value.den))


def state_set_read(report: StateSetReport, model: ParametricModel) -> StateSetRead:
    def ordered(states):
        return [s for s in model.states if s in states]

    return StateSetRead(
        zero_exists=ordered(report.zero_exists),
        zero_forall=ordered(report.zero_forall),
        one_exists=ordered(report.one_exists),
        one_forall=ordered(report.one_forall),
    )


# --- Values at one valuation ---

def value_at(
    model: ParametricModel,
    val: Valuation,
    targets: Optional[List[str]] = None,
    quantifier: Quantifier = Quantifier.EXISTS,
    relop: Optional[Relop] = None,
    threshold: Optional[Fraction] = None,
) -> ValueRead:
    """Exact value (pmc) or min/max pair (pmdp), plus the comparison verdict when a relop is given."""
    targets = resolve_targets(model, targets)
    concrete = instantiate(model, val)
    if concrete.is_pmc:
        read = ValueRead(value=mc_reach_exact(concrete, targets))
    else:
        low, _ = mdp_reach_extremum_exact(concrete, targets, ExtremumMode.MIN)
        high, _ = mdp_reach_extremum_exact(concrete, targets, ExtremumMode.MAX)
        read = ValueRead(min=low, max=high)
    if relop is not None:
        _check_relop(model, relop)
        value = concrete_reach_value(concrete, targets, quantifier, relop)
        read.verdict = relop.holds(value, HALF if threshold is None else Fraction(threshold))
    return read


# --- The check pipeline ---

_QUALITATIVE = {
    (Relop.GT, Fraction(0)): QualKind.POSITIVE,
    (Relop.LE, Fraction(0)): QualKind.SAFETY,
    (Relop.GE, Fraction(1)): QualKind.ALMOST_SURE,
    (Relop.LT, Fraction(1)): QualKind.UNSURE,
    (Relop.EQ, Fraction(0)): QualKind.SAFETY,
    (Relop.EQ, Fraction(1)): QualKind.ALMOST_SURE,
}


def _check_relop(model: ParametricModel, relop: Relop) -> None:
    if relop == Relop.EQ and not model.is_pmc:
        raise SemanticError("eq thresholds are only supported for single-action models")


def _in_domain(model: ParametricModel, val: Valuation, domain: Domain) -> bool:
    verdict = classify_valuation(model, val)
    return verdict.graph_preserving if domain == Domain.GP else verdict.well_defined


def run_check(
    model: ParametricModel,
    targets: Optional[List[str]],
    quantifier: Quantifier,
    relop: Relop,
    threshold: Fraction,
    domain: Domain = Domain.GP,
    style: EncodingStyle = EncodingStyle.EQUATIONS,
    solver: Optional[str] = None,
    timeout: Optional[int] = None,
    grid: int = 20,
) -> CheckReport:
    """Does some valuation in the domain satisfy the reachability threshold?

    Thresholds 0 and 1 are qualitative and decided exactly. Thresholds outside
    (0, 1) hold everywhere or nowhere, so only a point of the domain is needed.
    Otherwise the query is encoded for an external solver when one is configured,
    and any witness it returns is re-verified exactly; without a solver the oracle
    grid is searched.
    """
    targets = resolve_targets(model, targets)
    threshold = Fraction(threshold)
    _check_relop(model, relop)

    if domain == Domain.BOOL:
        report = sweep(model, targets, quantifier, relop, threshold, GridSpec(1, GridDomain.BOOLEAN))
        witness = report.witnesses[0].val if report.witnesses else None
        return CheckReport(
            method="enumeration", status="decided", answer=report.found,
            witness=witness, verified=True if witness is not None else None, checked=report.checked,
        )

    kind = _QUALITATIVE.get((relop, threshold))
    if kind is not None:
        result = decide_qualitative(model, QualProblem(kind, quantifier, domain), targets)
        return CheckReport(
            method="qualitative", status="decided", answer=result.answer,
            witness=result.witness, verified=True if result.witness is not None else None,
        )
    if not 0 < threshold < 1:
        return _check_trivial(model, relop, threshold, domain, grid)

    solver = resolve_solver(solver)
    if solver is None:
        return _check_by_oracle(model, targets, quantifier, relop, threshold, domain, grid)
    return _check_by_solver(model, targets, quantifier, relop, threshold, domain, style, solver, timeout)


def _check_trivial(
    model: ParametricModel, relop: Relop, threshold: Fraction, domain: Domain, grid: int
) -> CheckReport:
    """Thresholds outside (0, 1) hold at every point of the domain or at none."""
    if not relop.holds(Fraction(0), threshold):
        return CheckReport(method="trivial", status="decided", answer=False)
    center = center_valuation(model)
    if _in_domain(model, center, domain):
        return CheckReport(method="trivial", status="decided", answer=True, witness=center, verified=True)
    # only models with rows beyond Bernoulli and choice shapes get here
    grid_domain = GridDomain.GP_INTERIOR if domain == Domain.GP else GridDomain.WD_CLOSED
    spec = GridSpec(grid, grid_domain)
    checked = 0
    for val in spec.valuations(model.params):
        checked += 1
        if _in_domain(model, val, domain):
            return CheckReport(
                method="trivial", status="decided", answer=True, witness=val, verified=True, checked=checked,
            )
    logger.info("no %s valuation found on a grid of %d point(s)", domain.value, checked)
    return CheckReport(method="trivial", status="no-witness-at-resolution", checked=checked)


def _check_by_oracle(model, targets, quantifier, relop, threshold, domain, grid) -> CheckReport:
    grid_domain = GridDomain.GP_INTERIOR if domain == Domain.GP else GridDomain.WD_CLOSED
    report = sweep(model, targets, quantifier, relop, threshold, GridSpec(grid, grid_domain))
    found = [w for w in report.witnesses if _in_domain(model, w.val, domain)]
    if found:
        return CheckReport(
            method="oracle", status="witness-found", answer=True,
            witness=found[0].val, verified=True, checked=report.checked,
        )
    return CheckReport(method="oracle", status="no-witness-at-resolution", checked=report.checked)


def _check_by_solver(
    model, targets, quantifier, relop, threshold, domain, style, solver, timeout
) -> CheckReport:
    working = with_targets(model, targets)
    if threshold != HALF:
        working = normalize_threshold(working, threshold)
    request = EncodingRequest(
        model=working, relop=relop, kind=model.kind, quantifier=quantifier, domain=domain, style=style,
    )
    formula = encode(request)
    script = to_smt_script(formula, header=f"paramark check: {relop.symbol} {threshold} ({domain.value})")
    verdict = parse_solver_model(run_solver(script, solver, timeout), params=model.params)
    logger.info("solver answered %s", verdict.status.value)

    if verdict.status == SolverStatus.UNSAT:
        return CheckReport(method="solver", status="unsat", answer=False)
    if verdict.status != SolverStatus.SAT:
        raise SolverInconclusive(f"solver answered {verdict.status.value}")
    if verdict.witness is None:
        return CheckReport(method="solver", status="sat", answer=True, irrational=verdict.irrational)
    val = verdict.witness
    if not (_in_domain(model, val, domain) and check_witness(model, targets, quantifier, relop, val, threshold)):
        raise WitnessRejected(f"solver witness {val} fails exact re-verification")
    return CheckReport(method="solver", status="sat", answer=True, witness=val, verified=True)

