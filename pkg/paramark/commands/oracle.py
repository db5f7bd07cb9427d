# paramark/commands/oracle.py
from fractions import Fraction

from ..core.config import settings
from ..etr.encoder import EncodingRequest, encode
from ..modelio import format_valuation
from ..models import with_targets
from ..oracle import GridSpec, cross_check, flip_threshold, sweep
from ..polyalg import format_rational
from ..reductions import normalize_threshold
from ..schemas import Domain, GridDomain
from .. import services
from . import Output, add_model_flags, add_output_flags, add_query_flags, add_style_flag

HALF = Fraction(1, 2)


def register(subparsers) -> None:
    parser = subparsers.add_parser("oracle", help="exact brute-force search over a valuation grid")
    add_model_flags(parser)
    add_query_flags(parser)
    add_style_flag(parser)
    parser.add_argument("--grid", type=int, metavar="N", help="grid resolution")
    parser.add_argument(
        "--grid-domain", type=GridDomain, choices=list(GridDomain), metavar="{gp-interior,wd-closed,boolean}",
        help="default: gp-interior for --domain gp, wd-closed otherwise",
    )
    parser.add_argument(
        "--cross-check", action="store_true",
        help="check the encoding against exact evaluation instead of sweeping",
    )
    parser.add_argument(
        "--mutate", action="store_true",
        help="with --cross-check: negate the threshold relop in the encoding; counterexamples are expected",
    )
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _grid(args) -> GridSpec:
    domain = args.grid_domain
    if domain is None:
        domain = {Domain.GP: GridDomain.GP_INTERIOR, Domain.WD: GridDomain.WD_CLOSED}.get(
            args.domain, GridDomain.BOOLEAN
        )
    return GridSpec(args.grid or settings.GRID_RESOLUTION, domain)


def run(args) -> Output:
    model = with_targets(services.load_model(args.model), services.parse_targets(args.targets))
    grid = _grid(args)
    threshold = services.parse_threshold(args.threshold)
    if args.cross_check:
        working = model if threshold == HALF else normalize_threshold(model, threshold)
        request = EncodingRequest(
            model=working, relop=args.relop, quantifier=args.quantifier, domain=args.domain, style=args.style,
        )
        formula = flip_threshold(encode(request), working.init) if args.mutate else None
        report = cross_check(request, grid, formula=formula)
        lines = [f"checked: {report.checked}", f"counterexamples: {len(report.counterexamples)}"]
        lines += [
            f"  {format_valuation(c.val)}: expected {c.expected}, encoding says {c.actual}"
            for c in report.counterexamples
        ]
        return Output("\n".join(lines), report.to_read())

    report = sweep(model, None, args.quantifier, args.relop, threshold, grid)
    lines = [
        f"checked: {report.checked}",
        f"skipped: {report.skipped}",
        f"witnesses: {len(report.witnesses)}" + ("" if report.exhaustive else " (grid search, not exhaustive)"),
    ]
    lines += [f"  {format_valuation(w.val)}: {format_rational(w.value)}" for w in report.witnesses]
    return Output("\n".join(lines), report.to_read())
