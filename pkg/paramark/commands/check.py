# paramark/commands/check.py
from ..core.config import settings
from ..modelio import format_valuation
from .. import services
from . import Output, add_model_flags, add_output_flags, add_query_flags, add_style_flag


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "check", help="is there a valuation meeting the reachability threshold?",
    )
    add_model_flags(parser)
    add_query_flags(parser)
    add_style_flag(parser)
    parser.add_argument("--solver", metavar="PATH", help="SMT-LIB solver binary (or PARAMARK_SOLVER)")
    parser.add_argument("--timeout", type=int, metavar="SECS", help="solver timeout")
    parser.add_argument("--grid", type=int, metavar="N", help="oracle grid resolution without a solver")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> Output:
    model = services.load_model(args.model)
    report = services.run_check(
        model,
        services.parse_targets(args.targets),
        args.quantifier,
        args.relop,
        services.parse_threshold(args.threshold),
        domain=args.domain,
        style=args.style,
        solver=args.solver,
        timeout=args.timeout,
        grid=args.grid or settings.GRID_RESOLUTION,
    )
    if report.answer is True:
        lines = ["sat"]
    elif report.answer is False:
        lines = ["unsat"]
    else:
        lines = [f"unknown: {report.status} ({report.checked} point(s) checked)"]
    if report.witness is not None:
        lines.append(f"witness: {format_valuation(report.witness)}")
    if report.irrational:
        lines.append("witness: not rational, left unverified")
    if report.verified is not None:
        lines.append(f"verified: {'true' if report.verified else 'false'}")
    lines.append(f"method: {report.method}")
    return Output("\n".join(lines), report)
