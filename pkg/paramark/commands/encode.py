# paramark/commands/encode.py
from fractions import Fraction

from ..errors import SemanticError
from ..etr.encoder import EncodingRequest, encode, encode_strategy_optimality
from ..etr.formula import render, size
from ..etr.smtlib import to_smt_script
from ..models import ModelKind, with_targets
from ..reductions import normalize_threshold
from ..schemas import ExtremumMode
from .. import services
from . import Output, add_model_flags, add_output_flags, add_query_flags, add_style_flag


def register(subparsers) -> None:
    parser = subparsers.add_parser("encode", help="emit the query as an SMT-LIB (QF_NRA) script")
    add_model_flags(parser)
    add_query_flags(parser)
    add_style_flag(parser)
    parser.add_argument(
        "--kind", type=ModelKind, choices=list(ModelKind), metavar="{pmc,pmdp}",
        help="encode as this model kind (default: the file's @type)",
    )
    parser.add_argument(
        "--strategy", metavar="STATE=ACTION,...",
        help="emit the optimality certificate of this strategy instead of the query",
    )
    parser.add_argument(
        "--mode", type=ExtremumMode, choices=list(ExtremumMode), default=ExtremumMode.MIN,
        metavar="{min,max}", help="extremum certified by --strategy",
    )
    parser.add_argument("--infix", action="store_true", help="print a readable formula instead of SMT-LIB")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _parse_strategy(text: str):
    strategy = {}
    for item in text.split(","):
        state, sep, action = item.partition("=")
        if not sep or not state.strip() or not action.strip():
            raise SemanticError(f"expected STATE=ACTION, got {item.strip()!r}")
        strategy[state.strip()] = action.strip()
    return strategy


def run(args) -> Output:
    model = with_targets(services.load_model(args.model), services.parse_targets(args.targets))
    threshold = services.parse_threshold(args.threshold)
    if args.strategy:
        if threshold != Fraction(1, 2):
            raise SemanticError("strategy certificates compare against 1/2 only")
        formula = encode_strategy_optimality(
            model, _parse_strategy(args.strategy), None, args.relop, args.mode,
        )
        header = f"paramark encode: {args.mode.value}imality certificate"
    else:
        working = model if threshold == Fraction(1, 2) else normalize_threshold(model, threshold)
        request = EncodingRequest(
            model=working, relop=args.relop, kind=args.kind or model.kind,
            quantifier=args.quantifier, domain=args.domain, style=args.style,
        )
        formula = encode(request)
        header = f"paramark encode: {request.variant.value}, {args.relop.symbol} {threshold}"
    if args.infix:
        return Output(render(formula), {"formula": render(formula), "size": size(formula)})
    script = to_smt_script(formula, header=header)
    return Output(script, {"script": script, "size": size(formula)})
