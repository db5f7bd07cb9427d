# paramark/commands/instantiate.py
from .. import services
from . import Output, add_model_flags, add_output_flags, add_query_flags


def register(subparsers) -> None:
    parser = subparsers.add_parser("instantiate", help="exact reachability value at one valuation")
    add_model_flags(parser)
    parser.add_argument("--val", required=True, metavar="x=a/b,...", help="parameter valuation")
    add_query_flags(parser, relop_required=False)
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> Output:
    model = services.load_model(args.model)
    val = services.load_valuation(args.val, model)
    read = services.value_at(
        model,
        val,
        services.parse_targets(args.targets),
        quantifier=args.quantifier,
        relop=args.relop,
        threshold=services.parse_threshold(args.threshold),
    )
    if read.value is not None:
        lines = [read.value]
    else:
        lines = [f"min: {read.min}", f"max: {read.max}"]
    if read.verdict is not None:
        lines.append(f"{args.relop.symbol} {args.threshold}: {'true' if read.verdict else 'false'}")
    return Output("\n".join(lines), read)
