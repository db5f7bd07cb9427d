# paramark/commands/solution.py
from ..quantitative import per_state_solution_functions, solution_function
from .. import services
from . import Output, add_model_flags, add_output_flags


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "solution-function", help="reachability probability as a rational function (pmc only)",
    )
    add_model_flags(parser)
    parser.add_argument("--order", metavar="CSV", help="state elimination order")
    parser.add_argument("--per-state", action="store_true", help="print the function of every state")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> Output:
    model = services.load_model(args.model)
    targets = services.parse_targets(args.targets)
    if args.per_state:
        functions = per_state_solution_functions(model, targets)
        text = "\n".join(f"{s}: {fn}" for s, fn in functions.items())
        data = {s: services.solution_function_read(fn).model_dump() for s, fn in functions.items()}
        return Output(text, data)
    order = services.parse_targets(args.order)
    result = solution_function(model, targets, order=order)
    return Output(str(result), services.solution_function_read(result.value))
