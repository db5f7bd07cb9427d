# paramark/commands/reduce.py
from ..errors import SemanticError
from ..modelio import parse_dimacs, parse_poly_system, parse_polynomial, print_model
from ..models import with_targets
from ..reductions import (
    bcon4ineq_to_pmdp, gp_gadget, normalize_threshold, pmdp_exists_to_pmc, poly_to_pmc, sat3_to_pmc,
)
from ..schemas import Gadget, Sat3Variant
from .. import services
from . import Output, add_model_flags, add_output_flags

_SAT3 = {
    Gadget.SAT3_POSITIVE: Sat3Variant.POSITIVE,
    Gadget.SAT3_ALMOST_SURE: Sat3Variant.ALMOST_SURE,
    Gadget.SAT3_UNSURE: Sat3Variant.UNSURE,
}


def register(subparsers) -> None:
    parser = subparsers.add_parser("reduce", help="build a gadget model and print it in model format")
    parser.add_argument(
        "--gadget", type=Gadget, choices=list(Gadget), required=True,
        metavar="{" + ",".join(g.value for g in Gadget) + "}",
    )
    add_model_flags(parser, required=False)
    parser.add_argument("--threshold", metavar="a/b", help="threshold gadget: the bound to move to 1/2")
    parser.add_argument("--poly", metavar="EXPR", help="poly gadget: the polynomial")
    parser.add_argument("--midpoint", action="store_true", help="poly gadget: f >= 0 iff value >= 1/2")
    parser.add_argument("--cnf", metavar="PATH", help="sat3 gadgets: DIMACS 3-CNF file")
    parser.add_argument("--system", metavar="PATH", help="bcon4 gadget: polynomial system file")
    parser.add_argument("--max-degree", type=int, metavar="D", help="bcon4 gadget: reject higher degrees")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def _need(args, flag: str):
    value = getattr(args, flag.replace("-", "_"))
    if value is None:
        raise SemanticError(f"--gadget {args.gadget.value} needs --{flag}")
    return value


def run(args) -> Output:
    gadget = args.gadget
    if gadget in (Gadget.THRESHOLD, Gadget.GP, Gadget.EXISTS_TO_PMC):
        model = with_targets(services.load_model(_need(args, "model")), services.parse_targets(args.targets))
        if gadget == Gadget.THRESHOLD:
            threshold = services.parse_threshold(_need(args, "threshold"))
            built = normalize_threshold(model, threshold)
            header = f"threshold gadget: Pr >< {threshold} becomes Pr >< 1/2"
        elif gadget == Gadget.GP:
            built = gp_gadget(model)
            header = "graph-preservation gadget"
        else:
            built = pmdp_exists_to_pmc(model)
            header = "strategy choices replaced by coin parameters"
        data = {"gadget": gadget.value}
    elif gadget == Gadget.POLY:
        result = poly_to_pmc(parse_polynomial(_need(args, "poly")), midpoint=args.midpoint)
        built = result.pmc
        header = f"polynomial chain: value = (f + {result.A}) / {result.B}"
        data = {"gadget": gadget.value, "A": str(result.A), "B": str(result.B)}
    elif gadget in _SAT3:
        cnf = parse_dimacs(services.read_text(_need(args, "cnf")))
        built, _ = sat3_to_pmc(cnf, _SAT3[gadget])
        header = f"3SAT gadget ({_SAT3[gadget].value}): {cnf.num_vars} variable(s), {len(cnf.clauses)} clause(s)"
        data = {"gadget": gadget.value}
    else:
        system = parse_poly_system(services.read_text(_need(args, "system")), max_degree=args.max_degree)
        built, _ = bcon4ineq_to_pmdp(system)
        header = f"polynomial system gadget: {len(system.polys)} polynomial(s)"
        data = {"gadget": gadget.value}
    text = print_model(built, header=f"paramark reduce: {header}")
    data["model"] = text
    return Output(text, data)
