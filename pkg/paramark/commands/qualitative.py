# paramark/commands/qualitative.py
from ..models import instantiate, resolve_targets
from ..modelio import format_valuation
from ..qualitative import QualProblem, decide_qualitative, qualitative_states
from ..schemas import Domain, QualitativeRead, QualKind, Quantifier
from .. import services
from . import Output, add_model_flags, add_output_flags, yes_no


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "qualitative", help="decide a qualitative reachability problem, or list the qualitative state sets",
    )
    add_model_flags(parser)
    parser.add_argument(
        "--kind", type=QualKind, choices=list(QualKind), default=QualKind.POSITIVE,
        metavar="{positive,unsure,safety,almost-sure}",
    )
    parser.add_argument(
        "--quantifier", type=Quantifier, choices=list(Quantifier), default=Quantifier.EXISTS,
        metavar="{exists,forall}",
    )
    parser.add_argument(
        "--domain", type=Domain, choices=list(Domain), default=Domain.WD, metavar="{wd,gp,bool}",
    )
    parser.add_argument("--val", metavar="x=a/b,...", help="print the state sets at this valuation")
    add_output_flags(parser)
    parser.set_defaults(handler=run)


def run(args) -> Output:
    model = services.load_model(args.model)
    targets = services.parse_targets(args.targets)
    if args.val is not None:
        concrete = instantiate(model, services.load_valuation(args.val, model))
        report = qualitative_states(concrete, resolve_targets(model, targets))
        read = services.state_set_read(report, model)
        text = "\n".join(f"{name}: {' '.join(states)}" for name, states in read.model_dump().items())
        return Output(text, read)

    result = decide_qualitative(model, QualProblem(args.kind, args.quantifier, args.domain), targets)
    lines = [yes_no(result.answer)]
    if result.witness is not None:
        lines.append(f"witness: {format_valuation(result.witness)}")
    if result.strategy_witness:
        lines.append("strategy: " + ",".join(f"{s}={a}" for s, a in result.strategy_witness.items()))
    return Output("\n".join(lines), QualitativeRead.model_validate(result, from_attributes=True))
