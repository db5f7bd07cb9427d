# paramark/commands/__init__.py
"""One module per subcommand. Each exposes ``register(subparsers)`` and a handler returning an Output."""
import argparse
import json
from dataclasses import dataclass
from typing import Any, Optional

from pydantic import BaseModel

from ..schemas import Domain, EncodingStyle, Quantifier, Relop


@dataclass
class Output:
    text: str
    data: Any = None

    def render(self, as_json: bool) -> str:
        if not as_json:
            return self.text if self.text.endswith("\n") else self.text + "\n"
        data = self.data
        if isinstance(data, BaseModel):
            return data.model_dump_json(indent=2) + "\n"
        return json.dumps(data if data is not None else {"text": self.text}, indent=2) + "\n"


# --- Shared flags ---

def add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="print a JSON report instead of text")
    parser.add_argument("--out", metavar="PATH", help="write the result to PATH instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")


def add_model_flags(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument("-m", "--model", metavar="PATH", required=required, help="model file")
    parser.add_argument("--targets", metavar="CSV", help="target states (default: the model's @targets)")


def add_query_flags(parser: argparse.ArgumentParser, relop_required: bool = True) -> None:
    parser.add_argument(
        "--relop", type=Relop, choices=list(Relop), required=relop_required,
        metavar="{lt,le,eq,ge,gt}",
    )
    parser.add_argument("--threshold", default="1/2", metavar="a/b")
    parser.add_argument(
        "--quantifier", type=Quantifier, choices=list(Quantifier), default=Quantifier.EXISTS,
        metavar="{exists,forall}",
    )
    parser.add_argument(
        "--domain", type=Domain, choices=list(Domain), default=Domain.GP, metavar="{wd,gp,bool}",
    )


def add_style_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--style", type=EncodingStyle, choices=list(EncodingStyle), default=EncodingStyle.EQUATIONS,
        metavar="{equations,solution-function}",
    )


def yes_no(answer: Optional[bool]) -> str:
    return {True: "yes", False: "no", None: "unknown"}[answer]
