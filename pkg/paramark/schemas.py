# paramark/schemas.py
import enum
import operator
from fractions import Fraction
from typing import Annotated, Dict, List, Optional

from pydantic import BaseModel, BeforeValidator

from .polyalg import format_rational


# --- Enums (for query flags) ---

class Relop(str, enum.Enum):
    LT = "lt"
    LE = "le"
    EQ = "eq"
    GE = "ge"
    GT = "gt"

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @property
    def is_upper(self) -> bool:
        return self in (Relop.LT, Relop.LE)

    @property
    def is_lower(self) -> bool:
        return self in (Relop.GT, Relop.GE)

    @property
    def is_strict(self) -> bool:
        return self in (Relop.LT, Relop.GT)

    def holds(self, lhs, rhs) -> bool:
        return _OPS[self](lhs, rhs)

    def negate(self) -> "Relop":
        if self == Relop.EQ:
            raise ValueError("eq has no negation among the relops")
        return _NEGATED[self]


_SYMBOLS = {Relop.LT: "<", Relop.LE: "<=", Relop.EQ: "=", Relop.GE: ">=", Relop.GT: ">"}
_OPS = {
    Relop.LT: operator.lt, Relop.LE: operator.le, Relop.EQ: operator.eq,
    Relop.GE: operator.ge, Relop.GT: operator.gt,
}
_NEGATED = {Relop.LT: Relop.GE, Relop.LE: Relop.GT, Relop.GE: Relop.LT, Relop.GT: Relop.LE}


class Quantifier(str, enum.Enum):
    EXISTS = "exists"
    FORALL = "forall"


class Domain(str, enum.Enum):
    WD = "wd"
    GP = "gp"
    BOOL = "bool"


class QualKind(str, enum.Enum):
    POSITIVE = "positive"       # > 0
    UNSURE = "unsure"           # < 1
    SAFETY = "safety"           # <= 0
    ALMOST_SURE = "almost-sure"  # >= 1


class EncodingStyle(str, enum.Enum):
    EQUATIONS = "equations"
    SOLUTION_FUNCTION = "solution-function"


class ExtremumMode(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class GridDomain(str, enum.Enum):
    GP_INTERIOR = "gp-interior"
    WD_CLOSED = "wd-closed"
    BOOLEAN = "boolean"


class Sat3Variant(str, enum.Enum):
    POSITIVE = "positive"
    ALMOST_SURE = "almost-sure"
    UNSURE = "unsure"


class Gadget(str, enum.Enum):
    THRESHOLD = "threshold"
    GP = "gp"
    POLY = "poly"
    SAT3_POSITIVE = "sat3-positive"
    SAT3_ALMOST_SURE = "sat3-almostsure"
    SAT3_UNSURE = "sat3-unsure"
    BCON4 = "bcon4"
    EXISTS_TO_PMC = "exists-to-pmc"


class SolverStatus(str, enum.Enum):
    SAT = "sat"
    UNSAT = "unsat"
    UNKNOWN = "unknown"
    ERROR = "error"


def _rational_to_str(value):
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return format_rational(Fraction(value))
    return value


RationalStr = Annotated[str, BeforeValidator(_rational_to_str)]


# --- Report Schemas ---

class TermRead(BaseModel):
    coeff: RationalStr
    monomial: Dict[str, int]


class SolutionFunctionRead(BaseModel):
    text: str
    num: List[TermRead]
    den: List[TermRead]


class WitnessRead(BaseModel):
    val: Dict[str, RationalStr]
    value: RationalStr
    verdict: bool
    class Config:
        from_attributes = True


class CounterexampleRead(BaseModel):
    val: Dict[str, RationalStr]
    expected: bool
    actual: bool
    class Config:
        from_attributes = True


class OracleReportRead(BaseModel):
    checked: int
    skipped: int = 0
    exhaustive: bool = False
    witnesses: List[WitnessRead] = []
    counterexamples: List[CounterexampleRead] = []
    class Config:
        from_attributes = True


class CheckReport(BaseModel):
    method: str                 # "solver" or "oracle"
    status: str
    answer: Optional[bool] = None
    witness: Optional[Dict[str, RationalStr]] = None
    verified: Optional[bool] = None
    irrational: bool = False
    checked: Optional[int] = None


class ValueRead(BaseModel):
    value: Optional[RationalStr] = None
    min: Optional[RationalStr] = None
    max: Optional[RationalStr] = None
    verdict: Optional[bool] = None


class StateSetRead(BaseModel):
    zero_exists: List[str]
    zero_forall: List[str]
    one_exists: List[str]
    one_forall: List[str]


class QualitativeRead(BaseModel):
    answer: bool
    witness: Optional[Dict[str, RationalStr]] = None
    strategy_witness: Optional[Dict[str, str]] = None
    class Config:
        from_attributes = True
