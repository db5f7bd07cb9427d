# paramark/errors.py
from typing import List, Optional


class ParamarkError(Exception):
    """Base error. `detail` is what the CLI prints, `exit_code` is what it returns."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# --- Usage / input errors (exit 1) ---

class ParseError(ParamarkError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class SemanticError(ParamarkError):
    def __init__(self, message: str, line: Optional[int] = None):
        detail = message if line is None else f"line {line}: {message}"
        super().__init__(detail)
        self.line = line


class InvalidModel(ParamarkError):
    def __init__(self, violations: List["object"]):
        listing = "; ".join(str(v) for v in violations)
        super().__init__(f"model violates {len(violations)} structural rule(s): {listing}")
        self.violations = violations


class NotThreeCnf(ParamarkError):
    pass


class DegreeExceeded(ParamarkError):
    pass


class NotSimple(ParamarkError):
    pass


class NotPmc(ParamarkError):
    pass


class NotPmdp(ParamarkError):
    pass


class NotWellDefined(ParamarkError):
    def __init__(self, reason: str):
        super().__init__(f"valuation is not well-defined: {reason}")
        self.reason = reason


class NotGraphPreserving(ParamarkError):
    pass


class ThresholdOutOfRange(ParamarkError):
    pass


class InvalidStrategy(ParamarkError):
    def __init__(self, state: str, detail: Optional[str] = None):
        super().__init__(detail or f"strategy picks no available action at state {state}")
        self.state = state


class MissingParameter(ParamarkError):
    def __init__(self, param: str):
        super().__init__(f"no value for parameter {param}")
        self.param = param


class MissingVariable(ParamarkError):
    def __init__(self, name: str):
        super().__init__(f"no value for formula variable {name}")
        self.name = name


class UnparseableModel(ParamarkError):
    pass


# --- Solver errors (exit 2) ---

class SolverUnavailable(ParamarkError):
    exit_code = 2


class SolverInconclusive(ParamarkError):
    exit_code = 2


# --- Internal limits (exit 3) ---

class LimitExceeded(ParamarkError):
    exit_code = 3


class EliminationBlowup(LimitExceeded):
    pass


class ExponentLimitExceeded(LimitExceeded):
    pass


class EnumerationCapExceeded(LimitExceeded):
    pass


class WitnessRejected(ParamarkError):
    exit_code = 3


class SelfCheckFailed(ParamarkError):
    """Policy iteration and strategy enumeration disagree; a bug, not a user error."""
    exit_code = 3
