"""Exception hierarchy and the verdict value shared by all checkers."""

from dataclasses import dataclass, field


class GridContractError(Exception):
    """Base class for every error raised by this package."""


class InputError(GridContractError, ValueError):
    """Malformed or precondition-violating input."""

    def __init__(self, message, code="invalid-input"):
        super().__init__(message)
        self.code = code


class BudgetExceeded(GridContractError):
    """An exhaustive search would exceed its configured budget.

    Distinct from a negative answer: callers must not read it as "no".
    """


class InvariantError(GridContractError):
    """An internal invariant failed; the result is withheld (fail-closed)."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class Verdict:
    ok: bool
    code: str = "ok"
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.ok

    @classmethod
    def success(cls, **data):
        return cls(True, "ok", "", data)

    @classmethod
    def violation(cls, code, detail, **data):
        return cls(False, code, detail, data)
