"""Exception types shared across famlab modules."""

from __future__ import annotations


class FamlabError(Exception):
    """Base class for all famlab errors."""


class InvalidFamilyError(FamlabError, ValueError):
    """Raised when an operation receives a family that fails validation."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class FamilyParseError(FamlabError, ValueError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class BudgetExceeded(FamlabError):
    """A search hit its node budget before finishing.

    Carries whatever partial statistics the search had collected; callers
    must treat the result as unknown, never as an approximation.
    """

    def __init__(self, message: str, stats: dict | None = None):
        self.stats = dict(stats or {})
        super().__init__(message)
