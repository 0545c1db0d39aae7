"""Exception types shared across the package."""

from __future__ import annotations


class StructuralError(ValueError):
    """A datum (or one of its parts) violates a construction invariant."""

    def __init__(self, message: str, code: str = "E_STRUCTURE"):
        super().__init__(message)
        self.code = code


class UniverseMismatch(StructuralError):
    def __init__(self, message: str = "objects live over different universes"):
        super().__init__(message, code="E_UNIVERSE")


class PreconditionError(ValueError):
    """An operation was called on data that does not meet its hypotheses.

    ``missing`` names the hypotheses that failed, e.g. ``["Axiom I"]``.
    """

    def __init__(self, message: str, missing: list[str] | None = None):
        super().__init__(message)
        self.missing = list(missing or [])


class DomainError(ValueError):
    """A scalar argument lies outside the range an operation accepts (e.g. eta = 1)."""


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its candidate budget."""
