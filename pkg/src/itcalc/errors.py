"""Shared exception types for the information-transformer calculus."""


class CalculusError(Exception):
    """Base class for all library errors."""


class DomainError(CalculusError):
    """A truth value or membership grade lies outside [0, 1]."""


class SpaceMismatchError(CalculusError):
    """Operands are defined over incompatible spaces."""


class CategoryMismatchError(CalculusError):
    """Morphisms from different categories were combined."""


class ValidationError(CalculusError):
    """A payload or input file violates its well-formedness rules."""


class BudgetExceededError(CalculusError):
    """An exhaustive search would exceed the configured budget."""


class VerificationError(CalculusError):
    """An internal consistency check failed; this always indicates a bug."""
