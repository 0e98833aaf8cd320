"""Exception types raised across the toolkit."""

from __future__ import annotations


class QDLError(Exception):
    """Base class for all toolkit errors."""


class InvalidInput(QDLError, ValueError):
    """A constructor argument violates a documented invariant."""


class InvalidAlpha(InvalidInput):
    pass


class RootSeparationFailure(QDLError):
    pass


class WeightOutOfRange(QDLError):
    pass


class QuadratureNoConvergence(QDLError):
    def __init__(self, message: str, gap: float):
        super().__init__(f"{message} (last gap {gap:.3e})")
        self.gap = gap


class BudgetExhausted(QDLError):
    """Raised only in strict mode; carries the best-so-far estimate."""

    def __init__(self, estimate):
        super().__init__(f"evaluation budget exhausted after {estimate.evaluations} evaluations")
        self.estimate = estimate


class AlphaOutOfTheoremRange(QDLError):
    pass


class AdmissibilityViolation(QDLError):
    pass


class DegenerateJacobian(QDLError):
    pass


class NotASquareDilatation(QDLError):
    pass
