"""
Exception hierarchy for the certification pipeline.

Input problems (exit code 2 at the CLI) subclass ValueError as well;
mathematical failures (exit code 1) subclass MathCheckError.
"""

from typing import Any, Optional


class CertificationError(Exception):
    """Base class; `stage` names the parameter, place or chart involved."""

    def __init__(self, message: str, stage: Optional[str] = None):
        self.stage = stage
        if stage:
            message = f"[{stage}] {message}"
        super().__init__(message)


# ---- Input / usage ----

class InvalidInputError(CertificationError, ValueError):
    """Malformed literal, or a value of the wrong shape (zero, unit, non-integral)."""


class UsageError(CertificationError, ValueError):
    """Unknown chart id, malformed table row and similar caller mistakes."""


# ---- Mathematical failures ----

class MathCheckError(CertificationError):
    """A mathematical check failed; the report (if any) is still meaningful."""

    def __init__(self, message: str, stage: Optional[str] = None, report: Any = None):
        super().__init__(message, stage)
        self.report = report


class NotPrimeError(MathCheckError):
    def __init__(self, reason: str, stage: Optional[str] = None):
        super().__init__(f"not a principal prime: {reason}", stage)
        self.reason = reason


class NotCoprimeError(MathCheckError):
    pass


class PreconditionError(MathCheckError):
    pass


class ConditionFailedError(MathCheckError):
    def __init__(self, condition: str, report: Any = None, stage: Optional[str] = None):
        super().__init__(f"condition failed: {condition}", stage, report)
        self.condition = condition


class SearchExhaustedError(MathCheckError):
    def __init__(self, stage: str, tested: int):
        super().__init__(
            f"search radius exhausted after {tested} candidates; enlarge the radius",
            stage,
        )
        self.tested = tested


class InfiniteValuationError(MathCheckError):
    pass


class ReciprocityViolation(MathCheckError):
    pass


class EliminationError(MathCheckError):
    pass


class FixedDivisorError(MathCheckError):
    def __init__(self, prime: int, stage: Optional[str] = None):
        super().__init__(f"{prime} divides f(n) for every n", stage)
        self.prime = prime


class ReducibleError(MathCheckError):
    pass
