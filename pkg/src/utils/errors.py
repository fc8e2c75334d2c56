"""
Exception types raised by the verification engine.

All of them derive from ValueError so callers that only guard against bad
input keep working; the suite orchestrator catches them per check.
"""


class VerificationError(ValueError):
    """Base class for engine errors."""


class NotPositiveDefiniteError(VerificationError):
    pass


class InsufficientJetOrderError(VerificationError):
    def __init__(self, required: int, available: int, what: str = "metric"):
        self.required = required
        self.available = available
        super().__init__(
            f"insufficient jet order: {what} jets of order {required} required, "
            f"only order {available} available"
        )


class NotASolitonError(VerificationError):
    pass


class UnknownModelError(VerificationError):
    pass


class UnknownIdentityError(VerificationError):
    pass


class MissingOracleError(VerificationError):
    pass


class IrregularValueError(VerificationError):
    pass


class EmptyLevelSetError(VerificationError):
    pass


class HypothesisViolationError(VerificationError):
    pass


class ResolutionError(VerificationError):
    pass


class NonCompactDomainError(VerificationError):
    pass


class NotTransverseTracelessError(VerificationError):
    pass


class StepRejectedError(VerificationError):
    pass


class ConfigError(VerificationError):
    pass
