"""Exception types raised across the package."""


class SqwalkError(Exception):
    """Base class for all package errors."""


class DimensionError(SqwalkError, ValueError):
    pass


class ContractViolation(SqwalkError, ValueError):
    """An input does not satisfy a documented precondition."""


class DomainError(SqwalkError, ValueError):
    pass


class EncodingInvalid(SqwalkError):
    """All a-amplitudes or all b-amplitudes vanish, so the phase encoding is undefined."""


class PhasePathological(SqwalkError):
    """Both phase-weighted sums vanish at the requested phase."""


class DenominatorVanishes(SqwalkError):
    pass


class IllConditioned(SqwalkError):
    pass


class DecodeFailed(SqwalkError):
    def __init__(self, message, residual):
        super().__init__(f"{message} (residual={residual:.3e})")
        self.residual = residual


class NumericConsistencyError(SqwalkError, ArithmeticError):
    pass


class UnsupportedDimension(SqwalkError, ValueError):
    pass
