"""Exception types shared across ordtope modules."""


class OrdtopeError(ValueError):
    """Base class for all library errors."""


class EmptyBasisError(OrdtopeError):
    pass


class InvalidProgressionError(OrdtopeError):
    pass


class DomainError(OrdtopeError):
    pass


class PrecisionUndecidableError(OrdtopeError):
    pass


class BasisTooSmallError(OrdtopeError):
    pass


class NotInFactorialDomainError(OrdtopeError):
    """Raised when a value has a prime factor outside the basis."""

    def __init__(self, value, residual):
        super().__init__(f"{value} is not in the factorial domain (residual factor {residual})")
        self.value = value
        self.residual = residual


class ConstantsInfeasibleError(OrdtopeError):
    pass


class SpecError(OrdtopeError):
    pass


class BudgetError(OrdtopeError):
    pass


class CorruptOracleError(OrdtopeError):
    pass


class ShapeError(OrdtopeError):
    pass


class UndefinedRadiusError(OrdtopeError):
    pass


class NoSolutionError(OrdtopeError):
    pass


class FormulationMismatchError(OrdtopeError):
    pass


class DilationInfeasibleError(OrdtopeError):
    pass


class ParameterError(OrdtopeError):
    pass


class WidthError(OrdtopeError):
    pass


class SingularKernelError(OrdtopeError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
