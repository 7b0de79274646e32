"""Exception hierarchy shared by every module."""


class LoewnerLabError(Exception):
    """Base class for all errors raised by loewner_lab."""


class DimensionError(LoewnerLabError, ValueError):
    """Operands have incompatible or non-square shapes."""


class ParameterError(LoewnerLabError, ValueError):
    """A scalar parameter lies outside its admissible range."""


class DomainError(LoewnerLabError, ValueError):
    """A spectrum leaves the domain of the function applied to it."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class PreconditionError(LoewnerLabError, ValueError):
    """An operand violates a hypothesis of the inequality being checked."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ConvergenceError(LoewnerLabError, ArithmeticError):
    """The Jacobi eigensolver hit its sweep cap."""

    def __init__(self, message, residual):
        super().__init__(message)
        self.residual = residual


class ConfigError(LoewnerLabError, ValueError):
    """An invalid trial configuration."""
