"""Exception hierarchy shared by every module in the package."""


class KendallBFError(Exception):
    """Base class for all package errors."""


class DomainError(KendallBFError, ValueError):
    """An argument lies outside the domain of the requested function."""


class DegeneratePriorError(KendallBFError, ArithmeticError):
    """A truncated normal has (numerically) zero mass on its support."""


class QuadratureError(KendallBFError, ArithmeticError):
    """Adaptive quadrature failed to reach its tolerance within the node budget."""


class NoSolutionError(KendallBFError, ArithmeticError):
    """A root-finding problem has no solution in the admissible bracket."""
