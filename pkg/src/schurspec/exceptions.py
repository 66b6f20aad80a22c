"""Exception hierarchy for schurspec."""


class SchurSpecError(Exception):
    """Base class for all errors raised by this package."""


class InvalidArgument(SchurSpecError, ValueError):
    pass


class InvalidMatrix(InvalidArgument):
    """Matrix input is malformed: non-finite, non-square or not symmetric."""


class SolverDivergence(SchurSpecError, RuntimeError):
    """An eigensolver hit its iteration cap without converging."""


class DomainError(SchurSpecError, ValueError):
    """A function was evaluated outside of its domain."""


class Overflow(SchurSpecError, ArithmeticError):
    pass


class ConvergenceError(SchurSpecError, ArithmeticError):
    """A weighted eigenvalue series diverges or has no derivable tail bound."""


class MonotonicityError(InvalidArgument):
    """Weights are not nonincreasing in the two-sided index order."""


class InvalidParameter(InvalidArgument):
    pass


class NoEigenvalues(InvalidParameter):
    pass


class NonPositiveCoefficient(InvalidParameter):
    pass


class SingularOperator(SchurSpecError, ArithmeticError):
    """The discretized operator is not positive definite after shifting."""
