"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NonConvergenceError(ArithmeticError):
    """A series or rejection loop failed to converge within its budget."""


class QuadratureError(ArithmeticError):
    """Adaptive quadrature could not meet the requested tolerance."""


class NoisyMomentError(RuntimeError):
    """A Monte Carlo moment estimate is too noisy to be used downstream.

    Raised when the standard error of a required moment exceeds 10% of its
    value; increase the number of paths.
    """


class RootBracketError(RuntimeError):
    """A root finder could not bracket the requested value."""


class UnsupportedRegimeError(ValueError):
    """No printed asymptotic formula exists for this (family, regime) pair."""
