"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class InfeasibleError(ValueError):
    """Parameters admit no configuration with positive masses."""


class SingularityError(ArithmeticError):
    """A linear solve hit a (numerically) vanishing eigenvalue."""


class ConvergenceError(RuntimeError):
    """An iterative solver stopped before reaching its tolerance.

    The last iterate and its residual are kept on the exception so callers
    can report them.
    """

    def __init__(self, message, iterate=None, residual=None):
        super().__init__(message)
        self.iterate = iterate
        self.residual = residual


class BracketError(ArithmeticError):
    """A root-finding bracket does not straddle a sign change."""


class CoincidentPositionsError(DomainError):
    """Two bodies closer than the coincidence threshold."""
