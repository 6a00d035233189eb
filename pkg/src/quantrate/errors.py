"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class BracketError(ValueError):
    """A root-finding bracket does not actually bracket a sign change."""


class ConvergenceError(RuntimeError):
    """An iterative routine exhausted its iteration budget or produced
    an estimate too degenerate to continue from."""


class ParameterError(ValueError):
    """A simulation parameter is outside the supported range."""
