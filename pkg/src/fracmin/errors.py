"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class AdmissibilityError(DomainError):
    """A grid map has a phase gap of magnitude >= pi, so its winding
    number (and hence the energy bookkeeping built on it) is ill-defined
    at the current resolution."""


class ConvergenceError(RuntimeError):
    """An iterative scheme failed to reach the requested tolerance."""


class ConsistencyError(RuntimeError):
    """Two independent evaluation paths of the same quantity disagree
    beyond their combined error budget."""
