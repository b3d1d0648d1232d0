"""Exception types shared across the package."""


class TruncationError(ValueError):
    """Requested state or operator does not fit in the truncated Fock space."""


class InsufficientBudgetError(ValueError):
    """Photon budget N is smaller than the thermal occupancy n̄."""


class KrausValidationError(ValueError):
    """A Kraus set fails completeness or a structural condition."""


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine ran out of its iteration budget."""


class BudgetWarning(UserWarning):
    """Signal-to-noise request sits outside the physical photon budget."""
