"""Exception hierarchy for the sub-Hardy toolkit."""


class SubHardyError(ValueError):
    """Base class for input and contract errors raised by this package."""


class DimensionMismatch(SubHardyError):
    pass


class NotRepresentable(SubHardyError):
    """A coefficient vector does not lie in the span of a space's basis."""

    def __init__(self, msg, residual):
        super().__init__(msg)
        self.residual = residual


class NotPositiveDefinite(SubHardyError):
    pass


class NotInvariant(SubHardyError):
    """Multiplication by z maps some element of the space outside of it."""

    def __init__(self, index, residual):
        super().__init__(
            f"z*M is not contained in M: domain vector {index} has relative "
            f"residual {residual:.3e}"
        )
        self.index = index
        self.residual = residual


class BudgetExceeded(SubHardyError):
    """The requested number of shifts does not fit in the truncation window."""


class WanderingDimNotOne(SubHardyError):
    def __init__(self, dim):
        super().__init__(f"wandering subspace has dimension {dim}, expected 1")
        self.dim = dim


class HypothesesNotVerified(SubHardyError):
    pass
