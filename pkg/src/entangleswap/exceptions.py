"""Exception hierarchy shared by all entangleswap modules."""


class EntangleSwapError(Exception):
    """Base class for library errors."""


class DimensionError(EntangleSwapError, ValueError):
    """Shapes or subsystem dimensions are inconsistent or too large."""


class StateError(EntangleSwapError, ValueError):
    """A vector or matrix is not a valid quantum state."""


class NumericalError(EntangleSwapError, ArithmeticError):
    """A factorization failed or an input is too ill-conditioned."""


class VerificationError(EntangleSwapError, AssertionError):
    """An asserted identity or inequality did not hold within tolerance."""

    def __init__(self, failures):
        self.failures = dict(failures)
        names = ", ".join(sorted(self.failures))
        super().__init__(f"verification failed: {names}")
