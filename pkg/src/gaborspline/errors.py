"""Exception types shared across the package."""


class GaborSplineError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GaborSplineError, ValueError):
    """An argument is outside the domain an operation is defined on."""


class RegionError(GaborSplineError, ValueError):
    """Lattice parameters are outside the region an operation requires."""


class StructuralError(GaborSplineError, RuntimeError):
    """A matrix entry violates the expected zero/block structure.

    Carries the offending (ell, k) index pair of the entry.
    """

    def __init__(self, message, ell=None, k=None):
        super().__init__(message)
        self.ell = ell
        self.k = k


class SingularMatrixError(GaborSplineError, ArithmeticError):
    """A point solve hit a (numerically) singular matrix.

    Carries the evaluation point ``x`` and the determinant estimate.
    """

    def __init__(self, message, x=None, det=None):
        super().__init__(message)
        self.x = x
        self.det = det


class InvariantViolationError(GaborSplineError, RuntimeError):
    """A certified invariant failed numerically; carries a witness point."""

    def __init__(self, message, witness_x=None):
        super().__init__(message)
        self.witness_x = witness_x
