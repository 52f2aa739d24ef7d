"""Exception types shared across the package."""


class FaberzolError(Exception):
    """Base class for errors raised by this package."""


class InvalidRegionError(FaberzolError):
    """Region data is malformed (degenerate shape, self-intersection, bad kind)."""


class BoundaryPointError(FaberzolError):
    """A point query landed on a region boundary within tolerance."""


class QuadratureError(FaberzolError):
    """A contour quadrature result is not trustworthy (insufficient resolution)."""


class NotDisjointError(FaberzolError):
    """The two sets of a pair overlap or touch."""


class MapNotResolvedError(FaberzolError):
    """The annulus map solver did not reach the requested residual."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EvaluationDomainError(FaberzolError):
    """Evaluation was requested outside the domain of the function."""


class UncertifiedError(FaberzolError):
    """A certified computation (zero count, shift extraction) failed its check."""
