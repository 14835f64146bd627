"""Exception types shared across the package."""


class MoyalError(Exception):
    """Base class for all errors raised by this package."""


class ParameterMismatchError(MoyalError):
    """Operands carry incompatible physical parameters (hbar, grid spec, ...)."""


class StarSingularError(MoyalError):
    """The Gaussian star product is not defined: nonintegrable star product."""


class NonNormalizableError(MoyalError):
    """Integration requested for a function whose Gaussian part does not decay."""


class GridMismatchError(MoyalError):
    """Grid fields do not share the same sampling specification."""


class BoxTooSmallError(MoyalError):
    """Integration box does not contain the function's support to the requested tolerance."""

    def __init__(self, message, required_box=None):
        super().__init__(message)
        self.required_box = required_box


class ConvergenceError(MoyalError):
    """An iterative or series evaluation failed to reach the requested accuracy."""
