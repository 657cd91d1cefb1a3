"""Exception types shared across the package."""


class FlatfirError(Exception):
    """Base class for all package errors."""


class DivisionError(FlatfirError):
    """Exact division requested but the divisor does not divide evenly."""


class DegenerateInput(FlatfirError):
    """Input outside the operation's domain (zero polynomial, etc.)."""


class ShapeError(FlatfirError):
    """Matrix shape does not admit the requested operation."""


class ParamError(FlatfirError):
    """Invalid filter design parameters."""


class InternalError(FlatfirError):
    """A structural property that must hold for valid inputs failed."""


class VerificationFailure(FlatfirError):
    """A predicted identity or degree law failed an exact check."""


class EliminationFailure(FlatfirError):
    """Variable elimination produced no usable univariate polynomial."""


class SpuriousRoot(FlatfirError):
    """A root candidate does not satisfy the full design system."""
