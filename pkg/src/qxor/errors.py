"""Exception types shared across the package."""


class QxorError(Exception):
    """Base class for every error raised by this package."""


class ShapeError(QxorError, ValueError):
    """Matrix or vector dimensions are inconsistent with the operation."""


class ValidationError(QxorError, ValueError):
    """A game, strategy, or other input violates a required invariant."""


class CommutationError(ValidationError):
    """Alice and Bob block operators fail to commute within tolerance."""


class PatternError(ValidationError):
    """A correlation lacks the corner block pattern of a valid embedding."""


class ParseError(QxorError, ValueError):
    """A JSON input file is malformed or does not match the documented schema."""


class NumericalError(QxorError, ArithmeticError):
    """A numerical routine could not certify its postcondition."""
