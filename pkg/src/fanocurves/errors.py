"""Exception hierarchy.

The CLI maps these onto exit codes: parse problems exit with 3, broken
invariants with 2 and runaway group closures with 4.
"""


class FanoCurvesError(Exception):
    """Base class for every error raised by this package."""


class DomainError(FanoCurvesError, ZeroDivisionError):
    """Inversion of zero in the Eisenstein-rational field."""


class ReductionError(FanoCurvesError, ValueError):
    """A value cannot be reduced modulo the requested prime."""


class ParseError(FanoCurvesError, ValueError):
    """Malformed coefficient string, cubic file or seeds file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class GeometryError(FanoCurvesError, ValueError):
    """Base class for failed geometric preconditions."""


class DegenerateLineError(GeometryError):
    """Two points that should span a line are projectively equal."""


class DependentBasisError(GeometryError):
    """Vectors meant to span a plane are linearly dependent."""


class NotOnCubicError(GeometryError):
    """A point expected to lie on the cubic does not."""


class SingularPointError(GeometryError):
    """The gradient of the cubic vanishes at the given point."""


class LineInCubicError(GeometryError):
    """The line through two vertices lies on the cubic, so no third vertex exists."""


class TangentialIntersectionError(GeometryError):
    """The line meets the cubic with multiplicity at one of the given vertices."""


class InvariantViolation(FanoCurvesError, RuntimeError):
    """A proved structural property failed at runtime; indicates a bug or bad input."""


class TooManyVertices(InvariantViolation):
    """Saturation produced more cone vertices than a smooth cubic can have."""


class CapExceeded(FanoCurvesError, RuntimeError):
    """The group closure outgrew its order cap or the exact integer range."""


class InadmissibleParameters(FanoCurvesError, ValueError):
    """Family parameters violate the family's admissibility constraints."""
