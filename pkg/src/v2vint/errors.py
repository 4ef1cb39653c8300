"""Exception types shared across the package.

``ParameterError`` covers malformed inputs and configuration (CLI exit 2);
``DomainError`` and its subclasses cover well-formed inputs that fall outside
a formula's domain or violate a physical constraint (CLI exit 3).
"""


class ParameterError(ValueError):
    """Invalid argument or configuration value."""


class DomainError(ValueError):
    """Input outside the mathematical domain of an operation."""


class ConstraintError(DomainError):
    """A design/physical constraint (e.g. minimum gap time) is violated."""


class InfeasibleGeometryError(DomainError):
    """Triangle legs that cannot form a triangle."""


class DegenerateGeometryError(DomainError):
    """Geometry that makes a bound formula divide by zero."""


class SingularityError(DomainError):
    """An interferer coincides with the receiver."""


class UnsupportedAngleError(DomainError):
    """Intersection angle with no fitted coefficient set."""


class OutOfFitRangeWarning(UserWarning):
    """Fitted approximation evaluated outside its regression range."""
