"""Exceptions raised by geoinscribe."""


class GeometryError(ValueError):
    """Input violates a geometric precondition (off-surface point, bad tangent, ...)."""


class AntipodalError(GeometryError):
    """Spherical pair at distance pi; the requested object is not unique."""


class DiagonalError(GeometryError):
    """Pair of coincident (or nearly coincident) points."""


class ConvergenceError(RuntimeError):
    """Iterative solver failed to reach its tolerance."""


class HypothesisError(ValueError):
    """A curve does not satisfy the hypothesis of the requested search."""


class SchemaError(ValueError):
    """Malformed curve spec or result record."""


class DiameterWarning(UserWarning):
    """Spherical curve meets its antipodal image (diameter at least pi)."""
