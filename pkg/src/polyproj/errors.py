"""Exception types shared across the library."""


class PolyprojError(Exception):
    """Base class for all library-specific errors."""


class DimensionMismatch(PolyprojError):
    """Operands live in ambient spaces of different dimension."""


class EmptySet(PolyprojError):
    """The target set (or intersection of sets) contains no point."""


class SingularGram(PolyprojError):
    """Gram factorization failed: the generating vectors are dependent."""


class DependentNormals(PolyprojError):
    """Operation requires linearly independent normals."""


class ZeroNormal(PolyprojError):
    """Operation requires a nonzero normal vector."""


class TooManyConstraints(PolyprojError):
    """Inequality count exceeds the exhaustive enumeration limit."""
