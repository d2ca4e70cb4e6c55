"""Exception types shared across the package."""


class DirclustError(Exception):
    """Base class for all dirclust errors."""


class NonFiniteError(DirclustError, ValueError):
    """Input contains NaN or infinite values."""


class ZeroVectorError(DirclustError, ValueError):
    """Vector norm too small to normalize onto the sphere."""


class DimMismatchError(DirclustError, ValueError):
    """Operands live on spheres of different dimension."""


class InvalidDimError(DirclustError, ValueError):
    """Dimension outside the supported range (d >= 2)."""


class UnsupportedDimError(DirclustError, ValueError):
    """Operation only implemented for low dimensions (quadrature etc.)."""


class AntipodalError(DirclustError, ValueError):
    """Geodesic between antipodal points is not unique."""


class EmptySampleError(DirclustError, ValueError):
    """Operation requires at least one observation."""


class DegenerateSampleError(DirclustError, ValueError):
    """Sample is degenerate (e.g. all points identical)."""


class NonFiniteScoreError(DirclustError, ValueError):
    """An objective evaluation returned NaN or +/-inf."""


class ParseError(DirclustError, ValueError):
    """A data file failed to parse; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
