"""Exception hierarchy for crosslap.

Structural validation problems are reported as data (see
``crosslap.core.validate``); exceptions are reserved for contract
violations and unrecoverable numerical failures.
"""


class CrosslapError(Exception):
    """Base class for all crosslap errors."""


class DegenerateSimplex(CrosslapError):
    """A vertex list contains a repeated vertex."""


class EmptySimplex(CrosslapError):
    """Both vertex lists of a crossimplex are empty."""


class InvalidWeight(CrosslapError):
    """A weight is zero or negative."""


class UnknownVertex(CrosslapError):
    """A vertex id does not belong to the referenced layer."""


class UnknownSimplex(CrosslapError):
    """A crossimplex is not contained in the bicomplex."""


class GradeMismatch(CrosslapError):
    """Two crossimplices expected in the same grade are not."""


class EmptyGrade(CrosslapError):
    """The requested grade holds no crossimplices."""


class UnsupportedGrade(CrosslapError):
    """The operation is only defined for cross-edge grade (0, 0)."""


class RankAmbiguous(CrosslapError):
    """A singular value falls inside the numerical rank threshold band."""

    def __init__(self, sigma: float, band: tuple[float, float]):
        self.sigma = sigma
        self.band = band
        super().__init__(
            f"singular value {sigma:.3e} inside ambiguity band "
            f"[{band[0]:.3e}, {band[1]:.3e}]"
        )


class EigenFailure(CrosslapError):
    """The eigensolver did not converge or violated its residual contract."""


class FullSpectrumUnavailable(CrosslapError):
    """Only extremal eigenpairs were computed; full-spectrum persistence
    is not available at this problem size."""


class SameLayer(CrosslapError):
    """A layer pair must consist of two distinct layers."""


class UnknownLayer(CrosslapError):
    """The referenced layer index does not exist."""


class ParseError(CrosslapError):
    """An input file line could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SelfLoop(ParseError):
    """An edge-list line declares a self-loop."""


class EmptyReport(CrosslapError):
    """There is nothing to render."""
