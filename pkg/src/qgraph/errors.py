"""Exception hierarchy.

Everything raised on purpose derives from :class:`QGraphError`. The CLI maps
:class:`ParseError` to exit code 1 and every other :class:`QGraphError` to
exit code 2.
"""


class QGraphError(Exception):
    """Base class for all errors raised by qgraph."""


class GraphError(QGraphError, ValueError):
    """A graph violates one of the invariants of its kind."""


class ParseError(QGraphError):
    """Malformed or semantically invalid graph text.

    Attributes
    ----------
    line, column : int
        1-based position of the offending token.
    message : str
    kind : str
        ``"Syntax"`` or ``"Semantic"``.
    """

    def __init__(self, line, column, message, kind="Syntax"):
        self.line = line
        self.column = column
        self.message = message
        self.kind = kind
        super().__init__(f"{kind} error at {line}:{column}: {message}")


class ComputeError(QGraphError):
    """A numerical precondition failed."""


class NotHermitian(ComputeError):
    pass


class ConvergenceError(ComputeError):
    pass


class DimensionMismatch(ComputeError, ValueError):
    pass


class DegreeZero(ComputeError):
    """The graph has no degree mass, so no density matrix exists."""


class NotPure(ComputeError):
    pass


class NotUnitary(ComputeError):
    pass


class NotDensityMatrix(ComputeError):
    pass


class DisconnectedGraph(ComputeError):
    pass


class SizeLimitExceeded(ComputeError):
    pass


class StabilityError(ComputeError):
    """Explicit Euler step would be unstable."""


class NotHermitianResult(ComputeError):
    pass


class NonzeroDiagonal(ComputeError):
    pass


class RecipeError(ComputeError):
    """A product recipe is malformed."""
