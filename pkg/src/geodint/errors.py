"""Exception types shared across the library."""


class GeodintError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GeodintError):
    """A vector or matrix has a shape incompatible with the generator."""


class SingularMetric(GeodintError):
    """The pullback metric is numerically singular even after ridging.

    Signals a rank-deficient Jacobian; callers may retry with a larger
    ridge.
    """


class DegenerateSegment(GeodintError):
    """Two consecutive ambient points of a curve have (near-)zero distance.

    Usually means the learning rate is too large or the curve has too
    many points for the path being solved.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InvalidConfig(GeodintError):
    """A solver or oracle configuration violates its invariants."""


class ParseError(GeodintError):
    """A weight file is not syntactically valid JSON."""


class SchemaError(GeodintError):
    """A weight file parses but violates the schema (dims, activations, NaN)."""


class UnreachableEndpoint(GeodintError):
    """The grid-graph oracle cannot connect the requested endpoints."""
