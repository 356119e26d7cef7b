"""Exception types shared across the package."""


class PolycenterError(Exception):
    """Base class for all library errors."""


class TooFewVertices(PolycenterError):
    """Fewer than three input points."""


class DegenerateEdge(PolycenterError):
    """Two consecutive polygon vertices coincide."""


class SelfIntersecting(PolycenterError):
    """Polygon edges cross or vertices repeat."""


class PointOutside(PolycenterError):
    """A query point lies outside the polygon."""


class DegeneratePartition(PolycenterError):
    """Both boundary split points coincide."""


class CoincidentPoints(PolycenterError):
    """Two points expected to differ coincide."""


class NegativeRadius(PolycenterError):
    """A disk radius is negative."""


class ContextMismatch(PolycenterError):
    """A precomputed decision context belongs to a different edge pair."""
