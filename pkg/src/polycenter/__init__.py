"""Geodesic shortest paths, disks, 1-center and 2-center of simple polygons."""

from .errors import (
    ContextMismatch,
    CoincidentPoints,
    DegenerateEdge,
    DegeneratePartition,
    NegativeRadius,
    PointOutside,
    PolycenterError,
    SelfIntersecting,
    TooFewVertices,
)
from .geometry import (
    BoundaryCoord,
    Chain,
    Point,
    SimplePolygon,
    SubPolygon,
    chain,
    orientation,
    point_in_polygon,
    read_polygon_text,
    subpolygon,
    validate_polygon,
    write_polygon_text,
)
from .geodesic import (
    GeodesicPath,
    ShortestPathMap,
    ShortestPathTree,
    Triangulation,
    geodesic_distance,
    path_convexity_check,
    shortest_path,
    shortest_path_map,
    shortest_path_tree,
    triangulate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
