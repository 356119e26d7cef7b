"""Planar primitives: points, robust orientation, simple polygons and boundary coordinates.

The polygon convention throughout the package is a clockwise vertex ring under
a y-up coordinate system (signed shoelace area < 0).  Counterclockwise input is
reversed silently by ``validate_polygon``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .errors import (
    DegenerateEdge,
    DegeneratePartition,
    SelfIntersecting,
    TooFewVertices,
)

TAU_ON = 1e-9  # absolute tolerance for on-boundary classification


class Point(NamedTuple):
    x: float
    y: float


def dist(a: Point, b: Point) -> float:
    return math.hypot(a.x - b.x, a.y - b.y)


def lerp(a: Point, b: Point, t: float) -> Point:
    return Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def cross(o: Point, a: Point, b: Point) -> float:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


_ORIENT_EPS = 3.3306690738754716e-16


def orientation(a: Point, b: Point, c: Point) -> int:
    """Sign of twice the signed area of abc: +1 left turn, -1 right turn, 0 collinear.

    A floating-point filter handles the common case; near-degenerate inputs
    fall back to exact rational arithmetic (floats are binary rationals).
    """
    detleft = (b.x - a.x) * (c.y - a.y)
    detright = (b.y - a.y) * (c.x - a.x)
    det = detleft - detright
    bound = _ORIENT_EPS * (abs(detleft) + abs(detright))
    if det > bound:
        return 1
    if det < -bound:
        return -1
    det_exact = (Fraction(b.x) - Fraction(a.x)) * (Fraction(c.y) - Fraction(a.y)) - (
        Fraction(b.y) - Fraction(a.y)
    ) * (Fraction(c.x) - Fraction(a.x))
    if det_exact > 0:
        return 1
    if det_exact < 0:
        return -1
    return 0


def point_on_segment(p: Point, a: Point, b: Point, tol: float = TAU_ON) -> bool:
    """True if p lies within ``tol`` of the closed segment ab."""
    return point_segment_distance(p, a, b) <= tol


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    vx, vy = b.x - a.x, b.y - a.y
    wx, wy = p.x - a.x, p.y - a.y
    vv = vx * vx + vy * vy
    if vv <= 0.0:
        return math.hypot(wx, wy)
    t = (wx * vx + wy * vy) / vv
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(wx - t * vx, wy - t * vy)


def _between_exact(p: Point, a: Point, b: Point) -> bool:
    # p assumed collinear with ab; closed-range coordinate test
    if min(a.x, b.x) - 0.0 <= p.x <= max(a.x, b.x):
        return min(a.y, b.y) <= p.y <= max(a.y, b.y)
    return False


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True if closed segments ab and cd share any point (exact predicates)."""
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and _between_exact(c, a, b):
        return True
    if o2 == 0 and _between_exact(d, a, b):
        return True
    if o3 == 0 and _between_exact(a, c, d):
        return True
    if o4 == 0 and _between_exact(b, c, d):
        return True
    return False


def signed_area(points: Sequence[Point]) -> float:
    s = 0.0
    n = len(points)
    for k in range(n):
        p, q = points[k], points[(k + 1) % n]
        s += p.x * q.y - q.x * p.y
    return 0.5 * s


class BoundaryCoord(NamedTuple):
    """Position on the boundary: fraction t in [0,1] along directed edge e_i."""

    edge: int
    t: float


class SimplePolygon:
    """Clockwise simple polygon; immutable ring plus lazily built query caches."""

    def __init__(self, vertices: Sequence[Point]):
        self.vertices: tuple[Point, ...] = tuple(Point(float(p[0]), float(p[1])) for p in vertices)
        self.n = len(self.vertices)
        self._edge_lengths = tuple(
            dist(self.vertices[k], self.vertices[(k + 1) % self.n]) for k in range(self.n)
        )
        self._cum = [0.0]
        for length in self._edge_lengths:
            self._cum.append(self._cum[-1] + length)
        self.perimeter = self._cum[-1]
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        self.bbox = (min(xs), min(ys), max(xs), max(ys))
        self.is_convex = all(
            orientation(self.vertices[k - 1], self.vertices[k], self.vertices[(k + 1) % self.n]) <= 0
            for k in range(self.n)
        )
        # caches owned by other modules (triangulation, path maps, radii, ...)
        self._cache: dict = {}

    # -- indexing helpers ------------------------------------------------
    def vertex(self, k: int) -> Point:
        return self.vertices[k % self.n]

    def edge(self, k: int) -> tuple[Point, Point]:
        return self.vertices[k % self.n], self.vertices[(k + 1) % self.n]

    def edge_length(self, k: int) -> float:
        return self._edge_lengths[k % self.n]

    def is_reflex(self, k: int) -> bool:
        # clockwise ring: a reflex corner turns left
        return orientation(self.vertex(k - 1), self.vertex(k), self.vertex(k + 1)) > 0

    # -- boundary coordinates --------------------------------------------
    def normalize_bc(self, bc: BoundaryCoord) -> BoundaryCoord:
        e = bc.edge % self.n
        t = float(bc.t)
        if t >= 1.0:
            return BoundaryCoord((e + 1) % self.n, 0.0)
        if t < 0.0:
            raise ValueError(f"boundary parameter out of range: {bc}")
        return BoundaryCoord(e, t)

    def boundary_point(self, bc: BoundaryCoord) -> Point:
        bc = self.normalize_bc(bc)
        a, b = self.edge(bc.edge)
        return lerp(a, b, bc.t)

    def boundary_s(self, bc: BoundaryCoord) -> float:
        """Combinatorial position edge+t in [0, n): total order around the ring."""
        bc = self.normalize_bc(bc)
        return bc.edge + bc.t

    def boundary_arclength(self, bc: BoundaryCoord) -> float:
        bc = self.normalize_bc(bc)
        return self._cum[bc.edge] + self._edge_lengths[bc.edge] * bc.t

    def bc_at_arclength(self, s: float) -> BoundaryCoord:
        s = s % self.perimeter
        # binary search over cumulative lengths
        lo, hi = 0, self.n
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if self._cum[mid] <= s:
                lo = mid
            else:
                hi = mid
        length = self._edge_lengths[lo]
        t = 0.0 if length == 0.0 else (s - self._cum[lo]) / length
        return self.normalize_bc(BoundaryCoord(lo, min(t, 1.0)))

    def vertex_bc(self, k: int) -> BoundaryCoord:
        return BoundaryCoord(k % self.n, 0.0)

    def chain_arclength(self, u: BoundaryCoord, w: BoundaryCoord) -> float:
        """Clockwise boundary length from u to w."""
        su = self.boundary_arclength(u)
        sw = self.boundary_arclength(w)
        d = sw - su
        if d < 0:
            d += self.perimeter
        return d

    def project_to_boundary(self, p: Point) -> BoundaryCoord:
        best = None
        best_d = math.inf
        for k in range(self.n):
            a, b = self.edge(k)
            vx, vy = b.x - a.x, b.y - a.y
            vv = vx * vx + vy * vy
            t = 0.0 if vv == 0.0 else ((p.x - a.x) * vx + (p.y - a.y) * vy) / vv
            t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
            d = dist(p, lerp(a, b, t))
            if d < best_d:
                best_d = d
                best = BoundaryCoord(k, t)
        return self.normalize_bc(best)

    # -- point classification ----------------------------------------------
    def contains(self, p: Point, tol: float = TAU_ON) -> str:
        return point_in_polygon(self, p, tol)


def validate_polygon(raw: Sequence, tol: float = TAU_ON) -> SimplePolygon:
    """Build a clockwise SimplePolygon from raw points, rejecting invalid input.

    Counterclockwise rings are reversed silently.  Raises TooFewVertices,
    DegenerateEdge or SelfIntersecting on bad input.
    """
    pts = [Point(float(p[0]), float(p[1])) for p in raw]
    for p in pts:
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise DegenerateEdge("non-finite coordinate")
    n = len(pts)
    if n < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {n}")
    for k in range(n):
        if pts[k] == pts[(k + 1) % n]:
            raise DegenerateEdge(f"vertices {k} and {(k + 1) % n} coincide")
    if len(set(pts)) != n:
        raise SelfIntersecting("repeated vertex")
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent edges share an endpoint by construction
            c, d = pts[j], pts[(j + 1) % n]
            if segments_cross(a, b, c, d):
                raise SelfIntersecting(f"edges {i} and {j} intersect")
    # adjacent edges must not fold back onto each other
    for k in range(n):
        a, b, c = pts[k - 1], pts[k], pts[(k + 1) % n]
        if orientation(a, b, c) == 0 and _between_exact(c, a, b) and _between_exact(a, c, b):
            raise SelfIntersecting(f"edge spike at vertex {k}")
    if signed_area(pts) > 0.0:
        pts.reverse()
    return SimplePolygon(pts)


def point_in_polygon(P: SimplePolygon, p: Point, tol: float = TAU_ON) -> str:
    """Classify p as 'inside', 'boundary' or 'outside' (boundary within tol)."""
    x0, y0, x1, y1 = P.bbox
    if not (x0 - tol <= p.x <= x1 + tol and y0 - tol <= p.y <= y1 + tol):
        return "outside"
    for k in range(P.n):
        a, b = P.edge(k)
        if point_segment_distance(p, a, b) <= tol:
            return "boundary"
    inside = False
    for k in range(P.n):
        a, b = P.edge(k)
        if (a.y > p.y) != (b.y > p.y):
            xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if xcross > p.x:
                inside = not inside
    return "inside" if inside else "outside"


@dataclass(frozen=True)
class Chain:
    """Clockwise piece of the boundary from `start` to `end`."""

    start: BoundaryCoord
    end: BoundaryCoord
    vertex_indices: tuple[int, ...]
    length: float


def chain(P: SimplePolygon, u: BoundaryCoord, w: BoundaryCoord) -> Chain:
    """Clockwise boundary chain from u to w; u == w yields the single-point chain."""
    u = P.normalize_bc(u)
    w = P.normalize_bc(w)
    if u == w:
        return Chain(u, w, (), 0.0)
    length = P.chain_arclength(u, w)
    if u.edge == w.edge and 0.0 < (w.t - u.t):
        return Chain(u, w, (), length)  # same edge, no wrap
    first = u.edge if u.t == 0.0 else (u.edge + 1) % P.n
    last = w.edge
    idxs = []
    k = first
    while True:
        idxs.append(k)
        if k == last:
            break
        k = (k + 1) % P.n
        if len(idxs) > P.n:  # pragma: no cover - safety
            raise RuntimeError("chain walk failed")
    if w.t == 0.0 and idxs and idxs[-1] == last:
        pass  # w is the vertex v_last itself: keep it
    return Chain(u, w, tuple(idxs), length)


@dataclass(frozen=True)
class SubPolygon:
    """Region bounded by the clockwise chain C(u,w) and the geodesic pi(u,w)."""

    parent: SimplePolygon
    chain: Chain
    closing_path: "GeodesicPath"  # noqa: F821 - geodesic import is deferred
    ring: tuple[Point, ...]

    def site_points(self) -> list[Point]:
        """Chain vertices plus endpoints: the candidates attaining the radius."""
        P = self.parent
        pts = [P.boundary_point(self.chain.start)]
        for k in self.chain.vertex_indices:
            v = P.vertex(k)
            if dist(v, pts[-1]) > 1e-12:
                pts.append(v)
        end = P.boundary_point(self.chain.end)
        if dist(end, pts[-1]) > 1e-12:
            pts.append(end)
        return pts

    def contains(self, p: Point, tol: float = 1e-9) -> bool:
        """Membership by winding number over the (weakly simple) ring."""
        ring = self.ring
        m = len(ring)
        for k in range(m):
            if point_segment_distance(p, ring[k], ring[(k + 1) % m]) <= tol:
                return True
        angle = 0.0
        for k in range(m):
            a, b = ring[k], ring[(k + 1) % m]
            angle += math.atan2(
                (a.x - p.x) * (b.y - p.y) - (a.y - p.y) * (b.x - p.x),
                (a.x - p.x) * (b.x - p.x) + (a.y - p.y) * (b.y - p.y),
            )
        return abs(angle) > math.pi


def subpolygon(P: SimplePolygon, u: BoundaryCoord, w: BoundaryCoord) -> SubPolygon:
    """Subpolygon P(u,w): chain C(u,w) closed by the geodesic pi(u,w) (weakly simple)."""
    from .geodesic import shortest_path  # deferred: geodesic depends on geometry

    u = P.normalize_bc(u)
    w = P.normalize_bc(w)
    pu, pw = P.boundary_point(u), P.boundary_point(w)
    if u == w or dist(pu, pw) <= 1e-15:
        raise DegeneratePartition("u and w coincide")
    ch = chain(P, u, w)
    path = shortest_path(P, pu, pw)
    ring = [pu]
    for k in ch.vertex_indices:
        v = P.vertex(k)
        if dist(v, ring[-1]) > 1e-12:
            ring.append(v)
    if dist(pw, ring[-1]) > 1e-12:
        ring.append(pw)
    for a in reversed(path.anchors):
        ring.append(P.vertex(a))
    return SubPolygon(P, ch, path, tuple(ring))


# -- polygon text format -------------------------------------------------
def read_polygon_text(text: str) -> SimplePolygon:
    """Parse the polygon file format: first 'n', then n lines 'x y'; '#' comments."""
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise ValueError("empty polygon file")
    try:
        n = int(rows[0])
        pts = []
        for row in rows[1 : n + 1]:
            xs, ys = row.split()[:2]
            pts.append(Point(float(xs), float(ys)))
    except (ValueError, IndexError) as exc:
        raise ValueError(f"malformed polygon file: {exc}") from exc
    if len(pts) != n:
        raise ValueError(f"expected {n} vertices, found {len(pts)}")
    return validate_polygon(pts)


def write_polygon_text(P: SimplePolygon) -> str:
    lines = [str(P.n)]
    for p in P.vertices:
        lines.append(f"{p.x!r} {p.y!r}")
    return "\n".join(lines) + "\n"
