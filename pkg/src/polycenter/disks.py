"""Geodesic disks, disk intersections, bisecting curves and farthest-point Voronoi diagrams.

Regions (disks, intersections of equal-radius disk families) are represented as
cyclic clockwise sequences of boundary pieces: circular arcs governed by a
(site, anchor) pair, and sub-segments of the polygon boundary.  Regions are
built by clipping against the level set {d_site = r} evaluated through the
site's shortest path map, so every arc endpoint comes from closed-form
circle/segment or circle/circle intersections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoincidentPoints, NegativeRadius, PointOutside
from .geometry import Point, SimplePolygon, BoundaryCoord, dist, lerp, point_in_polygon
from .geodesic import (
    ROOT,
    ShortestPathMap,
    _tri_inside_value,
    geodesic_distance,
    path_point_at,
    shortest_path,
    shortest_path_map,
)

TWO_PI = 2.0 * math.pi


def _ang(c: Point, p: Point) -> float:
    return math.atan2(p[1] - c[1], p[0] - c[0])


def _cw_delta(a_from: float, a_to: float) -> float:
    """Clockwise angular travel from a_from to a_to, in [0, 2pi)."""
    return (a_from - a_to) % TWO_PI


@dataclass(frozen=True)
class ArcPiece:
    """Circular boundary arc traversed clockwise from angle a0 to a1."""

    center: Point
    radius: float
    a0: float
    a1: float
    site: int  # governing site vertex index (-2 when the center is a free point)
    anchor: int  # governing anchor vertex index (ROOT when the site itself)

    @property
    def span(self) -> float:
        return _cw_delta(self.a0, self.a1)

    def length(self) -> float:
        return self.radius * self.span

    def point(self, t: float) -> Point:
        a = self.a0 - t * self.span
        return Point(self.center.x + self.radius * math.cos(a), self.center.y + self.radius * math.sin(a))

    def start(self) -> Point:
        return self.point(0.0)

    def end(self) -> Point:
        return self.point(1.0)

    def tangent(self, t: float) -> Point:
        a = self.a0 - t * self.span
        return Point(math.sin(a), -math.cos(a))  # clockwise travel

    def slice(self, t0: float, t1: float) -> "ArcPiece":
        s = self.span
        return ArcPiece(self.center, self.radius, self.a0 - t0 * s, self.a0 - t1 * s, self.site, self.anchor)

    def param_of_angle(self, a: float) -> float:
        s = self.span
        if s <= 1e-15:
            return 0.0
        return _cw_delta(self.a0, a) / s


@dataclass(frozen=True)
class EdgePiece:
    """Sub-segment of polygon edge `edge`, traversed in boundary (clockwise) order."""

    p0: Point
    p1: Point
    edge: int

    def length(self) -> float:
        return dist(self.p0, self.p1)

    def point(self, t: float) -> Point:
        return lerp(self.p0, self.p1, t)

    def start(self) -> Point:
        return self.p0

    def end(self) -> Point:
        return self.p1

    def tangent(self, t: float) -> Point:
        L = self.length()
        if L <= 0:
            return Point(0.0, 0.0)
        return Point((self.p1.x - self.p0.x) / L, (self.p1.y - self.p0.y) / L)

    def slice(self, t0: float, t1: float) -> "EdgePiece":
        return EdgePiece(self.point(t0), self.point(t1), self.edge)


Piece = ArcPiece | EdgePiece


def polygon_region(P: SimplePolygon) -> list[Piece]:
    return [EdgePiece(*P.edge(k), k) for k in range(P.n)]


# ----------------------------------------------------------------------
# Level-set crossings of a region boundary
# ----------------------------------------------------------------------
def _spm_arrays(spm: ShortestPathMap, r: float):
    rho = r - spm.weight
    ok = rho >= -1e-12
    return spm.apex_pt[ok], np.maximum(rho[ok], 0.0), spm.tris[ok], spm.apex_idx[ok]


def _cell_contains(tri, x: float, y: float, tol: float = 1e-9) -> bool:
    (ax, ay), (bx, by), (cx, cy) = tri
    s1 = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
    s2 = (cx - bx) * (y - by) - (cy - by) * (x - bx)
    s3 = (ax - cx) * (y - cy) - (ay - cy) * (x - cx)
    scale = max(abs(bx - ax) + abs(by - ay), abs(cx - bx) + abs(cy - by), 1e-30)
    return min(s1, s2, s3) / scale >= -tol


def _piece_level_crossings(piece: Piece, apex, rho, tris) -> list[tuple[float, Point]]:
    """Points where the piece crosses {d = r}; returns (param, point) pairs."""
    out: list[tuple[float, Point]] = []
    if isinstance(piece, EdgePiece):
        A, B = piece.p0, piece.p1
        ex, ey = B.x - A.x, B.y - A.y
        aa = ex * ex + ey * ey
        if aa <= 0.0:
            return out
        fx = A.x - apex[:, 0]
        fy = A.y - apex[:, 1]
        bb = 2.0 * (ex * fx + ey * fy)
        cc = fx * fx + fy * fy - rho * rho
        disc = bb * bb - 4.0 * aa * cc
        idx = np.nonzero(disc >= 0.0)[0]
        for i in idx:
            sq = math.sqrt(disc[i])
            for t in ((-bb[i] - sq) / (2 * aa), (-bb[i] + sq) / (2 * aa)):
                if -1e-12 <= t <= 1.0 + 1e-12:
                    t = min(max(t, 0.0), 1.0)
                    p = piece.point(t)
                    if _cell_contains(tris[i], p.x, p.y):
                        out.append((t, p))
    else:
        c0 = piece.center
        R = piece.radius
        dx = apex[:, 0] - c0.x
        dy = apex[:, 1] - c0.y
        dd = np.hypot(dx, dy)
        mask = (dd > 1e-15) & (dd <= R + rho + 1e-12) & (dd >= np.abs(R - rho) - 1e-12)
        idx = np.nonzero(mask)[0]
        for i in idx:
            d0 = dd[i]
            a = (d0 * d0 + R * R - rho[i] * rho[i]) / (2.0 * d0)
            h2 = R * R - a * a
            h = math.sqrt(h2) if h2 > 0.0 else 0.0
            ux, uy = dx[i] / d0, dy[i] / d0
            for sgn in (1.0, -1.0):
                px = c0.x + a * ux - sgn * h * uy
                py = c0.y + a * uy + sgn * h * ux
                ang = math.atan2(py - c0.y, px - c0.x)
                t = piece.param_of_angle(ang)
                if t <= 1.0 + 1e-9 and _cell_contains(tris[i], px, py):
                    tt = min(max(t, 0.0), 1.0)
                    out.append((tt, Point(px, py)))
                if h <= 1e-15:
                    break
    # dedupe by parameter
    out.sort(key=lambda e: e[0])
    dedup: list[tuple[float, Point]] = []
    for t, p in out:
        if dedup and abs(t - dedup[-1][0]) <= 1e-11:
            continue
        dedup.append((t, p))
    return dedup


def _min_d_on_piece(spm: ShortestPathMap, piece: Piece, samples: int = 33) -> tuple[float, Point]:
    ts = np.linspace(0.0, 1.0, samples)
    pts = np.array([piece.point(t) for t in ts])
    vals = spm.distance_batch(pts)
    k = int(np.argmin(vals))
    lo = max(0, k - 1)
    hi = min(samples - 1, k + 1)
    a, b = ts[lo], ts[hi]
    for _ in range(60):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if spm.distance(piece.point(m1)) <= spm.distance(piece.point(m2)):
            b = m2
        else:
            a = m1
    t = 0.5 * (a + b)
    return spm.distance(piece.point(t)), piece.point(t)


def _level_walk(
    P: SimplePolygon,
    spm: ShortestPathMap,
    r: float,
    start: Point,
    end: Point,
    site: int,
) -> list[ArcPiece]:
    """Clockwise walk along {d = r} from start to end across path-map cells."""
    out: list[ArcPiece] = []
    q = start
    guard = 0
    limit = 16 * len(spm) + 128
    cell = _locate_level_cell(spm, q, r)
    while True:
        guard += 1
        if guard > limit:
            raise RuntimeError("level walk failed to terminate")
        apex = Point(*spm.apex_pt[cell])
        rho = r - float(spm.weight[cell])
        if rho <= 1e-12:
            # degenerate: level set pinches at the apex; hop over it
            q = apex
            cell = _locate_level_cell(spm, q, r, avoid=cell)
            continue
        th = _ang(apex, q)
        # the walk proceeds clockwise; make sure this cell lies ahead of q
        step_ang = min(max(1e-7 / max(rho, 1e-9), 1e-12), 0.05)
        a_probe = th - step_ang
        probe = Point(apex.x + rho * math.cos(a_probe), apex.y + rho * math.sin(a_probe))
        if not _cell_contains(spm.tris[cell], probe.x, probe.y, 1e-9):
            cell = _locate_level_cell(spm, probe, r, hint=probe)
            apex = Point(*spm.apex_pt[cell])
            rho = r - float(spm.weight[cell])
            if rho <= 1e-12:
                continue
            th = _ang(apex, q)
        th_end = _ang(apex, end)
        d_end = _cw_delta(th, th_end)
        end_here = (
            abs(dist(apex, end) - rho) <= 1e-7 and _cell_contains(spm.tris[cell], end.x, end.y, 1e-7)
        )
        # first exit of the circle from this cell, walking clockwise
        best_exit = None
        tri = spm.tris[cell]
        for k in range(3):
            A = Point(*tri[k])
            B = Point(*tri[(k + 1) % 3])
            for px, py in _circle_segment_points(apex, rho, A, B):
                dd = _cw_delta(th, math.atan2(py - apex.y, px - apex.x))
                if 1e-10 < dd < TWO_PI - 1e-10:
                    if best_exit is None or dd < best_exit[0]:
                        best_exit = (dd, Point(px, py))
        if end_here and 1e-10 < d_end and (best_exit is None or d_end <= best_exit[0] + 1e-9):
            out.append(ArcPiece(apex, rho, th, th_end, site, int(spm.apex_idx[cell])))
            return out
        if end_here and d_end <= 1e-10:
            return out
        if best_exit is None:
            raise RuntimeError("level walk lost the level set")
        dd, x = best_exit
        out.append(ArcPiece(apex, rho, th, th - dd, site, int(spm.apex_idx[cell])))
        # nudge past the cell edge along the circle to find the neighbor
        step = min(max(1e-6 / max(rho, 1e-9), 1e-9), 0.05)
        a_next = th - dd - step
        probe = Point(apex.x + rho * math.cos(a_next), apex.y + rho * math.sin(a_next))
        cell = _locate_level_cell(spm, probe, r, hint=probe)
        q = x


def _circle_segment_points(c: Point, rho: float, A: Point, B: Point):
    ex, ey = B.x - A.x, B.y - A.y
    aa = ex * ex + ey * ey
    if aa <= 0.0:
        return []
    fx, fy = A.x - c.x, A.y - c.y
    bb = 2.0 * (ex * fx + ey * fy)
    cc = fx * fx + fy * fy - rho * rho
    disc = bb * bb - 4.0 * aa * cc
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    pts = []
    for t in ((-bb - sq) / (2 * aa), (-bb + sq) / (2 * aa)):
        if -1e-9 <= t <= 1.0 + 1e-9:
            pts.append((A.x + t * ex, A.y + t * ey))
    return pts


def _locate_level_cell(spm: ShortestPathMap, q: Point, r: float, avoid: int = -1, hint: Point = None) -> int:
    """Cell whose circle {d=r} passes through q, preferring deep containment of hint."""
    target = hint if hint is not None else q
    tx, ty = float(target[0]), float(target[1])
    best, best_key = -1, None
    for t in range(len(spm)):
        if t == avoid:
            continue
        rho = r - float(spm.weight[t])
        if rho < -1e-9:
            continue
        err = abs(dist(Point(*spm.apex_pt[t]), q) - max(rho, 0.0))
        if err > 1e-5:
            continue
        inside = _tri_inside_value(spm.tris[t], Point(tx, ty))
        if inside < -1e-7:
            continue
        key = (min(inside, 1e-6), -err)
        if best_key is None or key > best_key:
            best, best_key = t, key
    if best < 0:
        raise RuntimeError(f"no level cell at {tuple(q)}")
    return best


# ----------------------------------------------------------------------
# Region clip
# ----------------------------------------------------------------------
class RegionResult:
    """Outcome of intersecting a region with a geodesic disk."""

    __slots__ = ("pieces", "status", "point")

    def __init__(self, pieces, status="ok", point=None):
        self.pieces: list[Piece] = pieces
        self.status: str = status  # ok | empty | degenerate
        self.point: Point | None = point


def clip_region_by_disk(
    P: SimplePolygon, region: list[Piece], spm: ShortestPathMap, r: float, site: int
) -> RegionResult:
    apex, rho, tris, _ = _spm_arrays(spm, r)
    events: list[tuple[int, float, Point]] = []
    if len(apex):
        for pi, piece in enumerate(region):
            for t, p in _piece_level_crossings(piece, apex, rho, tris):
                events.append((pi, t, p))
    # drop duplicated events at piece junctions (t=1 of piece k == t=0 of k+1)
    events.sort(key=lambda e: (e[0], e[1]))
    cleaned = []
    m = len(region)
    for pi, t, p in events:
        dup = False
        for pj, tj, pn in cleaned:
            if dist(p, pn) <= 1e-10:
                dup = True
                break
        if not dup:
            cleaned.append((pi, t, p))
    events = cleaned

    if not events:
        probe = region[0].point(0.5)
        if spm.distance(probe) <= r + 1e-12:
            return RegionResult(list(region))
        # disk might sit strictly inside the region
        root = spm.root
        if _region_winding(region, root) and point_in_polygon(P, root) != "outside":
            return RegionResult(_full_disk_pieces(spm, r, site))
        dmin, pmin = min((_min_d_on_piece(spm, pc) for pc in region), key=lambda e: e[0])
        if dmin <= r + 1e-9:
            return RegionResult([], "degenerate", pmin)
        return RegionResult([], "empty")

    # classify gaps between consecutive events by their midpoint
    keep_chain: list[list[Piece]] = []
    k = len(events)
    statuses = []
    for i in range(k):
        pi, t, p = events[i]
        pj, tj, pn = events[(i + 1) % k]
        mid = _gap_midpoint(region, (pi, t), (pj, tj))
        statuses.append(spm.distance(mid) <= r)
    new_pieces: list[Piece] = []
    for i in range(k):
        pi, t, p = events[i]
        pj, tj, pn = events[(i + 1) % k]
        if statuses[i]:
            new_pieces.extend(_gap_pieces(region, (pi, t), (pj, tj)))
        else:
            new_pieces.extend(_level_walk(P, spm, r, p, pn, site))
    new_pieces = [pc for pc in new_pieces if pc.length() > 1e-12]
    if not new_pieces:
        dmin, pmin = min((_min_d_on_piece(spm, pc) for pc in region), key=lambda e: e[0])
        if dmin <= r + 1e-9:
            return RegionResult([], "degenerate", pmin)
        return RegionResult([], "empty")
    ext = _region_extent(new_pieces)
    if ext <= 1e-9:
        return RegionResult([], "degenerate", new_pieces[0].start())
    return RegionResult(new_pieces)


def _gap_midpoint(region, a, b):
    pieces = _gap_pieces(region, a, b)
    total = sum(pc.length() for pc in pieces)
    if total <= 0:
        return pieces[0].point(0.5) if pieces else region[a[0]].point(a[1])
    s = total / 2
    for pc in pieces:
        L = pc.length()
        if s <= L:
            return pc.point(s / L if L > 0 else 0.5)
        s -= L
    return pieces[-1].end()


def _gap_pieces(region, a, b) -> list[Piece]:
    """Boundary sub-pieces from event a=(pi,t) to event b=(pj,t'), clockwise."""
    (pi, t), (pj, tj) = (a[0], a[1]), (b[0], b[1])
    m = len(region)
    out: list[Piece] = []
    if pi == pj and t <= tj:
        out.append(region[pi].slice(t, tj))
        return out
    out.append(region[pi].slice(t, 1.0))
    k = (pi + 1) % m
    guard = 0
    while k != pj:
        out.append(region[k])
        k = (k + 1) % m
        guard += 1
        if guard > m + 1:  # pragma: no cover
            raise RuntimeError("gap walk failed")
    out.append(region[pj].slice(0.0, tj))
    return out


def _full_disk_pieces(spm: ShortestPathMap, r: float, site: int) -> list[Piece]:
    c = spm.root
    # clockwise full circle as two half arcs
    return [
        ArcPiece(c, r, math.pi / 2, -math.pi / 2, site, ROOT),
        ArcPiece(c, r, -math.pi / 2, math.pi / 2, site, ROOT),
    ]


def _region_polyline(region: list[Piece], per_arc: int = 8) -> list[Point]:
    pts: list[Point] = []
    for pc in region:
        if isinstance(pc, ArcPiece):
            steps = max(2, per_arc)
            for i in range(steps):
                pts.append(pc.point(i / steps))
        else:
            pts.append(pc.start())
    return pts


def _region_winding(region: list[Piece], q: Point) -> bool:
    ring = _region_polyline(region)
    ang = 0.0
    m = len(ring)
    for k in range(m):
        a, b = ring[k], ring[(k + 1) % m]
        ang += math.atan2(
            (a.x - q[0]) * (b.y - q[1]) - (a.y - q[1]) * (b.x - q[0]),
            (a.x - q[0]) * (b.x - q[0]) + (a.y - q[1]) * (b.y - q[1]),
        )
    return abs(ang) > math.pi


def _region_extent(pieces: list[Piece]) -> float:
    xs = []
    ys = []
    for pc in pieces:
        for t in (0.0, 0.5, 1.0):
            p = pc.point(t)
            xs.append(p.x)
            ys.append(p.y)
    return max(max(xs) - min(xs), max(ys) - min(ys))


# ----------------------------------------------------------------------
# Geodesic disks
# ----------------------------------------------------------------------
@dataclass
class GeodesicDisk:
    center: Point
    radius: float
    boundary: list[Piece]

    def arcs(self) -> list[ArcPiece]:
        return [p for p in self.boundary if isinstance(p, ArcPiece)]

    def contains(self, P: SimplePolygon, q: Point, tol: float = 1e-9) -> bool:
        return geodesic_distance(P, self.center, q) <= self.radius + tol


def geodesic_disk(P: SimplePolygon, c: Point, r: float) -> GeodesicDisk:
    """The geodesic disk D_r(c): all points within geodesic distance r of c."""
    if r < 0:
        raise NegativeRadius(f"radius {r} < 0")
    c = Point(float(c[0]), float(c[1]))
    if point_in_polygon(P, c) == "outside":
        raise PointOutside(f"center {tuple(c)} outside polygon")
    spm = shortest_path_map(P, c)
    res = clip_region_by_disk(P, polygon_region(P), spm, r, -2)
    if res.status != "ok":
        return GeodesicDisk(c, r, [])
    return GeodesicDisk(c, r, res.pieces)


# ----------------------------------------------------------------------
# Intersections of equal-radius disks
# ----------------------------------------------------------------------
def merge_arcs(pieces: list[Piece]) -> list[Piece]:
    """Merge cyclically consecutive arcs sharing (site, anchor, center, radius)."""
    if not pieces:
        return []
    out: list[Piece] = []
    for pc in pieces:
        if (
            out
            and isinstance(pc, ArcPiece)
            and isinstance(out[-1], ArcPiece)
            and pc.site == out[-1].site
            and pc.anchor == out[-1].anchor
            and dist(pc.center, out[-1].center) <= 1e-9
            and abs(pc.radius - out[-1].radius) <= 1e-9
            and _cw_delta(out[-1].a1, pc.a0) <= 1e-9
        ):
            prev = out.pop()
            out.append(ArcPiece(prev.center, prev.radius, prev.a0, pc.a1, prev.site, prev.anchor))
        else:
            out.append(pc)
    if (
        len(out) >= 2
        and isinstance(out[0], ArcPiece)
        and isinstance(out[-1], ArcPiece)
        and out[0].site == out[-1].site
        and out[0].anchor == out[-1].anchor
        and dist(out[0].center, out[-1].center) <= 1e-9
        and abs(out[0].radius - out[-1].radius) <= 1e-9
        and _cw_delta(out[-1].a1, out[0].a0) <= 1e-9
        and out[0].span + out[-1].span < TWO_PI
    ):
        last = out.pop()
        first = out.pop(0)
        out.insert(0, ArcPiece(last.center, last.radius, last.a0, first.a1, last.site, last.anchor))
    return out


@dataclass
class DiskIntersection:
    radius: float
    sites: list[int]
    pieces: list[Piece]
    empty: bool = False
    degenerate: bool = False
    point: Point | None = None

    def arcs(self) -> list[ArcPiece]:
        """Maximal circular arcs of the boundary, in cyclic order."""
        return [p for p in merge_arcs(self.pieces) if isinstance(p, ArcPiece)]

    def arc_sites(self) -> list[int]:
        return [p.site for p in self.arcs()]


def _polish_minimax_point(P: SimplePolygon, site_list: list[int], q: Point) -> tuple[Point, float]:
    """Local pattern-search refinement of argmin_q max_s d(v_s, q)."""
    spms = [shortest_path_map(P, P.vertices[s]) for s in site_list]

    def val(p):
        return max(m.distance(p) for m in spms)

    best, bv = q, val(q)
    step = 1e-5
    while step > 1e-13:
        moved = False
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            cand = Point(best.x + dx * step, best.y + dy * step)
            v = val(cand)
            if v < bv - 1e-16:
                best, bv = cand, v
                moved = True
        if not moved:
            step *= 0.5
    return best, bv


def disks_intersection(P: SimplePolygon, sites: list[int], r: float) -> DiskIntersection:
    """Intersection of the radius-r geodesic disks centered at the given vertices."""
    if not sites:
        raise ValueError("need at least one site")
    region = polygon_region(P)
    point = None
    seen: list[int] = []
    for s in sites:
        s = s % P.n
        spm = shortest_path_map(P, P.vertices[s])
        if point is not None:
            seen.append(s)
            if spm.distance(point) <= r + 1e-12:
                continue
            point, worst = _polish_minimax_point(P, seen, point)
            if worst <= r + 1e-9:
                continue
            return DiskIntersection(r, list(sites), [], empty=True)
        res = clip_region_by_disk(P, region, spm, r, s)
        if res.status == "empty":
            return DiskIntersection(r, list(sites), [], empty=True)
        if res.status == "degenerate":
            point = res.point
            seen = [t % P.n for t in sites[: sites.index(s) + 1]] if s in sites else [s]
            continue
        region = res.pieces
    if point is not None:
        return DiskIntersection(r, list(sites), [], degenerate=True, point=point)
    return DiskIntersection(r, list(sites), region)


# ----------------------------------------------------------------------
# Bisecting curves
# ----------------------------------------------------------------------
@dataclass
class BisectingCurve:
    points: list[Point]
    endpoints: tuple[BoundaryCoord, BoundaryCoord]


def _grad_diff(spm_x: ShortestPathMap, spm_y: ShortestPathMap, q: Point) -> tuple[float, Point]:
    cx = spm_x.locate(q)
    cy = spm_y.locate(q)
    ax = spm_x.apex_pt[cx]
    ay = spm_y.apex_pt[cy]
    dxv = (q.x - ax[0], q.y - ax[1])
    dyv = (q.x - ay[0], q.y - ay[1])
    nx = math.hypot(*dxv) or 1e-30
    ny = math.hypot(*dyv) or 1e-30
    f = (spm_x.weight[cx] + nx) - (spm_y.weight[cy] + ny)
    g = Point(dxv[0] / nx - dyv[0] / ny, dxv[1] / nx - dyv[1] / ny)
    return float(f), g


def _project_to_bisector(spm_x, spm_y, q: Point, iters: int = 8) -> Point:
    for _ in range(iters):
        f, g = _grad_diff(spm_x, spm_y, q)
        gg = g.x * g.x + g.y * g.y
        if gg < 1e-18:
            break
        q = Point(q.x - f * g.x / gg, q.y - f * g.y / gg)
        if abs(f) < 1e-13:
            break
    return q


def bisecting_curve(P: SimplePolygon, x: Point, y: Point, step: float = None) -> BisectingCurve:
    """The equidistant curve between x and y that crosses pi(x, y)."""
    x, y = Point(*x), Point(*y)
    if dist(x, y) <= 1e-12:
        raise CoincidentPoints("bisector of coincident points")
    spm_x = shortest_path_map(P, x)
    spm_y = shortest_path_map(P, y)
    path = shortest_path(P, x, y)
    mid = path_point_at(P, path, path.length / 2)
    mid = _project_to_bisector(spm_x, spm_y, mid)
    x0, y0, x1, y1 = P.bbox
    h = step or max(x1 - x0, y1 - y0) / 512.0

    def trace(direction: int) -> list[Point]:
        pts = [mid]
        q = mid
        guard = 0
        while guard < 50000:
            guard += 1
            f, g = _grad_diff(spm_x, spm_y, q)
            norm = math.hypot(g.x, g.y)
            if norm < 1e-12:
                # flat (two-dimensional bisector piece): keep the previous heading
                if len(pts) >= 2:
                    tx, ty = q.x - pts[-2].x, q.y - pts[-2].y
                    tn = math.hypot(tx, ty) or 1.0
                    t_hat = Point(tx / tn, ty / tn)
                else:
                    break
            else:
                t_hat = Point(-g.y / norm * direction, g.x / norm * direction)
                if len(pts) >= 2:
                    px, py = q.x - pts[-2].x, q.y - pts[-2].y
                    if t_hat.x * px + t_hat.y * py < 0:
                        t_hat = Point(-t_hat.x, -t_hat.y)
            nxt = Point(q.x + h * t_hat.x, q.y + h * t_hat.y)
            nxt = _project_to_bisector(spm_x, spm_y, nxt)
            if point_in_polygon(P, nxt) == "outside":
                lo, hi = 0.0, 1.0
                for _ in range(60):
                    mid_t = 0.5 * (lo + hi)
                    cand = Point(q.x + (nxt.x - q.x) * mid_t, q.y + (nxt.y - q.y) * mid_t)
                    if point_in_polygon(P, cand) == "outside":
                        hi = mid_t
                    else:
                        lo = mid_t
                endp = Point(q.x + (nxt.x - q.x) * lo, q.y + (nxt.y - q.y) * lo)
                pts.append(endp)
                return pts
            pts.append(nxt)
            q = nxt
            if point_in_polygon(P, q) == "boundary":
                return pts
        return pts

    fwd = trace(+1)
    bwd = trace(-1)
    pts = list(reversed(bwd))[:-1] + fwd
    bc0 = P.project_to_boundary(pts[0])
    bc1 = P.project_to_boundary(pts[-1])
    pts[0] = P.boundary_point(bc0)
    pts[-1] = P.boundary_point(bc1)
    return BisectingCurve(pts, (bc0, bc1))


# ----------------------------------------------------------------------
# Farthest-point geodesic Voronoi diagram
# ----------------------------------------------------------------------
@dataclass
class SkeletonVertex:
    point: Point
    sites: tuple[int, ...]
    distance: float
    on_boundary: bool


@dataclass
class SkeletonEdge:
    site_pair: tuple[int, int]
    points: list[Point]


@dataclass
class FarthestVoronoi:
    P: SimplePolygon
    sites: list[int]
    vertices: list[SkeletonVertex]
    edges: list[SkeletonEdge]
    refined_cells: list[tuple[int, int, tuple]]  # (site, apex, region polygon coords)

    def site_at(self, q: Point) -> int:
        vals = [(self._d(s, q), -s) for s in self.sites]
        best = max(vals)
        return -best[1]

    def locate(self, q: Point) -> tuple[int, int]:
        s = self.site_at(q)
        spm = shortest_path_map(self.P, self.P.vertices[s])
        return s, int(spm.apex_idx[spm.locate(q)])

    def _d(self, s: int, q: Point) -> float:
        return shortest_path_map(self.P, self.P.vertices[s]).distance(q)

    def farthest_value(self, q: Point) -> float:
        return max(self._d(s, q) for s in self.sites)

    def candidate_radii(self) -> list[float]:
        return sorted({round(v.distance, 12) for v in self.vertices})


def _site_distance_batch(P: SimplePolygon, sites: list[int], pts: np.ndarray) -> np.ndarray:
    vals = np.empty((len(sites), len(pts)))
    for i, s in enumerate(sites):
        vals[i] = shortest_path_map(P, P.vertices[s]).distance_batch(pts)
    return vals


def _top_two(P, sites, q: Point):
    ds = [(shortest_path_map(P, P.vertices[s]).distance(q), s) for s in sites]
    ds.sort(reverse=True)
    return ds


def _newton_equidistant(P, sites3, q: Point, iters: int = 40) -> Point | None:
    """Solve d(s1,.) = d(s2,.) = d(s3,.) by Newton from q (apexes re-located)."""
    s1, s2, s3 = sites3
    spms = [shortest_path_map(P, P.vertices[s]) for s in (s1, s2, s3)]
    for _ in range(iters):
        ds = []
        grads = []
        for spm in spms:
            c = spm.locate(q)
            ax, ay = spm.apex_pt[c]
            vx, vy = q.x - ax, q.y - ay
            n = math.hypot(vx, vy)
            if n < 1e-14:
                return None
            ds.append(spm.weight[c] + n)
            grads.append((vx / n, vy / n))
        f1 = ds[0] - ds[1]
        f2 = ds[0] - ds[2]
        if abs(f1) < 1e-13 and abs(f2) < 1e-13:
            return q
        j11 = grads[0][0] - grads[1][0]
        j12 = grads[0][1] - grads[1][1]
        j21 = grads[0][0] - grads[2][0]
        j22 = grads[0][1] - grads[2][1]
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-15:
            return None
        dx = (-f1 * j22 + f2 * j12) / det
        dy = (-j11 * f2 + j21 * f1) / det
        lim = 1.0
        q = Point(q.x + max(-lim, min(lim, dx)), q.y + max(-lim, min(lim, dy)))
    return None


def farthest_voronoi(P: SimplePolygon, sites: list[int], skeleton_only: bool = False) -> FarthestVoronoi:
    """Farthest-point geodesic Voronoi diagram of vertex sites (naive tracing build)."""
    sites = sorted(set(s % P.n for s in sites))
    if len(sites) == 1:
        cells = [] if skeleton_only else _refine_single(P, sites[0])
        return FarthestVoronoi(P, sites, [], [], cells)

    x0, y0, x1, y1 = P.bbox
    diam = math.hypot(x1 - x0, y1 - y0)
    h = diam / 512.0

    # boundary leaves: walk the boundary, find argmax changes
    M = max(16 * P.n, 256)
    svals = [P.perimeter * k / M for k in range(M)]
    bpts = np.array([P.boundary_point(P.bc_at_arclength(s)) for s in svals])
    allv = _site_distance_batch(P, sites, bpts)
    owner = np.argmax(allv, axis=0)
    leaves: list[tuple[Point, tuple[int, int]]] = []
    for k in range(M):
        o1, o2 = owner[k], owner[(k + 1) % M]
        if o1 == o2:
            continue
        s_lo, s_hi = svals[k], svals[(k + 1) % M] if k + 1 < M else P.perimeter
        sa, sb = sites[o1], sites[o2]
        spa = shortest_path_map(P, P.vertices[sa])
        spb = shortest_path_map(P, P.vertices[sb])
        for _ in range(80):
            sm = 0.5 * (s_lo + s_hi)
            pm = P.boundary_point(P.bc_at_arclength(sm))
            if spa.distance(pm) >= spb.distance(pm):
                s_lo = sm
            else:
                s_hi = sm
        pt = P.boundary_point(P.bc_at_arclength(0.5 * (s_lo + s_hi)))
        leaves.append((pt, (min(sa, sb), max(sa, sb))))

    vertices: list[SkeletonVertex] = []
    edges: list[SkeletonEdge] = []
    done: set[tuple] = set()
    junctions: list[Point] = []

    def spm_of(s):
        return shortest_path_map(P, P.vertices[s])

    def pair_f(pair, q):
        return spm_of(pair[0]).distance(q) - spm_of(pair[1]).distance(q)

    def pair_project(pair, q):
        sa, sb = pair
        for _ in range(8):
            ca = spm_of(sa).locate(q)
            cb = spm_of(sb).locate(q)
            aa = spm_of(sa).apex_pt[ca]
            ab = spm_of(sb).apex_pt[cb]
            va = (q.x - aa[0], q.y - aa[1])
            vb = (q.x - ab[0], q.y - ab[1])
            na = math.hypot(*va) or 1e-30
            nb = math.hypot(*vb) or 1e-30
            f = (spm_of(sa).weight[ca] + na) - (spm_of(sb).weight[cb] + nb)
            gx = va[0] / na - vb[0] / nb
            gy = va[1] / na - vb[1] / nb
            gg = gx * gx + gy * gy
            if gg < 1e-18:
                break
            q = Point(q.x - f * gx / gg, q.y - f * gy / gg)
            if abs(f) < 1e-13:
                break
        return q

    work: list[tuple[tuple[int, int], Point, Point]] = []

    def seed_from(pt: Point, pair: tuple[int, int], incoming: Point | None):
        """Queue outgoing bisector branches at pt for the tied pair."""
        for sgn in (1.0, -1.0):
            ca = spm_of(pair[0]).locate(pt)
            cb = spm_of(pair[1]).locate(pt)
            aa = spm_of(pair[0]).apex_pt[ca]
            ab = spm_of(pair[1]).apex_pt[cb]
            va = (pt.x - aa[0], pt.y - aa[1])
            vb = (pt.x - ab[0], pt.y - ab[1])
            na = math.hypot(*va) or 1e-30
            nb = math.hypot(*vb) or 1e-30
            gx = va[0] / na - vb[0] / nb
            gy = va[1] / na - vb[1] / nb
            norm = math.hypot(gx, gy)
            if norm < 1e-12:
                continue
            d = Point(-gy / norm * sgn, gx / norm * sgn)
            if incoming is not None and d.x * incoming.x + d.y * incoming.y > 0.2:
                continue
            probe = Point(pt.x + 4 * h * d.x, pt.y + 4 * h * d.y)
            if point_in_polygon(P, probe) == "outside":
                continue
            probe = pair_project(pair, probe)
            tops = _top_two(P, sites, probe)
            if {tops[0][1], tops[1][1]} != set(pair):
                continue
            if tops[0][0] - tops[1][0] > 1e-6 * max(1.0, tops[0][0]):
                continue
            key = (pair, round(pt.x, 6), round(pt.y, 6), round(d.x, 2), round(d.y, 2))
            if key in done:
                continue
            done.add(key)
            work.append((pair, pt, d))

    for pt, pair in leaves:
        dval = spm_of(pair[0]).distance(pt)
        vertices.append(SkeletonVertex(pt, pair, dval, True))
        seed_from(pt, pair, None)

    guard = 0
    while work and guard < 4000:
        guard += 1
        pair, start, d = work.pop()
        pts = [start]
        q = Point(start.x + h * d.x, start.y + h * d.y)
        q = pair_project(pair, q)
        heading = d
        steps = 0
        while steps < 50000:
            steps += 1
            if point_in_polygon(P, q) == "outside":
                # walked out: bisect back to the boundary
                prev = pts[-1]
                lo, hi = 0.0, 1.0
                for _ in range(60):
                    t = 0.5 * (lo + hi)
                    c = Point(prev.x + (q.x - prev.x) * t, prev.y + (q.y - prev.y) * t)
                    if point_in_polygon(P, c) == "outside":
                        hi = t
                    else:
                        lo = t
                endp = Point(prev.x + (q.x - prev.x) * lo, prev.y + (q.y - prev.y) * lo)
                pts.append(endp)
                dv = spm_of(pair[0]).distance(endp)
                if not any(dist(v.point, endp) <= 4 * h for v in vertices):
                    vertices.append(SkeletonVertex(endp, pair, dv, True))
                break
            tops = _top_two(P, sites, q)
            third = [e for e in tops if e[1] not in pair]
            if third and third[0][0] >= max(tops[0][0], 0.0) - 1e-9:
                u = third[0][1]
                vpt = _newton_equidistant(P, (pair[0], pair[1], u), q)
                if vpt is None:
                    vpt = q
                tied = [s for s in sites if abs(spm_of(s).distance(vpt) - spm_of(pair[0]).distance(vpt)) <= 1e-7]
                pts.append(vpt)
                known = None
                for v in vertices:
                    if dist(v.point, vpt) <= 1e-7:
                        known = v
                        break
                if known is None:
                    vertices.append(
                        SkeletonVertex(vpt, tuple(sorted(tied)), spm_of(pair[0]).distance(vpt), False)
                    )
                    junctions.append(vpt)
                    inc = Point(vpt.x - pts[-2].x, vpt.y - pts[-2].y) if len(pts) >= 2 else None
                    if inc is not None:
                        n = math.hypot(inc.x, inc.y) or 1.0
                        inc = Point(inc.x / n, inc.y / n)
                    for i in range(len(tied)):
                        for j in range(i + 1, len(tied)):
                            seed_from(vpt, (tied[i], tied[j]), None if (tied[i], tied[j]) != pair else inc)
                break
            pts.append(q)
            nxt = Point(q.x + h * heading.x, q.y + h * heading.y)
            nxt = pair_project(pair, nxt)
            hx, hy = nxt.x - q.x, nxt.y - q.y
            hn = math.hypot(hx, hy)
            if hn > 1e-15:
                newheading = Point(hx / hn, hy / hn)
                if newheading.x * heading.x + newheading.y * heading.y < -0.5:
                    break  # reversed: degenerate, stop this trace
                heading = newheading
            q = nxt
        edges.append(SkeletonEdge(pair, pts))

    cells = [] if skeleton_only else _build_refined_cells(P, sites, edges)
    return FarthestVoronoi(P, sites, vertices, edges, cells)


def _refine_single(P: SimplePolygon, site: int):
    spm = shortest_path_map(P, P.vertices[site])
    out = []
    for t in range(len(spm)):
        tri = tuple((float(x), float(y)) for x, y in spm.tris[t])
        out.append((site, int(spm.apex_idx[t]), tri))
    return out


def _build_refined_cells(P: SimplePolygon, sites, edges):
    """Assemble cell polygons from the boundary ring plus traced skeleton polylines."""
    try:
        from shapely.geometry import LineString, MultiLineString
        from shapely.ops import polygonize, unary_union
    except Exception:  # pragma: no cover - shapely is a declared dependency
        return []
    lines = [LineString([tuple(v) for v in P.vertices] + [tuple(P.vertices[0])])]
    for e in edges:
        if len(e.points) >= 2:
            lines.append(LineString([tuple(p) for p in e.points]))
    merged = unary_union(lines)
    cells = []
    for face in polygonize(merged):
        if face.area <= 1e-12:
            continue
        rep = face.representative_point()
        q = Point(rep.x, rep.y)
        vals = [(shortest_path_map(P, P.vertices[s]).distance(q), -s) for s in sites]
        s = -max(vals)[1]
        spm = shortest_path_map(P, P.vertices[s])
        wins = [LineString([tuple(a), tuple(b)]) for a, b in spm.windows]
        pieces = [face]
        if wins:
            cut = unary_union([face.boundary] + [w.intersection(face) for w in wins])
            sub = [g for g in polygonize(cut) if g.area > 1e-12]
            if sub:
                pieces = sub
        for g in pieces:
            grep = g.representative_point()
            apx = int(spm.apex_idx[spm.locate(Point(grep.x, grep.y))])
            cells.append((s, apx, tuple(g.exterior.coords)))
    return cells
