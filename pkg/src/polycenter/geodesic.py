"""Geodesic machinery inside a simple polygon.

Triangulation (ear clipping), funnel-based geodesic paths, shortest path trees
and shortest path maps.  Maps are built by splitting the polygon along window
chords (extensions of tree edges past reflex vertices) and fanning each face
from its apex, which keeps every cell a triangle with a closed-form distance
``weight + |q - apex|``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import PointOutside
from .geometry import (
    Point,
    SimplePolygon,
    cross,
    dist,
    lerp,
    orientation,
    point_in_polygon,
    point_segment_distance,
)

ROOT = -1  # sentinel vertex index for the tree root

_SNAP = 1e-9  # collinear anchor adoption tolerance


# ----------------------------------------------------------------------
# Triangulation
# ----------------------------------------------------------------------
@dataclass
class Triangulation:
    triangles: list[tuple[int, int, int]]  # ccw vertex index triples
    neighbors: list[list[int]]  # per triangle, adjacent triangle ids (dual tree)
    tri_points: np.ndarray  # (m, 3, 2)

    def __len__(self) -> int:
        return len(self.triangles)


def triangulate(P: SimplePolygon) -> Triangulation:
    """Ear-clipping triangulation; n-2 triangles whose dual graph is a tree."""
    tri = P._cache.get("triangulation")
    if tri is not None:
        return tri

    pts = P.vertices
    idxs = list(range(P.n))[::-1]  # stored ring is clockwise; work counterclockwise
    triangles: list[tuple[int, int, int]] = []

    def is_ear(seq, pos):
        a, b, c = seq[pos - 1], seq[pos], seq[(pos + 1) % len(seq)]
        if orientation(pts[a], pts[b], pts[c]) <= 0:
            return False
        pa, pb, pc = pts[a], pts[b], pts[c]
        for other in seq:
            if other in (a, b, c):
                continue
            q = pts[other]
            if (
                orientation(pa, pb, q) >= 0
                and orientation(pb, pc, q) >= 0
                and orientation(pc, pa, q) >= 0
            ):
                return False
        return True

    guard = 0
    while len(idxs) > 3:
        guard += 1
        if guard > 4 * P.n * P.n:  # pragma: no cover - safety
            raise RuntimeError("ear clipping failed to converge")
        clipped = False
        for pos in range(len(idxs)):
            if is_ear(idxs, pos):
                a, b, c = idxs[pos - 1], idxs[pos], idxs[(pos + 1) % len(idxs)]
                triangles.append((a, b, c))
                del idxs[pos]
                clipped = True
                break
        if not clipped:
            # tolerate flat ears (collinear vertices) as a last resort
            for pos in range(len(idxs)):
                a, b, c = idxs[pos - 1], idxs[pos], idxs[(pos + 1) % len(idxs)]
                if orientation(pts[a], pts[b], pts[c]) == 0:
                    triangles.append((a, b, c))
                    del idxs[pos]
                    clipped = True
                    break
            if not clipped:  # pragma: no cover - invalid input slipped through
                raise RuntimeError("no ear found; polygon not simple?")
    triangles.append((idxs[0], idxs[1], idxs[2]))

    edge_map: dict[tuple[int, int], list[int]] = {}
    for t, (a, b, c) in enumerate(triangles):
        for u, v in ((a, b), (b, c), (c, a)):
            edge_map.setdefault((min(u, v), max(u, v)), []).append(t)
    neighbors = [[] for _ in triangles]
    for (u, v), ts in edge_map.items():
        if len(ts) == 2:
            neighbors[ts[0]].append(ts[1])
            neighbors[ts[1]].append(ts[0])
    tri_points = np.array([[pts[a], pts[b], pts[c]] for (a, b, c) in triangles])
    tri = Triangulation(triangles, neighbors, tri_points)
    P._cache["triangulation"] = tri
    return tri


def _locate_triangle(P: SimplePolygon, q: Point) -> int:
    """Index of a triangle containing q (tolerant); raises PointOutside."""
    tr = triangulate(P)
    grid = P._cache.get("tri_grid")
    if grid is None:
        grid = _build_tri_grid(P, tr)
        P._cache["tri_grid"] = grid
    best, best_val = -1, -math.inf
    for t in _grid_candidates(grid, q):
        val = _tri_inside_value(tr.tri_points[t], q)
        if val > best_val:
            best, best_val = t, val
        if best_val >= 0.0:
            return best
    if best_val > -1e-9 and best >= 0:
        return best
    # fall back to a full scan before giving up
    for t in range(len(tr)):
        val = _tri_inside_value(tr.tri_points[t], q)
        if val > best_val:
            best, best_val = t, val
    if best_val > -1e-9:
        return best
    raise PointOutside(f"point {tuple(q)} lies outside the polygon")


def _tri_inside_value(tri: np.ndarray, q: Point) -> float:
    (ax, ay), (bx, by), (cx, cy) = tri
    s1 = (bx - ax) * (q.y - ay) - (by - ay) * (q.x - ax)
    s2 = (cx - bx) * (q.y - by) - (cy - by) * (q.x - bx)
    s3 = (ax - cx) * (q.y - cy) - (ay - cy) * (q.x - cx)
    scale = max(abs(bx - ax) + abs(by - ay), abs(cx - bx) + abs(cy - by), 1e-30)
    return min(s1, s2, s3) / scale


def _build_tri_grid(P: SimplePolygon, tr: Triangulation, res: int = 0):
    x0, y0, x1, y1 = P.bbox
    m = len(tr)
    res = res or max(4, int(math.sqrt(m) * 2))
    w = max(x1 - x0, 1e-12) / res
    h = max(y1 - y0, 1e-12) / res
    buckets: dict[tuple[int, int], list[int]] = {}
    for t in range(m):
        txs = tr.tri_points[t, :, 0]
        tys = tr.tri_points[t, :, 1]
        i0 = int((txs.min() - x0) / w)
        i1 = int((txs.max() - x0) / w)
        j0 = int((tys.min() - y0) / h)
        j1 = int((tys.max() - y0) / h)
        for i in range(max(i0, 0), min(i1, res - 1) + 1):
            for j in range(max(j0, 0), min(j1, res - 1) + 1):
                buckets.setdefault((i, j), []).append(t)
    return (x0, y0, w, h, res, buckets)


def _grid_candidates(grid, q: Point):
    x0, y0, w, h, res, buckets = grid
    i = min(max(int((q.x - x0) / w), 0), res - 1)
    j = min(max(int((q.y - y0) / h), 0), res - 1)
    return buckets.get((i, j), [])


# ----------------------------------------------------------------------
# Funnel shortest paths
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class GeodesicPath:
    src: Point
    dst: Point
    anchors: tuple[int, ...]  # reflex vertex indices, ordered src -> dst
    length: float

    def points(self, P: SimplePolygon) -> list[Point]:
        return [self.src] + [P.vertices[a] for a in self.anchors] + [self.dst]


def _tri_path(tr: Triangulation, start: int, goal: int) -> list[int]:
    if start == goal:
        return [start]
    prev = {start: -2}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        if t == goal:
            break
        for u in tr.neighbors[t]:
            if u not in prev:
                prev[u] = t
                queue.append(u)
    path = [goal]
    while path[-1] != start:
        path.append(prev[path[-1]])
    path.reverse()
    return path


def _shared_edge_oriented(tr: Triangulation, t1: int, t2: int) -> tuple[int, int]:
    """Shared edge of t1, t2 as directed (u, v) following t1's ccw cycle."""
    a, b, c = tr.triangles[t1]
    s2 = set(tr.triangles[t2])
    for u, v in ((a, b), (b, c), (c, a)):
        if u in s2 and v in s2:
            return u, v
    raise RuntimeError("triangles not adjacent")  # pragma: no cover


def _funnel(src: Point, portals: list[tuple[Point, int, Point, int]]) -> list[tuple[Point, int]]:
    """String pulling over portals [(left_pt, left_idx, right_pt, right_idx), ...].

    Returns the path as (point, vertex index) pairs excluding src, including dst.
    """
    out: list[tuple[Point, int]] = []
    apex, apex_i = src, ROOT
    left, left_i = src, ROOT
    right, right_i = src, ROOT
    apex_idx = left_idx = right_idx = 0
    i = 1
    guard = 0
    limit = 8 * (len(portals) + 2) ** 2 + 64
    while i < len(portals):
        guard += 1
        if guard > limit:  # pragma: no cover - safety
            raise RuntimeError("funnel failed to converge")
        lp, li, rp, ri = portals[i]
        # advance right side
        if cross(apex, right, rp) >= 0.0 or right == apex:
            if right == apex or cross(apex, left, rp) < 0.0:
                right, right_i, right_idx = rp, ri, i
            else:
                out.append((left, left_i))
                apex, apex_i = left, left_i
                apex_idx = left_idx
                left = right = apex
                left_i = right_i = apex_i
                left_idx = right_idx = apex_idx
                i = apex_idx + 1
                continue
        # advance left side
        if cross(apex, left, lp) <= 0.0 or left == apex:
            if left == apex or cross(apex, right, lp) > 0.0:
                left, left_i, left_idx = lp, li, i
            else:
                out.append((right, right_i))
                apex, apex_i = right, right_i
                apex_idx = right_idx
                left = right = apex
                left_i = right_i = apex_i
                left_idx = right_idx = apex_idx
                i = apex_idx + 1
                continue
        i += 1
    return out


def _adopt_collinear(P: SimplePolygon, pts: list[Point], idxs: list[int]) -> tuple[list[Point], list[int]]:
    """Insert reflex vertices lying exactly on path segments (tangency adoption)."""
    out_p = [pts[0]]
    out_i = [idxs[0]]
    reflex = P._cache.get("reflex_list")
    if reflex is None:
        reflex = [k for k in range(P.n) if P.is_reflex(k)]
        P._cache["reflex_list"] = reflex
    for seg in range(len(pts) - 1):
        a, b = pts[seg], pts[seg + 1]
        seglen = dist(a, b)
        hits = []
        for k in reflex:
            if k == idxs[seg] or k == idxs[seg + 1]:
                continue
            v = P.vertices[k]
            if point_segment_distance(v, a, b) <= _SNAP:
                ta = dist(a, v)
                if 1e-12 < ta < seglen - 1e-12:
                    hits.append((ta, k))
        for _, k in sorted(hits):
            out_p.append(P.vertices[k])
            out_i.append(k)
        out_p.append(b)
        out_i.append(idxs[seg + 1])
    return out_p, out_i


def shortest_path(P: SimplePolygon, x: Point, y: Point) -> GeodesicPath:
    """The unique geodesic between x and y inside P."""
    x = Point(float(x[0]), float(x[1]))
    y = Point(float(y[0]), float(y[1]))
    if x == y:
        return GeodesicPath(x, y, (), 0.0)
    tr = triangulate(P)
    ts = _locate_triangle(P, x)
    tg = _locate_triangle(P, y)
    tpath = _tri_path(tr, ts, tg)
    portals: list[tuple[Point, int, Point, int]] = [(x, ROOT, x, ROOT)]
    for a, b in zip(tpath, tpath[1:]):
        u, v = _shared_edge_oriented(tr, a, b)
        # crossing from left side of (u,v) into its right side: v is on the left
        portals.append((P.vertices[v], v, P.vertices[u], u))
    portals.append((y, ROOT, y, ROOT))
    walked = _funnel(x, portals)
    pts = [x] + [p for p, _ in walked]
    idxs = [ROOT] + [i for _, i in walked]
    if not walked or walked[-1][0] != y:
        pts.append(y)
        idxs.append(ROOT)
    # collapse zero-length segments (endpoint coinciding with a funnel vertex)
    cpts, cidx = [pts[0]], [idxs[0]]
    for p, i in zip(pts[1:], idxs[1:]):
        if dist(p, cpts[-1]) <= 1e-15:
            cidx[-1] = i if len(cpts) > 1 else cidx[-1]
            continue
        cpts.append(p)
        cidx.append(i)
    cidx[0], cidx[-1] = ROOT, ROOT  # endpoints are never their own anchors
    pts, idxs = _adopt_collinear(P, cpts, cidx)
    anchors = tuple(i for i in idxs[1:-1] if i != ROOT)
    length = sum(dist(a, b) for a, b in zip(pts, pts[1:]))
    return GeodesicPath(x, y, anchors, length)


def geodesic_distance(P: SimplePolygon, x: Point, y: Point) -> float:
    """Length of the geodesic between x and y."""
    return shortest_path(P, x, y).length


def path_point_at(P: SimplePolygon, path: GeodesicPath, s: float) -> Point:
    """Point at arclength s along the path (clamped to [0, length])."""
    pts = path.points(P)
    s = max(0.0, min(s, path.length))
    for a, b in zip(pts, pts[1:]):
        seg = dist(a, b)
        if s <= seg or seg == 0.0:
            return lerp(a, b, 0.0 if seg == 0.0 else s / seg)
        s -= seg
    return pts[-1]


# ----------------------------------------------------------------------
# Shortest path trees
# ----------------------------------------------------------------------
@dataclass
class ShortestPathTree:
    root: Point
    parent: dict[int, int]  # vertex -> predecessor vertex index (ROOT for the root)
    dist: dict[int, float]

    def edges(self, P: SimplePolygon) -> list[tuple[Point, Point]]:
        out = []
        for v, par in self.parent.items():
            ppt = self.root if par == ROOT else P.vertices[par]
            out.append((ppt, P.vertices[v]))
        return out


def _root_key(P: SimplePolygon, root: Point):
    for k in range(P.n):
        if dist(P.vertices[k], root) <= 1e-12:
            return ("v", k)
    return ("p", root[0], root[1])


def shortest_path_tree(P: SimplePolygon, root: Point) -> ShortestPathTree:
    """Geodesic distances and predecessors from root to every polygon vertex."""
    root = Point(float(root[0]), float(root[1]))
    key = ("spt",) + _root_key(P, root)
    spt = P._cache.get(key)
    if spt is not None:
        return spt
    if point_in_polygon(P, root) == "outside":
        raise PointOutside(f"root {tuple(root)} outside polygon")
    parent: dict[int, int] = {}
    d: dict[int, float] = {}
    for v in range(P.n):
        path = shortest_path(P, root, P.vertices[v])
        parent[v] = path.anchors[-1] if path.anchors else ROOT
        d[v] = path.length
    spt = ShortestPathTree(root, parent, d)
    P._cache[key] = spt
    return spt


# ----------------------------------------------------------------------
# Shortest path maps
# ----------------------------------------------------------------------
@dataclass
class ShortestPathMap:
    root: Point
    apex_idx: np.ndarray  # (m,) vertex index of the cell apex (ROOT for root cells)
    apex_pt: np.ndarray  # (m, 2)
    weight: np.ndarray  # (m,) geodesic distance root -> apex
    tris: np.ndarray  # (m, 3, 2)
    windows: list[tuple[Point, Point]]  # chords where the apex changes
    _grid: tuple = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.weight)

    def _ensure_grid(self):
        if self._grid is None:
            xs = self.tris[:, :, 0]
            ys = self.tris[:, :, 1]
            x0, y0 = xs.min(), ys.min()
            res = max(4, int(math.sqrt(len(self)) * 2))
            w = max(xs.max() - x0, 1e-12) / res
            h = max(ys.max() - y0, 1e-12) / res
            buckets: dict[tuple[int, int], list[int]] = {}
            for t in range(len(self)):
                i0 = int((xs[t].min() - x0) / w)
                i1 = int((xs[t].max() - x0) / w)
                j0 = int((ys[t].min() - y0) / h)
                j1 = int((ys[t].max() - y0) / h)
                for i in range(max(i0, 0), min(i1, res - 1) + 1):
                    for j in range(max(j0, 0), min(j1, res - 1) + 1):
                        buckets.setdefault((i, j), []).append(t)
            self._grid = (x0, y0, w, h, res, buckets)

    def locate(self, q: Point) -> int:
        """Cell index containing q (tolerant best match)."""
        self._ensure_grid()
        x0, y0, w, h, res, buckets = self._grid
        i = min(max(int((q[0] - x0) / w), 0), res - 1)
        j = min(max(int((q[1] - y0) / h), 0), res - 1)
        best, best_val = -1, -math.inf
        for t in buckets.get((i, j), []):
            val = _tri_inside_value(self.tris[t], Point(q[0], q[1]))
            if val > best_val:
                best, best_val = t, val
            if best_val >= 0.0:
                return best
        if best_val >= -1e-9:
            return best
        for t in range(len(self)):
            val = _tri_inside_value(self.tris[t], Point(q[0], q[1]))
            if val > best_val:
                best, best_val = t, val
        return best

    def apex_of(self, q: Point) -> int:
        return int(self.apex_idx[self.locate(q)])

    def distance(self, q: Point) -> float:
        c = self.locate(q)
        return float(self.weight[c] + math.hypot(q[0] - self.apex_pt[c, 0], q[1] - self.apex_pt[c, 1]))

    def cell_batch(self, pts: np.ndarray) -> np.ndarray:
        """Vectorized cell location for an (k, 2) array of points."""
        k = len(pts)
        vals = np.full(k, -np.inf)
        cells = np.full(k, -1, dtype=int)
        a = self.tris[:, 0, :]
        b = self.tris[:, 1, :]
        c = self.tris[:, 2, :]
        scale = np.maximum(
            np.abs(b - a).sum(axis=1), np.maximum(np.abs(c - b).sum(axis=1), 1e-30)
        )
        for t in range(len(self)):
            ax, ay = a[t]
            bx, by = b[t]
            cx, cy = c[t]
            s1 = (bx - ax) * (pts[:, 1] - ay) - (by - ay) * (pts[:, 0] - ax)
            s2 = (cx - bx) * (pts[:, 1] - by) - (cy - by) * (pts[:, 0] - bx)
            s3 = (ax - cx) * (pts[:, 1] - cy) - (ay - cy) * (pts[:, 0] - cx)
            val = np.minimum(s1, np.minimum(s2, s3)) / scale[t]
            upd = val > vals
            vals[upd] = val[upd]
            cells[upd] = t
        return cells

    def distance_batch(self, pts: np.ndarray) -> np.ndarray:
        cells = self.cell_batch(np.asarray(pts, dtype=float))
        ap = self.apex_pt[cells]
        return self.weight[cells] + np.hypot(pts[:, 0] - ap[:, 0], pts[:, 1] - ap[:, 1])


def _ray_boundary_hit(P: SimplePolygon, origin: Point, direction: Point, skip: set[int]):
    """First boundary intersection of the ray origin + t*direction, t > 0."""
    dx, dy = direction
    norm = math.hypot(dx, dy)
    if norm == 0.0:
        return None
    dx, dy = dx / norm, dy / norm
    best_t = math.inf
    best = None
    for k in range(P.n):
        if k in skip:
            continue
        a, b = P.edge(k)
        ex, ey = b.x - a.x, b.y - a.y
        den = dx * ey - dy * ex
        if abs(den) < 1e-15:
            continue
        wx, wy = a.x - origin.x, a.y - origin.y
        t = (wx * ey - wy * ex) / den
        u = (wx * dy - wy * dx) / den
        if t > 1e-9 and -1e-12 <= u <= 1.0 + 1e-12:
            if t < best_t:
                best_t = t
                best = (Point(origin.x + t * dx, origin.y + t * dy), k, min(max(u, 0.0), 1.0))
    return best


def _ring_interior_point(ring: list[Point]) -> Point:
    m = len(ring)
    cx = sum(p.x for p in ring) / m
    cy = sum(p.y for p in ring) / m
    cand = Point(cx, cy)
    if _winding_inside(ring, cand):
        return cand
    for k in range(m):
        a, b, c = ring[k - 1], ring[k], ring[(k + 1) % m]
        q = Point((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
        if _winding_inside(ring, q):
            return q
    # midpoints of internal diagonals as a last resort
    for i in range(m):
        for j in range(i + 2, m):
            q = lerp(ring[i], ring[j], 0.5)
            if _winding_inside(ring, q):
                return q
    raise RuntimeError("no interior point found for ring")  # pragma: no cover


def _winding_inside(ring: list[Point], p: Point) -> bool:
    angle = 0.0
    m = len(ring)
    for k in range(m):
        a, b = ring[k], ring[(k + 1) % m]
        angle += math.atan2(
            (a.x - p.x) * (b.y - p.y) - (a.y - p.y) * (b.x - p.x),
            (a.x - p.x) * (b.x - p.x) + (a.y - p.y) * (b.y - p.y),
        )
    return abs(angle) > math.pi


def _ring_find(ring: list[Point], q: Point, tol: float = 1e-9) -> int:
    for k, p in enumerate(ring):
        if dist(p, q) <= tol:
            return k
    return -1


def _ring_host_segment(ring: list[Point], q: Point, tol: float = 1e-9) -> int:
    m = len(ring)
    for k in range(m):
        a, b = ring[k], ring[(k + 1) % m]
        if point_segment_distance(q, a, b) <= tol:
            return k
    return -1


def shortest_path_map(P: SimplePolygon, root: Point) -> ShortestPathMap:
    """Triangular-cell subdivision of P by the last anchor of pi(root, .)."""
    root = Point(float(root[0]), float(root[1]))
    key = ("spm",) + _root_key(P, root)
    spm = P._cache.get(key)
    if spm is not None:
        return spm
    if point_in_polygon(P, root) == "outside":
        raise PointOutside(f"root {tuple(root)} outside polygon")
    spt = shortest_path_tree(P, root)

    windows: list[tuple[Point, Point]] = []
    chords: list[tuple[Point, Point]] = []
    for v in range(P.n):
        if not P.is_reflex(v):
            continue
        par = spt.parent[v]
        ppt = root if par == ROOT else P.vertices[par]
        vpt = P.vertices[v]
        dirx, diry = vpt.x - ppt.x, vpt.y - ppt.y
        if math.hypot(dirx, diry) <= 1e-15:
            continue
        hit = _ray_boundary_hit(P, vpt, Point(dirx, diry), skip={(v - 1) % P.n, v})
        if hit is None:
            continue
        hpt, hedge, _ = hit
        # snap to a nearby polygon vertex
        for k in (hedge, (hedge + 1) % P.n):
            if dist(hpt, P.vertices[k]) <= 1e-9:
                hpt = P.vertices[k]
                break
        wlen = max(dist(vpt, hpt), 1e-12)
        near = point_in_polygon(P, lerp(vpt, hpt, min(0.4, 1e-6 / wlen)))
        far = point_in_polygon(P, lerp(vpt, hpt, min(0.4, 1e-3 / wlen)))
        if near == "outside" or far == "outside" or "inside" not in (near, far):
            continue
        windows.append((vpt, hpt))
        chords.append((vpt, hpt))

    rings: list[list[Point]] = [list(P.vertices)]
    for vpt, hpt in windows:
        mid = lerp(vpt, hpt, 0.5)
        for ri, ring in enumerate(rings):
            if _ring_find(ring, vpt) < 0:
                continue
            if _ring_find(ring, hpt) < 0 and _ring_host_segment(ring, hpt) < 0:
                continue
            if not _winding_inside(ring, mid):
                continue  # chord belongs to another region
            ib = _ring_find(ring, hpt)
            if ib < 0:
                seg = _ring_host_segment(ring, hpt)
                ring.insert(seg + 1, hpt)
                ib = seg + 1
            ia = _ring_find(ring, vpt)
            if ia < 0 or ia == ib:
                break
            lo, hi = ia, ib
            ring1 = ring[lo : hi + 1] if lo < hi else ring[lo:] + ring[: hi + 1]
            ring2 = ring[hi:] + ring[: lo + 1] if lo < hi else ring[hi : lo + 1]
            rings[ri] = list(ring1)
            rings.append(list(ring2))
            break

    apex_idx: list[int] = []
    apex_pt: list[Point] = []
    weight: list[float] = []
    tris: list[tuple[Point, Point, Point]] = []
    for ring in rings:
        clean = [ring[0]]
        for p in ring[1:]:
            if dist(p, clean[-1]) > 1e-12:
                clean.append(p)
        if len(clean) >= 2 and dist(clean[0], clean[-1]) <= 1e-12:
            clean.pop()
        if len(clean) < 3:
            continue
        rep = _ring_interior_point(clean)
        path = shortest_path(P, root, rep)
        a_idx = path.anchors[-1] if path.anchors else ROOT
        a_pt = root if a_idx == ROOT else P.vertices[a_idx]
        w = 0.0 if a_idx == ROOT else spt.dist[a_idx]
        m = len(clean)
        # fan from the apex over ring segments not incident to it
        apos = -1
        if a_idx != ROOT:
            for k, p in enumerate(clean):
                if dist(p, a_pt) <= 1e-9:
                    apos = k
                    break
        for k in range(m):
            p0, p1 = clean[k], clean[(k + 1) % m]
            if apos >= 0 and (k == apos or (k + 1) % m == apos):
                continue
            area2 = cross(a_pt, p0, p1)
            if abs(area2) <= 1e-15:
                continue
            if area2 < 0.0:
                p0, p1 = p1, p0  # store ccw for the containment tests
            apex_idx.append(a_idx)
            apex_pt.append(a_pt)
            weight.append(w)
            tris.append((a_pt, p0, p1))

    spm = ShortestPathMap(
        root=root,
        apex_idx=np.array(apex_idx, dtype=int),
        apex_pt=np.array(apex_pt, dtype=float),
        weight=np.array(weight, dtype=float),
        tris=np.array(tris, dtype=float),
        windows=chords,
    )
    P._cache[key] = spm
    return spm


# ----------------------------------------------------------------------
# Lemma-style convexity probe (test utility)
# ----------------------------------------------------------------------
def path_convexity_check(P: SimplePolygon, a: Point, b: Point, c: Point, k: int = 32) -> bool:
    """Sampled check that d(a, .) is convex along pi(b, c) and bounded by the endpoints."""
    path = shortest_path(P, b, c)
    if path.length <= 1e-12:
        return True
    ss = [path.length * i / (k - 1) for i in range(k)]
    vals = [geodesic_distance(P, a, path_point_at(P, path, s)) for s in ss]
    bound = max(vals[0], vals[-1]) + 1e-9
    if any(v > bound for v in vals):
        return False
    scale = max(1.0, max(vals))
    for i in range(1, k - 1):
        if vals[i - 1] + vals[i + 1] - 2 * vals[i] < -1e-7 * scale:
            return False
    return True
