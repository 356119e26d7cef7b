"""Independent brute-force ground truth.

Everything here is deliberately naive (visibility graph Dijkstra, grid search,
dense boundary sampling) and exists only to certify the main modules on
desk-scale fixtures.
"""

from __future__ import annotations

import heapq
import math

import numpy as np

from .errors import PointOutside
from .geometry import (
    Point,
    SimplePolygon,
    dist,
    lerp,
    orientation,
    point_in_polygon,
    point_segment_distance,
    TAU_ON,
)


def _segment_inside(P: SimplePolygon, a: Point, b: Point) -> bool:
    """True if the open segment ab stays inside (or on the boundary of) P."""
    if a == b:
        return True
    for k in range(P.n):
        c, d = P.edge(k)
        o1 = orientation(a, b, c)
        o2 = orientation(a, b, d)
        o3 = orientation(c, d, a)
        o4 = orientation(c, d, b)
        if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
            return False  # proper crossing
    # split at collinear vertices and probe each open piece
    ts = [0.0, 1.0]
    for k in range(P.n):
        v = P.vertices[k]
        if point_segment_distance(v, a, b) <= 1e-12:
            seg = dist(a, b)
            t = dist(a, v) / seg
            if 1e-12 < t < 1.0 - 1e-12:
                ts.append(t)
    ts.sort()
    for t0, t1 in zip(ts, ts[1:]):
        mid = lerp(a, b, 0.5 * (t0 + t1))
        if point_in_polygon(P, mid) == "outside":
            return False
    return True


def visibility_graph(P: SimplePolygon, extra: list[Point] = ()) -> tuple[list[Point], dict[int, list[tuple[int, float]]]]:
    nodes = list(P.vertices) + list(extra)
    adj: dict[int, list[tuple[int, float]]] = {i: [] for i in range(len(nodes))}
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            if _segment_inside(P, nodes[i], nodes[j]):
                w = dist(nodes[i], nodes[j])
                adj[i].append((j, w))
                adj[j].append((i, w))
    return nodes, adj


def visgraph_distance(P: SimplePolygon, x: Point, y: Point) -> float:
    """Dijkstra over the visibility graph with x, y added; equals d(x, y)."""
    x, y = Point(*x), Point(*y)
    for q in (x, y):
        if point_in_polygon(P, q) == "outside":
            raise PointOutside(f"{tuple(q)} outside polygon")
    if x == y:
        return 0.0
    _, adj = visibility_graph(P, [x, y])
    src, dst = P.n, P.n + 1
    distv = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if u == dst:
            return d
        if d > distv.get(u, math.inf):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < distv.get(v, math.inf):
                distv[v] = nd
                heapq.heappush(heap, (nd, v))
    raise RuntimeError("visibility graph disconnected")  # pragma: no cover


def _max_vertex_distance(P: SimplePolygon, q: Point) -> float:
    from .geodesic import shortest_path_map

    return max(shortest_path_map(P, P.vertices[v]).distance(q) for v in range(P.n))


def _visgraph_vertex_distances(P: SimplePolygon, q: Point) -> list[float]:
    """One Dijkstra from q over a freshly built visibility graph; distances to all vertices."""
    _, adj = visibility_graph(P, [q])
    src = P.n
    distv = {src: 0.0}
    heap = [(0.0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > distv.get(u, math.inf):
            continue
        for v, w in adj[u]:
            nd = d + w
            if nd < distv.get(v, math.inf):
                distv[v] = nd
                heapq.heappush(heap, (nd, v))
    return [distv[v] for v in range(P.n)]


def grid_one_center(P: SimplePolygon, resolution: int = 64) -> tuple[Point, float]:
    """Grid argmin of the max-vertex geodesic distance, with local refinement."""
    from .geodesic import shortest_path_map

    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    x0, y0, x1, y1 = P.bbox
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    keep = [
        i
        for i, (px, py) in enumerate(pts)
        if point_in_polygon(P, Point(px, py), tol=TAU_ON) == "inside"
    ]
    pts = pts[keep]
    vals = np.full(len(pts), -np.inf)
    for v in range(P.n):
        spm = shortest_path_map(P, P.vertices[v])
        vals = np.maximum(vals, spm.distance_batch(pts))
    best = int(np.argmin(vals))
    c = Point(float(pts[best, 0]), float(pts[best, 1]))
    val = float(vals[best])
    # spot-check the distance engine against the independent visibility graph
    rng = np.random.default_rng(7)
    for i in rng.choice(len(pts), size=min(8, len(pts)), replace=False):
        q = Point(float(pts[i, 0]), float(pts[i, 1]))
        vg = max(_visgraph_vertex_distances(P, q))
        spmval = _max_vertex_distance(P, q)
        if abs(vg - spmval) > 1e-9:
            raise AssertionError(f"distance engines disagree at {q}: {vg} vs {spmval}")
    # local refinement: restarted Nelder-Mead follows the narrow nonsmooth
    # valleys of the max-distance function that axis-wise descent stalls in
    from scipy.optimize import minimize

    def fun(xy):
        q = Point(float(xy[0]), float(xy[1]))
        if point_in_polygon(P, q) == "outside":
            return 1e30
        return _max_vertex_distance(P, q)

    step = max(x1 - x0, y1 - y0) / (resolution - 1)
    xcur = np.array([c.x, c.y])
    for scale in (step, step / 64.0, step / 4096.0):
        res = minimize(
            fun,
            xcur,
            method="Nelder-Mead",
            options={
                "initial_simplex": np.array(
                    [xcur, xcur + [scale, 0.0], xcur + [0.0, scale]]
                ),
                "xatol": 1e-11,
                "fatol": 1e-12,
                "maxiter": 4000,
            },
        )
        if res.fun < val:
            xcur = res.x
            val = float(res.fun)
            c = Point(float(res.x[0]), float(res.x[1]))
    return c, val


def sampled_two_center(P: SimplePolygon, boundary_samples: int) -> tuple[float, tuple]:
    """Dense boundary-pair search for the 2-center radius (upper-bounding oracle)."""
    from .onecenter import maxrad

    if boundary_samples < 4 * P.n:
        raise ValueError("need at least 4n boundary samples")
    coords = [
        P.bc_at_arclength(P.perimeter * k / boundary_samples) for k in range(boundary_samples)
    ]
    best = math.inf
    best_pair = None
    for i in range(boundary_samples):
        for j in range(i + 1, boundary_samples):
            a, b = coords[i], coords[j]
            if dist(P.boundary_point(a), P.boundary_point(b)) <= 1e-12:
                continue
            r = maxrad(P, a, b)
            if r < best:
                best = r
                best_pair = (a, b)
    best, best_pair = _polish_pair(P, best, best_pair)
    return best, best_pair


def _polish_pair(P: SimplePolygon, best: float, pair) -> tuple[float, tuple]:
    """Golden-section polish of both edge parameters of the best sampled pair."""
    from .onecenter import maxrad

    if pair is None:
        return best, pair
    a, b = pair
    phi = (math.sqrt(5.0) - 1.0) / 2.0

    def golden(f, lo, hi, iters=40):
        x1 = hi - phi * (hi - lo)
        x2 = lo + phi * (hi - lo)
        f1, f2 = f(x1), f(x2)
        for _ in range(iters):
            if f1 <= f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - phi * (hi - lo)
                f1 = f(x1)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + phi * (hi - lo)
                f2 = f(x2)
        return (lo + hi) / 2.0

    for _ in range(3):
        ta = golden(
            lambda t: maxrad(P, P.normalize_bc(type(a)(a.edge, t)), b), 0.0, 1.0 - 1e-12
        )
        a = P.normalize_bc(type(a)(a.edge, ta))
        tb = golden(
            lambda t: maxrad(P, a, P.normalize_bc(type(b)(b.edge, t))), 0.0, 1.0 - 1e-12
        )
        b = P.normalize_bc(type(b)(b.edge, tb))
    val = maxrad(P, a, b)
    if val < best:
        return val, (a, b)
    return best, pair
