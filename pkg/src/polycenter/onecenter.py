"""Geodesic 1-center of polygons and subpolygons, and restricted radii r(alpha, beta).

The polygon 1-center is found on the skeleton of the farthest-point Voronoi
diagram and then polished against its witness set (geodesic midpoint for two
witnesses, an equidistance Newton solve for three).  Restricted subpolygon
radii reuse parent-polygon geodesics: the candidates attaining the radius are
the chain vertices plus the two split points, so the problem reduces to a
minimax over finitely many sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePartition
from .geometry import BoundaryCoord, Point, SimplePolygon, SubPolygon, chain, dist, subpolygon
from .geodesic import (
    ROOT,
    path_point_at,
    shortest_path,
    shortest_path_map,
    shortest_path_tree,
)
from .disks import farthest_voronoi

STATS = {
    "restricted_center_projected": 0,
    "skeleton_beaten_by_sites": 0,
}


@dataclass(frozen=True)
class OneCenterResult:
    center: Point
    radius: float
    witnesses: tuple[int, ...]  # indices into the site list (vertex ids for polygons)


@dataclass(frozen=True)
class RestrictedRadius:
    alpha: BoundaryCoord
    beta: BoundaryCoord
    radius: float
    center: Point


def _vertex_distance_matrix(P: SimplePolygon) -> np.ndarray:
    mat = P._cache.get("vdist")
    if mat is None:
        mat = np.zeros((P.n, P.n))
        for v in range(P.n):
            spt = shortest_path_tree(P, P.vertices[v])
            for w in range(P.n):
                mat[v, w] = spt.dist[w]
        mat = 0.5 * (mat + mat.T)
        P._cache["vdist"] = mat
    return mat


class _SiteSet:
    """Distance bookkeeping for a finite set of sites inside P."""

    def __init__(self, P: SimplePolygon, pts: list[Point], vertex_ids: list[int]):
        self.P = P
        self.pts = pts
        self.vertex_ids = vertex_ids  # polygon vertex index or -1 for free points
        self.spms = [shortest_path_map(P, p) for p in pts]
        m = len(pts)
        vmat = _vertex_distance_matrix(P)
        self.pair = np.zeros((m, m))
        arr = np.array(pts)
        for i in range(m):
            if vertex_ids[i] >= 0:
                vi = vertex_ids[i]
                for j in range(m):
                    if vertex_ids[j] >= 0:
                        self.pair[i, j] = vmat[vi, vertex_ids[j]]
        for i in range(m):
            if vertex_ids[i] < 0:
                row = self.spms[i].distance_batch(arr)
                self.pair[i, :] = row
                self.pair[:, i] = row

    def d(self, i: int, q: Point) -> float:
        return self.spms[i].distance(q)

    def all_d(self, q: Point) -> list[float]:
        return [m.distance(q) for m in self.spms]


def _midpoint_solution(S: _SiteSet, i: int, j: int):
    path = shortest_path(S.P, S.pts[i], S.pts[j])
    c = path_point_at(S.P, path, path.length / 2.0)
    return c, path.length / 2.0


def _newton_equidistant_pts(S: _SiteSet, tri: tuple[int, int, int], q: Point):
    spms = [S.spms[k] for k in tri]
    for _ in range(50):
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
        if abs(det) < 1e-16:
            return None
        dx = (-f1 * j22 + f2 * j12) / det
        dy = (-j11 * f2 + j21 * f1) / det
        step = math.hypot(dx, dy)
        lim = 2.0
        if step > lim:
            dx, dy = dx / step * lim, dy / step * lim
        q = Point(q.x + dx, q.y + dy)
    return None


def _pattern_minimax(S: _SiteSet, subset, q: Point, step0: float = 0.1):
    def val(p):
        return max(S.d(k, p) for k in subset)

    best, bv = q, val(q)
    step = step0
    while step > 1e-12:
        moved = False
        for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)):
            cand = Point(best.x + dx * step, best.y + dy * step)
            v = val(cand)
            if v < bv - 1e-15:
                best, bv = cand, v
                moved = True
        if not moved:
            step *= 0.5
    return best, bv


def _basis_solution(S: _SiteSet, subset: tuple[int, ...], hint: Point):
    """Minimax center of <=3 sites; returns (center, radius)."""
    subset = tuple(subset)
    if len(subset) == 1:
        return S.pts[subset[0]], 0.0
    if len(subset) == 2:
        return _midpoint_solution(S, subset[0], subset[1])
    best = None
    for a in range(3):
        i, j = subset[a], subset[(a + 1) % 3]
        k = subset[(a + 2) % 3]
        c, r = _midpoint_solution(S, i, j)
        if S.d(k, c) <= r + 1e-11:
            if best is None or r < best[1]:
                best = (c, r)
    if best is not None:
        return best
    q = _newton_equidistant_pts(S, subset, hint)
    if q is not None:
        return q, max(S.d(k, q) for k in subset)
    q, v = _pattern_minimax(S, subset, hint)
    return q, v


def _center_of_sites(P: SimplePolygon, pts: list[Point], vertex_ids: list[int]):
    """Geodesic minimax center of finitely many sites; (center, radius, witness idx)."""
    # dedupe coincident sites
    uniq_pts: list[Point] = []
    uniq_ids: list[int] = []
    back: list[int] = []
    for p, vid in zip(pts, vertex_ids):
        found = -1
        for k, u in enumerate(uniq_pts):
            if dist(p, u) <= 1e-12:
                found = k
                break
        if found < 0:
            uniq_pts.append(p)
            uniq_ids.append(vid)
            found = len(uniq_pts) - 1
        back.append(found)
    S = _SiteSet(P, uniq_pts, uniq_ids)
    m = len(uniq_pts)
    if m == 1:
        return uniq_pts[0], 0.0, (0,), S
    flat = np.argmax(S.pair)
    i0, j0 = int(flat // m), int(flat % m)
    basis = (i0, j0)
    c, r = _basis_solution(S, basis, uniq_pts[i0])
    for _ in range(4 * m + 16):
        ds = S.all_d(c)
        w = int(np.argmax(ds))
        if ds[w] <= r + 1e-10:
            break
        pool = tuple(sorted(set(basis) | {w}))
        cands = []
        if len(pool) <= 3:
            cands.append(pool)
        subs = [tuple(sorted((a, w))) for a in pool if a != w]
        subs += [
            tuple(sorted((a, b, w)))
            for ai, a in enumerate(pool)
            for b in pool[ai + 1 :]
            if a != w and b != w
        ]
        cands.extend(subs)
        best = None
        for sub in dict.fromkeys(cands):
            cc, rr = _basis_solution(S, sub, c)
            worst = max(S.d(k, cc) for k in pool)
            feasible = worst <= rr + 1e-9
            key = (not feasible, rr)
            if best is None or key < best[0]:
                best = (key, cc, rr, sub)
        _, c, r, basis = best
    ds = S.all_d(c)
    r = max(r, max(ds))
    wit = tuple(k for k in range(m) if ds[k] >= r - 1e-9)
    return c, r, wit, S


def one_center(Q):
    """Geodesic 1-center of a SimplePolygon or SubPolygon."""
    if isinstance(Q, SubPolygon):
        return _subpolygon_center(Q)
    P: SimplePolygon = Q
    fv = farthest_voronoi(P, list(range(P.n)), skeleton_only=True)
    spms = [shortest_path_map(P, P.vertices[v]) for v in range(P.n)]

    def F(q: Point) -> float:
        return max(s.distance(q) for s in spms)

    best_pt, best_val = None, math.inf
    for v in fv.vertices:
        val = F(v.point)
        if val < best_val:
            best_pt, best_val = v.point, val
    for e in fv.edges:
        pts = np.array(e.points)
        if len(pts) < 2:
            continue
        vals = np.max(np.stack([s.distance_batch(pts) for s in spms]), axis=0)
        k = int(np.argmin(vals))
        if vals[k] < best_val:
            best_pt, best_val = Point(*e.points[k]), float(vals[k])
        # 1D refine along the polyline around the sampled argmin
        lo = max(0, k - 1)
        hi = min(len(pts) - 1, k + 1)
        a, b = 0.0, 1.0
        seg = [Point(*e.points[lo]), Point(*e.points[hi])]
        for _ in range(50):
            m1, m2 = a + (b - a) / 3, b - (b - a) / 3
            p1 = Point(seg[0].x + (seg[1].x - seg[0].x) * m1, seg[0].y + (seg[1].y - seg[0].y) * m1)
            p2 = Point(seg[0].x + (seg[1].x - seg[0].x) * m2, seg[0].y + (seg[1].y - seg[0].y) * m2)
            if F(p1) <= F(p2):
                b = m2
            else:
                a = m1
        t = 0.5 * (a + b)
        p = Point(seg[0].x + (seg[1].x - seg[0].x) * t, seg[0].y + (seg[1].y - seg[0].y) * t)
        val = F(p)
        if val < best_val:
            best_pt, best_val = p, val

    pts = list(P.vertices)
    ids = list(range(P.n))
    c, r, wit = _polish_witnesses(P, pts, ids, best_pt, best_val)
    # defensive cross-check against the direct finite-site solver
    c2, r2, wit2, S2 = _center_of_sites(P, pts, ids)
    if r2 < r - 1e-12:
        STATS["skeleton_beaten_by_sites"] += 1
        c, r = c2, r2
        wit = tuple(S2.vertex_ids[k] for k in wit2)
    return OneCenterResult(c, r, wit)


def _polish_witnesses(P, pts, ids, c0: Point, v0: float):
    """Refine a near-optimal center using its tied witness set."""
    spms = [shortest_path_map(P, p) for p in pts]

    def F(q):
        return max(s.distance(q) for s in spms)

    tol = max(1e-6, 1e-9 * v0)
    ds = [s.distance(c0) for s in spms]
    tied = [k for k in range(len(pts)) if ds[k] >= v0 - tol]
    best_c, best_v = c0, v0
    S = _SiteSet(P, pts, ids)
    # polished candidates win ties: they pin the center algebraically
    if len(tied) >= 2:
        for a in range(len(tied)):
            for b in range(a + 1, len(tied)):
                c, r = _midpoint_solution(S, tied[a], tied[b])
                v = F(c)
                if abs(v - r) <= 1e-9 and v <= best_v + 1e-12:
                    best_c, best_v = c, min(v, best_v)
    if len(tied) >= 3:
        for a in range(len(tied)):
            for b in range(a + 1, len(tied)):
                for e in range(b + 1, len(tied)):
                    q = _newton_equidistant_pts(S, (tied[a], tied[b], tied[e]), c0)
                    if q is None:
                        continue
                    v = F(q)
                    if v <= best_v + 1e-12:
                        best_c, best_v = q, min(v, best_v)
    ds = [s.distance(best_c) for s in spms]
    wtol = max(1e-7, 1e-9 * best_v)
    wit = tuple(ids[k] for k in range(len(pts)) if ds[k] >= best_v - wtol)
    return best_c, best_v, wit


def _subpolygon_center(sub: SubPolygon) -> OneCenterResult:
    P = sub.parent
    pts = sub.site_points()
    ids = []
    for p in pts:
        vid = -1
        for k in range(P.n):
            if dist(p, P.vertices[k]) <= 1e-12:
                vid = k
                break
        ids.append(vid)
    c, r, wit, S = _center_of_sites(P, pts, ids)
    if not sub.contains(c, tol=1e-9):
        STATS["restricted_center_projected"] += 1
        c, r = _project_to_path(P, sub, S)
        ds = S.all_d(c)
        wit = tuple(k for k in range(len(S.pts)) if ds[k] >= r - 1e-9)
    wit_ids = tuple(S.vertex_ids[k] if S.vertex_ids[k] >= 0 else k for k in wit)
    return OneCenterResult(c, r, wit_ids)


def _project_to_path(P, sub: SubPolygon, S: _SiteSet):
    """1D minimax along the closing path pi(alpha, beta)."""
    path = sub.closing_path
    L = max(path.length, 1e-15)

    def val(s):
        q = path_point_at(P, path, s)
        return max(S.all_d(q))

    a, b = 0.0, L
    for _ in range(80):
        m1, m2 = a + (b - a) / 3, b - (b - a) / 3
        if val(m1) <= val(m2):
            b = m2
        else:
            a = m1
    s = 0.5 * (a + b)
    q = path_point_at(P, path, s)
    return q, val(s)


def restricted_radius(P: SimplePolygon, alpha: BoundaryCoord, beta: BoundaryCoord) -> RestrictedRadius:
    """Radius of the subpolygon P(alpha, beta) (chain alpha->beta closed by the geodesic)."""
    alpha = P.normalize_bc(alpha)
    beta = P.normalize_bc(beta)
    key = ("rrad", alpha.edge, round(alpha.t, 12), beta.edge, round(beta.t, 12))
    hit = P._cache.get(key)
    if hit is not None:
        return hit
    pa, pb = P.boundary_point(alpha), P.boundary_point(beta)
    if dist(pa, pb) <= 1e-15:
        raise DegeneratePartition("alpha and beta coincide")
    sub = subpolygon(P, alpha, beta)
    res = _subpolygon_center(sub)
    out = RestrictedRadius(alpha, beta, res.radius, res.center)
    P._cache[key] = out
    return out


def maxrad(P: SimplePolygon, alpha: BoundaryCoord, beta: BoundaryCoord) -> float:
    """max(r(alpha,beta), r(beta,alpha)): the quantity minimized over partitions."""
    return max(restricted_radius(P, alpha, beta).radius, restricted_radius(P, beta, alpha).radius)
