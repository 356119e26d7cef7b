"""Shared polygon fixtures and a seeded random simple polygon generator."""

from __future__ import annotations

import math
import random

from .geometry import Point, SimplePolygon, validate_polygon

SQUARE_POINTS = [Point(0.0, 0.0), Point(0.0, 1.0), Point(1.0, 1.0), Point(1.0, 0.0)]
LSHAPE_POINTS = [
    Point(0.0, 0.0),
    Point(0.0, 2.0),
    Point(1.0, 2.0),
    Point(1.0, 1.0),
    Point(2.0, 1.0),
    Point(2.0, 0.0),
]


def square() -> SimplePolygon:
    return validate_polygon(SQUARE_POINTS)


def lshape() -> SimplePolygon:
    return validate_polygon(LSHAPE_POINTS)


def _space_partition_chain(a: Point, b: Point, pts: list[Point], rng: random.Random) -> list[Point]:
    """Chain from a to b visiting all of pts, simple by recursive space partition."""
    if not pts:
        return [a]
    if len(pts) == 1:
        return [a, pts[0]]
    c = pts[rng.randrange(len(pts))]
    rest = [p for p in pts if p is not c]
    # random direction line through c that separates a-side from b-side
    for _ in range(64):
        ang = rng.uniform(0.0, math.pi)
        dx, dy = math.cos(ang), math.sin(ang)
        side = lambda p: (p.x - c.x) * dy - (p.y - c.y) * dx  # noqa: E731
        sa, sb = side(a), side(b)
        if abs(sa) < 1e-12 or abs(sb) < 1e-12 or any(abs(side(p)) < 1e-12 for p in rest):
            continue
        if sa * sb < 0:
            first = [p for p in rest if side(p) * sa > 0]
            second = [p for p in rest if side(p) * sb > 0]
            return _space_partition_chain(a, c, first, rng) + _space_partition_chain(c, b, second, rng)
    # fall back to splitting by distance along ab
    rest.sort(key=lambda p: (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y))
    halfway = len(rest) // 2
    return _space_partition_chain(a, c, rest[:halfway], rng) + _space_partition_chain(c, b, rest[halfway:], rng)


def random_simple_polygon(n: int, seed: int) -> SimplePolygon:
    """Seeded simple polygon on n random points (space partition construction)."""
    rng = random.Random(seed)
    for attempt in range(200):
        pts = [Point(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)) for _ in range(n)]
        # split by the line through the two extreme points
        pts.sort(key=lambda p: (p.x, p.y))
        a, b = pts[0], pts[-1]
        middle = pts[1:-1]
        side = lambda p: (p.x - a.x) * (b.y - a.y) - (p.y - a.y) * (b.x - a.x)  # noqa: E731
        if any(abs(side(p)) < 1e-9 for p in middle):
            continue
        upper = [p for p in middle if side(p) > 0]
        lower = [p for p in middle if side(p) < 0]
        chain1 = _space_partition_chain(a, b, upper, rng)  # ends before b
        chain2 = _space_partition_chain(b, a, lower, rng)  # ends before a
        ring = chain1 + chain2
        if len(ring) != n:
            continue
        scale = min(
            math.hypot(ring[k - 1].x - ring[k].x, ring[k - 1].y - ring[k].y) for k in range(n)
        )
        if scale < 1e-3:
            continue
        try:
            return validate_polygon(ring)
        except Exception:
            continue
    raise RuntimeError(f"failed to generate a simple polygon (n={n}, seed={seed})")
