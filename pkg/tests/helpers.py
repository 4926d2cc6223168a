"""Shared test utilities: brute-force oracles and random instance factories."""

from __future__ import annotations

import math
import random

from rangelsh.errors import DomainError
from rangelsh.polygon_geom import GridPolygon


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)


def star_polygon(rng: random.Random, cx: int, cy: int, r_min: float, r_max: float,
                 n_verts: int) -> GridPolygon:
    """Random simple lattice polygon, star-shaped around ``(cx, cy)``."""
    while True:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n_verts))
        pts = []
        for a in angles:
            r = rng.uniform(r_min, r_max)
            pts.append((round(cx + r * math.cos(a)), round(cy + r * math.sin(a))))
        pts = list(dict.fromkeys(pts))
        try:
            return GridPolygon(tuple(pts))
        except DomainError:
            continue


def convex_polygon(rng: random.Random, cx: int, cy: int, radius: float, n_verts: int) -> GridPolygon:
    """Random convex lattice polygon: hull of rounded points on a circle."""
    while True:
        angles = sorted(rng.uniform(0, 2 * math.pi) for _ in range(n_verts))
        pts = [(round(cx + radius * math.cos(a)), round(cy + radius * math.sin(a))) for a in angles]
        hull = _convex_hull(pts)
        if len(hull) < 3:
            continue
        try:
            return GridPolygon(tuple(hull))
        except DomainError:
            continue


def _convex_hull(pts):
    pts = sorted(set(pts))
    if len(pts) < 3:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def scan_min_hash(a: int, b: int, p: int, lo: int, hi: int) -> tuple[int, int]:
    r, x = min(((a * x + b) % p, x) for x in range(lo, hi + 1))
    return x, r


def upper_chain(points):
    """Strict upper hull (left to right) of points sorted by x."""
    hull = []
    for q in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(q)
    return hull


def below_polyline(poly, q) -> bool:
    """Whether ``q`` is on or below the x-monotone polyline ``poly``."""
    if len(poly) == 1:
        return q[1] <= poly[0][1]
    for (x1, y1), (x2, y2) in zip(poly, poly[1:]):
        if x1 <= q[0] <= x2:
            return (x2 - x1) * (q[1] - y1) - (y2 - y1) * (q[0] - x1) <= 0
    return False
