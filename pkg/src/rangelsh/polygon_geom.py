"""Exact lattice-polygon geometry for the fuzzy model.

Polygons have integer vertices, so every membership and distance predicate
is decided with integer cross products.  Radii enter only squared, as
:class:`fractions.Fraction`, which turns the dilation test into
``cross^2 * den <= num * |edge|^2`` with no rounding anywhere.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .rect_sampler import GridRect

Point = tuple[int, int]
SQRT8_SQ = 8


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _on_segment(a: Point, b: Point, q: Point) -> bool:
    return (_cross(a, b, q) == 0
            and min(a[0], b[0]) <= q[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= q[1] <= max(a[1], b[1]))


def _segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool:
    d1, d2 = _cross(c, d, a), _cross(c, d, b)
    d3, d4 = _cross(a, b, c), _cross(a, b, d)
    if ((d1 > 0) != (d2 > 0)) and d1 and d2 and ((d3 > 0) != (d4 > 0)) and d3 and d4:
        return True
    return (_on_segment(c, d, a) or _on_segment(c, d, b)
            or _on_segment(a, b, c) or _on_segment(a, b, d))


def as_fraction(value) -> Fraction:
    """Exact rational for ints, Fractions and decimal-looking floats."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(str(value))


@dataclass(frozen=True)
class GridPolygon:
    """Simple lattice polygon without holes, stored counterclockwise."""

    vertices: tuple[Point, ...]
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple((int(x), int(y)) for x, y in self.vertices)
        if len(verts) < 3:
            raise DomainError("a polygon needs at least 3 vertices")
        area2 = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(verts, verts[1:] + verts[:1]))
        if area2 == 0:
            raise DomainError("polygon has zero area")
        if area2 < 0:
            verts = verts[::-1]
        object.__setattr__(self, "vertices", verts)
        if not self._checked:
            problem = _simplicity_problem(verts)
            if problem:
                raise DomainError(f"polygon is not simple: {problem}")

    @classmethod
    def from_json(cls, text: str) -> GridPolygon:
        try:
            data = json.loads(text)
            verts = [(int(x), int(y)) for x, y in data["vertices"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise DomainError(f"bad polygon JSON: {exc}") from None
        return cls(tuple(verts))

    def to_json(self) -> str:
        return json.dumps({"vertices": [list(v) for v in self.vertices]})

    def edges(self):
        v = self.vertices
        return zip(v, v[1:] + v[:1])

    @cached_property
    def area2(self) -> int:
        return sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in self.edges())

    @property
    def area(self) -> Fraction:
        return Fraction(self.area2, 2)

    @cached_property
    def diameter_sq(self) -> int:
        v = self.vertices
        return max((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 for i, a in enumerate(v) for b in v[i + 1:])

    @property
    def diameter(self) -> float:
        return math.sqrt(self.diameter_sq)

    @property
    def perimeter(self) -> float:
        return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in self.edges())

    @cached_property
    def bbox(self) -> tuple[int, int, int, int]:
        xs = [x for x, _ in self.vertices]
        ys = [y for _, y in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def translated(self, dx: int, dy: int) -> GridPolygon:
        return GridPolygon(tuple((x + dx, y + dy) for x, y in self.vertices), _checked=True)


def _simplicity_problem(verts: Sequence[Point]) -> str | None:
    n = len(verts)
    if len(set(verts)) != n:
        return "repeated vertex"
    edges = [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        nxt = edges[(i + 1) % n][1]
        # Adjacent edges may only share their common vertex.
        if _cross(a, b, nxt) == 0 and (
                (b[0] - a[0]) * (nxt[0] - b[0]) + (b[1] - a[1]) * (nxt[1] - b[1])) < 0:
            return f"edges {i} and {(i + 1) % n} fold back"
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = edges[j]
            if _segments_touch(a, b, c, d):
                return f"edges {i} and {j} intersect"
    return None


@dataclass(frozen=True)
class GridSpec:
    """The square ``[0, g-1]^2`` of lattice points."""

    resolution: int

    def __post_init__(self):
        if self.resolution < 1:
            raise DomainError("grid resolution must be positive")

    @property
    def square(self) -> GridRect:
        g = self.resolution - 1
        return GridRect(0, g, 0, g)

    @property
    def size(self) -> int:
        return self.resolution ** 2


def on_boundary(P: GridPolygon, q: Point) -> bool:
    return any(_on_segment(a, b, q) for a, b in P.edges())


def contains(P: GridPolygon, q: Point) -> bool:
    """Closed-region membership (boundary counts as inside)."""
    x0, x1, y0, y1 = P.bbox
    if not (x0 <= q[0] <= x1 and y0 <= q[1] <= y1):
        return False
    wn = 0
    qy = q[1]
    for a, b in P.edges():
        cr = _cross(a, b, q)
        if cr == 0 and _on_segment(a, b, q):
            return True
        if a[1] <= qy < b[1] and cr > 0:
            wn += 1
        elif b[1] <= qy < a[1] and cr < 0:
            wn -= 1
    return wn != 0


def _edge_dist_sq(a: Point, b: Point, q: Point) -> tuple[int, int]:
    # Squared distance from q to segment ab as (numerator, denominator).
    dx, dy = b[0] - a[0], b[1] - a[1]
    vx, vy = q[0] - a[0], q[1] - a[1]
    dot = vx * dx + vy * dy
    if dot <= 0:
        return vx * vx + vy * vy, 1
    length = dx * dx + dy * dy
    if dot >= length:
        wx, wy = q[0] - b[0], q[1] - b[1]
        return wx * wx + wy * wy, 1
    cr = dx * vy - dy * vx
    return cr * cr, length


def boundary_dist_sq(P: GridPolygon, q: Point) -> Fraction:
    return min(Fraction(*_edge_dist_sq(a, b, q)) for a, b in P.edges())


def within_sq(P: GridPolygon, q: Point, r_sq: Fraction) -> bool:
    """True iff the distance from ``q`` to the closed region is at most ``sqrt(r_sq)``."""
    if contains(P, q):
        return True
    num, den = r_sq.numerator, r_sq.denominator
    for a, b in P.edges():
        dn, dd = _edge_dist_sq(a, b, q)
        if dn * den <= num * dd:
            return True
    return False


def in_dilation(P: GridPolygon, q: Point, w) -> bool:
    """Membership in ``P+(w)``, the points within distance ``w`` of ``P``."""
    return within_sq(P, q, as_fraction(w) ** 2)


def in_erosion(P: GridPolygon, q: Point, w) -> bool:
    """Membership in ``P-(w)``: inside ``P`` and at least ``w`` from its boundary."""
    return contains(P, q) and boundary_dist_sq(P, q) >= as_fraction(w) ** 2


def diameter(P: GridPolygon) -> float:
    return P.diameter


def fuzzy_radius_sq(P: GridPolygon, phi, scale=Fraction(1, 2)) -> Fraction:
    """Exact ``(scale * phi * d(P))^2``; the fuzzy sampling region uses scale 1/2."""
    return (as_fraction(scale) * as_fraction(phi)) ** 2 * P.diameter_sq


def check_fuzzy_width(P: GridPolygon, phi) -> None:
    """Raise unless ``phi * d(P) >= sqrt(8)``."""
    if as_fraction(phi) ** 2 * P.diameter_sq < SQRT8_SQ:
        raise PreconditionError(
            f"phi * diameter = {float(as_fraction(phi)) * P.diameter:.4g} is below sqrt(8)")


def dilation_box(P: GridPolygon, r_sq: Fraction, clip: GridRect | None = None) -> GridRect | None:
    """Bounding rectangle of the lattice points of ``P+(sqrt(r_sq))``, optionally clipped."""
    x0, x1, y0, y1 = P.bbox
    r = math.isqrt(r_sq.numerator // r_sq.denominator)
    while Fraction((r + 1) ** 2) <= r_sq:
        r += 1
    bx0, bx1, by0, by1 = x0 - r, x1 + r, y0 - r, y1 + r
    if clip is not None:
        bx0, by0 = max(bx0, clip.i1), max(by0, clip.j1)
        bx1, by1 = min(bx1, clip.i2), min(by1, clip.j2)
    else:
        bx0, by0 = max(bx0, 0), max(by0, 0)
    if bx0 > bx1 or by0 > by1:
        return None
    return GridRect(bx0, bx1, by0, by1)


def _safe_dtype(rect: GridRect, P: GridPolygon, r_sq: Fraction):
    span = max(rect.i2, rect.j2, P.bbox[1], P.bbox[3]) + 1
    worst = 64 * span ** 4 * max(r_sq.denominator, 1) + r_sq.numerator * 4 * span ** 2
    return np.int64 if worst < 2 ** 62 else object


def dilation_mask(P: GridPolygon, r_sq: Fraction, rect: GridRect) -> np.ndarray:
    """Boolean array ``M[x - i1, y - j1]`` of membership in ``P+(sqrt(r_sq))``.

    Vectorised form of :func:`within_sq` over a rectangle; same exact integer
    predicates.
    """
    dtype = _safe_dtype(rect, P, r_sq)
    xs = np.arange(rect.i1, rect.i2 + 1).astype(dtype)
    ys = np.arange(rect.j1, rect.j2 + 1).astype(dtype)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    wn = np.zeros(X.shape, dtype=np.int64)
    hit = np.zeros(X.shape, dtype=bool)
    num, den = r_sq.numerator, r_sq.denominator
    for (ax, ay), (bx, by) in P.edges():
        dx, dy = bx - ax, by - ay
        vx, vy = X - ax, Y - ay
        cr = dx * vy - dy * vx
        up = (ay <= Y) & (Y < by) & (cr > 0)
        dn = (by <= Y) & (Y < ay) & (cr < 0)
        wn += up.astype(np.int64) - dn.astype(np.int64)
        dot = vx * dx + vy * dy
        length = dx * dx + dy * dy
        near_a = (dot <= 0) & ((vx * vx + vy * vy) * den <= num)
        wx, wy = X - bx, Y - by
        near_b = (dot >= length) & ((wx * wx + wy * wy) * den <= num)
        mid = (dot > 0) & (dot < length) & (cr * cr * den <= num * length)
        hit |= near_a | near_b | mid
    return hit | (wn != 0)


def grid_count(P: GridPolygon, w, grid: GridSpec | None = None, *, r_sq: Fraction | None = None) -> int:
    """Number of lattice points of ``P+(w)``, restricted to the grid square if given."""
    if r_sq is None:
        r_sq = as_fraction(w) ** 2
    box = dilation_box(P, r_sq, grid.square if grid else None)
    if box is None:
        return 0
    return int(dilation_mask(P, r_sq, box).sum())


def boundary_lattice_count(P: GridPolygon) -> int:
    return sum(math.gcd(abs(b[0] - a[0]), abs(b[1] - a[1])) for a, b in P.edges())


def classify_lattice_points(P: GridPolygon) -> tuple[int, int]:
    """``(interior, boundary)`` lattice-point counts by direct classification."""
    x0, x1, y0, y1 = P.bbox
    interior = boundary = 0
    for x in range(x0, x1 + 1):
        for y in range(y0, y1 + 1):
            q = (x, y)
            if on_boundary(P, q):
                boundary += 1
            elif contains(P, q):
                interior += 1
    return interior, boundary


def convex_dilation_area(P: GridPolygon, r: float) -> float:
    """Area of ``P+(r)`` for convex ``P``: ``A + r * perimeter + pi r^2``."""
    return float(P.area) + r * P.perimeter + math.pi * r * r


def union_count(polys: Iterable[GridPolygon], radii_sq: Iterable[Fraction],
                grid: GridSpec | None = None) -> int:
    """Lattice points in the union of the dilations, by direct counting."""
    return _combined_count(list(polys), list(radii_sq), grid, np.logical_or)


def intersection_count(polys: Iterable[GridPolygon], radii_sq: Iterable[Fraction],
                       grid: GridSpec | None = None) -> int:
    """Lattice points in the intersection of the dilations, by direct counting."""
    return _combined_count(list(polys), list(radii_sq), grid, np.logical_and)


def _combined_count(polys, radii_sq, grid, combine) -> int:
    boxes = [dilation_box(P, r, grid.square if grid else None) for P, r in zip(polys, radii_sq)]
    if any(b is None for b in boxes):
        if combine is np.logical_and:
            return 0
        polys, radii_sq, boxes = zip(*[(P, r, b) for P, r, b in zip(polys, radii_sq, boxes) if b])
    cover = GridRect(min(b.i1 for b in boxes), max(b.i2 for b in boxes),
                     min(b.j1 for b in boxes), max(b.j2 for b in boxes))
    total = None
    for P, r, b in zip(polys, radii_sq, boxes):
        mask = np.zeros((cover.width + 1, cover.height + 1), dtype=bool)
        mask[b.i1 - cover.i1:b.i2 - cover.i1 + 1, b.j1 - cover.j1:b.j2 - cover.j1 + 1] = dilation_mask(P, r, b)
        total = mask if total is None else combine(total, mask)
    return int(total.sum())
