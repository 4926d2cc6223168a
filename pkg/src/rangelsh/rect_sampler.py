"""Consistent sampling of grid rectangles with sampling probability ``1/p``.

The sample of a rectangle is its zero-set under ``h(x, y) = (a*x + b*y + c) mod p``.
Solving for the second coordinate turns the zero condition into
``y - j1 = (q*x + s) mod p`` with ``q = -a/b`` and ``s = -(c + b*j1)/b``,
so the zero-set is the set of lattice points below the line
``(q*x + s)/p`` within vertical distance ``(j2 - j1)/p``.  The shorter side
of the rectangle is always taken as the line variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .errors import DomainError
from .field_hash import LinearHash2D, mod_inverse
from .integer_hull import BandOverflow, PolyHashLine, band_residues

Point = tuple[int, int]


@dataclass(frozen=True)
class GridRect:
    """Closed integer rectangle ``[i1, i2] x [j1, j2]``."""

    i1: int
    i2: int
    j1: int
    j2: int

    def __post_init__(self):
        if not (0 <= self.i1 <= self.i2 and 0 <= self.j1 <= self.j2):
            raise DomainError(f"invalid rectangle {self}")

    @classmethod
    def parse(cls, text: str) -> GridRect:
        try:
            i1, i2, j1, j2 = (int(v) for v in text.split(","))
        except ValueError:
            raise DomainError(f"rectangle must be 'i1,i2,j1,j2', got {text!r}") from None
        return cls(i1, i2, j1, j2)

    @property
    def width(self) -> int:
        return self.i2 - self.i1

    @property
    def height(self) -> int:
        return self.j2 - self.j1

    @property
    def size(self) -> int:
        return (self.width + 1) * (self.height + 1)

    def __contains__(self, q: Point) -> bool:
        return self.i1 <= q[0] <= self.i2 and self.j1 <= q[1] <= self.j2

    def points(self):
        for x in range(self.i1, self.i2 + 1):
            for y in range(self.j1, self.j2 + 1):
                yield x, y


@dataclass(frozen=True)
class RectSample:
    points: tuple[Point, ...]
    hash: LinearHash2D

    def __len__(self) -> int:
        return len(self.points)


def _check_limit(count: int, limit: int | None) -> None:
    if limit is not None and count > limit:
        raise BandOverflow


def _solve(u_coef: int, v_coef: int, c: int, p: int,
           u1: int, u2: int, v1: int, v2: int, limit: int | None = None) -> list[Point]:
    # Zero-set of (u_coef*u + v_coef*v + c) mod p with u as the line variable.
    if v_coef == 0:
        if u_coef == 0:
            if c:
                return []
            _check_limit((u2 - u1 + 1) * (v2 - v1 + 1), limit)
            return [(u, v) for u in range(u1, u2 + 1) for v in range(v1, v2 + 1)]
        u0 = (-c * mod_inverse(u_coef, p)) % p
        first = u1 + (u0 - u1) % p
        cols = range(first, u2 + 1, p)
        _check_limit(len(cols) * (v2 - v1 + 1), limit)
        return [(u, v) for u in cols for v in range(v1, v2 + 1)]
    inv = mod_inverse(v_coef, p)
    q = (-inv * u_coef) % p
    s = (-inv * (c + v_coef * v1)) % p
    height = v2 - v1
    if height < p:
        line = PolyHashLine(q, s, p, u1, u2)
        return [(u, v1 + r) for u, r in band_residues(line, height, limit=limit)]
    # Each column holds at least one zero; the output dominates the scan.
    out = []
    for u in range(u1, u2 + 1):
        r = (q * u + s) % p
        out.extend((u, v1 + y) for y in range(r, height + 1, p))
        _check_limit(len(out), limit)
    return out


def zero_set(h: LinearHash2D, rect: GridRect, limit: int | None = None) -> RectSample:
    """All points of ``rect`` hashing to zero, sorted lexicographically.

    Costs ``O((|output| + 1) log min(width, height))``.  Rectangles larger
    than the field are accepted; the hash is then periodic with period ``p``
    along both axes.  With ``limit`` set, raises :class:`BandOverflow` rather
    than produce more than ``limit`` points.
    """
    p = h.p
    if rect.width <= rect.height:
        pts = _solve(h.a, h.b, h.c, p, rect.i1, rect.i2, rect.j1, rect.j2, limit)
    else:
        pts = [(x, y) for y, x in _solve(h.b, h.a, h.c, p, rect.j1, rect.j2, rect.i1, rect.i2, limit)]
        pts.sort()
    return RectSample(tuple(pts), h)


def estimate_count(predicate: Callable[[int, int], bool], h: LinearHash2D,
                   rect: GridRect) -> int:
    """``p`` times the number of sampled points that satisfy ``predicate``.

    For a set ``S`` inside ``rect`` this is an ``(eps, p/(eps^2 |S|))``
    estimator of ``|S|``.
    """
    return h.p * sum(1 for x, y in zero_set(h, rect).points if predicate(x, y))


def zero_set_scan(h: LinearHash2D, rect: GridRect) -> RectSample:
    """Exhaustive reference implementation of :func:`zero_set`."""
    return RectSample(tuple(q for q in rect.points() if h(*q) == 0), h)
