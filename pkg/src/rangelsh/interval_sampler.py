"""Range-efficient sampling of integer intervals under ``h(x) = (a*x + b) mod p``.

All three samplers reduce to lattice-point queries against the line
``y = (a*x + b)/p``: the min-hash is the point closest below it, the
bottom-k sample repeatedly splits the interval around that point, and the
threshold sample is the set of points within a residue band.

Ordering is ``(hash, x)`` throughout, so two callers sampling overlapping
intervals agree on ties.  Thresholds are exclusive: ``threshold_sample`` with
``tau`` returns exactly the ``x`` with ``h(x) < tau``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator, Literal

from .errors import DomainError
from .field_hash import LinearHash1D
from .integer_hull import BandOverflow, PolyHashLine, StepCounter, band_residues, closest_below

__all__ = [
    "BandOverflow",
    "IntervalSample",
    "SplitStats",
    "bottom_k",
    "iter_by_hash",
    "min_hash_interval",
    "threshold_sample",
]


@dataclass(frozen=True)
class IntervalSample:
    entries: tuple[tuple[int, int], ...]  # (x, hash), sorted by (hash, x)
    mode: Literal["bottom-k", "threshold"]
    parameter: int

    @property
    def keys(self) -> list[int]:
        return [x for x, _ in self.entries]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass
class SplitStats:
    """Heap activity of one :func:`iter_by_hash` traversal."""

    pushes: int = 0
    pops: int = 0


def _check_bounds(h: LinearHash1D, lo: int, hi: int) -> None:
    if not 0 <= lo <= hi < h.p:
        raise DomainError(f"interval [{lo}, {hi}] is not inside [0, {h.p})")


def _line(h: LinearHash1D, lo: int, hi: int) -> PolyHashLine:
    return PolyHashLine(h.a, h.b, h.p, lo, hi)


def min_hash_interval(h: LinearHash1D, lo: int, hi: int,
                      counter: StepCounter | None = None) -> tuple[int, int]:
    """``(x, h(x))`` for the smallest-hash element of ``[lo, hi]``, smallest x on ties."""
    _check_bounds(h, lo, hi)
    return closest_below(_line(h, lo, hi), counter)


def iter_by_hash(h: LinearHash1D, lo: int, hi: int,
                 stats: SplitStats | None = None) -> Iterator[tuple[int, int]]:
    """Yield ``(hash, x)`` for every element of ``[lo, hi]`` in ascending order.

    Each yielded element splits its interval in two, so producing ``k``
    elements costs ``O(k log |I|)``.
    """
    _check_bounds(h, lo, hi)
    x, r = closest_below(_line(h, lo, hi))
    heap = [(r, x, lo, hi)]
    if stats is not None:
        stats.pushes += 1
    while heap:
        r, x, a, b = heapq.heappop(heap)
        if stats is not None:
            stats.pops += 1
        yield r, x
        for s, e in ((a, x - 1), (x + 1, b)):
            if s <= e:
                xs, rs = closest_below(_line(h, s, e))
                heapq.heappush(heap, (rs, xs, s, e))
                if stats is not None:
                    stats.pushes += 1


def bottom_k(h: LinearHash1D, lo: int, hi: int, k: int,
             stats: SplitStats | None = None) -> IntervalSample:
    """The ``k`` elements of ``[lo, hi]`` with the smallest ``(hash, x)``."""
    _check_bounds(h, lo, hi)
    if k < 0:
        raise DomainError(f"k must be non-negative, got {k}")
    entries = []
    if k > 0:
        for r, x in iter_by_hash(h, lo, hi, stats):
            entries.append((x, r))
            if len(entries) == k:
                break
    return IntervalSample(tuple(entries), "bottom-k", k)


def threshold_sample(h: LinearHash1D, lo: int, hi: int, tau: int,
                     limit: int | None = None) -> IntervalSample:
    """Every ``x`` in ``[lo, hi]`` with ``h(x) < tau``.

    With ``limit`` set, raises :class:`BandOverflow` instead of producing more
    than ``limit`` entries.
    """
    _check_bounds(h, lo, hi)
    if not 0 <= tau <= h.p:
        raise DomainError(f"tau must lie in [0, {h.p}], got {tau}")
    found = band_residues(_line(h, lo, hi), tau - 1, limit=limit)
    entries = sorted(found, key=lambda e: (e[1], e[0]))
    return IntervalSample(tuple(entries), "threshold", tau)
