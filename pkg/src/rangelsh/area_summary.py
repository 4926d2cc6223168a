"""Multi-rate consistent-sample summary for union and intersection queries.

For every polygon ``P_i`` the summary stores, at each level ``l``, the
lattice points of ``P_i+(w_i/2)`` (``w_i = phi * d(P_i)``) on which the
level-``l`` hash ``(a*x + b*y + c) mod p[l]`` vanishes.  ``p[l]`` is a prime
in ``[2^(l-1), 2^l]``, so consecutive levels roughly halve the sampling
rate.  Queries start at a coarse level and move to finer levels until the
target region holds at least ``1/(delta*eps^2)`` distinct samples.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import BinaryIO, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .field_hash import LinearHash2D, derive_seed, prime_in_dyadic
from .polygon_geom import (GridPolygon, GridSpec, as_fraction, check_fuzzy_width,
                           dilation_box, dilation_mask, fuzzy_radius_sq,
                           intersection_count, union_count, within_sq)
from .rect_sampler import zero_set, zero_set_scan

Point = tuple[int, int]

MAGIC = b"RLSHSUM\x00"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<8sHHIQQQddHHI")
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_VERTEX = struct.Struct("<qq")
_POINT = struct.Struct("<II")


def level_hash(seed: int, level: int) -> LinearHash2D:
    return LinearHash2D.from_seed(derive_seed(seed, level), prime_in_dyadic(level))


def sample_threshold(eps: float, delta: float) -> int:
    """Distinct samples needed before a query may stop: ``ceil(1/(delta*eps^2))``."""
    return math.ceil(1 / (delta * eps * eps) - 1e-9)


def _start_level(target: float) -> int:
    # j with 2^(j-1) <= target <= 2^j.
    if target <= 1:
        return 0
    return math.ceil(math.log2(target))


@dataclass(frozen=True)
class QueryResult:
    estimate: int
    level: int  # 0 when the exact fallback was used
    prime: int  # 1 when the exact fallback was used
    samples: int  # distinct samples inside the query region at the final level
    cost: int  # sample inspections summed over all levels tried
    iterations: int

    def __str__(self) -> str:
        return f"estimate={self.estimate} level={self.level} prime={self.prime} samples={self.samples}"


@dataclass(frozen=True)
class AreaSummary:
    phi: Fraction
    eps: float
    delta: float
    seed: int
    polygons: tuple[GridPolygon, ...]
    counts: tuple[int, ...]
    level_min: int
    level_max: int
    samples: dict = field(repr=False)  # (polygon id, level) -> frozenset of points
    grid: GridSpec | None = None

    @property
    def levels(self) -> range:
        return range(self.level_min, self.level_max + 1) if self.polygons else range(0)

    @property
    def primes(self) -> dict[int, int]:
        return {lvl: prime_in_dyadic(lvl) for lvl in self.levels}

    @property
    def size(self) -> int:
        return sum(len(s) for s in self.samples.values())

    def radius_sq(self, i: int) -> Fraction:
        return fuzzy_radius_sq(self.polygons[i], self.phi)

    def _ids(self, ids: Sequence[int]) -> list[int]:
        if not ids:
            raise DomainError("query needs at least one polygon id")
        for i in ids:
            if not 0 <= i < len(self.polygons):
                raise DomainError(f"unknown polygon id {i}")
        return sorted(set(ids))


def _level_range(counts: Sequence[int], phi: Fraction, eps: float, delta: float) -> tuple[int, int]:
    de2 = delta * eps * eps
    f_min = float(phi) ** 2 / 2 * min(counts)
    f_max = len(counts) * max(counts)
    lo = max(2, math.floor(math.log2(max(de2 * f_min, 1.0))))
    hi = max(2, _start_level(de2 * f_max / 4))
    # Levels whose rate leaves the largest region with no expected sample are omitted.
    hi = min(hi, max(2, max(counts).bit_length()), 62)
    return lo, max(lo, hi)


def build_summary(polygons: Sequence[GridPolygon], phi, eps: float, delta: float, seed: int,
                  grid: GridSpec | None = None, oracle: bool = False) -> AreaSummary:
    """Sample every polygon's dilation at every level of the summary.

    ``oracle`` replaces the range-efficient zero-set with an exhaustive scan.
    """
    if not 0 < eps < 1 or not 0 < delta < 1:
        raise DomainError(f"eps and delta must lie in (0, 1), got {eps}, {delta}")
    phi = as_fraction(phi)
    if not 0 < phi <= 1:
        raise DomainError(f"phi must lie in (0, 1], got {phi}")
    for i, P in enumerate(polygons):
        try:
            check_fuzzy_width(P, phi)
        except PreconditionError as exc:
            raise PreconditionError(f"polygon {i}: {exc}") from None
    polygons = tuple(polygons)
    if not polygons:
        return AreaSummary(phi, eps, delta, seed, (), (), 0, 0, {}, grid)

    clip = grid.square if grid else None
    regions = []
    for P in polygons:
        r_sq = fuzzy_radius_sq(P, phi)
        box = dilation_box(P, r_sq, clip)
        if box is None:
            raise DomainError("polygon dilation lies outside the grid")
        regions.append((box, dilation_mask(P, r_sq, box)))
    counts = tuple(int(mask.sum()) for _, mask in regions)
    lo, hi = _level_range(counts, phi, eps, delta)

    samples = {}
    for lvl in range(lo, hi + 1):
        h = level_hash(seed, lvl)
        for i, (box, mask) in enumerate(regions):
            pts = (zero_set_scan if oracle else zero_set)(h, box).points
            samples[i, lvl] = frozenset(q for q in pts if mask[q[0] - box.i1, q[1] - box.j1])
    return AreaSummary(phi, eps, delta, seed, polygons, counts, lo, hi, samples, grid)


def _clamp_level(target: float, S: AreaSummary) -> int:
    return min(max(_start_level(target), S.level_min), S.level_max)


def query_union(S: AreaSummary, ids: Sequence[int]) -> QueryResult:
    """Estimate ``|U Q+(w/2)|`` from the stored samples."""
    ids = S._ids(ids)
    de2 = S.delta * S.eps ** 2
    need = sample_threshold(S.eps, S.delta)
    j = _clamp_level(de2 * len(ids) * max(S.counts[i] for i in ids) / 4, S)
    cost = iterations = 0
    while True:
        iterations += 1
        sets = [S.samples[i, j] for i in ids]
        cost += sum(len(s) for s in sets)
        found = len(frozenset().union(*sets))
        if found >= need:
            p = prime_in_dyadic(j)
            return QueryResult(found * p, j, p, found, cost, iterations)
        if j <= S.level_min:
            break
        j -= 1
    exact = union_count([S.polygons[i] for i in ids], [S.radius_sq(i) for i in ids], S.grid)
    return QueryResult(exact, 0, 1, exact, cost, iterations)


def query_intersection(S: AreaSummary, ids: Sequence[int]) -> QueryResult:
    """Estimate ``|∩ Q+(w/2)|`` by filtering the smallest region's samples.

    The error guarantee assumes the query's eroded polygons share a point and
    ``phi * d_min > sqrt(8)``; that is left to the caller.
    """
    ids = S._ids(ids)
    de2 = S.delta * S.eps ** 2
    need = sample_threshold(S.eps, S.delta)
    smallest = min(ids, key=lambda i: (S.counts[i], i))
    others = [i for i in ids if i != smallest]
    j = _clamp_level(de2 * S.counts[smallest] / 4, S)
    cost = iterations = 0
    while True:
        iterations += 1
        base = S.samples[smallest, j]
        cost += len(ids) * len(base)
        rest = [S.samples[i, j] for i in others]
        found = sum(1 for q in base if all(q in s for s in rest))
        if found >= need:
            p = prime_in_dyadic(j)
            return QueryResult(found * p, j, p, found, cost, iterations)
        if j <= S.level_min:
            break
        j -= 1
    exact = intersection_count([S.polygons[i] for i in ids], [S.radius_sq(i) for i in ids], S.grid)
    return QueryResult(exact, 0, 1, exact, cost, iterations)


def validate_summary(S: AreaSummary) -> None:
    """Re-check that every stored sample hashes to zero and lies in its region."""
    for lvl in S.levels:
        h = level_hash(S.seed, lvl)
        for i, P in enumerate(S.polygons):
            r_sq = S.radius_sq(i)
            for q in S.samples[i, lvl]:
                if h(*q) != 0 or not within_sq(P, q, r_sq):
                    raise AssertionError(f"invalid sample {q} for polygon {i} at level {lvl}")
                if S.grid is not None and q not in S.grid.square:
                    raise AssertionError(f"sample {q} outside the grid")


# Persistence


def save_summary(S: AreaSummary, out: BinaryIO) -> None:
    levels = S.levels
    out.write(_HEADER.pack(
        MAGIC, FORMAT_VERSION, 1 if S.grid else 0, S.grid.resolution if S.grid else 0,
        S.seed, S.phi.numerator, S.phi.denominator, S.eps, S.delta,
        levels.start if levels else 0, len(levels), len(S.polygons)))
    for lvl in levels:
        out.write(_U64.pack(prime_in_dyadic(lvl)))
    for i, P in enumerate(S.polygons):
        out.write(_U32.pack(len(P.vertices)))
        for x, y in P.vertices:
            out.write(_VERTEX.pack(x, y))
        out.write(_U64.pack(S.counts[i]))
        for lvl in levels:
            pts = sorted(S.samples[i, lvl])
            out.write(_U32.pack(len(pts)))
            if pts:
                out.write(np.asarray(pts, dtype="<u4").tobytes())


def _read(buf: BinaryIO, n: int) -> bytes:
    data = buf.read(n)
    if len(data) != n:
        raise DomainError("summary file is truncated")
    return data


def load_summary(buf: BinaryIO) -> AreaSummary:
    fields = _HEADER.unpack(_read(buf, _HEADER.size))
    magic, version, flags, res, seed, phi_num, phi_den, eps, delta, lvl_lo, n_lvl, n_poly = fields
    if magic != MAGIC:
        raise DomainError("not a summary file")
    if version != FORMAT_VERSION:
        raise DomainError(f"unsupported summary format version {version}")
    levels = range(lvl_lo, lvl_lo + n_lvl)
    for lvl in levels:
        (p,) = _U64.unpack(_read(buf, 8))
        if p != prime_in_dyadic(lvl):
            raise DomainError(f"prime table mismatch at level {lvl}")
    polygons, counts, samples = [], [], {}
    for i in range(n_poly):
        (m,) = _U32.unpack(_read(buf, 4))
        verts = tuple(_VERTEX.unpack(_read(buf, _VERTEX.size)) for _ in range(m))
        polygons.append(GridPolygon(verts))
        counts.append(_U64.unpack(_read(buf, 8))[0])
        for lvl in levels:
            (s,) = _U32.unpack(_read(buf, 4))
            raw = np.frombuffer(_read(buf, s * _POINT.size), dtype="<u4").reshape(s, 2)
            samples[i, lvl] = frozenset((int(x), int(y)) for x, y in raw)
    if buf.read(1):
        raise DomainError("trailing bytes after summary")
    grid = GridSpec(res) if flags & 1 else None
    lvl_hi = levels[-1] if levels else 0
    return AreaSummary(Fraction(phi_num, phi_den), eps, delta, seed, tuple(polygons),
                       tuple(counts), lvl_lo, lvl_hi, samples, grid)
