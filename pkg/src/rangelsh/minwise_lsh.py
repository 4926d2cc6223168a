"""Locality-sensitive hashing from range-efficient consistent samples.

A set ``S`` inside a universe ``I`` is first subsampled with a 2-independent
hash at rate ``1/p*``; the surviving keys are then fed to an epsilon-minwise
function ``f`` and the argmin is the hash value:

    H*(S) = argmin_{x in sample(S)} f(x)

Two sets collide with probability close to their Jaccard similarity as long
as the sample is large enough.  Histograms are hashed through their column
sets ``{(i, j) : j <= x_i}`` with a threshold sampler on a large field, and
polygons through a zero-set sample of their dilation.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, InfeasibleError, PreconditionError
from .field_hash import LinearHash2D, PolyHash, check_prime, derive_seed, prev_prime
from .integer_hull import BandOverflow
from .interval_sampler import threshold_sample
from .polygon_geom import (GridPolygon, GridSpec, check_fuzzy_width, dilation_box,
                           fuzzy_radius_sq, within_sq)
from .rect_sampler import GridRect, zero_set, zero_set_scan

Point = tuple[int, int]

HISTOGRAM_FIELD = (1 << 31) - 1
DEFAULT_UNIVERSE = 1 << 48
FALLBACK = -1
FEASIBILITY_CONSTANT = 12


def feasible(universe_size: int, sampling_prime: int, eps: float, alpha: float) -> bool:
    """Whether ``|I| > 12 p* / (eps^3 alpha)``, the sizing rule for the collision bound."""
    return universe_size * eps ** 3 * alpha > FEASIBILITY_CONSTANT * sampling_prime


def check_feasible(universe_size: int, sampling_prime: int, eps: float, alpha: float) -> None:
    if not feasible(universe_size, sampling_prime, eps, alpha):
        need = FEASIBILITY_CONSTANT * sampling_prime / (eps ** 3 * alpha)
        raise InfeasibleError(
            f"universe of {universe_size} points is too small for p*={sampling_prime}: "
            f"eps={eps}, alpha={alpha} need more than {need:.0f}")


def theory_sampling_prime(universe_size: int, eps: float, alpha: float) -> int:
    """Largest prime ``p*`` that still satisfies :func:`feasible`."""
    target = universe_size * eps ** 3 * alpha / FEASIBILITY_CONSTANT
    bound = math.ceil(target) - 1
    if bound < 2:
        raise InfeasibleError(
            f"no prime p* satisfies the sizing rule for |I|={universe_size}, eps={eps}, alpha={alpha}")
    return prev_prime(bound)


@dataclass(frozen=True)
class LshFunction:
    """One draw ``H*`` from the LSH family, fully determined by ``seed``.

    ``sampling_prime`` is ``p*``.  The value 1 disables subsampling for the
    histogram sampler (every column point is kept); grid samplers need a
    real prime.
    """

    seed: int
    eps: float
    sampling_prime: int
    minwise: PolyHash
    column_hash: LinearHash2D
    grid_hash: LinearHash2D | None = None
    expected_weight: int | None = None
    alpha: float | None = None
    fallback: int = FALLBACK
    work_cap_factor: int = 64

    @classmethod
    def from_seed(cls, seed: int, eps: float, sampling_prime: int, *,
                  expected_weight: int | None = None, alpha: float | None = None,
                  universe: int = DEFAULT_UNIVERSE, work_cap_factor: int = 64) -> LshFunction:
        if not 0 < eps < 1:
            raise DomainError(f"eps must lie in (0, 1), got {eps}")
        if sampling_prime != 1:
            check_prime(sampling_prime)
        if alpha is not None and not 0 < alpha <= 1:
            raise DomainError(f"alpha must lie in (0, 1], got {alpha}")
        f = PolyHash.for_minwise(eps / 4, universe, random.Random(derive_seed(seed, 0)))
        column = LinearHash2D.from_seed(derive_seed(seed, 2), HISTOGRAM_FIELD)
        grid = None
        if sampling_prime > 1:
            grid = LinearHash2D.from_seed(derive_seed(seed, 1), sampling_prime)
        return cls(seed, eps, sampling_prime, f, column, grid, expected_weight, alpha,
                   FALLBACK, work_cap_factor)

    @property
    def threshold(self) -> int:
        """Histogram threshold ``tau = round(p / p*)`` on the column field."""
        return min(HISTOGRAM_FIELD, max(1, round(HISTOGRAM_FIELD / self.sampling_prime)))

    def require_grid_hash(self) -> LinearHash2D:
        if self.grid_hash is None:
            raise PreconditionError("grid sampling needs a prime sampling_prime > 1")
        return self.grid_hash


def lsh_from_sample(keys: Iterable[int], f: PolyHash, fallback: int = FALLBACK) -> int:
    """The key minimising ``f``, smallest key on ties; ``fallback`` if empty."""
    best_key = fallback
    best = None
    for k in keys:
        v = f(k)
        if best is None or v < best or (v == best and k < best_key):
            best, best_key = v, k
    return best_key


# Histograms


@dataclass(frozen=True)
class Histogram:
    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if any(x < 0 for x in w):
            raise DomainError("histogram weights must be non-negative")
        if any(x >= HISTOGRAM_FIELD for x in w):
            raise DomainError(f"histogram weights must be below {HISTOGRAM_FIELD}")
        if sum(w) == 0:
            raise DomainError("histogram has zero total weight")

    @classmethod
    def from_json(cls, text: str) -> Histogram:
        try:
            weights = json.loads(text)["weights"]
            return cls(tuple(int(x) for x in weights))
        except (ValueError, KeyError, TypeError) as exc:
            raise DomainError(f"bad histogram JSON: {exc}") from None

    @property
    def total(self) -> int:
        return sum(self.weights)

    def __len__(self) -> int:
        return len(self.weights)


def weighted_jaccard(x: Histogram, y: Histogram) -> float:
    n = max(len(x), len(y))
    xs = x.weights + (0,) * (n - len(x))
    ys = y.weights + (0,) * (n - len(y))
    return sum(map(min, xs, ys)) / sum(map(max, xs, ys))


def histogram_points(x: Histogram) -> list[Point]:
    """The point set ``{(i, j) : 1 <= i <= n, 1 <= j <= x_i}``."""
    return [(i, j) for i, w in enumerate(x.weights, 1) for j in range(1, w + 1)]


def histogram_key(i: int, j: int) -> int:
    return i * HISTOGRAM_FIELD + j


def check_histogram(x: Histogram, F: LshFunction) -> None:
    if F.expected_weight is not None and x.total != F.expected_weight:
        raise DomainError(f"histogram weight {x.total} differs from the configured {F.expected_weight}")
    if histogram_key(len(x), 0) >= DEFAULT_UNIVERSE:
        raise DomainError(f"too many histogram columns ({len(x)})")


def histogram_work_cap(x: Histogram, F: LshFunction) -> int:
    expected = x.total * F.threshold / HISTOGRAM_FIELD
    return math.ceil(F.work_cap_factor * max(expected, 1.0))


def histogram_sample(x: Histogram, F: LshFunction, limit: int | None = None) -> list[Point]:
    """Consistent sample ``{(i, j) in P_x : h(i, j) < tau}``, sorted.

    Each column is a one-dimensional threshold query in ``j``.  Raises
    :class:`BandOverflow` if more than ``limit`` points would be produced.
    """
    tau = F.threshold
    out: list[Point] = []
    for i, w in enumerate(x.weights, 1):
        if w == 0:
            continue
        room = None if limit is None else limit - len(out)
        col = threshold_sample(F.column_hash.column(i), 1, w, tau, limit=room)
        out.extend((i, j) for j in sorted(col.keys))
    return out


def histogram_sample_scan(x: Histogram, F: LshFunction) -> list[Point]:
    """Exhaustive reference implementation of :func:`histogram_sample`."""
    tau = F.threshold
    h = F.column_hash
    return [(i, j) for i, j in histogram_points(x) if h(i, j) < tau]


def histogram_hash(x: Histogram, F: LshFunction) -> int:
    """``H*`` of the histogram's point set; returns ``F.fallback`` past the work cap."""
    check_histogram(x, F)
    try:
        sample = histogram_sample(x, F, limit=histogram_work_cap(x, F))
    except BandOverflow:
        return F.fallback
    return lsh_from_sample((histogram_key(i, j) for i, j in sample), F.minwise, F.fallback)


def histogram_hash_scan(x: Histogram, F: LshFunction) -> int:
    """Reference :func:`histogram_hash` built on :func:`histogram_sample_scan`."""
    check_histogram(x, F)
    sample = histogram_sample_scan(x, F)
    if len(sample) > histogram_work_cap(x, F):
        return F.fallback
    return lsh_from_sample((histogram_key(i, j) for i, j in sample), F.minwise, F.fallback)


# Grid point sets and polygons


def grid_key(q: Point, F: LshFunction) -> int:
    return q[0] * F.sampling_prime + q[1]


def check_grid(F: LshFunction, grid: GridSpec) -> LinearHash2D:
    h = F.require_grid_hash()
    if grid.resolution > F.sampling_prime:
        raise PreconditionError(
            f"grid resolution {grid.resolution} exceeds the sampling prime {F.sampling_prime}")
    if F.alpha is not None:
        check_feasible(grid.size, F.sampling_prime, F.eps, F.alpha)
    return h


def grid_sample(F: LshFunction, rect: GridRect, limit: int | None = None) -> tuple[Point, ...]:
    """Zero-set of the grid hash over ``rect``: each point kept with probability ``1/p*``."""
    return zero_set(F.require_grid_hash(), rect, limit).points


def point_set_hashes(sets: Sequence, F: LshFunction, grid: GridSpec) -> list[int]:
    """``H*`` for several point sets in the grid square, sharing one sample.

    ``sets`` may be any containers supporting ``in`` on ``(x, y)`` tuples.
    """
    check_grid(F, grid)
    sample = grid_sample(F, grid.square)
    f = F.minwise
    values = {q: f(grid_key(q, F)) for q in sample}
    out = []
    for S in sets:
        best = None
        for q in sample:
            if q in S:
                cand = (values[q], grid_key(q, F))
                if best is None or cand < best:
                    best = cand
        out.append(F.fallback if best is None else best[1])
    return out


def point_set_hash(S, F: LshFunction, grid: GridSpec) -> int:
    return point_set_hashes([S], F, grid)[0]


def _polygon_region(P: GridPolygon, F: LshFunction, grid: GridSpec, phi):
    check_grid(F, grid)
    square = grid.square
    x0, x1, y0, y1 = P.bbox
    if x0 < 0 or y0 < 0 or x1 > square.i2 or y1 > square.j2:
        raise DomainError(f"polygon is not inside the grid [0, {grid.resolution - 1}]^2")
    check_fuzzy_width(P, phi)
    r_sq = fuzzy_radius_sq(P, phi)
    box = dilation_box(P, r_sq, square)
    limit = math.ceil(F.work_cap_factor * max(box.size / F.sampling_prime, 1.0))
    return r_sq, box, limit


def polygon_sample(P: GridPolygon, F: LshFunction, grid: GridSpec, phi,
                   limit: int | None = None) -> list[Point]:
    """Grid-hash zero-set restricted to ``P+(w/2) ∩ I`` with ``w = phi * d(P)``."""
    r_sq, box, _ = _polygon_region(P, F, grid, phi)
    return [q for q in grid_sample(F, box, limit) if within_sq(P, q, r_sq)]


def polygon_hash(P: GridPolygon, F: LshFunction, grid: GridSpec, phi) -> int:
    """``H*`` of the lattice points of ``P+(w/2)`` inside the grid square.

    The bounding-box zero-set is capped at ``work_cap_factor`` times its
    expected size; past the cap the fallback value is returned.
    """
    _, _, limit = _polygon_region(P, F, grid, phi)
    try:
        sample = polygon_sample(P, F, grid, phi, limit)
    except BandOverflow:
        return F.fallback
    return lsh_from_sample((grid_key(q, F) for q in sample), F.minwise, F.fallback)


def polygon_hash_scan(P: GridPolygon, F: LshFunction, grid: GridSpec, phi) -> int:
    """Reference :func:`polygon_hash` built on an exhaustive bounding-box scan."""
    r_sq, box, limit = _polygon_region(P, F, grid, phi)
    raw = zero_set_scan(F.grid_hash, box).points
    if len(raw) > limit:
        return F.fallback
    keys = [grid_key(q, F) for q in raw if within_sq(P, q, r_sq)]
    return lsh_from_sample(keys, F.minwise, F.fallback)
