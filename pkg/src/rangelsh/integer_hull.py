"""Lattice points below a rational line segment.

A line ``y = (a*x + b) / p`` over ``x in [x_lo, x_hi]`` has vertical gap
``((a*x + b) mod p) / p`` above the lattice point ``(x, floor((a*x+b)/p))``.
Minimising a linear hash over an interval therefore amounts to finding the
lattice point closest below the line, which always sits on the upper integer
convex hull.

The hull is walked with a Stern-Brocot descent on two direction vectors
``U`` (steeper than the line) and ``D`` (not steeper).  Both are kept as
``(dx, dy, e)`` with ``e = a*dx - p*dy`` the change in residue, and each
batch of mediant additions is one continued-fraction step, so a walk costs
``O(log span)`` iterations.

Enumerating every point within a residue band uses the three-gap structure
of a rotation: consecutive band members differ by one of ``d_up``,
``d_dn`` or ``d_up + d_dn``, so after an ``O(log p)`` setup each further
point costs ``O(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError


@dataclass(frozen=True)
class PolyHashLine:
    """The segment ``{(x, (a*x + b)/p) : x_lo <= x <= x_hi}``.

    ``denom`` is normally a field prime but any positive integer works.
    The intercept is stored exactly and may exceed ``denom``.
    """

    num_slope: int
    num_intercept: int
    denom: int
    x_lo: int
    x_hi: int

    def __post_init__(self):
        if self.denom < 1:
            raise DomainError(f"denominator must be positive, got {self.denom}")
        if self.num_slope < 0:
            raise DomainError(f"slope numerator must be >= 0, got {self.num_slope}")
        if not 0 <= self.x_lo <= self.x_hi:
            raise DomainError(f"need 0 <= x_lo <= x_hi, got [{self.x_lo}, {self.x_hi}]")

    def residue(self, x: int) -> int:
        return (self.num_slope * x + self.num_intercept) % self.denom

    def floor_at(self, x: int) -> int:
        return (self.num_slope * x + self.num_intercept) // self.denom


@dataclass
class StepCounter:
    """Mutable tally of hull-walk iterations (descent batches plus moves)."""

    steps: int = 0


@dataclass(frozen=True)
class _Local:
    # Line shifted so that x_lo -> t = 0, reduced to 0 <= a, c < p.
    a: int
    c: int
    p: int
    n: int
    x0: int
    y0: int
    shear: int

    def to_global(self, t: int, y: int) -> tuple[int, int]:
        return self.x0 + t, self.y0 + self.shear * t + y


def _localize(line: PolyHashLine) -> _Local:
    p = line.denom
    full = line.num_slope * line.x_lo + line.num_intercept
    return _Local(
        a=line.num_slope % p,
        c=full % p,
        p=p,
        n=line.x_hi - line.x_lo,
        x0=line.x_lo,
        y0=full // p,
        shear=line.num_slope // p,
    )


def _left_chain(a: int, c: int, p: int, n: int, counter: StepCounter | None):
    """Left chain of the upper hull of ``{(t, y): y <= (a*t + c)/p, 0<=t<=n}``.

    Requires ``0 < a < p`` and ``0 <= c < p``.  Returns local vertices
    ``(t, y, residue)`` from ``t = 0`` to the leftmost minimum-residue point.
    """
    t, y, r = 0, 0, c
    verts = [(t, y, r)]
    ux, uy, eu = 0, 1, -p
    dx, dy, ed = 1, 0, a
    steps = 0
    while r > 0 and t < n:
        m = n - t
        while -eu > r and ux <= m and ed > 0:
            steps += 1
            t_max = (-eu - 1) // ed
            t_need = (-eu - r + ed - 1) // ed
            if t_need <= t_max:
                ux += t_need * dx
                uy += t_need * dy
                eu += t_need * ed
                break
            if t_max:
                ux += t_max * dx
                uy += t_max * dy
                eu += t_max * ed
            s = ed // -eu
            dx += s * ux
            dy += s * uy
            ed += s * eu
        if -eu > r or ux > m:
            break
        k = min(r // -eu, m // ux)
        t += k * ux
        y += k * uy
        r += k * eu
        steps += 1
        verts.append((t, y, r))
    if counter is not None:
        counter.steps += steps
    return verts


def _closest_local(loc: _Local, counter: StepCounter | None) -> tuple[int, int]:
    if loc.a == 0 or loc.n == 0:
        return 0, loc.c
    t, _, r = _left_chain(loc.a, loc.c, loc.p, loc.n, counter)[-1]
    return t, r


def closest_below(line: PolyHashLine, counter: StepCounter | None = None) -> tuple[int, int]:
    """Lattice point closest below the line, as ``(x, residue)``.

    ``x`` minimises ``(a*x + b) mod p`` over ``[x_lo, x_hi]``; among ties the
    smallest ``x`` is returned.  Runs in ``O(log(x_hi - x_lo))`` steps.
    """
    loc = _localize(line)
    t, r = _closest_local(loc, counter)
    return loc.x0 + t, r


def upper_hull(line: PolyHashLine, counter: StepCounter | None = None) -> list[tuple[int, int]]:
    """Vertices of the upper integer convex hull, left to right.

    Returned points are the strict hull vertices together with every hull
    point lying exactly on the line (zero residue).  For prime ``p`` and a
    span below ``p`` there is at most one such point, and it is a vertex
    anyway.  A horizontal line (``a = 0 mod p``) yields its two endpoints.
    """
    loc = _localize(line)
    a, c, p, n = loc.a, loc.c, loc.p, loc.n
    if n == 0:
        return [loc.to_global(0, 0)]
    if a == 0:
        return [loc.to_global(0, 0), loc.to_global(n, 0)]

    left = [(t, y) for t, y, _ in _left_chain(a, c, p, n, counter)]
    r_min = (a * left[-1][0] + c) % p

    # Mirror t -> n - t and shear by +t: the right chain becomes a left chain.
    full = a * n + c
    y_base = full // p
    mirrored = _left_chain(p - a, full % p, p, n, counter)
    right = [(n - t, y_base + y - t) for t, y, _ in mirrored]
    right.reverse()

    middle = []
    t_left, t_right = left[-1][0], right[0][0]
    if r_min == 0 and t_right > t_left:
        g = gcd(a, p)
        step_t, step_y = p // g, a // g
        t, y = left[-1]
        t += step_t
        y += step_y
        while t < t_right:
            middle.append((t, y))
            t += step_t
            y += step_y
    if t_right == t_left:
        right = right[1:]
    return [loc.to_global(t, y) for t, y in left + middle + right]


def _return_up(a: int, p: int, band: int) -> tuple[int, int]:
    # Smallest d >= 1 with (a*d) mod p <= band, and that residue.
    ux, uy, eu = 0, 1, -p
    dx, dy, ed = 1, 0, a
    while ed > band:
        s_max = ed // -eu
        s_need = (ed - band - eu - 1) // -eu
        if s_need <= s_max:
            dx += s_need * ux
            ed += s_need * eu
            break
        dx += s_max * ux
        dy += s_max * uy
        ed += s_max * eu
        t_max = (-eu - 1) // ed
        ux += t_max * dx
        uy += t_max * dy
        eu += t_max * ed
    return dx, ed


def _return_down(a: int, p: int, band: int) -> tuple[int, int] | None:
    # Smallest d >= 1 with p - ((a*d) mod p) <= band, and that drop.
    ux, uy, eu = 0, 1, -p
    dx, dy, ed = 1, 0, a
    while -eu > band:
        if ed == 0:
            return None
        t_max = (-eu - 1) // ed
        t_need = (-eu - band + ed - 1) // ed
        if t_need <= t_max:
            ux += t_need * dx
            eu += t_need * ed
            break
        ux += t_max * dx
        uy += t_max * dy
        eu += t_max * ed
        s = ed // -eu
        dx += s * ux
        dy += s * uy
        ed += s * eu
    return ux, -eu


def return_steps(a: int, p: int, band: int) -> tuple[int, int, int | None, int | None]:
    """Gap structure of ``{x : (a*x + c) mod p <= band}``.

    Returns ``(d_up, u_up, d_dn, u_dn)``: advancing ``d_up`` raises the residue
    by ``u_up``, advancing ``d_dn`` lowers it by ``u_dn``.  Requires
    ``0 < a < p`` and ``band < p - 1``.  ``d_dn`` is ``None`` for ``band = 0``.
    """
    d_up, u_up = _return_up(a, p, band)
    down = _return_down(a, p, band)
    if down is None:
        return d_up, u_up, None, None
    return (d_up, u_up) + down


def _walk(t: int, r: int, end: int, forward: bool, band: int, steps,
          out: list, max_points: int | None = None) -> None:
    d_up, u_up, d_dn, u_dn = steps
    while max_points is None or len(out) < max_points:
        # Forward: d_up adds u_up, d_dn subtracts u_dn.  Backward: reversed.
        if forward:
            up_ok = r + u_up <= band
            dn_ok = d_dn is not None and r - u_dn >= 0
        else:
            up_ok = r - u_up >= 0
            dn_ok = d_dn is not None and r + u_dn <= band
        if up_ok and (not dn_ok or d_up <= d_dn):
            d, dr = d_up, u_up
        elif dn_ok:
            d, dr = d_dn, -u_dn
        elif d_dn is not None:
            d, dr = d_up + d_dn, u_up - u_dn
        else:
            return
        if forward:
            t += d
            r += dr
            if t > end:
                return
        else:
            t -= d
            r -= dr
            if t < end:
                return
        out.append((t, r))


class BandOverflow(Exception):
    """Raised when enumeration would exceed a caller-supplied limit."""


def band_residues(line: PolyHashLine, band: int, limit: int | None = None,
                  counter: StepCounter | None = None) -> list[tuple[int, int]]:
    """``(x, residue)`` for every x with residue ``<= band``, sorted by x.

    If ``limit`` is given and more than ``limit`` points qualify, raises
    :class:`BandOverflow` after doing at most ``O(limit)`` work.
    """
    if band < 0:
        return []
    loc = _localize(line)
    a, c, p, n = loc.a, loc.c, loc.p, loc.n
    x0 = loc.x0
    if band >= p - 1 or a == 0:
        if a == 0 and c > band:
            return []
        if limit is not None and n + 1 > limit:
            raise BandOverflow
        return [(x0 + t, (a * t + c) % p) for t in range(n + 1)]
    t_min, r_min = _closest_local(loc, counter)
    if r_min > band:
        return []
    steps = return_steps(a, p, band)
    before: list[tuple[int, int]] = []
    after: list[tuple[int, int]] = []
    if limit is None:
        _walk(t_min, r_min, 0, False, band, steps, before)
        _walk(t_min, r_min, n, True, band, steps, after)
    else:
        _walk(t_min, r_min, 0, False, band, steps, before, limit)
        room = limit - len(before) - 1
        if room < 0:
            raise BandOverflow
        _walk(t_min, r_min, n, True, band, steps, after, room + 1)
        if len(after) > room:
            raise BandOverflow
    before.reverse()
    pts = before + [(t_min, r_min)] + after
    return [(x0 + t, r) for t, r in pts]


def band_points(line: PolyHashLine, band_num: int) -> list[tuple[int, int]]:
    """All ``(x, k)`` with ``(a*x + b) mod p <= band_num``, ``k = floor((a*x+b)/p)``.

    Equivalently the lattice points below the line within vertical distance
    ``band_num / p``.  Sorted by x.
    """
    a, b, p = line.num_slope, line.num_intercept, line.denom
    return [(x, (a * x + b - r) // p) for x, r in band_residues(line, band_num)]
