from __future__ import annotations

import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from rangelsh.errors import DomainError
from rangelsh.integer_hull import (BandOverflow, PolyHashLine, StepCounter, band_points,
                                   band_residues, closest_below, return_steps, upper_hull)

from helpers import below_polyline, scan_min_hash, upper_chain


def test_hull_examples():
    assert upper_hull(PolyHashLine(1, 0, 2, 0, 4)) == [(0, 0), (2, 1), (4, 2)]
    assert upper_hull(PolyHashLine(0, 5, 13, 2, 9)) == [(2, 0), (9, 0)]
    assert (27, 10) in upper_hull(PolyHashLine(37, 11, 101, 10, 90))


def test_closest_below_examples():
    assert closest_below(PolyHashLine(0, 5, 13, 2, 9)) == (2, 5)
    assert closest_below(PolyHashLine(1, 0, 13, 3, 7)) == (3, 3)
    assert closest_below(PolyHashLine(37, 11, 101, 10, 90)) == (27, 0)


def test_band_points_examples():
    assert band_points(PolyHashLine(1, 0, 7, 0, 6), 0) == [(0, 0)]
    assert band_points(PolyHashLine(0, 3, 7, 1, 4), 2) == []
    expected = [(x, (6 * x + 4) // 11) for x in range(2, 10) if (6 * x + 4) % 11 <= 1]
    assert band_points(PolyHashLine(6, 4, 11, 2, 9), 1) == expected


def test_degenerate_single_point():
    line = PolyHashLine(37, 11, 101, 42, 42)
    assert upper_hull(line) == [(42, (37 * 42 + 11) // 101)]
    assert closest_below(line) == (42, (37 * 42 + 11) % 101)


def test_rejects_bad_lines():
    with pytest.raises(DomainError):
        PolyHashLine(1, 0, 0, 0, 3)
    with pytest.raises(DomainError):
        PolyHashLine(1, 0, 7, 4, 3)
    with pytest.raises(DomainError):
        PolyHashLine(-1, 0, 7, 0, 3)


def _random_line(rng: random.Random, big: bool = False) -> PolyHashLine:
    p = rng.randrange(2, 10 ** 4)
    lo = rng.randrange(0, 3 * p)
    span = rng.randrange(0, 2 * p if big else p)
    return PolyHashLine(rng.randrange(0, 2 * p), rng.randrange(0, 5 * p), p, lo, lo + span)


def test_closest_below_oracle():
    rng = random.Random(1)
    for _ in range(3000):
        line = _random_line(rng, big=rng.random() < 0.2)
        assert closest_below(line) == scan_min_hash(line.num_slope, line.num_intercept, line.denom,
                                                    line.x_lo, line.x_hi)


def test_band_residues_oracle():
    rng = random.Random(2)
    for _ in range(3000):
        line = _random_line(rng, big=rng.random() < 0.2)
        band = rng.randrange(0, line.denom)
        expected = [(x, line.residue(x)) for x in range(line.x_lo, line.x_hi + 1)
                    if line.residue(x) <= band]
        assert band_residues(line, band) == expected


def test_band_limit():
    line = PolyHashLine(37, 11, 101, 0, 100)
    full = band_residues(line, 20)
    assert band_residues(line, 20, limit=len(full)) == full
    with pytest.raises(BandOverflow):
        band_residues(line, 20, limit=len(full) - 1)


def test_return_steps_gap_structure():
    rng = random.Random(3)
    for _ in range(500):
        p = rng.randrange(5, 2000)
        a = rng.randrange(1, p)
        band = rng.randrange(0, p - 1)
        d_up, u_up, d_dn, u_dn = return_steps(a, p, band)
        ups = [d for d in range(1, 4 * p) if (a * d) % p <= band]
        assert d_up == ups[0] and u_up == (a * d_up) % p
        downs = [d for d in range(1, 4 * p) if (a * d) % p and p - (a * d) % p <= band]
        if band == 0 or not downs:
            assert d_dn is None or d_dn == downs[0]
        else:
            assert d_dn == downs[0] and u_dn == p - (a * d_dn) % p


def _check_hull(line: PolyHashLine) -> list[tuple[int, int]]:
    hull = upper_hull(line)
    pts = [(x, line.floor_at(x)) for x in range(line.x_lo, line.x_hi + 1)]
    xs = [x for x, _ in hull]
    assert xs == sorted(set(xs)) and xs[0] == line.x_lo and xs[-1] == line.x_hi
    assert all(y == line.floor_at(x) for x, y in hull)
    assert all(below_polyline(hull, q) for q in pts)
    assert set(upper_chain(pts)) <= set(hull)
    return hull


def test_upper_hull_oracle():
    rng = random.Random(4)
    for _ in range(1500):
        p = rng.randrange(2, 400)
        lo = rng.randrange(0, p)
        line = PolyHashLine(rng.randrange(0, p), rng.randrange(0, 3 * p), p, lo,
                            lo + rng.randrange(0, p))
        _check_hull(line)


def test_hull_size_bound():
    rng = random.Random(5)
    for _ in range(300):
        p = rng.randrange(1000, 10 ** 9)
        span = rng.randrange(1, min(p, 10 ** 5))
        line = PolyHashLine(rng.randrange(p), rng.randrange(p), p, 0, span)
        assert len(upper_hull(line)) <= 4 * (math.log2(span) + 2)


def test_constant_line_tie_break():
    for p in (7, 13, 101):
        for b in range(p):
            assert closest_below(PolyHashLine(0, b, p, 3, p - 1))[0] == 3


def test_step_counter_logarithmic():
    counter = StepCounter()
    p = (1 << 61) - 1
    closest_below(PolyHashLine(123456789123, 987654321, p, 0, 1 << 40), counter)
    assert 0 < counter.steps <= 4 * 42


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 500), st.data())
def test_closest_point_is_minimum_residue_property(p, data):
    a = data.draw(st.integers(0, p - 1))
    b = data.draw(st.integers(0, 10 * p))
    lo = data.draw(st.integers(0, p))
    hi = data.draw(st.integers(lo, lo + p))
    line = PolyHashLine(a, b, p, lo, hi)
    x, r = closest_below(line)
    assert r == line.residue(x) == min(line.residue(t) for t in range(lo, hi + 1))
    hull = upper_hull(line)
    assert (x, line.floor_at(x)) in hull
