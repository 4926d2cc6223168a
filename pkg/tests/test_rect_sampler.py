from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from rangelsh.errors import DomainError
from rangelsh.field_hash import LinearHash2D, next_prime
from rangelsh.integer_hull import BandOverflow
from rangelsh.rect_sampler import GridRect, estimate_count, zero_set, zero_set_scan


def test_zero_set_examples():
    h = LinearHash2D(1, 1, 0, 7)
    full = GridRect(0, 6, 0, 6)
    assert set(zero_set(h, full).points) == {(0, 0), (1, 6), (2, 5), (3, 4), (4, 3), (5, 2), (6, 1)}
    assert zero_set(LinearHash2D(0, 0, 1, 5), GridRect(0, 4, 1, 3)).points == ()
    h2 = LinearHash2D(3, 5, 2, 11)
    expected = [(2, 5), (4, 6), (5, 1), (6, 7), (7, 2), (8, 8), (9, 3)]
    assert list(zero_set(h2, GridRect(2, 9, 1, 8)).points) == expected


def test_estimate_count_examples():
    h = LinearHash2D(1, 1, 0, 7)
    rect = GridRect(0, 6, 0, 6)
    assert estimate_count(lambda x, y: False, h, rect) == 0
    assert estimate_count(lambda x, y: True, h, rect) == 49
    assert estimate_count(lambda x, y: x < 4, h, rect) == 28


def test_rect_parse_and_validation():
    assert GridRect.parse("1,2,3,4") == GridRect(1, 2, 3, 4)
    for bad in ("1,2,3", "a,b,c,d", "3,2,0,1", "-1,2,0,1"):
        with pytest.raises(DomainError):
            GridRect.parse(bad)


def _random_instance(rng, oversize=False):
    p = next_prime(rng.randrange(2, 500))
    pick = rng.random()
    a = 0 if pick < 0.15 else rng.randrange(p)
    b = 0 if 0.15 <= pick < 0.3 else rng.randrange(p)
    c = rng.randrange(p)
    span = 2 * p if oversize else p
    i1, j1 = rng.randrange(span), rng.randrange(span)
    rect = GridRect(i1, i1 + rng.randrange(min(span, 80)), j1, j1 + rng.randrange(min(span, 80)))
    return LinearHash2D(a, b, c, p), rect


def test_oracle_equivalence():
    rng = random.Random(20)
    for _ in range(1500):
        h, rect = _random_instance(rng, oversize=rng.random() < 0.2)
        assert zero_set(h, rect).points == zero_set_scan(h, rect).points


def test_a_equals_b_equals_zero():
    rect = GridRect(0, 3, 0, 2)
    assert zero_set(LinearHash2D(0, 0, 0, 5), rect).points == tuple(rect.points())
    assert zero_set(LinearHash2D(0, 0, 0, 5), rect, limit=12).points == tuple(rect.points())
    with pytest.raises(BandOverflow):
        zero_set(LinearHash2D(0, 0, 0, 5), rect, limit=11)


def test_limit_matches_output_size():
    rng = random.Random(21)
    for _ in range(300):
        h, rect = _random_instance(rng, oversize=True)
        n = len(zero_set_scan(h, rect))
        assert len(zero_set(h, rect, limit=n)) == n
        if n:
            with pytest.raises(BandOverflow):
                zero_set(h, rect, limit=n - 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 300), st.data())
def test_nested_consistency_and_union(p, data):
    p = next_prime(p)
    h = LinearHash2D(*(data.draw(st.integers(0, p - 1)) for _ in range(3)), p)
    i1 = data.draw(st.integers(0, p - 1))
    i2 = data.draw(st.integers(i1, p - 1))
    j1 = data.draw(st.integers(0, p - 1))
    j2 = data.draw(st.integers(j1, p - 1))
    outer = GridRect(i1, i2, j1, j2)
    ia = data.draw(st.integers(i1, i2))
    ib = data.draw(st.integers(ia, i2))
    inner = GridRect(ia, ib, j1, j2)
    big = set(zero_set(h, outer).points)
    assert set(zero_set(h, inner).points) == {q for q in big if q in inner}
    # Splitting the rectangle in two and taking the union of the samples.
    if ia > i1:
        left, right = GridRect(i1, ia - 1, j1, j2), GridRect(ia, i2, j1, j2)
        assert set(zero_set(h, left).points) | set(zero_set(h, right).points) == big


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 300), st.data())
def test_orientation_metamorphic(p, data):
    # Transposing both the rectangle and the hash transposes the sample.
    p = next_prime(p)
    a, b, c = (data.draw(st.integers(0, p - 1)) for _ in range(3))
    i1 = data.draw(st.integers(0, p - 1))
    j1 = data.draw(st.integers(0, p - 1))
    rect = GridRect(i1, data.draw(st.integers(i1, p - 1)), j1, data.draw(st.integers(j1, p - 1)))
    swapped = GridRect(rect.j1, rect.j2, rect.i1, rect.i2)
    pts = zero_set(LinearHash2D(a, b, c, p), rect).points
    tpts = zero_set(LinearHash2D(b, a, c, p), swapped).points
    assert sorted((y, x) for x, y in tpts) == list(pts)
