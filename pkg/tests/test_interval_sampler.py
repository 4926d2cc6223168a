from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from rangelsh.errors import DomainError
from rangelsh.field_hash import LinearHash1D, next_prime
from rangelsh.interval_sampler import (SplitStats, bottom_k, iter_by_hash, min_hash_interval,
                                       threshold_sample)

IDENT = LinearHash1D(1, 0, 13)
H37 = LinearHash1D(37, 11, 101)


def ranked(h, lo, hi):
    return sorted((h(x), x) for x in range(lo, hi + 1))


def test_min_hash_examples():
    assert min_hash_interval(LinearHash1D(0, 5, 13), 2, 9) == (2, 5)
    assert min_hash_interval(IDENT, 3, 7) == (3, 3)
    assert min_hash_interval(H37, 10, 90) == (27, 0)


def test_bottom_k_examples():
    assert bottom_k(IDENT, 3, 7, 3).entries == ((3, 3), (4, 4), (5, 5))
    assert bottom_k(IDENT, 3, 7, 99).entries == tuple((x, x) for x in range(3, 8))
    assert bottom_k(IDENT, 3, 7, 0).entries == ()
    top4 = tuple((x, r) for r, x in ranked(H37, 10, 90)[:4])
    assert bottom_k(H37, 10, 90, 4).entries == top4


def test_threshold_examples():
    assert threshold_sample(H37, 10, 90, 0).entries == ()
    assert threshold_sample(IDENT, 3, 7, 5).entries == ((3, 3), (4, 4))
    expected = tuple((x, r) for r, x in ranked(H37, 10, 90) if r < 3)
    assert threshold_sample(H37, 10, 90, 3).entries == expected


def test_domain_errors():
    with pytest.raises(DomainError):
        min_hash_interval(IDENT, 3, 13)
    with pytest.raises(DomainError):
        bottom_k(IDENT, 5, 4, 1)
    with pytest.raises(DomainError):
        bottom_k(IDENT, 0, 4, -1)
    with pytest.raises(DomainError):
        threshold_sample(IDENT, 0, 4, 14)


def _random_case(rng):
    p = next_prime(rng.randrange(2, 10 ** 4))
    h = LinearHash1D(rng.randrange(p), rng.randrange(p), p)
    lo = rng.randrange(p)
    hi = rng.randrange(lo, min(p, lo + 3000))
    return h, lo, hi


def test_oracle_equivalence():
    rng = random.Random(10)
    for _ in range(2000):
        h, lo, hi = _random_case(rng)
        full = ranked(h, lo, hi)
        assert min_hash_interval(h, lo, hi) == (full[0][1], full[0][0])
        k = rng.randrange(0, 20)
        assert bottom_k(h, lo, hi, k).entries == tuple((x, r) for r, x in full[:k])
        tau = rng.randrange(0, h.p + 1)
        assert threshold_sample(h, lo, hi, tau).entries == tuple((x, r) for r, x in full if r < tau)


def test_iter_by_hash_is_full_sort():
    rng = random.Random(11)
    for _ in range(100):
        h, lo, hi = _random_case(rng)
        hi = min(hi, lo + 200)
        assert list(iter_by_hash(h, lo, hi)) == ranked(h, lo, hi)


def test_heap_work_bound():
    rng = random.Random(12)
    for _ in range(300):
        h, lo, hi = _random_case(rng)
        k = rng.randrange(1, 30)
        stats = SplitStats()
        bottom_k(h, lo, hi, k, stats)
        assert stats.pops <= 2 * (k + 1)
        assert stats.pushes <= 2 * k + 1


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 3000), st.data())
def test_threshold_consistency_on_nested_intervals(p, data):
    p = next_prime(p)
    h = LinearHash1D(data.draw(st.integers(0, p - 1)), data.draw(st.integers(0, p - 1)), p)
    lo = data.draw(st.integers(0, p - 1))
    hi = data.draw(st.integers(lo, p - 1))
    lo2 = data.draw(st.integers(lo, hi))
    hi2 = data.draw(st.integers(lo2, hi))
    tau = data.draw(st.integers(0, p))
    outer = threshold_sample(h, lo, hi, tau).entries
    inner = threshold_sample(h, lo2, hi2, tau).entries
    assert inner == tuple(e for e in outer if lo2 <= e[0] <= hi2)


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 3000), st.data())
def test_bottom_k_monotone(p, data):
    p = next_prime(p)
    h = LinearHash1D(data.draw(st.integers(0, p - 1)), data.draw(st.integers(0, p - 1)), p)
    lo = data.draw(st.integers(0, p - 1))
    hi = data.draw(st.integers(lo, p - 1))
    k = data.draw(st.integers(0, hi - lo))
    small = bottom_k(h, lo, hi, k).entries
    big = bottom_k(h, lo, hi, k + 1).entries
    assert big[:k] == small and len(big) == k + 1
