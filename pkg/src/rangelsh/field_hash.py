"""Prime-field arithmetic and the hash families built on it.

Three families are provided:

* :class:`LinearHash1D` -- ``x -> (a*x + b) mod p``, 2-independent on ``[0, p)``.
* :class:`LinearHash2D` -- ``(x, y) -> (a*x + b*y + c) mod p``, 2-independent
  on ``[0, p)^2``.
* :class:`PolyHash` -- a random polynomial over the Mersenne field
  ``2^61 - 1`` followed by a range reduction; used as the epsilon-minwise
  function applied to small consistent samples.

Every family is parameterised from a single 64-bit seed so that two processes
sampling the same set agree on the sample.
"""

from __future__ import annotations

import hashlib
import math
import random
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError

MERSENNE_61 = (1 << 61) - 1
MAX_PRIME_BITS = 62
U64_MASK = (1 << 64) - 1

# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for 64-bit integers."""
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate ``p`` as a field prime and return it."""
    if not isinstance(p, int) or isinstance(p, bool):
        raise DomainError(f"prime must be an integer, got {p!r}")
    if p >= 1 << MAX_PRIME_BITS:
        raise DomainError(f"prime {p} does not fit below 2^{MAX_PRIME_BITS}")
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    return p


def next_prime(n: int) -> int:
    """Smallest prime >= n."""
    n = max(n, 2)
    while not is_prime(n):
        n += 1
    return n


def prev_prime(n: int) -> int:
    """Largest prime <= n; raises if n < 2."""
    if n < 2:
        raise DomainError(f"no prime <= {n}")
    while not is_prime(n):
        n -= 1
    return n


def prime_in_dyadic(level: int) -> int:
    """Smallest prime in ``[2^(level-1), 2^level]``.

    Bertrand's postulate guarantees one exists for every level >= 2.
    """
    if level < 2:
        raise DomainError(f"level must be >= 2, got {level}")
    if level > MAX_PRIME_BITS:
        raise OverflowError(f"level {level} exceeds {MAX_PRIME_BITS}-bit primes")
    return next_prime(1 << (level - 1))


def mod_inverse(q: int, p: int) -> int:
    """Multiplicative inverse of ``q`` modulo the prime ``p``."""
    if q % p == 0:
        raise DomainError(f"{q} has no inverse modulo {p}")
    return pow(q, -1, p)


def derive_seed(seed: int, *counters: int) -> int:
    """Counter-based derivation of an independent 64-bit seed.

    ``derive_seed(s, i)`` for consecutive ``i`` gives generators that are
    reproducible from ``s`` alone and independent of evaluation order.
    """
    h = hashlib.blake2b(digest_size=8)
    for value in (seed, *counters):
        h.update((value & U64_MASK).to_bytes(8, "little"))
    return int.from_bytes(h.digest(), "little")


_TEXT_RE = re.compile(r"^\s*(\d+(?:\s*,\s*\d+)*)\s*@\s*(\d+)\s*$")


def _parse_hash_text(text: str, arity: int) -> tuple[list[int], int]:
    m = _TEXT_RE.match(text)
    if not m:
        raise DomainError(f"malformed hash text {text!r}")
    coeffs = [int(v) for v in m.group(1).split(",")]
    if len(coeffs) != arity:
        raise DomainError(f"expected {arity} coefficients in {text!r}")
    return coeffs, int(m.group(2))


@dataclass(frozen=True)
class LinearHash1D:
    """``h(x) = (a*x + b) mod p``."""

    a: int
    b: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if not (0 <= self.a < self.p and 0 <= self.b < self.p):
            raise DomainError(f"coefficients must lie in [0, {self.p}): {self}")

    @classmethod
    def from_seed(cls, seed: int, p: int) -> LinearHash1D:
        rng = random.Random(seed & U64_MASK)
        return cls(rng.randrange(p), rng.randrange(p), p)

    @classmethod
    def parse(cls, text: str) -> LinearHash1D:
        (a, b), p = _parse_hash_text(text, 2)
        return cls(a, b, p)

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) % self.p

    def __str__(self) -> str:
        return f"{self.a},{self.b}@{self.p}"


@dataclass(frozen=True)
class LinearHash2D:
    """``h(x, y) = (a*x + b*y + c) mod p``."""

    a: int
    b: int
    c: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        if not all(0 <= v < self.p for v in (self.a, self.b, self.c)):
            raise DomainError(f"coefficients must lie in [0, {self.p}): {self}")

    @classmethod
    def from_seed(cls, seed: int, p: int) -> LinearHash2D:
        rng = random.Random(seed & U64_MASK)
        return cls(rng.randrange(p), rng.randrange(p), rng.randrange(p), p)

    @classmethod
    def from_rng(cls, rng: random.Random, p: int) -> LinearHash2D:
        return cls(rng.randrange(p), rng.randrange(p), rng.randrange(p), p)

    @classmethod
    def parse(cls, text: str) -> LinearHash2D:
        (a, b, c), p = _parse_hash_text(text, 3)
        return cls(a, b, c, p)

    def __call__(self, x: int, y: int) -> int:
        return (self.a * x + self.b * y + self.c) % self.p

    def column(self, i: int) -> LinearHash1D:
        """Restriction to the column ``{(i, j)}`` viewed as a hash of ``j``."""
        return LinearHash1D(self.b, (self.a * i + self.c) % self.p, self.p)

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}@{self.p}"


def eval_1d(h: LinearHash1D, x: int) -> int:
    return h(x)


def eval_2d(h: LinearHash2D, x: int, y: int) -> int:
    return h(x, y)


def minwise_degree(eps: float) -> int:
    """Number of polynomial coefficients used for an ``eps``-minwise family."""
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    return math.ceil(math.log2(1 / eps)) + 4


@dataclass(frozen=True)
class PolyHash:
    """Polynomial hash ``(sum c_i x^i mod q) // r``.

    With ``d`` random coefficients the family is ``d``-independent before the
    range reduction.  ``coefficients[0]`` is the constant term.
    """

    coefficients: tuple[int, ...]
    q: int = MERSENNE_61
    range_reduction: int = 1

    def __post_init__(self):
        if not self.coefficients:
            raise DomainError("PolyHash needs at least one coefficient")
        if self.range_reduction < 1:
            raise DomainError("range_reduction must be >= 1")
        if any(not 0 <= c < self.q for c in self.coefficients):
            raise DomainError(f"coefficients must lie in [0, {self.q})")

    @classmethod
    def for_minwise(cls, eps: float, universe: int, rng: random.Random) -> PolyHash:
        """Random member of an ``eps``-minwise family over ``[0, universe)``.

        The output range is about ``universe / eps`` values, following Indyk's
        construction from ``O(log 1/eps)``-wise independence.
        """
        if universe >= MERSENNE_61:
            raise DomainError(f"universe {universe} exceeds the field 2^61-1")
        d = minwise_degree(eps)
        coeffs = tuple(rng.randrange(MERSENNE_61) for _ in range(d))
        out_range = max(1, math.ceil(universe / eps))
        r = max(1, MERSENNE_61 // out_range)
        return cls(coeffs, MERSENNE_61, r)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def output_range(self) -> int:
        return -(-self.q // self.range_reduction)

    def __call__(self, x: int) -> int:
        q = self.q
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % q
        return acc // self.range_reduction


def eval_minwise(f: PolyHash, x: int) -> int:
    if x >= f.q:
        raise DomainError(f"key {x} is not below the field size {f.q}")
    return f(x)
