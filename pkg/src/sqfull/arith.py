"""Exact integer primitives and multiplicative functions.

Everything here works on Python ints (arbitrary precision).  Factorization
is trial division against a lazily built prime table, with Pollard-Brent
splitting for cofactors beyond the table's reach.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError

__all__ = [
    "Factorization",
    "Rational",
    "factorize",
    "mu",
    "rad",
    "omega",
    "tau",
    "divisors",
    "is_squarefree",
    "mobius_table",
    "primes_up_to",
    "trial_primes",
    "isqrt",
    "icbrt",
    "is_square",
    "zeta",
    "eta",
    "two_square_representations",
    "sqrt_mod_prime",
    "quadratic_roots_mod_p",
    "is_probable_prime",
]

# Exact rationals are the stdlib Fraction: normalized, denominator > 0.
Rational = Fraction

TRIAL_LIMIT = 10**6

_prime_lock = threading.Lock()
_prime_table: list[int] = []


def primes_up_to(n: int) -> list[int]:
    """Primes p <= n by a bytearray sieve of Eratosthenes."""
    if n < 2:
        return []
    sieve = bytearray(b"\x01") * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, flag in enumerate(sieve) if flag]


def trial_primes() -> list[int]:
    global _prime_table
    if not _prime_table:
        with _prime_lock:
            if not _prime_table:
                _prime_table = primes_up_to(TRIAL_LIMIT)
    return _prime_table


# ---------------------------------------------------------------------------
# roots


def isqrt(n: int) -> tuple[int, bool]:
    """Floor square root and whether it is exact."""
    if n < 0:
        raise ValueError(f"isqrt of negative number {n}")
    r = math.isqrt(n)
    return r, r * r == n


def icbrt(n: int) -> tuple[int, bool]:
    """Floor cube root (sign aware: icbrt(-9) == (-3, False))."""
    if n == 0:
        return 0, True
    m = abs(n)
    # Newton from above converges to the floor
    r = 1 << ((m.bit_length() + 2) // 3)
    while True:
        y = (2 * r + m // (r * r)) // 3
        if y >= r:
            break
        r = y
    exact = r**3 == m
    if n > 0:
        return r, exact
    return (-r, True) if exact else (-r - 1, False)


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# primality and factoring

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with the first 13 prime bases (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    # deterministic constants so factorize() stays reproducible
    if n % 2 == 0:
        return 2
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"Pollard-Brent failed to split {n}")


def _split_large(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_probable_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r, exact = isqrt(n)
    if exact:
        sub: dict[int, int] = {}
        _split_large(r, sub)
        for p, e in sub.items():
            out[p] = out.get(p, 0) + 2 * e
        return
    g = _pollard_brent(n)
    _split_large(g, out)
    _split_large(n // g, out)


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as (prime, exponent) pairs sorted by prime."""

    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.pairs]
        if primes != sorted(set(primes)) or any(e < 1 for _, e in self.pairs):
            raise ValueError(f"malformed factorization {self.pairs}")

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def value(self) -> int:
        v = 1
        for p, e in self.pairs:
            v *= p**e
        return v

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def factorize(n: int) -> Factorization:
    if n < 1:
        raise DomainError(f"factorize needs a positive integer, got {n}")
    found: dict[int, int] = {}
    r = n
    for p in trial_primes():
        if p * p > r:
            break
        if r % p == 0:
            e = 0
            while r % p == 0:
                r //= p
                e += 1
            found[p] = e
    else:
        # table exhausted: r has no prime factor below TRIAL_LIMIT
        if r > 1:
            _split_large(r, found)
            r = 1
    if r > 1:
        found[r] = found.get(r, 0) + 1
    return Factorization(tuple(sorted(found.items())))


def mu(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


def rad(n: int) -> int:
    return math.prod(factorize(n).primes)


def omega(n: int) -> int:
    return len(factorize(n))


def tau(n: int) -> int:
    return math.prod(e + 1 for _, e in factorize(n))


def divisors(n: int) -> list[int]:
    """Positive divisors of |n|, sorted."""
    n = abs(n)
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def is_squarefree(n: int) -> bool:
    return mu(n) != 0


def mobius_table(n: int) -> list[int]:
    """mu(k) for 0 <= k <= n (entry 0 unused, set to 0)."""
    table = [1] * (n + 1)
    if n >= 0:
        table[0] = 0
    for p in primes_up_to(n):
        for k in range(p, n + 1, p):
            table[k] = -table[k]
        pp = p * p
        for k in range(pp, n + 1, pp):
            table[k] = 0
    return table


# ---------------------------------------------------------------------------
# modular square roots


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo the prime p, or None (Tonelli-Shanks)."""
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def quadratic_roots_mod_p(a: int, b: int, c: int, p: int) -> list[int]:
    """Sorted residues r mod p with a r^2 + b r + c = 0 (mod p)."""
    a, b, c = a % p, b % p, c % p
    if p < 64:
        return [r for r in range(p) if (a * r * r + b * r + c) % p == 0]
    if a == 0:
        if b == 0:
            return list(range(p)) if c == 0 else []
        return [(-c * pow(b, -1, p)) % p]
    disc = (b * b - 4 * a * c) % p
    s = sqrt_mod_prime(disc, p)
    if s is None:
        return []
    inv = pow(2 * a, -1, p)
    return sorted({(-b + s) * inv % p, (-b - s) * inv % p})


# ---------------------------------------------------------------------------
# zeta


def eta(s: float, tol: float = 1e-12) -> float:
    """Dirichlet eta function for real s > 0.

    Partial sums of the alternating series are averaged pairwise until the
    top two entries agree (Euler-van Wijngaarden transform).
    """
    if s <= 0:
        raise ValueError("eta is only evaluated for s > 0")
    terms = 64
    prev = None
    while True:
        sums = []
        acc = 0.0
        for k in range(1, terms + 1):
            acc += (-1) ** (k + 1) / k**s
            sums.append(acc)
        row = sums
        while len(row) > 1:
            row = [(x + y) / 2 for x, y in zip(row, row[1:])]
        value = row[0]
        if prev is not None and abs(value - prev) <= tol / 8:
            return value
        if terms > 4096:
            raise ArithmeticError(f"eta({s}) did not reach tol={tol}")
        prev = value
        terms *= 2


def zeta(s: float, tol: float = 1e-12) -> float:
    """Riemann zeta at real s > 0, s != 1, via zeta(s) = eta(s) / (1 - 2^(1-s))."""
    if s <= 0 or s == 1:
        raise ValueError(f"zeta(s) needs s > 0 and s != 1, got {s}")
    scale = 1.0 - 2.0 ** (1.0 - s)
    return eta(s, tol * abs(scale)) / scale


# ---------------------------------------------------------------------------
# two squares


def two_square_representations(m: int) -> list[tuple[int, int]]:
    """All (x1, x2) with x1^2 + x2^2 == m and 0 <= x1 <= x2."""
    if m < 1:
        raise ValueError("m must be positive")
    reps = []
    for x1 in range(math.isqrt(m // 2) + 1):
        x2, exact = isqrt(m - x1 * x1)
        if exact and x1 <= x2:
            reps.append((x1, x2))
    return reps
