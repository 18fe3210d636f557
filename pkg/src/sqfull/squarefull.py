"""Square-full integers: predicate, e^2 d^3 decomposition, enumeration, counts."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._parallel import ordered_map, split_range
from .arith import trial_primes, factorize, icbrt, is_square, mobius_table, zeta
from .errors import DomainError

__all__ = [
    "SquarefullDecomposition",
    "CountReport",
    "is_squarefull",
    "decompose_e2d3",
    "sieve_squarefull",
    "count_squarefull",
    "count_with_prediction",
    "bateman_grosswald",
]

CHUNKS = 16


def is_squarefull(n: int) -> bool:
    """True iff p^2 | n for every prime p | n.  1 counts as square-full."""
    if n < 1:
        raise DomainError(f"square-full is defined for positive integers, got {n}")
    r = n
    for p in trial_primes():
        if p * p * p > r:
            # every prime factor of r is >= p and r < p^3: r is 1, q, q^2 or q*q'
            return r == 1 or is_square(r)
        if r % p == 0:
            r //= p
            if r % p:
                return False
            while r % p == 0:
                r //= p
    # cofactor beyond the trial table
    return is_square(r) or all(e >= 2 for _, e in factorize(r))


@dataclass(frozen=True)
class SquarefullDecomposition:
    n: int
    e: int
    d: int

    def __post_init__(self):
        if self.e * self.e * self.d**3 != self.n:
            raise ValueError(f"{self.e}^2 * {self.d}^3 != {self.n}")


def decompose_e2d3(n: int) -> SquarefullDecomposition:
    """The unique (e, d), d square-free, with n = e^2 d^3."""
    if n < 1:
        raise DomainError(f"decompose_e2d3 needs n >= 1, got {n}")
    fac = factorize(n)
    if any(e < 2 for _, e in fac):
        bad = [p for p, e in fac if e < 2]
        raise DomainError(f"{n} is not square-full (primes to the first power: {bad})")
    d = math.prod(p for p, e in fac if e % 2)
    e = math.isqrt(n // d**3)
    return SquarefullDecomposition(n, e, d)


def _sieve_chunk(args: tuple[int, int, int, list[int]]) -> list[int]:
    lo, hi, limit, mob = args
    out = []
    for d in range(lo, hi + 1):
        if mob[d] == 0:
            continue
        d3 = d**3
        for e in range(1, math.isqrt(limit // d3) + 1):
            out.append(e * e * d3)
    return out


def sieve_squarefull(limit: int, workers: int | None = None) -> list[int]:
    """Sorted list of all square-full n <= limit, generated as e^2 d^3."""
    if limit < 1:
        return []
    dmax = icbrt(limit)[0]
    mob = mobius_table(dmax)
    parts = split_range(1, dmax, CHUNKS)
    chunks = ordered_map(_sieve_chunk, [(lo, hi, limit, mob) for lo, hi in parts], workers)
    values = [v for chunk in chunks for v in chunk]
    values.sort()
    for a, b in zip(values, values[1:]):
        if a == b:
            raise AssertionError(f"e^2 d^3 representation of {a} is not unique")
    return values


def count_squarefull(limit: int) -> int:
    """Number of square-full n <= limit without listing them."""
    if limit < 1:
        return 0
    dmax = icbrt(limit)[0]
    mob = mobius_table(dmax)
    return sum(math.isqrt(limit // d**3) for d in range(1, dmax + 1) if mob[d])


def bateman_grosswald(limit: float, tol: float = 1e-12) -> float:
    """Main terms zeta(3/2)/zeta(3) N^(1/2) + zeta(2/3)/zeta(2) N^(1/3)."""
    c_half = zeta(1.5, tol) / zeta(3.0, tol)
    c_third = zeta(2.0 / 3.0, tol) / zeta(2.0, tol)
    return c_half * limit**0.5 + c_third * limit ** (1.0 / 3.0)


@dataclass(frozen=True)
class CountReport:
    N: int
    S: int
    P: float

    @property
    def deviation(self) -> float:
        return self.S - self.P

    @property
    def normalized_deviation(self) -> float:
        return self.deviation / self.N ** (1.0 / 6.0)


def count_with_prediction(limit: int, workers: int | None = None) -> CountReport:
    if limit < 1:
        raise DomainError("limit must be >= 1")
    s = len(sieve_squarefull(limit, workers))
    return CountReport(limit, s, bateman_grosswald(limit))
