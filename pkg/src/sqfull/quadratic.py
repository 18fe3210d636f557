"""Quadratic polynomials and their square-full values.

Counting S_f(N) = #{1 <= n <= N : f(n) square-full} is done with a
polynomial sieve: for every prime p up to the cube root of the largest value
we strip p from the values at the roots of f mod p, then whatever is left over
has at most two prime factors and is square-full exactly when it is a
perfect square.  Values must fit comfortably in int64 for the vectorized path;
otherwise each value is tested on its own with exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._parallel import ordered_map, split_range
from .arith import icbrt, isqrt, mobius_table, primes_up_to, quadratic_roots_mod_p
from .errors import DomainError
from .squarefull import decompose_e2d3, is_squarefull

__all__ = [
    "QuadraticPoly",
    "MajorantPoly",
    "SolutionTriple",
    "DyadicCell",
    "ValueScan",
    "DyadicCheck",
    "EstermannProfile",
    "majorant",
    "is_admissible",
    "scan_values",
    "count_squarefull_values",
    "MajorantCheck",
    "majorant_check",
    "enumerate_triples",
    "dyadic_floor",
    "m_cell_count",
    "window_triples_d_major",
    "dyadic_decomposition_check",
    "estermann_per_d_profile",
]

INT64_SAFE = 1 << 62
CHUNKS = 16
# vectorizing a short range is slower than testing values one by one
MIN_VECTOR_LEN = 256


@dataclass(frozen=True)
class QuadraticPoly:
    a: int
    b: int
    c: int

    def __call__(self, x: int) -> int:
        return (self.a * x + self.b) * x + self.c

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @classmethod
    def parse(cls, text: str) -> "QuadraticPoly":
        parts = [int(t) for t in text.replace(" ", "").split(",")]
        if len(parts) != 3:
            raise DomainError(f"expected 'a,b,c', got {text!r}")
        return cls(*parts)

    def __str__(self) -> str:
        return f"{self.a}x^2{self.b:+d}x{self.c:+d}"


@dataclass(frozen=True)
class MajorantPoly:
    """g(y) = p y^2 + q with 4 a^2 f(x) = g(2 a x + b)."""

    p: int
    q: int
    scale: int

    def __call__(self, y: int) -> int:
        return self.p * y * y + self.q

    def as_quadratic(self) -> QuadraticPoly:
        return QuadraticPoly(self.p, 0, self.q)


@dataclass(frozen=True)
class SolutionTriple:
    """e^2 d^3 = f(n) with d square-free; `constant` is f's constant term."""

    n: int
    e: int
    d: int
    constant: int


@dataclass(frozen=True)
class DyadicCell:
    """Half-open dyadic box E < e <= 2E, D < d <= 2D (E or D may be 1/2)."""

    E: Fraction
    D: Fraction
    count: int


def majorant(f: QuadraticPoly) -> MajorantPoly:
    if f.a == 0:
        raise DomainError("majorant needs a != 0")
    # completing the square: 4a^2 f(x) = a (2ax + b)^2 + a (4ac - b^2)
    g = MajorantPoly(p=f.a, q=f.a * (4 * f.a * f.c - f.b * f.b), scale=2 * f.a)
    for x in (-2, -1, 0, 1, 7):
        if 4 * f.a * f.a * f(x) != g(2 * f.a * x + f.b):
            raise AssertionError(f"majorant identity fails for {f} at x={x}")
    return g


def is_admissible(f: QuadraticPoly) -> bool:
    return f.discriminant != 0


# ---------------------------------------------------------------------------
# scanning f(n) for square-full values


@dataclass
class ValueScan:
    hits: list[int] = field(default_factory=list)
    skipped: int = 0  # n with f(n) <= 0

    @property
    def count(self) -> int:
        return len(self.hits)


def _value_bound(f: QuadraticPoly, hi: int) -> int:
    return abs(f.a) * hi * hi + abs(f.b) * hi + abs(f.c)


def _scan_exact(f: QuadraticPoly, lo: int, hi: int) -> ValueScan:
    out = ValueScan()
    for n in range(lo, hi + 1):
        v = f(n)
        if v <= 0:
            out.skipped += 1
        elif is_squarefull(v):
            out.hits.append(n)
    return out


def _scan_vector(f: QuadraticPoly, lo: int, hi: int) -> ValueScan:
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    vals = (f.a * ns + f.b) * ns + f.c
    positive = vals > 0
    resid = np.where(positive, vals, 1)
    ok = positive.copy()
    bound = icbrt(int(resid.max()))[0] + 1
    for p in primes_up_to(bound):
        roots = quadratic_roots_mod_p(f.a, f.b, f.c, p)
        if len(roots) == p:
            slices = [slice(0, None, 1)]
        else:
            slices = [slice((r - lo) % p, None, p) for r in roots]
        for sl in slices:
            sub = resid[sl]
            hit = sub % p == 0
            if not hit.any():
                continue
            sub[hit] //= p
            again = sub % p == 0
            okv = ok[sl]
            okv &= ~(hit & ~again)
            while again.any():
                sub[again] //= p
                again = sub % p == 0
    # leftover has only primes > cube root of the value: 1, q, q^2 or q*q'
    root = np.floor(np.sqrt(resid.astype(np.float64))).astype(np.int64)
    square = np.zeros_like(ok)
    for shift in (-1, 0, 1):
        r = root + shift
        square |= (r >= 0) & (r * r == resid)
    ok &= square
    return ValueScan(hits=[int(n) for n in ns[ok]], skipped=int((~positive).sum()))


def _scan_block(args: tuple[QuadraticPoly, int, int]) -> ValueScan:
    f, lo, hi = args
    if hi - lo + 1 >= MIN_VECTOR_LEN and _value_bound(f, max(abs(lo), abs(hi))) < INT64_SAFE:
        return _scan_vector(f, lo, hi)
    return _scan_exact(f, lo, hi)


def scan_values(f: QuadraticPoly, lo: int, hi: int, workers: int | None = None) -> ValueScan:
    """All n in [lo, hi] (lo >= 1) with f(n) square-full, plus the skip tally."""
    if lo < 1:
        raise DomainError("scans start at n = 1")
    parts = split_range(lo, hi, CHUNKS if hi - lo + 1 >= CHUNKS * MIN_VECTOR_LEN else 1)
    merged = ValueScan()
    for block in ordered_map(_scan_block, [(f, a, b) for a, b in parts], workers):
        merged.hits.extend(block.hits)
        merged.skipped += block.skipped
    return merged


def count_squarefull_values(f: QuadraticPoly, limit: int, workers: int | None = None) -> int:
    """S_f(N): number of 1 <= n <= N with f(n) square-full (f(n) <= 0 skipped)."""
    if limit < 1:
        return 0
    return scan_values(f, 1, limit, workers).count


@dataclass(frozen=True)
class MajorantCheck:
    """S_f(N) against two counts of the majorant g.

    `g_plain` is S_g(2|a| N).  n -> |2an + b| can be two-to-one (f(n) equals
    f(n') when n + n' = -b/a) and can overshoot 2|a| N by |b|, so only
    `g_folded` = 2 S_g(2|a| N + |b|) + [g(0) square-full] is a guaranteed bound.
    """

    f: QuadraticPoly
    N: int
    s_f: int
    g_plain: int
    g_folded: int

    @property
    def plain_ok(self) -> bool:
        return self.s_f <= self.g_plain

    @property
    def folded_ok(self) -> bool:
        return self.s_f <= self.g_folded


def majorant_check(f: QuadraticPoly, N: int, workers: int | None = None) -> MajorantCheck:
    if N < 1:
        raise DomainError("N must be >= 1")
    g = majorant(f)
    gq = g.as_quadratic()
    s_f = count_squarefull_values(f, N, workers)
    plain = count_squarefull_values(gq, 2 * abs(f.a) * N, workers)
    wide = count_squarefull_values(gq, 2 * abs(f.a) * N + abs(f.b), workers)
    zero = 1 if g.q > 0 and is_squarefull(g.q) else 0
    return MajorantCheck(f, N, s_f, plain, 2 * wide + zero)


def _triples(f: QuadraticPoly, hits: list[int]) -> list[SolutionTriple]:
    out = []
    for n in hits:
        dec = decompose_e2d3(f(n))
        out.append(SolutionTriple(n, dec.e, dec.d, f.c))
    return out


def enumerate_triples(f: QuadraticPoly, limit: int, workers: int | None = None) -> list[SolutionTriple]:
    if limit < 1:
        return []
    return _triples(f, scan_values(f, 1, limit, workers).hits)


# ---------------------------------------------------------------------------
# dyadic cells


def dyadic_floor(x: int) -> Fraction:
    """The X with X < x <= 2X, X a power of two (1/2 for x = 1)."""
    if x < 1:
        raise DomainError("dyadic cells cover positive integers only")
    return Fraction(1 << (x - 1).bit_length()) / 2


def _window_values(f: QuadraticPoly, N: int) -> tuple[int, int]:
    """Min and max of f over the integers of (N, 2N]."""
    candidates = [N + 1, 2 * N]
    if f.a != 0:
        vertex = Fraction(-f.b, 2 * f.a)
        for n in (math.floor(vertex), math.ceil(vertex)):
            if N < n <= 2 * N:
                candidates.append(n)
    vals = [f(n) for n in candidates]
    return min(vals), max(vals)


def _solve_for_n(f: QuadraticPoly, v: int, N: int) -> list[int]:
    disc = f.b * f.b - 4 * f.a * (f.c - v)
    if disc < 0:
        return []
    s, exact = isqrt(disc)
    if not exact:
        return []
    found = set()
    for num in (-f.b + s, -f.b - s):
        if num % (2 * f.a) == 0:
            n = num // (2 * f.a)
            if N < n <= 2 * N:
                found.add(n)
    return sorted(found)


def window_triples_d_major(
    f: QuadraticPoly,
    N: int,
    d_range: tuple[Fraction, Fraction] | None = None,
    e_range: tuple[Fraction, Fraction] | None = None,
    mobius: list[int] | None = None,
) -> list[SolutionTriple]:
    """Triples with N < n <= 2N found by walking square-free d, then e.

    Ranges are half-open (lo, hi].  For each e^2 d^3 inside f's value range on
    the window the quadratic is solved exactly for n.
    """
    if f.a == 0:
        raise DomainError("d-major enumeration needs a quadratic (a != 0)")
    vmin, vmax = _window_values(f, N)
    vmin = max(vmin, 1)
    if vmax < 1:
        return []
    dtop = icbrt(vmax)[0]
    dlo, dhi = d_range if d_range else (Fraction(0), Fraction(dtop))
    d_first, d_last = math.floor(dlo) + 1, min(math.floor(dhi), dtop)
    if mobius is None or len(mobius) <= d_last:
        mobius = mobius_table(max(d_last, 1))
    out = []
    for d in range(d_first, d_last + 1):
        if mobius[d] == 0:
            continue
        d3 = d**3
        t = -(-vmin // d3)
        e_first = isqrt(t - 1)[0] + 1
        e_last = isqrt(vmax // d3)[0]
        if e_range:
            e_first = max(e_first, math.floor(e_range[0]) + 1)
            e_last = min(e_last, math.floor(e_range[1]))
        for e in range(e_first, e_last + 1):
            for n in _solve_for_n(f, e * e * d3, N):
                out.append(SolutionTriple(n, e, d, f.c))
    out.sort(key=lambda t: t.n)
    return out


def m_cell_count(
    f: QuadraticPoly, N: int, E: Fraction | int, D: Fraction | int, method: str = "n"
) -> DyadicCell:
    """M(E, D): triples with N < n <= 2N, E < e <= 2E, D < d <= 2D.

    method "n" scans n over the window and buckets; "d" walks (d, e) and
    solves for n.  The two are independent and must agree.
    """
    E, D = Fraction(E), Fraction(D)
    if N < 1 or E <= 0 or D <= 0:
        raise DomainError("N, E, D must be positive")
    if method == "n":
        triples = _triples(f, scan_values(f, N + 1, 2 * N).hits)
        count = sum(1 for t in triples if E < t.e <= 2 * E and D < t.d <= 2 * D)
    elif method == "d":
        count = len(window_triples_d_major(f, N, (D, 2 * D), (E, 2 * E)))
    else:
        raise DomainError(f"unknown method {method!r}")
    return DyadicCell(E, D, count)


@dataclass
class DyadicCheck:
    N: int
    lhs: int  # S_f(2N) - S_f(N)
    rhs: int  # sum of M(E, D) over the grid
    cells: list[DyadicCell]
    slack: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


def _levels(top: int) -> list[Fraction]:
    levels, x = [Fraction(1, 2)], Fraction(1, 2)
    while 2 * x < top:
        x *= 2
        levels.append(x)
    return levels


def dyadic_decomposition_check(
    f: QuadraticPoly, N: int, slack: int = 16, workers: int | None = None
) -> DyadicCheck:
    """Compare S_f(2N) - S_f(N) with the dyadic grid sum of M(E, D).

    The grid keeps cells with vmin / (32 slack) <= E^2 D^3 <= slack vmax,
    a slackened version of E^2 D^3 ~ N^2; a cell's values lie in
    (E^2 D^3, 32 E^2 D^3].
    """
    lhs = count_squarefull_values(f, 2 * N, workers) - count_squarefull_values(f, N, workers)
    vmin, vmax = _window_values(f, N)
    vmin = max(vmin, 1)
    cells: list[DyadicCell] = []
    if vmax >= 1:
        dtop = icbrt(vmax)[0]
        mobius = mobius_table(2 * dtop + 2)
        e_levels = _levels(isqrt(vmax)[0])
        d_levels = _levels(dtop)

        def one_row(D: Fraction) -> list[DyadicCell]:
            row = []
            for E in e_levels:
                size = E * E * D**3
                if not (Fraction(vmin, 32 * slack) <= size <= slack * vmax):
                    continue
                found = window_triples_d_major(f, N, (D, 2 * D), (E, 2 * E), mobius)
                row.append(DyadicCell(E, D, len(found)))
            return row

        for row in ordered_map(one_row, d_levels, workers):
            cells.extend(row)
    return DyadicCheck(N, lhs, sum(c.count for c in cells), cells, slack)


# ---------------------------------------------------------------------------
# Estermann's per-d count


@dataclass(frozen=True)
class EstermannProfile:
    d: int
    alpha: int
    N: int
    positive_pairs: tuple[tuple[int, int], ...]  # n >= 0, e >= 1
    signed_count: int  # all sign variants (n = 0 counted once)

    @property
    def ratio(self) -> float:
        return self.signed_count / math.log(self.N + self.d * self.alpha)


def _alpha_of(f: QuadraticPoly) -> int:
    alpha, exact = isqrt(f.c) if f.c > 0 else (0, False)
    if (f.a, f.b) != (1, 0) or not exact:
        raise DomainError(f"expected f = x^2 + alpha^2, got {f}")
    return alpha


def estermann_per_d_profile(f: QuadraticPoly, N: int, d: int) -> EstermannProfile:
    """(n, e) with |n|, |e| <= N and n^2 = d^3 e^2 - alpha^2, for f = x^2 + alpha^2."""
    if d < 1:
        raise DomainError("d must be >= 1")
    alpha = _alpha_of(f)
    d3, a2 = d**3, alpha * alpha
    pairs = []
    for e in range(1, N + 1):
        v = d3 * e * e - a2
        if v < 0:
            continue
        n, exact = isqrt(v)
        if exact and n <= N:
            pairs.append((n, e))
    signed = sum(2 if n == 0 else 4 for n, _ in pairs)
    return EstermannProfile(d, alpha, N, tuple(pairs), signed)
