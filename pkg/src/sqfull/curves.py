"""Mordell curves, the negative Pell family behind n^2 + 4, and the cubic
Thue forms P_{c,d}(y1, y2) = c(3 y1^2 y2 - y2^3) + d(y1^3 - 3 y1 y2^2).

All counts are complete inside the stated box and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._parallel import ordered_map, split_range
from .arith import divisors, icbrt, isqrt, omega
from .errors import DomainError
from .squarefull import is_squarefull

__all__ = [
    "MordellResult",
    "PellSolution",
    "CubicFormClass",
    "ThueCount",
    "mordell_points",
    "mordell_exponent_scan",
    "mordell_substitution",
    "pell_family",
    "cubic_form",
    "classify_cubic_form",
    "thue_count",
    "pell_like_count",
]

CHUNKS = 16


# ---------------------------------------------------------------------------
# Mordell curves y^2 = x^3 + D


@dataclass(frozen=True)
class MordellResult:
    D: int
    box: int
    points: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.points)


def _mordell_chunk(args: tuple[int, int, int, int]) -> list[tuple[int, int]]:
    D, lo, hi, box = args
    pts = []
    for x in range(lo, hi + 1):
        v = x * x * x + D
        if v < 0:
            continue
        y, exact = isqrt(v)
        if exact and y <= box:
            pts.append((x, -y))
            if y:
                pts.append((x, y))
    return pts


def mordell_points(D: int, box: int, workers: int | None = None) -> MordellResult:
    """All integer (x, y) with y^2 = x^3 + D and |x|, |y| <= box."""
    if D == 0:
        raise DomainError("Mordell curve needs D != 0")
    if box < 1:
        raise DomainError("box must be >= 1")
    # x^3 + D >= 0 forces x >= -floor(cbrt(D)) for D > 0 and x >= cbrt(|D|) for D < 0
    x_lo = max(-box, -icbrt(D)[0] if D > 0 else icbrt(-D - 1)[0] + 1)
    parts = split_range(x_lo, box, CHUNKS if box - x_lo > 4096 else 1)
    chunks = ordered_map(_mordell_chunk, [(D, a, b, box) for a, b in parts], workers)
    return MordellResult(D, box, tuple(p for chunk in chunks for p in chunk))


@dataclass(frozen=True)
class MordellScan:
    box: int
    rows: tuple[tuple[int, int], ...]  # (|D|, max(count(D), count(-D)))
    slope: float
    intercept: float
    varpi0: float


def mordell_exponent_scan(d_max: int, box: int, workers: int | None = None) -> MordellScan:
    """Per-|D| point counts and the log-log slope of their running maximum."""
    from .experiments import exponents, fit_exponent

    if d_max < 2:
        raise DomainError("d_max must be >= 2")
    jobs = [(D, box) for k in range(1, d_max + 1) for D in (k, -k)]
    counts = ordered_map(lambda job: mordell_points(job[0], job[1], 1).count, jobs, workers)
    rows = tuple((k, max(counts[2 * k - 2], counts[2 * k - 1])) for k in range(1, d_max + 1))
    running, series = 0, []
    for k, c in rows:
        running = max(running, c)
        series.append((k, max(running, 1)))
    fit = fit_exponent(series)
    return MordellScan(box, rows, fit.slope, fit.intercept, exponents().varpi0)


def mordell_substitution(e: int, a: int, b: int, d: int, n: int) -> tuple[tuple[int, int], int]:
    """Map a solution of a n^2 = e^2 d^3 - b to a point on y^2 = x^3 + D.

    (x, y) = (e^2 a d, e^2 a^2 n) and D = -e^4 b a^3.
    """
    if a * n * n != e * e * d**3 - b:
        raise DomainError(f"inconsistent input: {a}*{n}^2 != {e}^2*{d}^3 - ({b})")
    x, y = e * e * a * d, e * e * a * a * n
    D = -(e**4) * b * a**3
    if y * y != x**3 + D:
        raise AssertionError(f"substitution failed for {(e, a, b, d, n)}")
    return (x, y), D


# ---------------------------------------------------------------------------
# Pell family


@dataclass(frozen=True)
class PellSolution:
    d: int
    k: int

    @property
    def n(self) -> int:
        return 2 * self.d


def pell_family(limit_n: int) -> list[PellSolution]:
    """All (d, k) with d^2 - 2k^2 = -1, d, k > 0 and n = 2d <= limit_n."""
    if limit_n < 2:
        raise DomainError("limit_n must be >= 2")
    out = []
    d, k = 1, 1
    while 2 * d <= limit_n:
        n = 2 * d
        if d * d - 2 * k * k != -1 or not is_squarefull(n * n + 4):
            raise AssertionError(f"Pell recurrence broke at (d, k) = ({d}, {k})")
        out.append(PellSolution(d, k))
        d, k = 3 * d + 4 * k, 2 * d + 3 * k
    return out


# ---------------------------------------------------------------------------
# cubic forms P_{c,d}


def cubic_form(c: int, d: int, y1: int, y2: int) -> int:
    return c * (3 * y1 * y1 * y2 - y2**3) + d * (y1**3 - 3 * y1 * y2 * y2)


@dataclass(frozen=True)
class CubicFormClass:
    """Linear factor q y1 - p y2 times a y1^2 + b y1 y2 + e y2^2, or irreducible."""

    c: int
    d: int
    irreducible: bool
    p: int | None = None
    q: int | None = None
    cofactor: tuple[Fraction, Fraction, Fraction] | None = None

    @property
    def cofactor_discriminant(self) -> Fraction | None:
        if self.cofactor is None:
            return None
        a, b, e = self.cofactor
        return b * b - 4 * a * e

    def expand(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Coefficients of y1^3, y1^2 y2, y1 y2^2, y2^3 of the factored product."""
        a, b, e = self.cofactor
        p, q = self.p, self.q
        return (q * a, q * b - p * a, q * e - p * b, -p * e)


def _rational_roots(c: int, d: int) -> list[Fraction]:
    # d x^3 + 3c x^2 - 3d x - c with x = y1/y2; a root p/q has p | c, q | d
    if c == 0:
        return [Fraction(0)]
    roots = set()
    for p in divisors(c):
        for q in divisors(d):
            for x in (Fraction(p, q), Fraction(-p, q)):
                if d * x**3 + 3 * c * x**2 - 3 * d * x - c == 0:
                    roots.add(x)
    return sorted(roots)


def classify_cubic_form(c: int, d: int) -> CubicFormClass:
    if c == 0 and d == 0:
        raise DomainError("(c, d) must not both vanish")
    target = (Fraction(d), Fraction(3 * c), Fraction(-3 * d), Fraction(-c))
    if d == 0:
        # no y1^3 term: y2 itself divides P
        p, q = -1, 0
        cls = CubicFormClass(c, d, False, p, q, (Fraction(3 * c), Fraction(0), Fraction(-c)))
    else:
        roots = _rational_roots(c, d)
        if not roots:
            return CubicFormClass(c, d, True)
        x = roots[0]
        p, q = x.numerator, x.denominator
        a = Fraction(d, q)
        b = (3 * c + p * a) / q
        e = (-3 * d + p * b) / q
        cls = CubicFormClass(c, d, False, p, q, (a, b, e))
    if cls.expand() != target:
        raise AssertionError(f"cofactor division failed for (c, d) = ({c}, {d})")
    return cls


@dataclass(frozen=True)
class ThueCount:
    c: int
    d: int
    alpha: int
    box: int
    solutions: tuple[tuple[int, int], ...]

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def primitive_count(self) -> int:
        return sum(1 for y1, y2 in self.solutions if math.gcd(y1, y2) == 1)

    @property
    def reference(self) -> int:
        """3^(1 + omega(alpha)), the shape of the Bombieri-Schmidt bound."""
        return 3 ** (1 + omega(abs(self.alpha)))


def thue_count(c: int, d: int, alpha: int, box: int) -> ThueCount:
    """Integer (y1, y2), |y1|, |y2| <= box, with P_{c,d}(y1, y2) = alpha."""
    if c == 0 and d == 0:
        raise DomainError("(c, d) must not both vanish")
    if alpha == 0:
        raise DomainError("alpha must be nonzero")
    if box < 0:
        raise DomainError("box must be >= 0")
    if (abs(c) + abs(d)) * 4 * (box + 1) ** 3 < 1 << 62 and box <= 4000:
        ys = np.arange(-box, box + 1, dtype=np.int64)
        sols = []
        for y1 in range(-box, box + 1):
            vals = c * (3 * y1 * y1 * ys - ys**3) + d * (y1**3 - 3 * y1 * ys * ys)
            sols.extend((y1, int(y2)) for y2 in ys[vals == alpha])
    else:
        sols = [
            (y1, y2)
            for y1 in range(-box, box + 1)
            for y2 in range(-box, box + 1)
            if cubic_form(c, d, y1, y2) == alpha
        ]
    return ThueCount(c, d, alpha, box, tuple(sols))


def pell_like_count(gamma: int, m: int, box: int) -> int:
    """#{(z1, z2) : z1^2 - gamma z2^2 = m, |z1|, |z2| <= box}."""
    if box < 1:
        raise DomainError("box must be >= 1")
    total = 0
    for z2 in range(-box, box + 1):
        v = m + gamma * z2 * z2
        if v < 0:
            continue
        z1, exact = isqrt(v)
        if exact and z1 <= box:
            total += 1 if z1 == 0 else 2
    return total
