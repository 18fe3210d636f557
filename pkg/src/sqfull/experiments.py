"""Exponent arithmetic, the abc reduction chain, random-family averages and
log-log fitting of measured series."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._parallel import ordered_map
from .arith import rad
from .errors import DomainError
from .squarefull import is_squarefull, sieve_squarefull

__all__ = [
    "ExponentSet",
    "AbcChain",
    "FamilyAverage",
    "FitResult",
    "beta_constant",
    "exponents",
    "psi_objective",
    "cell_tradeoff",
    "abc_chain",
    "abc_quality",
    "random_family_average",
    "fit_exponent",
    "fit_log_constant",
]

GRID_STEP = 1e-6


def beta_constant() -> float:
    r = math.sqrt(3)
    hi = (2 + r) / (2 * r)
    lo = (2 - r) / (2 * r)
    return hi * math.log(hi) - lo * math.log(lo)


def psi_objective(psi):
    """(3/8) psi (1 - psi) + min(psi / 2, (1 - psi) / 3); works on Fractions and arrays."""
    if isinstance(psi, np.ndarray):
        return 3 / 8 * psi * (1 - psi) + np.minimum(psi / 2, (1 - psi) / 3)
    return Fraction(3, 8) * psi * (1 - psi) + min(psi / 2, (1 - psi) / 3)


@dataclass(frozen=True)
class ExponentSet:
    beta: float
    varpi0: float
    varpi_mordell: float
    e_opt_exponent: float
    psi_star: float
    varpi_psi: float
    psi_star_exact: Fraction
    varpi_psi_exact: Fraction

    def as_json(self) -> dict:
        return {
            "beta": self.beta,
            "varpi0": self.varpi0,
            "varpi_mordell": self.varpi_mordell,
            "e_opt_exponent": self.e_opt_exponent,
            "psi_star": self.psi_star,
            "varpi_psi": self.varpi_psi,
            "psi_star_exact": str(self.psi_star_exact),
            "varpi_psi_exact": str(self.varpi_psi_exact),
        }


def _grid_argmax(step: float = GRID_STEP) -> tuple[float, float]:
    psi = np.linspace(0.0, 1.0, round(1 / step) + 1)
    vals = psi_objective(psi)
    i = int(np.argmax(vals))
    return float(psi[i]), float(vals[i])


def exponents(step: float = GRID_STEP) -> ExponentSet:
    beta = beta_constant()
    v0 = 2 * beta / (3 * math.log(3))
    psi, val = _grid_argmax(step)
    # confirm the grid optimum at the rational point the kink sits on
    exact_psi = Fraction(round(psi * 1000), 1000)
    exact_val = psi_objective(exact_psi)
    if abs(float(exact_val) - val) > 1e-6:
        raise AssertionError(f"grid optimum {val} disagrees with exact value {exact_val} at {exact_psi}")
    return ExponentSet(
        beta=beta,
        varpi0=v0,
        varpi_mordell=2 * (1 + 4 * v0) / (5 + 12 * v0),
        e_opt_exponent=2 / (5 + 12 * v0),
        psi_star=psi,
        varpi_psi=val,
        psi_star_exact=exact_psi,
        varpi_psi_exact=exact_val,
    )


@dataclass(frozen=True)
class Tradeoff:
    varpi0: float
    e_exponent: float
    value: float
    grid_e_exponent: float
    grid_value: float


def cell_tradeoff(varpi0: float, step: float = GRID_STEP) -> Tradeoff:
    """sup over E = N^x of min(D, E^(1 + 4 varpi0)) subject to E^2 D^3 = N^2 (exponents of N)."""
    if varpi0 < 0:
        raise DomainError("varpi0 must be >= 0")
    x_opt = 2 / (5 + 12 * varpi0)
    value = x_opt * (1 + 4 * varpi0)
    xs = np.linspace(0.0, 1.0, round(1 / step) + 1)
    vals = np.minimum((2 - 2 * xs) / 3, xs * (1 + 4 * varpi0))
    i = int(np.argmax(vals))
    if abs(float(vals[i]) - value) > 1e-4:
        raise AssertionError(f"grid optimum {vals[i]} disagrees with closed form {value}")
    return Tradeoff(varpi0, x_opt, value, float(xs[i]), float(vals[i]))


# ---------------------------------------------------------------------------
# abc


def abc_quality(a: int, b: int, c: int) -> float:
    """log c / log rad(abc) for coprime positive a + b = c."""
    if a < 1 or b < 1 or a + b != c or math.gcd(a, b) != 1:
        raise DomainError(f"need coprime positive a + b = c, got ({a}, {b}, {c})")
    r = rad(a * b * c)
    if r == 1:
        raise DomainError("rad(abc) = 1")
    return math.log(c) / math.log(r)


@dataclass(frozen=True)
class AbcChain:
    c: int
    b: int
    e: int
    d: int
    n: int
    l: int
    b1: int  # b'
    n1: int  # n'
    l1: int
    b2: int  # b''
    l_prime: int
    quality: float | None

    @property
    def lhs(self) -> int:
        return self.c * self.e**2 * self.d**3 // (self.l * self.l1)

    @property
    def rhs(self) -> int:
        return self.l_prime * self.n1**2 + self.b2

    def triple(self) -> tuple[int, int, int] | None:
        """(a, b, a + b) from the reduced identity, oriented to positive terms."""
        x, y = self.l_prime * self.n1**2, self.b2
        if x <= 0:
            return None
        if y > 0:
            return (x, y, x + y)
        if x + y > 0:
            return (x + y, -y, x)
        return None


def abc_chain(c: int, b: int, e: int, d: int, n: int) -> AbcChain:
    if b == 0:
        raise DomainError("b must be nonzero")
    if c * e * e * d**3 != n * n + b:
        raise DomainError(f"{c}*{e}^2*{d}^3 != {n}^2 + {b}")
    l = math.gcd(b, n)
    b1, n1 = b // l, n // l
    l1 = math.gcd(l, b1)
    b2, lp = b1 // l1, l // l1
    if math.gcd(n1, b1) != 1:
        raise AssertionError("gcd(n', b') != 1")
    num = c * e * e * d**3
    if num % (l * l1) or num // (l * l1) != lp * n1 * n1 + b2:
        raise AssertionError(f"reduced identity fails for {(c, b, e, d, n)}")
    chain = AbcChain(c, b, e, d, n, l, b1, n1, l1, b2, lp, None)
    tri = chain.triple()
    quality = None
    if tri is not None and math.gcd(tri[0], tri[1]) == 1 and rad(math.prod(tri)) > 1:
        quality = abc_quality(*tri)
    return AbcChain(c, b, e, d, n, l, b1, n1, l1, b2, lp, quality)


# ---------------------------------------------------------------------------
# random family F_2(H)


@dataclass(frozen=True)
class FamilyAverage:
    H: int
    N: int
    total: int
    family_size: int

    @property
    def average(self) -> Fraction:
        return Fraction(self.total, self.family_size)

    @property
    def ratio(self) -> float:
        """total / (H^(5/2) N + H^2 N^(5/3)); the bound's constant is unspecified."""
        scale = self.H**2.5 * self.N + self.H**2 * self.N ** (5 / 3)
        return self.total / scale if scale else math.nan


def _naive_slice(args) -> int:
    a2, H, N = args
    total = 0
    for a1 in range(-H, H + 1):
        for a0 in range(-H, H + 1):
            for n in range(1, N + 1):
                v = a0 + a1 * n + a2 * n * n
                if v > 0 and is_squarefull(v):
                    total += 1
    return total


def _fast_slice(args) -> int:
    a2, H, N, table = args
    total = 0
    for a1 in range(-H, H + 1):
        for n in range(1, N + 1):
            base = a1 * n + a2 * n * n
            lo, hi = max(1, base - H), base + H
            if hi >= lo:
                total += bisect_right(table, hi) - bisect_left(table, lo)
    return total


def random_family_average(H: int, N: int, method: str = "fast", workers: int | None = None) -> FamilyAverage:
    """Sum of S_f(N) over all a0 + a1 x + a2 x^2 with |a_i| <= H.

    'naive' tests every value; 'fast' counts, for each (a2, a1, n), the
    square-full numbers in the window of a0 + a1 n + a2 n^2 over a0.
    """
    if H < 0 or N < 1:
        raise DomainError("need H >= 0 and N >= 1")
    a2s = list(range(-H, H + 1))
    if method == "naive":
        parts = ordered_map(_naive_slice, [(a2, H, N) for a2 in a2s], workers)
    elif method == "fast":
        top = H * (1 + N + N * N)
        table = sieve_squarefull(top) if top >= 1 else []
        parts = ordered_map(_fast_slice, [(a2, H, N, table) for a2 in a2s], workers)
    else:
        raise DomainError(f"unknown method {method!r}")
    return FamilyAverage(H, N, sum(parts), (2 * H + 1) ** 3)


# ---------------------------------------------------------------------------
# fitting


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    residual: float
    count: int


def _validated(series) -> tuple[np.ndarray, np.ndarray]:
    pts = [(float(x), float(y)) for x, y in series]
    if len(pts) < 3:
        raise DomainError("need at least 3 points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise DomainError("x and y must be positive")
    xs = np.array([p[0] for p in pts])
    if np.all(xs == xs[0]):
        raise DomainError("all x values coincide")
    return xs, np.array([p[1] for p in pts])


def fit_exponent(series) -> FitResult:
    """Least squares fit of log y = slope log x + intercept."""
    xs, ys = _validated(series)
    lx, ly = np.log(xs), np.log(ys)
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = float(np.sum((A @ np.array([slope, intercept]) - ly) ** 2))
    return FitResult(float(slope), float(intercept), resid, len(xs))


def fit_log_constant(series) -> float:
    """c minimizing sum (y - c log x)^2, for counts expected to grow like c log x."""
    xs, ys = _validated(series)
    lx = np.log(xs)
    return float(np.dot(lx, ys) / np.dot(lx, lx))
