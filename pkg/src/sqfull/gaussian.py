"""Gaussian-integer coordinates of solutions to e^2 d^3 = n^2 + alpha^2.

A solution factors as (x1 + i x2)^2 (y1 + i y2)^3 = +-n + alpha i with
e = x1^2 + x2^2 and d = y1^2 + y2^2.  Taking imaginary parts,

    alpha = (x1^2 - x2^2) q_a(y1, y2) + 2 x1 x2 q_b(y1, y2)

with q_a = 3 y1^2 y2 - y2^3 and q_b = y1^3 - 3 y1 y2^2.  The larger of
|q_a|, |q_b| is q1; t = z1/z2 is then close to phi(s) = -q2/q1 at the
ratio s of y1 and y2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arith import isqrt, mobius_table, mu, two_square_representations
from .errors import DomainError
from .quadratic import SolutionTriple

__all__ = [
    "GaussianInt",
    "Branch",
    "QForms",
    "ExtractedSolution",
    "CurvePoint",
    "MagnitudeReport",
    "imaginary_part_form",
    "normalize",
    "q_forms",
    "phi",
    "all_representations",
    "extract_solutions",
    "is_degenerate",
    "curve_point",
    "tau_of_w",
    "tau_residual",
    "verify_magnitude_claim",
]


@dataclass(frozen=True)
class GaussianInt:
    re: int
    im: int

    def __mul__(self, other: "GaussianInt") -> "GaussianInt":
        return GaussianInt(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    def __pow__(self, k: int) -> "GaussianInt":
        out = GaussianInt(1, 0)
        for _ in range(k):
            out = out * self
        return out

    def conjugate(self) -> "GaussianInt":
        return GaussianInt(self.re, -self.im)

    @property
    def norm(self) -> int:
        return self.re * self.re + self.im * self.im


def imaginary_part_form(x1: int, x2: int, y1: int, y2: int) -> int:
    return (x1 * x1 - x2 * x2) * (3 * y1 * y1 * y2 - y2**3) + 2 * x1 * x2 * (y1**3 - 3 * y1 * y2 * y2)


def normalize(x1: int, x2: int, y1: int, y2: int) -> tuple[int, int, int, int]:
    """Bring a quadruple to |x1| <= |x2|, x1 x2 >= 0 keeping the form's value.

    The x pair only enters squared, so it is also flipped to x2 >= 0.
    """
    if abs(x1) > abs(x2):
        x1, x2, y2 = x2, x1, -y2
    if x1 * x2 < 0:
        x2, y1 = -x2, -y1
    if x2 < 0:
        x1, x2 = -x1, -x2
    return x1, x2, y1, y2


@dataclass(frozen=True)
class Branch:
    """Which form is q1 ('a' or 'b') and whether s = y2/y1 (swapped) or y1/y2."""

    q1: str
    swapped: bool = False

    def __str__(self) -> str:
        return f"q1=q_{self.q1}{',s=y2/y1' if self.swapped else ''}"


@dataclass(frozen=True)
class QForms:
    q_a: int
    q_b: int
    branch: Branch

    @property
    def q1(self) -> int:
        return self.q_a if self.branch.q1 == "a" else self.q_b

    @property
    def q2(self) -> int:
        return self.q_b if self.branch.q1 == "a" else self.q_a


def q_forms(y1: int, y2: int) -> QForms:
    if y1 == 0 and y2 == 0:
        raise DomainError("(y1, y2) must be nonzero")
    q_a = 3 * y1 * y1 * y2 - y2**3
    q_b = y1**3 - 3 * y1 * y2 * y2
    # ties go to q_a
    pick = "a" if abs(q_a) >= abs(q_b) else "b"
    return QForms(q_a, q_b, Branch(pick, abs(y1) > abs(y2)))


def phi(s: Fraction, branch: Branch) -> Fraction:
    """-q2/q1 evaluated at (s, 1), or at (1, s) for a swapped branch."""
    s = Fraction(s)
    y1, y2 = (Fraction(1), s) if branch.swapped else (s, Fraction(1))
    q_a = 3 * y1 * y1 * y2 - y2**3
    q_b = y1**3 - 3 * y1 * y2 * y2
    q1, q2 = (q_a, q_b) if branch.q1 == "a" else (q_b, q_a)
    if q1 == 0:
        raise DomainError(f"q1 vanishes at s = {s} on branch {branch}")
    return -q2 / q1


# ---------------------------------------------------------------------------
# extraction


def all_representations(m: int) -> list[tuple[int, int]]:
    """Every ordered signed (u, v) with u^2 + v^2 = m."""
    out = set()
    for a, b in two_square_representations(m):
        for sa, sb in product((1, -1), repeat=2):
            out.add((sa * a, sb * b))
            out.add((sb * b, sa * a))
    return sorted(out)


@dataclass(frozen=True)
class ExtractedSolution:
    x1: int
    x2: int
    y1: int
    y2: int
    alpha: int
    n: int  # real part of the Gaussian product, +-n
    branch: Branch

    @property
    def z1(self) -> int:
        return self.x1 * self.x1 - self.x2 * self.x2

    @property
    def z2(self) -> int:
        return 2 * self.x1 * self.x2


def extract_solutions(triple: SolutionTriple, alpha: int | None = None) -> list[ExtractedSolution]:
    """Normalized quadruples with (x1 + i x2)^2 (y1 + i y2)^3 = +-n + alpha i.

    An empty list means e or d has no usable two-square representation; the
    caller should record it rather than treat it as an error.
    """
    if alpha is None:
        alpha, exact = isqrt(triple.constant)
        if not exact:
            raise DomainError("triple does not come from x^2 + alpha^2")
    n, e, d = triple.n, triple.e, triple.d
    if e * e * d**3 != n * n + alpha * alpha:
        raise DomainError(f"{e}^2 {d}^3 != {n}^2 + {alpha}^2")
    if mu(d) == 0:
        raise DomainError(f"d = {d} is not square-free")
    found = set()
    for x1, x2 in all_representations(e):
        sq = GaussianInt(x1, x2) ** 2
        for y1, y2 in all_representations(d):
            z = sq * GaussianInt(y1, y2) ** 3
            if z.im == alpha and abs(z.re) == n:
                found.add(normalize(x1, x2, y1, y2))
    out = []
    for x1, x2, y1, y2 in sorted(found):
        z = GaussianInt(x1, x2) ** 2 * GaussianInt(y1, y2) ** 3
        out.append(ExtractedSolution(x1, x2, y1, y2, alpha, z.re, q_forms(y1, y2).branch))
    return out


def is_degenerate(sol: ExtractedSolution) -> bool:
    """z1 z2 = 0 (x1 = 0 or |x1| = |x2|) or a zero y coordinate."""
    return sol.z1 == 0 or sol.z2 == 0 or sol.y1 == 0 or sol.y2 == 0


# ---------------------------------------------------------------------------
# curve points


@dataclass(frozen=True)
class CurvePoint:
    """(s, t, w) for one solution; s lies in (0, 1].

    Points with s < 0 are folded by (x1, x2, y1, y2) -> (-x1, x2, -y1, y2),
    which flips s, w and t together and keeps alpha; `folded` records it,
    and w is then negative.
    """

    s: Fraction
    t: Fraction
    w: Fraction
    branch: Branch
    folded: bool
    alpha: int
    n: int

    def interval(self, M: int) -> int:
        """Index y3 with s in (y3/M, (y3 + 1)/M]."""
        return math.ceil(self.s * M) - 1


def tau_of_w(w: Fraction, branch: Branch) -> Fraction:
    w = Fraction(w)
    if w == 0 or w * w == 1:
        raise DomainError(f"degenerate w = {w}")
    if branch.q1 == "a":
        return (w * w - 1) / (2 * w)
    return 2 * w / (w * w - 1)


def curve_point(sol: ExtractedSolution) -> CurvePoint | None:
    """The curve point of a solution, or None when it is degenerate."""
    if is_degenerate(sol):
        return None
    x1, x2, y1, y2 = sol.x1, sol.x2, sol.y1, sol.y2
    branch = q_forms(y1, y2).branch
    s = Fraction(y2, y1) if branch.swapped else Fraction(y1, y2)
    folded = s < 0
    if folded:
        x1, y1 = -x1, -y1
        s = -s
    w = Fraction(x1, x2)
    z1, z2 = x1 * x1 - x2 * x2, 2 * x1 * x2
    t = Fraction(z1, z2) if branch.q1 == "a" else Fraction(z2, z1)
    return CurvePoint(s, t, w, branch, folded, sol.alpha, abs(sol.n))


def tau_residual(point: CurvePoint, N: int, bound: float | None = None) -> Fraction:
    """|t - phi(s)| with t recomputed from w; optionally require N * residual <= bound."""
    t = tau_of_w(point.w, point.branch)
    if t != point.t:
        raise AssertionError("t and w disagree on the branch")
    residual = abs(t - phi(point.s, point.branch))
    if bound is not None and residual * N > bound:
        raise AssertionError(f"residual {float(residual):.3g} exceeds {bound}/N at N = {N}")
    return residual


# ---------------------------------------------------------------------------
# the D^(3/2) magnitude claim


@dataclass(frozen=True)
class MagnitudeReport:
    d_max: int
    checked: int
    infimum: float
    witness: tuple[int, int, int]  # (d, y1, y2) attaining the infimum

    # min over t in [0, 1] of max(|3t^2 - 1|, t(3 - t^2)) is 12 sqrt(3) - 20
    ANALYTIC_FLOOR = (12 * math.sqrt(3) - 20) / 2**1.5


def verify_magnitude_claim(d_max: int) -> MagnitudeReport:
    """max(|q_a|, |q_b|) >= d^(3/2) / 4 over square-free d <= d_max and all reps."""
    if d_max < 2:
        raise DomainError("d_max must be >= 2")
    mob = mobius_table(d_max)
    best, witness, checked = math.inf, (0, 0, 0), 0
    for d in range(1, d_max + 1):
        if mob[d] == 0:
            continue
        for a, b in two_square_representations(d):
            for y1, y2 in ((a, b), (b, a)):
                qf = q_forms(y1, y2)
                big = max(abs(qf.q_a), abs(qf.q_b))
                checked += 1
                # big >= d^1.5 / 4 exactly: 16 big^2 >= d^3
                if 16 * big * big < d**3:
                    raise AssertionError(f"magnitude claim fails at d={d}, (y1,y2)=({y1},{y2})")
                ratio = big / d**1.5
                if ratio < best:
                    best, witness = ratio, (d, y1, y2)
    return MagnitudeReport(d_max, checked, best, witness)
