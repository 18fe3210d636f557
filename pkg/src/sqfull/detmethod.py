"""Determinant method at desk scale.

Solutions are grouped into short intervals of s; inside each interval the
monomials s^k w^l of the points form a matrix whose kernel (when the rank
falls short of the number of monomials) gives an integral polynomial C_I
vanishing on every point.  The 2-D lattice attached to an interval is
reduced with Gauss-Lagrange to read off L1 and L2.
"""

from __future__ import annotations

import logging
import math
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from ._parallel import ordered_map
from .errors import DomainError
from .gaussian import curve_point, extract_solutions
from .quadratic import QuadraticPoly, dyadic_floor, scan_values, _triples

log = logging.getLogger(__name__)

__all__ = [
    "MeshParams",
    "MonomialMatrix",
    "VanishingForm",
    "ReducedLattice",
    "NoKernel",
    "choose_mesh",
    "build_matrix",
    "echelon",
    "kernel_form",
    "reduce_lattice",
    "l1_upper_probe",
    "interval_pipeline",
]


class NoKernel(DomainError):
    """The monomial matrix has full column rank."""


@dataclass(frozen=True)
class MeshParams:
    E: int
    D: int
    N: int
    eta: float
    M: int

    @property
    def threshold(self) -> float:
        return mesh_threshold(self.E, self.D, self.N, self.eta)


def mesh_threshold(E: int, D: int, N: int, eta: float) -> float:
    return 9 / 8 * (1 + eta) * math.log(E) * math.log(D) / math.log(N)


def choose_mesh(E: int, D: int, N: int, eta: float) -> MeshParams:
    """Smallest M in [D, N] with log M >= 9/8 (1 + eta) log E log D / log N."""
    if not (2 <= D <= N and 2 <= E <= N):
        raise DomainError(f"need 2 <= D <= N and 2 <= E <= N, got E={E}, D={D}, N={N}")
    if eta < 0:
        raise DomainError("eta must be >= 0")
    T = mesh_threshold(E, D, N, eta)
    M = max(D, math.ceil(math.exp(T)) if T < 700 else N + 1)
    while M > D and math.log(M - 1) >= T:
        M -= 1
    while M <= N and math.log(M) < T:
        M += 1
    if M > N:
        raise DomainError(f"mesh infeasible: log N = {math.log(N):.4g} < threshold {T:.4g}")
    return MeshParams(E, D, N, eta, M)


# ---------------------------------------------------------------------------
# monomial matrices and their kernels


@dataclass(frozen=True)
class MonomialMatrix:
    points: tuple[tuple[Fraction, Fraction], ...]
    K: int
    L: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def H(self) -> int:
        return (self.K + 1) * (self.L + 1)

    @property
    def J(self) -> int:
        return len(self.rows)

    @property
    def monomials(self) -> list[tuple[int, int]]:
        """(k, l) of each column: s^0 w^0, s^1 w^0, ..., s^K w^0, s^0 w^1, ..."""
        return [(k, l) for l in range(self.L + 1) for k in range(self.K + 1)]


def build_matrix(points, K: int, L: int) -> MonomialMatrix:
    pts = tuple((Fraction(s), Fraction(w)) for s, w in points)
    if not pts:
        raise DomainError("need at least one point")
    if K < 0 or L < 0:
        raise DomainError("degrees must be >= 0")
    rows = tuple(tuple(s**k * w**l for l in range(L + 1) for k in range(K + 1)) for s, w in pts)
    return MonomialMatrix(pts, K, L, rows)


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        den = reduce(math.lcm, (x.denominator for x in row), 1)
        out.append([int(x * den) for x in row])
    return out


def echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) row echelon form and its pivot columns."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if A else 0
    pivots: list[int] = []
    prev, r = 1, 0
    for c in range(n):
        if r == m:
            break
        i = next((i for i in range(r, m) if A[i][c] != 0), None)
        if i is None:
            continue
        A[r], A[i] = A[i], A[r]
        piv = A[r][c]
        for i in range(r + 1, m):
            lead = A[i][c]
            for j in range(c + 1, n):
                q, rem = divmod(piv * A[i][j] - lead * A[r][j], prev)
                if rem:
                    raise ArithmeticError("Bareiss division was not exact")
                A[i][j] = q
            A[i][c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return A[:r], pivots


@dataclass(frozen=True)
class VanishingForm:
    """sum c_{k,l} s^k w^l, coefficients in the matrix column order."""

    coefficients: tuple[int, ...]
    K: int
    L: int
    rank: int

    def terms(self) -> dict[tuple[int, int], int]:
        mons = [(k, l) for l in range(self.L + 1) for k in range(self.K + 1)]
        return {m: c for m, c in zip(mons, self.coefficients) if c}

    def __call__(self, s, w) -> Fraction:
        s, w = Fraction(s), Fraction(w)
        return sum((c * s**k * w**l for (k, l), c in self.terms().items()), Fraction(0))

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coefficients)


def kernel_form(matrix: MonomialMatrix) -> VanishingForm:
    """A primitive integral kernel vector of the monomial matrix."""
    A, pivots = echelon(_integer_rows(matrix.rows))
    H = matrix.H
    free = [c for c in range(H) if c not in pivots]
    if not free:
        raise NoKernel(f"rank {len(pivots)} equals H = {H}")
    x = [Fraction(0)] * H
    x[free[0]] = Fraction(1)
    for r in range(len(pivots) - 1, -1, -1):
        c = pivots[r]
        x[c] = -sum((A[r][j] * x[j] for j in range(c + 1, H)), Fraction(0)) / A[r][c]
    den = reduce(math.lcm, (v.denominator for v in x), 1)
    ints = [int(v * den) for v in x]
    g = reduce(math.gcd, ints)
    ints = [v // g for v in ints]
    if next(v for v in ints if v) < 0:
        ints = [-v for v in ints]
    form = VanishingForm(tuple(ints), matrix.K, matrix.L, len(pivots))
    for s, w in matrix.points:
        if form(s, w) != 0:
            raise AssertionError(f"kernel form does not vanish at {(s, w)}")
    return form


# ---------------------------------------------------------------------------
# lattice reduction


def _dot(u, v) -> int:
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True)
class ReducedLattice:
    y3: int
    M: int
    D: int
    g1: tuple[int, int]
    g2: tuple[int, int]

    @property
    def L1(self) -> float:
        return math.sqrt(self.D) / math.sqrt(_dot(self.g1, self.g1))

    @property
    def L2(self) -> float:
        return math.sqrt(self.D) / math.sqrt(_dot(self.g2, self.g2))

    @property
    def det(self) -> int:
        return self.g1[0] * self.g2[1] - self.g1[1] * self.g2[0]

    @property
    def sin_theta(self) -> float:
        return abs(self.det) / math.sqrt(_dot(self.g1, self.g1) * _dot(self.g2, self.g2))


def reduce_lattice(y3: int, M: int, D: int) -> ReducedLattice:
    """Gauss-Lagrange reduction of the basis (M, 0), (-y3, 1).

    This is sqrt(D) times the lattice {(M (y1 - s0 y2), y2) / sqrt(D)} with
    s0 = y3 / M, so integer arithmetic suffices.
    """
    if M < 1 or D < 1 or not 0 <= y3 < M:
        raise DomainError(f"need M >= 1, D >= 1, 0 <= y3 < M; got y3={y3}, M={M}, D={D}")
    u, v = (M, 0), (-y3, 1)
    if _dot(u, u) > _dot(v, v):
        u, v = v, u
    while True:
        nu = _dot(u, u)
        mu = (2 * _dot(u, v) + nu) // (2 * nu)  # nearest integer
        v = (v[0] - mu * u[0], v[1] - mu * u[1])
        if _dot(v, v) < nu:
            u, v = v, u
        else:
            break
    return ReducedLattice(y3, M, D, u, v)


@dataclass(frozen=True)
class L1Probe:
    D: int
    M: int
    samples: int
    max_l1: float
    soft_bound: float  # 10 D^0.55
    eps: float = 0.05

    @property
    def ratio_to_sqrt_d(self) -> float:
        return self.max_l1 / math.sqrt(self.D)

    @property
    def soft_ok(self) -> bool:
        return self.max_l1 <= self.soft_bound


def l1_upper_probe(D: int, M: int, samples: int, seed: int = 0) -> L1Probe:
    if samples < 1:
        raise DomainError("samples must be >= 1")
    rng = random.Random(seed)
    best = max(reduce_lattice(rng.randrange(M), M, D).L1 for _ in range(samples))
    probe = L1Probe(D, M, samples, best, 10 * D**0.55)
    if probe.soft_ok:
        log.info("L1 probe D=%d M=%d: max L1 %.4g <= 10 D^0.55 = %.4g", D, M, best, probe.soft_bound)
    else:
        log.warning("L1 probe D=%d M=%d: max L1 %.4g exceeds 10 D^0.55 = %.4g", D, M, best, probe.soft_bound)
    return probe


# ---------------------------------------------------------------------------
# per-interval pipeline


@dataclass
class IntervalReport:
    E: Fraction
    D: Fraction
    M: int
    interval_index: int
    J: int
    H: int
    rank: int
    coefficients: tuple[int, ...] | None
    vanishes: bool | None
    l1: float
    l2: float

    def as_json(self) -> dict:
        return {
            "E": str(self.E),
            "D": str(self.D),
            "M": self.M,
            "interval_index": self.interval_index,
            "J": self.J,
            "H": self.H,
            "rank": self.rank,
            "coefficients": list(self.coefficients) if self.coefficients is not None else None,
            "vanishes": self.vanishes,
            "l1": self.l1,
            "l2": self.l2,
        }


@dataclass
class PipelineReport:
    alpha: int
    N: int
    eta: float
    K: int | None
    L: int
    triples: int = 0
    points: int = 0
    degenerate: int = 0
    unextracted: list[int] = field(default_factory=list)  # n with no two-square factorization
    infeasible_cells: list[tuple[str, str]] = field(default_factory=list)
    intervals: list[IntervalReport] = field(default_factory=list)

    def l1_histogram(self) -> dict[str, int]:
        """Interval counts keyed by the dyadic cell of L1: 'X' means X < L1 <= 2X."""
        hist = Counter(str(Fraction(2) ** math.ceil(math.log2(r.l1)) / 2) for r in self.intervals)
        return dict(sorted(hist.items(), key=lambda kv: Fraction(kv[0])))


def _degree_k(K: int | None, L: int, E: int, D: int) -> int:
    if K is not None:
        return K
    return max(1, math.ceil(L * math.log(E) / math.log(D)))


def interval_pipeline(
    alpha: int, N: int, eta: float = 0.0, K: int | None = 3, L: int = 3, workers: int | None = None
) -> PipelineReport:
    """Run the determinant method over the solutions of x^2 + alpha^2 with N < n <= 2N.

    Points are grouped by dyadic cell (E, D), then by mesh interval
    (y3/M, (y3+1)/M] of s; K=None picks K = ceil(L log E / log D).
    """
    if alpha < 1 or N < 2:
        raise DomainError("need alpha >= 1 and N >= 2")
    f = QuadraticPoly(1, 0, alpha * alpha)
    report = PipelineReport(alpha, N, eta, K, L)
    triples = _triples(f, scan_values(f, N + 1, 2 * N, workers).hits)
    report.triples = len(triples)
    groups: dict[tuple[Fraction, Fraction], list] = defaultdict(list)
    for tr in triples:
        sols = extract_solutions(tr, alpha)
        if not sols:
            report.unextracted.append(tr.n)
            continue
        for sol in sols:
            pt = curve_point(sol)
            if pt is None:
                report.degenerate += 1
                continue
            report.points += 1
            groups[(dyadic_floor(tr.e), dyadic_floor(tr.d))].append(pt)

    def run_cell(key):
        E, D = key
        e_int, d_int = max(2, math.ceil(E)), max(2, math.ceil(D))
        try:
            M = choose_mesh(e_int, min(d_int, N), N, eta).M
        except DomainError:
            M = N
            report.infeasible_cells.append((str(E), str(D)))
        by_interval: dict[int, set] = defaultdict(set)
        for pt in groups[key]:
            by_interval[pt.interval(M)].add((pt.s, pt.w))
        rows = []
        kk = _degree_k(K, L, e_int, d_int)
        for y3 in sorted(by_interval):
            pts = sorted(by_interval[y3])
            mat = build_matrix(pts, kk, L)
            try:
                form = kernel_form(mat)
                coeffs, rank, vanish = form.coefficients, form.rank, True
            except NoKernel:
                coeffs, rank, vanish = None, mat.H, None
            lat = reduce_lattice(y3 % M, M, d_int)
            rows.append(IntervalReport(E, D, M, y3, mat.J, mat.H, rank, coeffs, vanish, lat.L1, lat.L2))
        return rows

    for rows in ordered_map(run_cell, sorted(groups), workers):
        report.intervals.extend(rows)
    report.infeasible_cells.sort()
    return report
