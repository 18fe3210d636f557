import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqfull.errors import DomainError
from sqfull.quadratic import (
    QuadraticPoly,
    count_squarefull_values,
    dyadic_decomposition_check,
    dyadic_floor,
    enumerate_triples,
    estermann_per_d_profile,
    is_admissible,
    m_cell_count,
    majorant,
    majorant_check,
    scan_values,
    window_triples_d_major,
)
from sqfull.squarefull import is_squarefull

coef = st.integers(min_value=-30, max_value=30)


def brute_count(f, N):
    return sum(1 for n in range(1, N + 1) if f(n) > 0 and is_squarefull(f(n)))


@given(st.integers(min_value=-50, max_value=50).filter(bool), coef, coef, st.integers(-100, 100))
def test_majorant_identity(a, b, c, x):
    f = QuadraticPoly(a, b, c)
    g = majorant(f)
    assert 4 * a * a * f(x) == g(2 * a * x + b)
    assert g.p == a


def test_majorant_examples():
    assert majorant(QuadraticPoly(1, 0, 4)).q == 16
    assert majorant(QuadraticPoly(1, 1, 0)).q == -1
    with pytest.raises(DomainError):
        majorant(QuadraticPoly(0, 1, 1))


def test_admissible():
    assert is_admissible(QuadraticPoly(1, 0, 4))
    assert not is_admissible(QuadraticPoly(1, 2, 1))


def test_parse():
    assert QuadraticPoly.parse("1, 0,4") == QuadraticPoly(1, 0, 4)
    with pytest.raises(DomainError):
        QuadraticPoly.parse("1,2")


def test_x2_plus_4_small():
    f = QuadraticPoly(1, 0, 4)
    triples = enumerate_triples(f, 14)
    assert [(t.n, t.e, t.d) for t in triples] == [(2, 1, 2), (11, 1, 5), (14, 5, 2)]
    assert count_squarefull_values(f, 14) == 3


def test_identity_polynomial_count():
    assert count_squarefull_values(QuadraticPoly(0, 1, 0), 100) == 14


def test_scan_matches_brute_random():
    rng = random.Random(5)
    for _ in range(25):
        f = QuadraticPoly(rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(-20, 20))
        assert count_squarefull_values(f, 3000) == brute_count(f, 3000)


def test_scan_counts_skipped():
    f = QuadraticPoly(-1, 0, 50)  # positive only for n <= 7
    scan = scan_values(f, 1, 100)
    assert scan.skipped == 93
    assert scan.hits == [n for n in range(1, 8) if is_squarefull(50 - n * n)]


def test_scan_independent_of_workers():
    f = QuadraticPoly(3, -7, 11)
    assert scan_values(f, 1, 200000, 1) == scan_values(f, 1, 200000, 8)


def test_triples_recompose():
    f = QuadraticPoly(2, 3, -5)
    for t in enumerate_triples(f, 5000):
        assert t.e**2 * t.d**3 == f(t.n)


def test_dyadic_floor():
    assert dyadic_floor(1) == Fraction(1, 2)
    assert dyadic_floor(2) == 1
    assert dyadic_floor(3) == 2
    assert dyadic_floor(4) == 2
    assert dyadic_floor(5) == 4


@pytest.mark.parametrize("alpha", [1, 2, 3, 4])
def test_cell_methods_agree(alpha):
    f = QuadraticPoly(1, 0, alpha * alpha)
    N = 3000
    for E in (Fraction(1, 2), 1, 2, 4, 16, 64, 512, 2048):
        for D in (Fraction(1, 2), 1, 2, 4, 8, 16, 32):
            assert m_cell_count(f, N, E, D, "n") == m_cell_count(f, N, E, D, "d")


def test_d_major_matches_scan():
    f = QuadraticPoly(1, 0, 9)
    N = 5000
    scan = sorted(t.n for t in enumerate_triples(f, 2 * N) if t.n > N)
    dm = window_triples_d_major(f, N, (Fraction(1, 2), 10**4), (Fraction(1, 2), 10**5))
    assert sorted(t.n for t in dm) == scan


@pytest.mark.parametrize("alpha", [1, 2, 4])
def test_dyadic_check_small(alpha):
    chk = dyadic_decomposition_check(QuadraticPoly(1, 0, alpha * alpha), 10**4)
    assert chk.equal


def test_dyadic_check_other_quadratic():
    chk = dyadic_decomposition_check(QuadraticPoly(2, 1, 7), 5000)
    assert chk.equal


def test_majorant_check_counterexample():
    # f(n) = f(20 - n): n = 9, 11 share |2an + b| = 2
    r = majorant_check(QuadraticPoly(-1, 20, 1), 10**4)
    assert (r.s_f, r.g_plain) == (3, 2)
    assert not r.plain_ok and r.folded_ok


def test_majorant_check_random():
    rng = random.Random(11)
    for _ in range(20):
        f = QuadraticPoly(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(-20, 20), rng.randint(-20, 20))
        if is_admissible(f):
            assert majorant_check(f, 2000).folded_ok


def test_estermann_profile():
    prof = estermann_per_d_profile(QuadraticPoly(1, 0, 4), 1000, 2)
    for n, e in prof.positive_pairs:
        assert n * n + 4 == 8 * e * e
    assert len(prof.positive_pairs) == 4
    with pytest.raises(DomainError):
        estermann_per_d_profile(QuadraticPoly(1, 1, 4), 100, 2)
