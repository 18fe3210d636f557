import math
from fractions import Fraction

import pytest

from sqfull.errors import DomainError
from sqfull.experiments import (
    abc_chain,
    abc_quality,
    beta_constant,
    exponents,
    fit_exponent,
    fit_log_constant,
    random_family_average,
    cell_tradeoff,
    psi_objective,
)
from sqfull.quadratic import QuadraticPoly, enumerate_triples, count_squarefull_values


def test_exponent_values():
    ex = exponents()
    assert ex.beta == pytest.approx(beta_constant())
    assert ex.varpi0 == pytest.approx(2 * ex.beta / (3 * math.log(3)))
    assert abs(ex.varpi0 - 0.1688) < 1e-3
    assert abs(ex.varpi_mordell - 0.4769) < 1e-3
    assert ex.e_opt_exponent == pytest.approx(2 / (5 + 12 * ex.varpi0))
    assert ex.psi_star_exact == Fraction(2, 5)
    assert ex.varpi_psi_exact == Fraction(29, 100)


def test_exponents_stable_under_refinement():
    a, b = exponents(1e-5), exponents(1e-6)
    assert abs(a.psi_star - b.psi_star) < 1e-6 and abs(a.varpi_psi - b.varpi_psi) < 1e-6


def test_psi_objective_max_is_at_two_fifths():
    best = psi_objective(Fraction(2, 5))
    assert best == Fraction(29, 100)
    for k in range(0, 1001):
        assert psi_objective(Fraction(k, 1000)) <= best


def test_tradeoff():
    t = cell_tradeoff(0)
    assert t.e_exponent == pytest.approx(0.4) and t.value == pytest.approx(0.4)
    t = cell_tradeoff(0.168862)
    assert t.value == pytest.approx(0.476904, abs=1e-6)
    assert abs(t.grid_value - t.value) < 1e-4
    with pytest.raises(DomainError):
        cell_tradeoff(-1)


def test_abc_example():
    ch = abc_chain(1, 4, 5, 2, 14)
    assert (ch.l, ch.n1, ch.b1, ch.l1, ch.b2, ch.l_prime) == (2, 7, 2, 2, 1, 1)
    assert ch.lhs == ch.rhs == 50
    assert ch.triple() == (49, 1, 50)
    assert ch.quality == pytest.approx(math.log(50) / math.log(70))


def test_abc_coprime_case():
    ch = abc_chain(1, 4, 1, 5, 11)
    assert (ch.l, ch.l1) == (1, 1)
    assert ch.lhs == 125


def test_abc_negative_b():
    # x^2 - 4: 12^2 - 4 = 140 is not square-full, 6^2 - 4 = 32 = 2^2 * 2^3
    ch = abc_chain(1, -4, 2, 2, 6)
    assert ch.lhs == ch.rhs


def test_abc_rejects_inconsistent():
    with pytest.raises(DomainError):
        abc_chain(1, 4, 5, 2, 13)


def test_abc_quality():
    assert abc_quality(1, 8, 9) == pytest.approx(math.log(9) / math.log(6))
    with pytest.raises(DomainError):
        abc_quality(2, 4, 6)


def test_abc_chain_all_x2_plus_4():
    for t in enumerate_triples(QuadraticPoly(1, 0, 4), 10**5):
        ch = abc_chain(1, 4, t.e, t.d, t.n)
        assert ch.lhs == ch.rhs


def test_family_zero():
    assert random_family_average(0, 5).total == 0


def test_family_h2_n10_by_hand():
    total = 0
    for a0 in range(-2, 3):
        for a1 in range(-2, 3):
            for a2 in range(-2, 3):
                total += count_squarefull_values(QuadraticPoly(a2, a1, a0), 10)
    assert random_family_average(2, 10, "naive").total == total == 127


def test_family_fast_equals_naive():
    for H in range(6):
        for N in range(1, 21):
            assert random_family_average(H, N, "naive").total == random_family_average(H, N, "fast").total


def test_family_workers_and_ratio():
    a = random_family_average(20, 100, workers=1)
    b = random_family_average(20, 100, workers=8)
    assert a == b
    assert a.family_size == 41**3
    assert a.ratio == a.total / (20**2.5 * 100 + 400 * 100 ** (5 / 3))


def test_fit_exact():
    fit = fit_exponent([(x, x) for x in (1, 2, 3, 10)])
    assert fit.slope == pytest.approx(1, abs=1e-9)
    fit = fit_exponent([(10**k, 10 ** (k / 2)) for k in range(2, 7)])
    assert fit.slope == pytest.approx(0.5, abs=1e-6) and fit.count == 5


def test_fit_rejects():
    for bad in ([(1, 1), (2, 2)], [(1, 1), (2, 0), (3, 3)], [(2, 1), (2, 2), (2, 3)]):
        with pytest.raises(DomainError):
            fit_exponent(bad)


def test_fit_log_constant():
    assert fit_log_constant([(x, 3 * math.log(x)) for x in (10, 100, 1000)]) == pytest.approx(3)
