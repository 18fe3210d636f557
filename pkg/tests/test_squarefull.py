import math

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from sqfull.errors import DomainError
from sqfull.squarefull import (
    SquarefullDecomposition,
    bateman_grosswald,
    count_squarefull,
    count_with_prediction,
    decompose_e2d3,
    is_squarefull,
    sieve_squarefull,
)


def brute_squarefull(n):
    return all(e >= 2 for e in sympy.factorint(n).values())


def test_first_values():
    assert sieve_squarefull(100) == [1, 4, 8, 9, 16, 25, 27, 32, 36, 49, 64, 72, 81, 100]


def test_sieve_matches_brute_force():
    assert sieve_squarefull(20000) == [n for n in range(1, 20001) if brute_squarefull(n)]


@pytest.mark.parametrize("limit", [1, 2, 3, 4, 7, 8, 1000, 12345, 10**6])
def test_count_matches_sieve(limit):
    assert count_squarefull(limit) == len(sieve_squarefull(limit))


def test_sieve_independent_of_workers():
    assert sieve_squarefull(300000, workers=1) == sieve_squarefull(300000, workers=8)


@given(st.integers(min_value=1, max_value=10**14))
def test_is_squarefull_matches_factorint(n):
    assert is_squarefull(n) == brute_squarefull(n)


def test_is_squarefull_large():
    p = sympy.nextprime(10**12)
    q = sympy.nextprime(10**13)
    assert is_squarefull(p**2 * q**3)
    assert not is_squarefull(p**2 * q)
    assert is_squarefull(1)


def test_is_squarefull_domain():
    with pytest.raises(DomainError):
        is_squarefull(0)


@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=1, max_value=1000))
def test_decompose_round_trip(e, d):
    d = math.prod(sympy.primefactors(d))  # square-free
    dec = decompose_e2d3(e * e * d**3)
    assert (dec.e, dec.d) == (e, d)


def test_decompose_examples():
    assert decompose_e2d3(72) == SquarefullDecomposition(72, 3, 2)
    assert decompose_e2d3(1) == SquarefullDecomposition(1, 1, 1)
    assert decompose_e2d3(2**5) == SquarefullDecomposition(32, 2, 2)
    with pytest.raises(DomainError):
        decompose_e2d3(12)


def test_decomposition_validates():
    with pytest.raises(ValueError):
        SquarefullDecomposition(72, 1, 72)


def test_main_term_constants():
    c_half = float(mpmath.zeta(1.5) / mpmath.zeta(3))
    c_third = float(mpmath.zeta(2 / 3) / mpmath.zeta(2))
    assert bateman_grosswald(1.0) == pytest.approx(c_half + c_third, abs=1e-12)
    assert bateman_grosswald(64.0) == pytest.approx(8 * c_half + 4 * c_third, abs=1e-10)
    # frozen after the mpmath comparison above
    assert c_half == pytest.approx(2.1732543125, abs=1e-9)
    assert c_third == pytest.approx(-1.4879506, abs=1e-6)


def test_count_report():
    r = count_with_prediction(10**6)
    assert r.S == 2027
    assert abs(r.deviation) <= 5 * 10
    assert r.normalized_deviation == pytest.approx(r.deviation / 10)
