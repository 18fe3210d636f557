import math
import random
from fractions import Fraction

import pytest
import sympy

from sqfull.curves import (
    classify_cubic_form,
    cubic_form,
    mordell_points,
    pell_family,
    pell_like_count,
    mordell_substitution,
    thue_count,
)
from sqfull.errors import DomainError
from sqfull.gaussian import GaussianInt


def brute_mordell(D, box):
    return sorted((x, y) for x in range(-box, box + 1) for y in range(-box, box + 1) if y * y == x**3 + D)


@pytest.mark.parametrize("D,box", [(1, 60), (-2, 60), (8, 80), (-4, 40), (17, 60), (7, 50)])
def test_mordell_matches_brute(D, box):
    assert sorted(mordell_points(D, box).points) == brute_mordell(D, box)


def test_mordell_frozen_counts():
    assert mordell_points(1, 100).count == 5
    assert mordell_points(8, 500).count == 7
    assert mordell_points(7, 10**4).count == 0


def test_mordell_workers():
    assert mordell_points(-26, 50000, 1) == mordell_points(-26, 50000, 8)


def test_mordell_domain():
    with pytest.raises(DomainError):
        mordell_points(0, 10)


def test_substitution_example():
    (x, y), D = mordell_substitution(5, 1, 4, 2, 14)
    assert (x, y, D) == (50, 350, -2500)
    with pytest.raises(DomainError):
        mordell_substitution(5, 1, -4, 2, 14)


def test_substitution_random():
    rng = random.Random(4)
    for _ in range(500):
        e, a, d, n = rng.randint(1, 50), rng.randint(-9, 9) or 1, rng.randint(1, 30), rng.randint(0, 500)
        b = e * e * d**3 - a * n * n
        (x, y), D = mordell_substitution(e, a, b, d, n)
        assert y * y == x**3 + D


def test_pell_family():
    sols = pell_family(500)
    assert [s.n for s in sols] == [2, 14, 82, 478]
    assert [(s.d, s.k) for s in sols] == [(1, 1), (7, 5), (41, 29), (239, 169)]


def test_pell_family_brute():
    brute = [2 * d for d in range(1, 5000) if sympy.sqrt(Fraction(d * d + 1, 2)).is_integer]
    assert [s.n for s in pell_family(10**4)] == brute


def test_cubic_form_gaussian_identity():
    rng = random.Random(6)
    for _ in range(2000):
        c, d, y1, y2 = (rng.randint(-50, 50) for _ in range(4))
        z = GaussianInt(c, d) * GaussianInt(y1, y2) ** 3
        assert cubic_form(c, d, y1, y2) == z.im


def test_classify_linear_factors():
    for c, d in [(0, 1), (1, 0), (1, 1), (3, -3), (13, -9), (2, 11)]:
        cls = classify_cubic_form(c, d)
        assert not cls.irreducible
        assert cls.expand() == (d, 3 * c, -3 * d, -c)


def test_classify_matches_sympy():
    y1, y2 = sympy.symbols("y1 y2")
    for c in range(-6, 7):
        for d in range(-6, 7):
            if c == 0 and d == 0:
                continue
            poly = sympy.Poly(cubic_form(c, d, y1, y2), y1, y2)
            reducible = len(sympy.factor_list(poly)[1]) > 1 or sympy.factor_list(poly)[1][0][1] > 1
            assert classify_cubic_form(c, d).irreducible == (not reducible), (c, d)


def test_cofactor_discriminant():
    # frozen from exact division; the (p^2 - q^2) form would give 0 at (1, 1)
    assert classify_cubic_form(1, 1).cofactor_discriminant == 12
    assert classify_cubic_form(13, -9).cofactor_discriminant == 300
    assert classify_cubic_form(2, 11).cofactor_discriminant == 300
    for c in range(-15, 16):
        for d in range(-15, 16):
            if d == 0 or math.gcd(c, d) != 1:
                continue
            cls = classify_cubic_form(c, d)
            if cls.irreducible:
                continue
            base = 3 * (cls.p**2 + cls.q**2) ** 2
            assert cls.cofactor_discriminant in (base, 4 * base)


def test_thue_brute():
    for c, d, alpha in [(2, 1, 2), (1, 3, -7), (0, 1, 1), (5, 2, 9)]:
        box = 15
        brute = [
            (a, b)
            for a in range(-box, box + 1)
            for b in range(-box, box + 1)
            if cubic_form(c, d, a, b) == alpha
        ]
        assert list(thue_count(c, d, alpha, box).solutions) == brute


def test_thue_reference():
    r = thue_count(2, 1, 12, 5)
    assert r.reference == 3 ** (1 + 2)
    assert r.primitive_count <= r.count


def test_pell_like_count():
    assert pell_like_count(-1, 25, 10) == 12
    brute = sum(1 for a in range(-20, 21) for b in range(-20, 21) if a * a - 2 * b * b == 7)
    assert pell_like_count(2, 7, 20) == brute
