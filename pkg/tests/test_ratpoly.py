import random
from fractions import Fraction

import pytest
import sympy

from chatelet.ratpoly import (
    NEG_INF, POS_INF, RatPoly, discriminant, exists_nonneg_value, interpolate,
    isolate_real_roots, real_root_count, resultant, sample_points, sturm_sequence,
)
from oracles import sylvester_resultant

X = RatPoly.x()


def test_arith_and_division():
    f = RatPoly([1, 2, 3])
    g = RatPoly([-1, 1])
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree
    assert (X ** 2 - 1).exact_div(X - 1) == X + 1
    assert str(RatPoly([-3, 0, 1])) == "x^2 - 3"


@pytest.mark.parametrize("f,g", [
    ([-89726 * 14, 0, 0, 0, 14], [878755181 * 4393775906, 0, -4393775906 - 5 * 878755181, 0, 5]),
    ([1, 2, 3], [4, 5]),
    ([0, 1], [7]),
    ([-1, 0, 0, 1], [2, 0, 1, 0, 1]),
])
def test_resultant_matches_sylvester(f, g):
    assert resultant(RatPoly(f), RatPoly(g)) == sylvester_resultant(f, g)


def test_resultant_random_against_sylvester():
    rng = random.Random(11)
    for _ in range(60):
        f = [rng.randint(-9, 9) for _ in range(rng.randint(2, 6))] + [rng.randint(1, 5)]
        g = [rng.randint(-9, 9) for _ in range(rng.randint(1, 5))] + [rng.choice([-3, -1, 2])]
        assert resultant(RatPoly(f), RatPoly(g)) == sylvester_resultant(f, g)


def test_resultant_of_distinct_linear_factors():
    # [TRIVIAL] res(x - 1, x - 2) = (1 - 2)
    assert resultant(X - 1, X - 2) == -1


def test_discriminant_examples():
    # [TRIVIAL] disc(x^2 - 3) = 12 and the cubic defining Q(zeta7 + zeta7^-1) has disc 49
    assert discriminant(X ** 2 - 3) == 12
    assert discriminant(RatPoly([-1, -2, 1, 1])) == 49
    assert discriminant(X ** 2 + 1) == -4


def test_discriminant_against_sympy():
    x = sympy.Symbol("x")
    rng = random.Random(5)
    for _ in range(30):
        cs = [rng.randint(-7, 7) for _ in range(4)] + [rng.randint(1, 4)]
        expected = sympy.discriminant(sum(c * x ** i for i, c in enumerate(cs)), x)
        assert discriminant(RatPoly(cs)) == Fraction(int(expected))


def test_real_root_counts():
    assert real_root_count(RatPoly([-89726, 0, 0, 0, 1])) == 2
    assert real_root_count(X ** 4 + 115) == 0
    assert real_root_count((X - 1) ** 2 * (X + 2)) == 2
    f = (X - 1) * (X - 2) * (X - 3)
    assert real_root_count(f, 1, 3) == 2  # (1, 3] holds 2 and 3
    assert real_root_count(f, NEG_INF, 2) == 2
    assert real_root_count(f, 3, POS_INF) == 0


def test_sturm_sequence_ends_in_constant_for_squarefree():
    seq = sturm_sequence(RatPoly([-1, -2, 1, 1]))
    assert seq[-1].degree == 0


def test_sturm_random_cubics_against_numeric_roots():
    rng = random.Random(2024)
    x = sympy.Symbol("x")
    for _ in range(200):
        cs = [rng.randint(-20, 20) for _ in range(3)] + [rng.choice([-2, -1, 1, 3])]
        f = RatPoly(cs)
        expected = len(sympy.real_roots(sum(c * x ** i for i, c in enumerate(cs))))
        distinct = len(set(sympy.real_roots(sum(c * x ** i for i, c in enumerate(cs)))))
        assert real_root_count(f) == distinct
        assert distinct <= expected


def test_isolation_and_samples():
    f = RatPoly([-1, -2, 1, 1])
    iv = isolate_real_roots(f, width=1)
    assert len(iv) == 3
    for lo, hi in iv:
        assert real_root_count(f, lo, hi) == 1
        assert hi - lo <= 1
    pts = sample_points(f)
    assert len(pts) == 4
    assert all(f(p) != 0 for p in pts)
    signs = [f(p) > 0 for p in pts]
    assert signs == [False, True, False, True]
    # a rational root on an interval endpoint
    g = X * (X - 1) * (X + 1)
    pts = sample_points(g)
    assert len(pts) == 4 and all(g(p) != 0 for p in pts)


def test_sqrt3_isolating_interval():
    assert isolate_real_roots(X ** 2 - 3, width=1) == [(-2, -1), (1, 2)]


def test_exists_nonneg_value():
    assert exists_nonneg_value(X ** 4 + 115)
    assert not exists_nonneg_value(-(X ** 4 + 115))
    assert exists_nonneg_value(-(X ** 2 - 1) ** 2)
    assert exists_nonneg_value(RatPoly([-5, 1]))


def test_interpolate():
    f = RatPoly([3, 0, -2, 1])
    assert interpolate([(i, f(i)) for i in range(4)]) == f
