import random
from fractions import Fraction

import pytest

from chatelet.errors import InvalidInput
from chatelet.numfield import (
    RAMIFIED, NumberField, factor_mod_p, find_split_primes, local_embed, places_above,
    splitting_type, verify_projective_point,
)
from chatelet.ratpoly import RatPoly

CUBIC = NumberField([-1, -2, 1, 1])
QSQRT3 = NumberField([-3, 0, 1])
QI = NumberField([1, 0, 1])


def test_find_split_primes_examples():
    assert find_split_primes(CUBIC, 4, 2) == [13, 29, 41, 43]
    assert {11, 23} <= set(find_split_primes(QSQRT3, 3, 2))
    assert find_split_primes(QI, 1, 2) == [5]
    assert find_split_primes(QSQRT3, 2, 2, avoid=[13]) == [11, 23]


def test_split_primes_of_cubic_are_plus_minus_one_mod_7():
    for p in find_split_primes(CUBIC, 15, 2):
        assert p % 7 in (1, 6)


def test_splitting_types():
    assert splitting_type(CUBIC, 7) == RAMIFIED
    assert splitting_type(CUBIC, 13) == [1, 1, 1]
    assert splitting_type(CUBIC, 5) == [3]
    assert splitting_type(QI, 3) == [2]
    assert splitting_type(QI, 2) == RAMIFIED


def test_factor_mod_p_reconstructs_polynomial():
    rng = random.Random(3)
    for p in [2, 3, 5, 7, 31, 101]:
        for _ in range(10):
            f = RatPoly([rng.randint(-20, 20) for _ in range(rng.randint(2, 6))] + [1])
            g = RatPoly(f.coeffs)
            factors = factor_mod_p(f, p) if _squarefree_mod(f, p) else None
            if factors is None:
                continue
            prod = RatPoly([1])
            for fac in factors:
                prod = prod * RatPoly(fac)
            assert all((a - b) % p == 0 for a, b in zip(prod.integer_coeffs(), g.integer_coeffs()))


def _squarefree_mod(f, p):
    from chatelet.finite import ResidueField

    rf = ResidueField(p)
    g = [rf.elem(int(c)) for c in f.coeffs]
    return len(rf.pgcd(g, rf.pderiv(g))) == 1


def test_signature_and_irreducibility():
    assert CUBIC.signature() == (3, 0)
    assert QI.signature() == (0, 1)
    assert QSQRT3.irreducibility_verified
    reducible = NumberField([-2, 1, 1])  # (x - 1)(x + 2)
    assert not reducible.irreducibility_verified
    with pytest.raises(InvalidInput):
        NumberField([1, 0, 2])


def test_element_arithmetic():
    t = CUBIC.theta
    assert t ** 3 + t ** 2 - 2 * t - 1 == 0
    x = CUBIC([1, 2, 3])
    assert x * x.inverse() == 1
    assert QI([5, 1]).norm() == 26


def test_local_embed_examples():
    inert = places_above(QI, 3)[0]
    e = local_embed(QI([5, 1]), inert, 8)
    assert e.field.d == -1
    assert e.unit_residue(1) == (2, 1)
    split = places_above(QI, 5)
    roots = {local_embed(QI.theta, pl, 4).unit % 5 for pl in split}
    assert roots == {2, 3}
    real = places_above(QSQRT3, "inf")
    assert local_embed(QSQRT3.theta, real[1], 10).interval == (1, 2)
    assert local_embed(QSQRT3.theta, real[0], 10).sign == -1


def test_local_embed_is_a_ring_homomorphism():
    rng = random.Random(17)
    N = 12
    for F, p in [(CUBIC, 13), (CUBIC, 29), (QI, 5), (QI, 3), (QSQRT3, 11), (QSQRT3, 5)]:
        for pl in places_above(F, p):
            for _ in range(10):
                x = F([Fraction(rng.randint(-50, 50), rng.choice([1, 1, 2, 7])) for _ in range(F.degree)])
                y = F([rng.randint(-50, 50) for _ in range(F.degree)])
                ex, ey, exy = (local_embed(z, pl, N) for z in (x, y, x * y))
                diff = ex * ey - exy
                assert diff.v_lower() >= N - 2, (F, pl, diff)
                assert (ex + ey - local_embed(x + y, pl, N)).v_lower() >= N - 2


def test_verify_projective_points():
    eqn = {(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): 16}
    s3 = QSQRT3.theta
    assert verify_projective_point(eqn, [4, 4 * s3, 1])
    assert verify_projective_point(eqn, [4, -4 * s3, 1])
    assert verify_projective_point(eqn, [0, 1, 0])
    assert not verify_projective_point(eqn, [4, 4, 1], QSQRT3)
    i = QI.theta
    assert verify_projective_point(eqn, [0, 4 * i, 1])
    # scaling invariance
    lam = QSQRT3([2, 5])
    assert verify_projective_point(eqn, [4 * lam, 4 * s3 * lam, lam])
    a = CUBIC.theta
    eqn2 = {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): 343, (0, 0, 3): 2401}
    for w0 in (7 * a ** 2 + 14 * a - 7, 7 * a ** 2 - 7 * a - 14, -14 * a ** 2 - 7 * a + 21):
        assert verify_projective_point(eqn2, [w0, 0, 1])
    with pytest.raises(InvalidInput):
        verify_projective_point(eqn, [0, 0, 0], QI)
