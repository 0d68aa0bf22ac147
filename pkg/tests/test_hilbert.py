import random
from fractions import Fraction

import pytest

from chatelet.errors import InvalidInput, Unsatisfiable
from chatelet.hilbert import (
    INF, conic_oracle, hilbert_symbol, hilbert_symbol_local, product_formula_check,
    sample_with_symbol,
)
from chatelet.localfield import LocalElement, UnramQuad

PLACES = [INF, 2, 3, 5, 7, 13, 29, 73]


def _rand_rational(rng):
    num = rng.choice([-1, 1]) * rng.randint(1, 400)
    den = rng.randint(1, 30)
    return Fraction(num, den)


def test_reference_symbols():
    # symbol values used by the Q(i) example
    assert hilbert_symbol(-15, 2, 5) == -1
    assert hilbert_symbol(-15, 30, INF) == 1
    # the V2 example's c is a non-norm at 73
    assert hilbert_symbol(73, 99, 73) == -1


def test_zero_rejected():
    with pytest.raises(InvalidInput):
        hilbert_symbol(0, 3, 5)


def test_symmetry_and_bilinearity():
    rng = random.Random(7)
    for _ in range(500):
        a, b, c = (_rand_rational(rng) for _ in range(3))
        v = rng.choice(PLACES)
        assert hilbert_symbol(a, b, v) == hilbert_symbol(b, a, v)
        assert hilbert_symbol(a, b * c, v) == hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v)
        assert hilbert_symbol(a, -a, v) == 1
        assert hilbert_symbol(a, b * 49, v) == hilbert_symbol(a, b, v)


def test_product_formula_random():
    rng = random.Random(99)
    for _ in range(300):
        assert product_formula_check(_rand_rational(rng), _rand_rational(rng))


@pytest.mark.parametrize("v", [2, 3, 5, 13])
def test_formula_matches_conic_oracle(v):
    vals = [1, 2, 3, 5, v, 2 * v]
    vals += [-x for x in vals]
    for a in vals:
        for b in vals:
            effort = 6 if v == 2 else 3
            assert hilbert_symbol(a, b, v) == (1 if conic_oracle(a, b, v, effort) else -1), (a, b, v)


def test_real_oracle():
    assert conic_oracle(-1, -1, INF) is False
    assert conic_oracle(-1, 3, INF) is True


def test_sample_with_symbol():
    assert sample_with_symbol(73, 73, -1, want_unit=True) == 5
    assert sample_with_symbol(-23, INF, -1) == -1
    with pytest.raises(Unsatisfiable):
        sample_with_symbol(9, 5, -1)
    with pytest.raises(Unsatisfiable):
        sample_with_symbol(2, 3, -1, want_unit=True)  # 2 is a 3-adic unit


def test_unramified_symbol_against_norm_criterion():
    # In an unramified extension of odd residue degree 2, (u, pi) = 1 for every unit u
    # because all residues of F_p are squares in F_{p^2}; and (unit, unit) = 1.
    F = UnramQuad(3, -1)
    three = LocalElement.exact(3, F)
    for coords in [(1, 0), (2, 0), (1, 1), (0, 1), (2, 1)]:
        u = LocalElement(F, coords)
        chi = F.residue_field.chi(u.unit_residue(1))
        assert hilbert_symbol_local(u, three) == chi
        assert hilbert_symbol_local(u, LocalElement.exact(7, F)) == 1
    assert hilbert_symbol_local(LocalElement.exact(-15, F), LocalElement.exact(-2, F)) == 1
