from fractions import Fraction

import pytest

from chatelet.errors import CriterionFailed, InsufficientPrecision, InvalidInput
from chatelet.localfield import (
    LocalElement, Padic, Real, UnramQuad, embed_poly, embed_rational, hensel_lift_root,
    is_square, poly_eval, smallest_nonresidue, square_class_key, stable_square_class,
    taylor_coeffs,
)
from chatelet.ratpoly import RatPoly

X = RatPoly.x()


def test_embed_examples():
    e = embed_rational(377, Padic(13), 4)
    assert (e.val, e.unit, e.prec) == (1, 29, 4)
    e = embed_rational(Fraction(1, 73), Padic(73), 3)
    assert (e.val, e.unit, e.prec) == (-1, 1, 3)
    e = embed_rational(-15, Padic(2), 5)
    assert (e.val, e.unit, e.prec) == (0, 17, 5)


def test_squares():
    assert is_square(embed_rational(-15, Padic(2), 5))
    assert not is_square(embed_rational(5, Padic(2), 5))
    assert is_square(embed_rational(4 * 17, Padic(2), 5))
    assert not is_square(embed_rational(377, Padic(13), 4))
    assert is_square(embed_rational(-15, Padic(61), 4)) == (pow(-15 % 61, 30, 61) == 1)
    assert not is_square(LocalElement.exact(-1, Real()))


def test_unramified_quadratic_squares():
    F = UnramQuad(3, -1)
    # every element of F_3 is a square in F_9
    assert is_square(LocalElement.exact(-1, F))
    assert is_square(LocalElement.exact(2, F))
    assert not is_square(LocalElement.exact(3, F))
    # 1 + i: norm 2, a nonsquare mod 3, so 1 + i is not a square in F_9
    assert not is_square(LocalElement(F, (1, 1)))
    assert is_square(LocalElement(F, (0, 2)))  # 2i = (1 + i)^2


def test_smallest_nonresidue():
    assert smallest_nonresidue(3) == 2
    assert smallest_nonresidue(73) == 5
    assert UnramQuad(7).d == 3


def test_unramquad_inverse_and_product():
    F = UnramQuad(5)
    x = LocalElement(F, (3, 2))
    assert (x * x.inverse()).coords == (1, 0)
    y = LocalElement(F, (Fraction(1, 5), 7), 6)
    z = y * x
    assert z.absprec == 6


def test_hensel_examples():
    r = hensel_lift_root(X ** 2 + 1, embed_rational(2, Padic(5), 2))
    assert r.unit == 7
    r = hensel_lift_root(X ** 2 - 3, embed_rational(5, Padic(11), 2))
    assert r.unit == 27
    with pytest.raises(CriterionFailed):
        hensel_lift_root(X ** 2 - 2, embed_rational(1, Padic(7), 3))


def test_hensel_result_is_root_to_precision():
    r = hensel_lift_root(X ** 2 + 1, embed_rational(2, Padic(5), 40))
    val = poly_eval(embed_poly(X ** 2 + 1, Padic(5)), LocalElement(Padic(5), r.coords))
    assert val.v_lower() >= 40


def test_hensel_in_unramified_extension():
    F = UnramQuad(3, 2)
    start = LocalElement(F, (0, 1), 10)  # delta^2 = 2 = -1 mod 3
    root = hensel_lift_root(X ** 2 + 1, start)
    assert (root * root + 1).v_lower() >= 10


def test_stable_square_class_examples():
    F = Padic(13)
    c = 878755181
    x0 = LocalElement(F, (Fraction(5, 169),), 4)  # valuation -2, six relative digits
    got = stable_square_class(X ** 2 - c, x0)
    assert got is not None and got[0] == -4
    assert got[1] == 25 % 13
    f = X - 1
    x1 = LocalElement(F, (1 + 13 ** 5 * 4,), 6)
    assert stable_square_class(f, x1) is None
    got = stable_square_class(X ** 2 - c, LocalElement(F, (0,), 6))
    assert got == (0, (-c) % 13)


def test_precision_tracking_is_conservative():
    F = Padic(5)
    a = LocalElement(F, (1,), 4)
    b = LocalElement(F, (1 + 5 ** 6,), 7)
    d = a - b
    with pytest.raises(InsufficientPrecision):
        d.valuation
    assert d.v_lower() == 4


def test_taylor():
    F = Padic(7)
    coeffs = embed_poly(RatPoly([1, 2, 3]), F)
    assert [c.coords[0] for c in taylor_coeffs(coeffs, LocalElement.exact(2, F))] == [17, 14, 3]


def test_square_class_key_real():
    assert square_class_key(LocalElement.exact(-3, Real())) == -1


def test_general_unramified_matches_quadratic_model():
    import random

    from chatelet.localfield import Unram

    rng = random.Random(7)
    Q, G = UnramQuad(5, 2), Unram(5, (-2, 0, 1))
    for _ in range(50):
        x = [Fraction(rng.randint(-40, 40), rng.choice([1, 5, 3])) for _ in range(2)]
        y = [Fraction(rng.randint(-40, 40), rng.choice([1, 25, 7])) for _ in range(2)]
        if not any(y):
            continue
        a, b = LocalElement(Q, x), LocalElement(Q, y)
        c, d = LocalElement(G, x), LocalElement(G, y)
        assert (a * b).coords == (c * d).coords
        assert (a / b).coords == (c / d).coords
        assert is_square(a * a + b) == is_square(c * c + d) if (a * a + b).known_nonzero() else True


def test_odd_degree_extension_keeps_nonsquares():
    from chatelet.localfield import Unram

    F = Unram(5, (4, 3, 1, 1))  # x^3 + x^2 + 3x + 4 is irreducible mod 5
    assert F.residue_field.q == 125
    for n in range(1, 5):
        assert is_square(LocalElement.exact(n, F)) == (n in (1, 4))
    t = LocalElement(F, (0, 1, 0))
    assert (t * t.inverse()).coords == (1, 0, 0)
    with pytest.raises(InvalidInput):
        Unram(5, (1, 0, 1))  # x^2 + 1 splits mod 5
