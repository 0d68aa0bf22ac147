"""Hilbert symbols over Q and over the supported local fields.

Places of Q are written as a prime ``p`` or the string ``"inf"``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

from sympy import factorint

from .errors import EffortExhausted, InvalidInput, SearchExhausted, Unsatisfiable, UnsupportedPlace
from .localfield import LocalElement, LocalField, Padic, Real, vp
from .ratpoly import as_rational

INF = "inf"
Place = Union[int, str]


def place_key(v: Place):
    """Sort key putting the real place first."""
    return (0, 0) if v == INF else (1, v)


def local_field_of(v: Place) -> LocalField:
    if v == INF:
        return Real()
    if not isinstance(v, int) or v < 2:
        raise InvalidInput(f"not a place of Q: {v!r}")
    return Padic(v)


def hilbert_symbol_local(a: LocalElement, b: LocalElement) -> int:
    """(a, b) in the local field of a and b; both must be nonzero."""
    field = a.field
    if b.field != field:
        raise InvalidInput("symbol arguments live in different fields")
    if field.is_real:
        if a.sign() == 0 or b.sign() == 0:
            raise InvalidInput("Hilbert symbol of zero")
        return -1 if (a.sign() < 0 and b.sign() < 0) else 1
    if not a.known_nonzero() or not b.known_nonzero():
        raise InvalidInput("Hilbert symbol of zero")
    alpha, beta = a.valuation, b.valuation
    if field.p == 2:
        if field.dim != 1:
            raise UnsupportedPlace("dyadic unramified extensions")
        u = a.unit_residue(3)[0]
        w = b.unit_residue(3)[0]
        e = _eps(u) * _eps(w) + alpha * _omega(w) + beta * _omega(u)
        return -1 if e % 2 else 1
    rf = field.residue_field
    sign = -1 if (alpha * beta * ((rf.q - 1) // 2)) % 2 else 1
    chi_u = rf.chi(a.unit_residue(1))
    chi_w = rf.chi(b.unit_residue(1))
    return sign * chi_u ** (beta % 2) * chi_w ** (alpha % 2)


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert_symbol(a, b, v: Place) -> int:
    """(a, b)_v for nonzero rationals a, b."""
    a, b = as_rational(a), as_rational(b)
    if a == 0 or b == 0:
        raise InvalidInput("Hilbert symbol of zero")
    field = local_field_of(v)
    return hilbert_symbol_local(LocalElement.exact(a, field), LocalElement.exact(b, field))


def bad_primes(*values) -> list[int]:
    """Primes dividing a numerator or denominator of any of the rationals."""
    primes = set()
    for x in values:
        x = as_rational(x)
        for n in (x.numerator, x.denominator):
            primes.update(factorint(abs(n)))
    primes.discard(1)
    primes.discard(0)
    return sorted(primes)


def product_formula_check(a, b) -> bool:
    """Whether the product of (a, b)_v over all places equals 1."""
    places = [INF, 2] + [p for p in bad_primes(a, b) if p != 2]
    prod = 1
    for v in places:
        prod *= hilbert_symbol(a, b, v)
    return prod == 1


# ---------------------------------------------------------------------------
# brute-force decision of y^2 - a z^2 = c, independent of the symbol formulas


def _square_class_integer(x: Fraction, p: int) -> int:
    """An integer with p-valuation 0 or 1 in the square class of x at p."""
    n = x.numerator * x.denominator
    v = vp(n, p)
    return n // p ** (2 * (v // 2))


def conic_oracle(a, c, v: Place, effort: int = 3) -> bool:
    """Decide solvability of y^2 - a z^2 = c over Q_v by search.

    Searches primitive solutions of X^2 - a Y^2 - c Z^2 = 0 modulo p^effort
    and certifies them by Hensel's lemma in one coordinate.  Returns False
    only when no primitive solution exists modulo p^effort.
    """
    a, c = as_rational(a), as_rational(c)
    if a == 0 or c == 0:
        raise InvalidInput("conic oracle needs nonzero coefficients")
    if v == INF:
        return not (a < 0 and c < 0)
    p = v
    A, C = _square_class_integer(a, p), _square_class_integer(c, p)
    mod = p ** effort
    roots: dict[int, list[int]] = {}
    for x in range(mod):
        roots.setdefault(x * x % mod, []).append(x)
    found = False
    charts = [((y, 1), (A * y * y + C) % mod) for y in range(mod)]
    charts += [((1, z), (A + C * z * z) % mod) for z in range(0, mod, p)]
    for (y, z), t in charts:
        for x in roots.get(t, ()):
            found = True
            q = x * x - A * y * y - C * z * z
            vq = vp(q, p) if q else None
            for d in (2 * x, -2 * A * y, -2 * C * z):
                if d and (vq is None or vq > 2 * vp(d, p)):
                    return True
    if not found:
        return False
    raise EffortExhausted(f"undecided modulo {p}^{effort}")


def sample_with_symbol(a, v: Place, target: int, want_unit: bool = False, cap: int = 10 ** 6) -> Fraction:
    """Smallest integer x (by |x|, positive first) with (a, x)_v = target.

    With ``want_unit`` the candidate must also be a v-adic unit.
    """
    a = as_rational(a)
    if target not in (1, -1):
        raise InvalidInput("target must be +1 or -1")
    if target == -1:
        if v == INF and a > 0:
            raise Unsatisfiable("a > 0 is a square at the real place")
        if v != INF:
            field = local_field_of(v)
            from .localfield import is_square

            if is_square(LocalElement.exact(a, field)):
                raise Unsatisfiable(f"{a} is a square at {v}")
            if want_unit and v != 2 and vp(a, v) % 2 == 0:
                raise Unsatisfiable("units pair trivially with an even-valuation element")
    for n in range(1, cap + 1):
        for x in (n, -n):
            if want_unit and v != INF and x % v == 0:
                continue
            if hilbert_symbol(a, x, v) == target:
                return Fraction(x)
    raise SearchExhausted(f"no candidate below {cap}")
