"""Number fields Q[theta]/(f) for a monic integer f, their places and completions."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt
from typing import Sequence

from sympy import factorint, nextprime

from .errors import InvalidInput, UnsupportedPlace
from .finite import ResidueField
from .hilbert import INF
from .localfield import (
    LocalElement, LocalField, Padic, Unram, UnramQuad, hensel_lift_root, smallest_nonresidue, vp,
)
from .ratpoly import RatPoly, as_rational, discriminant, isolate_real_roots, real_root_count

RAMIFIED = "ramified"


class NumberField:
    """Q[theta]/(f) with f monic, integral and separable."""

    def __init__(self, f, name: str | None = None):
        f = f if isinstance(f, RatPoly) else RatPoly(f)
        if f.degree < 1 or f.lc != 1 or any(c.denominator != 1 for c in f.coeffs):
            raise InvalidInput(f"defining polynomial must be monic integral: {f}")
        self.poly = f
        self.degree = f.degree
        self.disc = discriminant(f) if f.degree > 1 else Fraction(1)
        if self.disc == 0:
            raise InvalidInput("defining polynomial is not separable")
        self.name = name or f"Q[t]/({f})"
        self.irreducibility_prime = self._certify_irreducible()

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls([0, 1], name="Q")

    def __repr__(self):
        return f"NumberField({self.name})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    @property
    def irreducibility_verified(self) -> bool:
        return self.irreducibility_prime is not None

    def _certify_irreducible(self):
        if self.degree == 1:
            return 1
        p = 2
        while p <= 100:
            if self.disc.numerator % p and splitting_type(self, p) == [self.degree]:
                return p
            p = nextprime(p)
        return None

    # elements

    def element(self, coords) -> "NFElement":
        if isinstance(coords, NFElement):
            return coords
        if isinstance(coords, (int, Fraction, str)):
            coords = [coords]
        return NFElement(self, coords)

    def __call__(self, coords) -> "NFElement":
        return self.element(coords)

    @property
    def theta(self) -> "NFElement":
        if self.degree == 1:
            return NFElement(self, [-self.poly.coeffs[0]])
        return NFElement(self, [0, 1])

    def signature(self) -> tuple[int, int]:
        r1 = real_root_count(self.poly)
        return r1, (self.degree - r1) // 2

    def real_root_intervals(self) -> list[tuple[Fraction, Fraction]]:
        return isolate_real_roots(self.poly, width=1)

    def squarefree_disc_part(self) -> int:
        """Signed square-free kernel of the discriminant (quadratic fields)."""
        n = self.disc.numerator
        out = -1 if n < 0 else 1
        for p, e in factorint(abs(n)).items():
            if e % 2:
                out *= p
        return out


class NFElement:
    __slots__ = ("field", "poly")

    def __init__(self, field: NumberField, coords):
        self.field = field
        poly = coords if isinstance(coords, RatPoly) else RatPoly(coords)
        if poly.degree >= field.degree:
            poly = poly % field.poly
        self.poly = poly

    @property
    def coords(self) -> tuple[Fraction, ...]:
        cs = self.poly.coeffs
        return cs + (Fraction(0),) * (self.field.degree - len(cs))

    def __repr__(self):
        return f"<{str(self.poly).replace('x', 't')} in {self.field.name}>"

    def is_rational(self) -> bool:
        return self.poly.degree <= 0

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise InvalidInput(f"{self} is not rational")
        return self.poly.coeffs[0] if self.poly.coeffs else Fraction(0)

    def _coerce(self, other) -> "NFElement":
        if isinstance(other, NFElement):
            if other.field != self.field:
                raise InvalidInput("elements of different fields")
            return other
        return NFElement(self.field, [as_rational(other)])

    def __eq__(self, other):
        try:
            return self.poly == self._coerce(other).poly
        except (InvalidInput, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.poly))

    def __bool__(self):
        return bool(self.poly)

    def __add__(self, other):
        return NFElement(self.field, self.poly + self._coerce(other).poly)

    __radd__ = __add__

    def __neg__(self):
        return NFElement(self.field, -self.poly)

    def __sub__(self, other):
        return NFElement(self.field, self.poly - self._coerce(other).poly)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        return NFElement(self.field, (self.poly * self._coerce(other).poly) % self.field.poly)

    __rmul__ = __mul__

    def inverse(self) -> "NFElement":
        if not self.poly:
            raise ZeroDivisionError("inverse of zero")
        # extended Euclid: s * g + t * f = 1
        r0, r1 = self.field.poly, self.poly
        s0, s1 = RatPoly(), RatPoly([1])
        while r1.degree > 0:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if not r1:
            raise InvalidInput("element is a zero divisor; field polynomial is reducible")
        return NFElement(self.field, s1.scale(1 / r1.lc))

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = NFElement(self.field, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def norm(self) -> Fraction:
        from .ratpoly import resultant

        if self.field.degree == 1:
            return self.rational()
        if not self.poly:
            return Fraction(0)
        return resultant(self.field.poly, self.poly)

    def denominator(self) -> int:
        return self.poly.content_denominator()


# ---------------------------------------------------------------------------
# factorisation modulo p


def factor_mod_p(f: RatPoly, p: int) -> list[tuple[int, ...]]:
    """Monic irreducible factors of a squarefree f modulo p, sorted by coefficient list."""
    rf = ResidueField(p)
    g = rf.pmonic([rf.elem(int(c.numerator * pow(c.denominator, -1, p))) for c in f.coeffs])
    factors = []
    # distinct-degree factorisation
    x = [rf.zero, rf.one]
    h = x
    k = 1
    rest = g
    while len(rest) > 1 and 2 * k <= len(rest) - 1:
        h = rf.ppowmod(h, p, rest)
        d = rf.pgcd(rest, rf.psub(h, x))
        if len(d) > 1:
            _equal_degree(rf, d, k, factors)
            rest = rf.pdivmod(rest, d)[0]
            h = rf.pdivmod(h, rest)[1] if len(rest) > 1 else h
        k += 1
    if len(rest) > 1:
        factors.append(rf.pmonic(rest))
    out = [tuple(c[0] for c in fac) for fac in factors]
    return sorted(out)


def _equal_degree(rf: ResidueField, f, k: int, out: list, seed: int = 1):
    import random

    n = len(f) - 1
    if n == k:
        out.append(rf.pmonic(f))
        return
    rng = random.Random(seed * 7919 + n)
    p = rf.p
    while True:
        r = [rf.elem(rng.randrange(p)) for _ in range(n)] + [rf.one]
        if p == 2:
            # trace map instead of the (q^k - 1)/2 power
            t = r
            acc = r
            for _ in range(k - 1):
                t = rf.ppowmod(t, 2, f)
                acc = rf.pdivmod(_padd(rf, acc, t), f)[1]
            cand = acc
        else:
            cand = rf.psub(rf.ppowmod(r, (p ** k - 1) // 2, f), [rf.one])
        g = rf.pgcd(f, cand)
        if 1 < len(g) < len(f):
            _equal_degree(rf, g, k, out, seed + 1)
            _equal_degree(rf, rf.pdivmod(f, g)[0], k, out, seed + 2)
            return


def _padd(rf, f, g):
    n = max(len(f), len(g))
    f = list(f) + [rf.zero] * (n - len(f))
    g = list(g) + [rf.zero] * (n - len(g))
    return rf.ptrim(rf.add(a, b) for a, b in zip(f, g))


def splitting_type(F: NumberField, p: int):
    """Sorted residue degrees of f mod p, or RAMIFIED when p divides disc(f)."""
    if F.disc.numerator % p == 0:
        return RAMIFIED
    return sorted(len(fac) - 1 for fac in factor_mod_p(F.poly, p))


def find_split_primes(F, count: int, lower: int = 2, avoid: Sequence[int] = ()) -> list[int]:
    """The ``count`` smallest primes above ``lower`` splitting completely, coprime to 2*disc."""
    if not isinstance(F, NumberField):
        F = NumberField(F)
    avoid = set(avoid)
    out = []
    p = lower
    while len(out) < count:
        p = nextprime(p)
        if p in avoid or (2 * F.disc.numerator) % p == 0:
            continue
        if splitting_type(F, p) == [1] * F.degree:
            out.append(p)
    return out


# ---------------------------------------------------------------------------
# places


@dataclass(frozen=True)
class PlaceOfL:
    """A place of a number field.

    ``under`` is the place of Q below; ``kind`` is "real", "complex",
    "finite" or RAMIFIED (a prime dividing disc(f), not decomposed here).
    """

    under: object
    kind: str
    index: int = 0
    degree: int = 1
    factor: tuple = dc_field(default=(), compare=False)

    def label(self) -> str:
        if self.kind in ("real", "complex"):
            return f"{self.kind}#{self.index}"
        if self.kind == RAMIFIED:
            return f"{self.under}:ramified"
        return f"{self.under}#{self.index}(f={self.degree})"


def places_above(F: NumberField, v) -> list[PlaceOfL]:
    if v == INF:
        r1, r2 = F.signature()
        return [PlaceOfL(INF, "real", i) for i in range(r1)] + [
            PlaceOfL(INF, "complex", i) for i in range(r2)
        ]
    if F.disc.numerator % v == 0:
        return [PlaceOfL(v, RAMIFIED)]
    facs = factor_mod_p(F.poly, v)
    return [PlaceOfL(v, "finite", i, len(fac) - 1, fac) for i, fac in enumerate(facs)]


def local_field_at(F: NumberField, place: PlaceOfL) -> LocalField:
    if place.kind != "finite":
        raise UnsupportedPlace(f"no p-adic model for {place.label()}")
    if place.degree == 1:
        return Padic(place.under)
    if place.degree == 2 and place.under != 2:
        if F.degree == 2:
            return UnramQuad(place.under, F.squarefree_disc_part())
        return UnramQuad(place.under, smallest_nonresidue(place.under))
    if place.under != 2:
        return Unram(place.under, place.factor)
    raise UnsupportedPlace(f"residue degree {place.degree} at 2")


def theta_image(F: NumberField, place: PlaceOfL, absprec: int) -> LocalElement:
    """Image of theta in the completion, known modulo p^absprec."""
    field = local_field_at(F, place)
    p = place.under
    if F.degree == 1:
        return LocalElement.exact(-F.poly.coeffs[0], field)
    if place.degree == 1:
        start = LocalElement(field, ((-place.factor[0]) % p,), absprec)
        return hensel_lift_root(F.poly, start)
    if F.degree == 2:
        # theta = (-b + sqrt(disc)) / 2 and sqrt(disc) = m * delta with m rational
        b = F.poly.coeffs[1]
        m = isqrt(abs(F.disc.numerator // field.d))
        return LocalElement(field, (-b / 2, Fraction(m, 2)))
    rf = field.residue_field
    fac = [rf.elem(c) for c in place.factor]
    root = rf.roots(fac)[0]
    return hensel_lift_root(F.poly, LocalElement(field, root, absprec))


@dataclass(frozen=True)
class RealValue:
    """Sign and an isolating interval of a number-field element at a real place."""

    sign: int
    interval: tuple[Fraction, Fraction]


def local_embed(x, place: PlaceOfL, precision: int = 20):
    """Image of x at the place: a LocalElement (finite places) or a RealValue.

    The p-adic image is correct modulo p^precision.
    """
    F = x.field
    if place.kind == "real":
        return _real_embed(x, place.index)
    if place.kind == "complex":
        raise UnsupportedPlace("complex places carry no ordering or valuation")
    field = local_field_at(F, place)
    p = place.under
    shift = max([0] + [-vp(c, p) for c in x.coords if c])
    root = theta_image(F, place, precision + shift)
    acc = LocalElement.exact(0, field)
    power = LocalElement.exact(1, field)
    for c in x.coords:
        if c:
            acc = acc + power * c
        power = power * root
    return acc


def _real_embed(x: NFElement, index: int) -> RealValue:
    F = x.field
    if x.is_rational():
        q = x.rational()
        return RealValue((q > 0) - (q < 0), (q, q))
    lo, hi = F.real_root_intervals()[index]
    g = x.poly
    for _ in range(400):
        vlo, vhi = _interval_eval(g, lo, hi)
        if vlo > 0 or vhi < 0:
            return RealValue(1 if vlo > 0 else -1, (vlo, vhi))
        mid = (lo + hi) / 2
        if real_root_count(F.poly, lo, mid):
            hi = mid
        else:
            lo = mid
    raise InvalidInput("element vanishes at the real place")


def _interval_eval(g: RatPoly, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Naive interval enclosure of g on [lo, hi]."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(g.coeffs):
        prods = [acc[0] * lo, acc[0] * hi, acc[1] * lo, acc[1] * hi]
        acc = (min(prods) + c, max(prods) + c)
    return acc


def verify_projective_point(eqn: dict, pt: Sequence, F: NumberField | None = None) -> bool:
    """Whether pt = (w0 : w1 : w2) lies on the curve given by {(i, j, k): coeff}."""
    if F is None:
        F = next((c.field for c in pt if isinstance(c, NFElement)), NumberField.rationals())
    pt = [F.element(c) for c in pt]
    if all(not c for c in pt):
        raise InvalidInput("(0 : 0 : 0) is not a projective point")
    total = F.element(0)
    for (i, j, k), coeff in eqn.items():
        total = total + F.element(coeff) * pt[0] ** i * pt[1] ** j * pt[2] ** k
    return not total
