"""Completions of Q and of number fields at a place.

A finite element is stored as rational coordinates (one for Q_p, two over
the basis 1, delta of the unramified quadratic extension, f over the power
basis of an unramified extension of degree f) together with an
absolute precision: the coordinates are known modulo p^absprec, or exactly
when ``absprec`` is None.  Exact rational data therefore never loses
information; precision only enters through Hensel-lifted embeddings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CriterionFailed, InsufficientPrecision, InvalidInput, UnsupportedPlace
from .finite import ResidueField, is_irreducible_mod_p
from .ratpoly import RatPoly, as_rational

PRECISION_CAP = 256


def vp(x, p: int) -> int | None:
    """p-adic valuation of a rational; None for zero."""
    x = as_rational(x)
    if x == 0:
        return None
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def reduce_mod(x: Fraction, p: int, k: int) -> Fraction:
    """Canonical representative of x modulo p^k Z_p (x must satisfy v(x) > -inf)."""
    if x == 0:
        return x
    den = x.denominator
    s = 0
    while den % p == 0:
        den //= p
        s += 1
    if k + s <= 0:
        return Fraction(0)
    mod = p ** (k + s)
    r = x.numerator * pow(den, -1, mod) % mod
    return Fraction(r, p ** s)


@dataclass(frozen=True)
class LocalField:
    kind: str  # "real", "padic", "unramquad" or "unram"
    p: int = 0
    d: int = 0
    modulus: tuple = ()

    def __post_init__(self):
        if self.kind not in ("real", "padic", "unramquad", "unram"):
            raise InvalidInput(f"unknown local field kind {self.kind!r}")
        if self.kind == "unramquad":
            if self.p == 2:
                raise UnsupportedPlace("unramified quadratic extension of Q_2 is not modelled")
            if ResidueField(self.p).chi((self.d % self.p,)) != -1:
                raise InvalidInput(f"{self.d} is not a nonresidue mod {self.p}")
        if self.kind == "unram":
            if self.p == 2:
                raise UnsupportedPlace("unramified extensions of Q_2 are not modelled")
            g = self.modulus
            if len(g) < 3 or g[-1] != 1 or not all(isinstance(c, int) for c in g):
                raise InvalidInput("modulus must be a monic integer polynomial of degree >= 2")
            if not is_irreducible_mod_p(g, self.p):
                raise InvalidInput(f"modulus {g} is reducible mod {self.p}")

    def __repr__(self):
        if self.kind == "real":
            return "R"
        if self.kind == "padic":
            return f"Q_{self.p}"
        if self.kind == "unramquad":
            return f"Q_{self.p}(sqrt {self.d})"
        return f"Q_{self.p}[t]/({RatPoly(self.modulus)})".replace("x", "t")

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    @property
    def dim(self) -> int:
        if self.kind == "unram":
            return len(self.modulus) - 1
        return 2 if self.kind == "unramquad" else 1

    @property
    def residue_field(self) -> ResidueField:
        if self.kind == "unram":
            return ResidueField(self.p, modulus=self.modulus)
        return ResidueField(self.p, self.d if self.kind == "unramquad" else None)

    @property
    def q(self) -> int:
        return self.p ** self.dim

    @property
    def square_margin(self) -> int:
        """1 + z is a square once v(z) reaches this (odd p: 1, p = 2: 3)."""
        return 3 if self.p == 2 else 1


def Real() -> LocalField:
    return LocalField("real")


def Padic(p: int) -> LocalField:
    return LocalField("padic", p)


def UnramQuad(p: int, d: int | None = None) -> LocalField:
    """Unramified quadratic extension Q_p(sqrt d); d defaults to the least positive nonresidue."""
    if d is None:
        d = smallest_nonresidue(p)
    return LocalField("unramquad", p, d)


def Unram(p: int, modulus) -> LocalField:
    """Unramified extension Q_p[t]/(g) for a monic integer g irreducible mod p."""
    return LocalField("unram", p, 0, tuple(int(c) for c in modulus))


def smallest_nonresidue(p: int) -> int:
    rf = ResidueField(p)
    for d in range(2, p):
        if rf.chi((d,)) == -1:
            return d
    raise InvalidInput(f"no nonresidue mod {p}")


class LocalElement:
    __slots__ = ("field", "coords", "absprec")

    def __init__(self, field: LocalField, coords: Sequence, absprec: int | None = None):
        cs = tuple(as_rational(c) for c in coords)
        if len(cs) < field.dim:
            cs = cs + (Fraction(0),) * (field.dim - len(cs))
        if len(cs) != field.dim:
            raise InvalidInput(f"{len(cs)} coordinates for {field!r}")
        if absprec is not None and not field.is_real:
            cs = tuple(reduce_mod(c, field.p, absprec) for c in cs)
        self.field = field
        self.coords = cs
        self.absprec = None if field.is_real else absprec

    # constructors

    @classmethod
    def exact(cls, value, field: LocalField) -> "LocalElement":
        if isinstance(value, LocalElement):
            return value
        if isinstance(value, (tuple, list)):
            return cls(field, value)
        return cls(field, (value,))

    # basic queries

    def __repr__(self):
        gen = "delta" if self.field.kind == "unramquad" else "t"
        body = " + ".join(f"{c}" if i == 0 else f"({c})*{gen}^{i}" for i, c in enumerate(self.coords))
        tail = "" if self.absprec is None else f" + O({self.field.p}^{self.absprec})"
        return f"<{body}{tail} in {self.field!r}>"

    @property
    def is_exact(self) -> bool:
        return self.absprec is None

    def known_nonzero(self) -> bool:
        return any(self.coords)

    def is_exact_zero(self) -> bool:
        return self.absprec is None and not any(self.coords)

    @property
    def valuation(self) -> int:
        if self.field.is_real:
            raise InvalidInput("real places carry no valuation")
        vals = [vp(c, self.field.p) for c in self.coords if c]
        if not vals:
            if self.absprec is None:
                raise InvalidInput("valuation of zero")
            raise InsufficientPrecision(f"value is O({self.field.p}^{self.absprec})")
        return min(vals)

    def v_lower(self) -> float:
        """A certified lower bound for the valuation (inf for exact zero)."""
        if self.known_nonzero():
            return self.valuation
        return math.inf if self.absprec is None else self.absprec

    @property
    def relprec(self) -> float:
        if self.absprec is None:
            return math.inf
        return self.absprec - self.valuation

    # the (valuation, unit, precision) view

    @property
    def val(self) -> int:
        return self.valuation

    @property
    def prec(self):
        return None if self.absprec is None else self.absprec - self.valuation

    @property
    def unit(self):
        """Unit part modulo p^prec (an int, or a pair for the quadratic extension)."""
        k = self.prec if self.prec is not None else 32
        res = self.unit_residue(k)
        return res[0] if self.field.dim == 1 else res

    def unit_residue(self, k: int) -> tuple[int, ...]:
        """Coordinates of the unit part p^-v * x modulo p^k."""
        p = self.field.p
        v = self.valuation
        if self.absprec is not None and self.absprec - v < k:
            raise InsufficientPrecision(f"need {k} digits, have {self.absprec - v}")
        mod = p ** k
        out = []
        for c in self.coords:
            u = c / Fraction(p) ** v
            out.append(u.numerator * pow(u.denominator, -1, mod) % mod)
        return tuple(out)

    def sign(self) -> int:
        if not self.field.is_real:
            raise InvalidInput("sign is only defined at a real place")
        c = self.coords[0]
        return (c > 0) - (c < 0)

    # arithmetic

    def _coerce(self, other) -> "LocalElement":
        if isinstance(other, LocalElement):
            if other.field != self.field:
                raise InvalidInput(f"mixing {self.field!r} and {other.field!r}")
            return other
        return LocalElement.exact(as_rational(other), self.field)

    def __add__(self, other):
        other = self._coerce(other)
        return LocalElement(
            self.field,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            _min_prec(self.absprec, other.absprec),
        )

    __radd__ = __add__

    def __neg__(self):
        return LocalElement(self.field, tuple(-a for a in self.coords), self.absprec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.field.dim == 1:
            coords = (self.coords[0] * other.coords[0],)
        elif self.field.kind == "unramquad":
            a0, a1 = self.coords
            b0, b1 = other.coords
            coords = (a0 * b0 + self.field.d * a1 * b1, a0 * b1 + a1 * b0)
        else:
            coords = _mulmod(self.coords, other.coords, self.field.modulus)
        if self.absprec is None and other.absprec is None:
            prec = None
        else:
            prec = _min_prec(
                _add_prec(self.v_lower(), other.absprec),
                _add_prec(other.v_lower(), self.absprec),
            )
        return LocalElement(self.field, coords, prec)

    __rmul__ = __mul__

    def inverse(self) -> "LocalElement":
        if not self.known_nonzero():
            if self.absprec is None:
                raise ZeroDivisionError("inverse of zero")
            raise InsufficientPrecision("inverse of an element indistinguishable from zero")
        if self.field.dim == 1:
            coords = (1 / self.coords[0],)
        elif self.field.kind == "unramquad":
            a0, a1 = self.coords
            n = a0 * a0 - self.field.d * a1 * a1
            coords = (a0 / n, -a1 / n)
        else:
            coords = _invmod(self.coords, self.field.modulus)
        if self.absprec is None or self.field.is_real:
            return LocalElement(self.field, coords)
        return LocalElement(self.field, coords, self.absprec - 2 * self.valuation)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LocalElement.exact(1, self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def with_absprec(self, absprec: int | None) -> "LocalElement":
        """Truncate to at most the given absolute precision."""
        return LocalElement(self.field, self.coords, _min_prec(self.absprec, absprec))

    def residue(self):
        """Residue of the unit part as a residue-field element."""
        return self.unit_residue(1)


def _mulmod(x, y, g):
    n = len(g) - 1
    prod = [Fraction(0)] * (2 * n - 1)
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                prod[i + j] += a * b
    for k in range(2 * n - 2, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n):
                prod[k - n + j] -= c * g[j]
    return tuple(prod[:n])


def _invmod(x, g):
    """Inverse of x(t) modulo the irreducible g(t) over Q (extended Euclid)."""
    n = len(g) - 1
    r0, r1 = RatPoly(g), RatPoly(x)
    s0, s1 = RatPoly([0]), RatPoly([1])
    while r1.degree > 0:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    inv = s1 * (1 / r1.coeffs[0])
    cs = list(inv.coeffs) + [Fraction(0)] * n
    return tuple(cs[:n])


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(v, prec):
    """v + prec with None meaning infinite precision."""
    if prec is None or v == math.inf:
        return None
    return int(v + prec)


# ---------------------------------------------------------------------------


def embed_rational(q, field: LocalField, precision: int | None = None) -> LocalElement:
    """Image of a rational number, truncated to ``precision`` relative digits."""
    q = as_rational(q)
    if field.is_real or q == 0 or precision is None:
        return LocalElement.exact(q, field)
    if precision < 1:
        raise InvalidInput("precision must be positive")
    return LocalElement(field, (q,), vp(q, field.p) + precision)


def is_square(x: LocalElement) -> bool:
    f = x.field
    if f.is_real:
        return x.coords[0] >= 0
    if x.is_exact_zero():
        return True
    v = x.valuation
    if v % 2:
        return False
    if f.p == 2:
        if f.dim != 1:
            raise UnsupportedPlace("squares in unramified extensions of Q_2")
        return x.unit_residue(3)[0] % 8 == 1
    return f.residue_field.chi(x.unit_residue(1)) == 1


def square_class_key(x: LocalElement):
    """Hashable invariant of the square class of a nonzero element."""
    f = x.field
    if f.is_real:
        return x.sign()
    v = x.valuation
    if f.p == 2:
        return (v % 2, x.unit_residue(3)[0] % 8)
    return (v % 2, f.residue_field.chi(x.unit_residue(1)))


# local polynomials: lists of LocalElement, lowest degree first


def embed_poly(poly, field: LocalField, precision: int | None = None) -> list[LocalElement]:
    if isinstance(poly, RatPoly):
        return [embed_rational(c, field, precision) for c in poly.coeffs]
    return [c if isinstance(c, LocalElement) else embed_rational(c, field, precision) for c in poly]


def poly_eval(coeffs: Sequence[LocalElement], x: LocalElement) -> LocalElement:
    acc = LocalElement.exact(0, x.field)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs: Sequence[LocalElement]) -> list[LocalElement]:
    return [c * i for i, c in enumerate(coeffs) if i]


def taylor_coeffs(coeffs: Sequence[LocalElement], c: LocalElement) -> list[LocalElement]:
    """Coefficients of F(c + t) as a polynomial in t (repeated synthetic division)."""
    work = list(coeffs)
    out = []
    while work:
        acc = LocalElement.exact(0, c.field)
        partial = []
        for a in reversed(work):
            acc = acc * c + a
            partial.append(acc)
        out.append(partial[-1])
        work = partial[-2::-1]
    return out


def hensel_lift_root(poly, x0: LocalElement, precision: int | None = None) -> LocalElement:
    """Refine an approximate root by Newton's method.

    Requires v(f(x0)) > 2 v(f'(x0)).  The root is returned to the absolute
    precision of ``x0`` (or ``precision`` when given).
    """
    field = x0.field
    f = embed_poly(poly, field)
    df = poly_derivative(f)
    target = precision if precision is not None else x0.absprec
    if target is None:
        raise InvalidInput("target precision required for an exact starting point")
    x = LocalElement(field, x0.coords)
    fx, dfx = poly_eval(f, x), poly_eval(df, x)
    if not dfx.known_nonzero():
        raise CriterionFailed("derivative vanishes at the approximation")
    e = dfx.valuation
    if not fx.v_lower() > 2 * e:
        raise CriterionFailed(f"v(f(x0)) = {fx.v_lower()} <= 2 v(f'(x0)) = {2 * e}")
    for _ in range(64):
        if fx.v_lower() - e >= target:
            break
        x = x - fx / dfx
        # keep representatives small
        x = LocalElement(field, x.with_absprec(2 * target + 2 * e + 4).coords)
        fx, dfx = poly_eval(f, x), poly_eval(df, x)
    reachable = fx.v_lower() - e
    coeff_prec = min((c.absprec for c in f if c.absprec is not None), default=None)
    if coeff_prec is not None:
        reachable = min(reachable, coeff_prec - e)
    if reachable < target:
        raise InsufficientPrecision(f"root only determined to p^{reachable}")
    return LocalElement(field, x.coords, target)


def stable_square_class(poly, x0: LocalElement):
    """(valuation, unit residue) of f(x0) when certified, else None.

    The residue is taken modulo p (modulo 8 when p = 2).  Certification asks
    for more relative digits than the square-class margin.
    """
    field = x0.field
    y = poly_eval(embed_poly(poly, field), x0)
    if not y.known_nonzero():
        return None
    m = field.square_margin
    if y.relprec <= m:
        return None
    res = y.unit_residue(m)
    return y.valuation, (res[0] if field.dim == 1 else res)
