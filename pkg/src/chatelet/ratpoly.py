"""Exact univariate polynomials over the rationals.

Coefficients are stored lowest degree first as ``Fraction`` values with
trailing zeros stripped, so the zero polynomial is the empty tuple.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm, gcd
from typing import Iterable, Sequence

from .errors import InvalidInput

Rational = Fraction

NEG_INF = float("-inf")
POS_INF = float("inf")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to ``Fraction``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidInput(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational: {value!r}") from exc
    raise InvalidInput(f"not a rational: {value!r}")


class RatPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x(cls) -> "RatPoly":
        return cls([0, 1])

    @classmethod
    def const(cls, c) -> "RatPoly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, RatPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == RatPoly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"RatPoly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(terms).replace("+ -", "- ")

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return RatPoly(-c for c in self.coeffs)

    def __add__(self, other):
        other = _lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return RatPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        if not self.coeffs or not other.coeffs:
            return RatPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return RatPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = RatPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        other = _lift(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return RatPoly(), self
        quot = [Fraction(0)] * (dq + 1)
        inv = 1 / other.lc
        for k in range(dq, -1, -1):
            coef = rem[k + len(other.coeffs) - 1] * inv
            quot[k] = coef
            if coef:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= coef * b
        return RatPoly(quot), RatPoly(rem[: len(other.coeffs) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "RatPoly":
        q, r = divmod(self, other)
        if r:
            raise InvalidInput(f"{other} does not divide {self}")
        return q

    def derivative(self) -> "RatPoly":
        return RatPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RatPoly":
        if not self.coeffs:
            return self
        return self * (1 / self.lc)

    def scale(self, c) -> "RatPoly":
        return RatPoly(as_rational(c) * a for a in self.coeffs)

    def compose(self, other: "RatPoly") -> "RatPoly":
        acc = RatPoly()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reversed(self, degree: int | None = None) -> "RatPoly":
        """Return x^d * f(1/x) for ``d`` (default: the degree)."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise InvalidInput("reversal degree below polynomial degree")
        cs = list(self.coeffs) + [Fraction(0)] * (d + 1 - len(self.coeffs))
        return RatPoly(reversed(cs))

    def content_denominator(self) -> int:
        return lcm(*(c.denominator for c in self.coeffs)) if self.coeffs else 1

    def primitive_part(self) -> "RatPoly":
        """Scale by a positive rational to coprime integer coefficients."""
        if not self.coeffs:
            return self
        den = self.content_denominator()
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = gcd(g, v)
        return RatPoly(Fraction(v, g) for v in ints)

    def integer_coeffs(self) -> list[int]:
        out = []
        for c in self.coeffs:
            if c.denominator != 1:
                raise InvalidInput(f"non-integral coefficient {c}")
            out.append(c.numerator)
        return out

    def sign_at(self, x) -> int:
        """Sign at a rational point or at +/- infinity."""
        if not self.coeffs:
            return 0
        if x == POS_INF:
            return _sgn(self.lc)
        if x == NEG_INF:
            return _sgn(self.lc) * (-1 if self.degree % 2 else 1)
        return _sgn(self(as_rational(x)))


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _lift(obj) -> RatPoly:
    if isinstance(obj, RatPoly):
        return obj
    return RatPoly([obj])


def poly_gcd(f: RatPoly, g: RatPoly) -> RatPoly:
    """Monic gcd (zero if both inputs are zero)."""
    while g:
        f, g = g, f % g
    return f.monic()


def squarefree_part(f: RatPoly) -> RatPoly:
    if f.degree <= 0:
        return f
    return f.exact_div(poly_gcd(f, f.derivative()))


def resultant(f: RatPoly, g: RatPoly) -> Fraction:
    """Resultant by the Euclidean recursion; agrees with the Sylvester determinant."""
    if not f or not g:
        return Fraction(0)
    m, n = f.degree, g.degree
    if n == 0:
        return g.lc ** m
    if m == 0:
        return f.lc ** n
    if m < n:
        return (-1) ** (m * n) * resultant(g, f)
    r = f % g
    if not r:
        return Fraction(0)
    return (-1) ** (m * n) * g.lc ** (m - r.degree) * resultant(g, r)


def discriminant(f: RatPoly) -> Fraction:
    """disc(f) = (-1)^(n(n-1)/2) * res(f, f') / lc(f)."""
    n = f.degree
    if n < 1:
        raise InvalidInput("discriminant needs degree >= 1")
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def sturm_sequence(f: RatPoly) -> list[RatPoly]:
    """Sturm chain of f, each member rescaled by a positive constant."""
    if f.degree < 1:
        return [f]
    seq = [f.primitive_part(), f.derivative().primitive_part()]
    while True:
        r = seq[-2] % seq[-1]
        if not r:
            break
        seq.append((-r).primitive_part())
    return seq


def _variations(seq: Sequence[RatPoly], x) -> int:
    signs = [s for s in (p.sign_at(x) for p in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def real_root_count(f: RatPoly, lo=NEG_INF, hi=POS_INF) -> int:
    """Number of distinct real roots of f in (lo, hi]."""
    if not f:
        raise InvalidInput("zero polynomial has infinitely many roots")
    if f.degree < 1:
        return 0
    if lo != NEG_INF and hi != POS_INF and as_rational(lo) >= as_rational(hi):
        return 0
    seq = sturm_sequence(squarefree_part(f))
    return _variations(seq, lo) - _variations(seq, hi)


def root_bound(f: RatPoly) -> Fraction:
    """Cauchy bound: every complex root has modulus below it."""
    lead = abs(f.lc)
    return 1 + max((abs(c) / lead for c in f.coeffs[:-1]), default=Fraction(0))


def isolate_real_roots(f: RatPoly, width=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals (lo, hi], sorted, each holding one distinct root.

    With ``width`` the intervals are shrunk until ``hi - lo <= width``.
    """
    if f.degree < 1:
        return []
    g = squarefree_part(f)
    seq = sturm_sequence(g)

    def count(lo, hi):
        return _variations(seq, lo) - _variations(seq, hi)

    b = root_bound(g)
    b = Fraction(int(b) + 1)
    out = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        k = count(lo, hi)
        if k == 0:
            continue
        if k == 1:
            out.append((lo, hi))
            continue
        mid = _nice_midpoint(lo, hi)
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    if width is not None:
        width = as_rational(width)
        refined = []
        for lo, hi in out:
            while hi - lo > width:
                mid = _nice_midpoint(lo, hi)
                if count(lo, mid):
                    hi = mid
                else:
                    lo = mid
            refined.append((lo, hi))
        out = refined
    return out


def _nice_midpoint(lo: Fraction, hi: Fraction) -> Fraction:
    """An integer strictly inside (lo, hi) when one exists, else the midpoint."""
    import math

    if hi - lo > 1:
        m = Fraction(math.floor((lo + hi) / 2))
        if lo < m < hi:
            return m
    return (lo + hi) / 2


def sample_points(f: RatPoly) -> list[Fraction]:
    """Rational points, one in each open interval cut out by the real roots of f.

    The first and last points lie beyond the extreme roots.
    """
    iv = isolate_real_roots(f)
    if not iv:
        return [Fraction(0)]
    g = squarefree_part(f)
    pts = [iv[0][0] - 1]
    for (_, h1), (l2, h2) in zip(iv, iv[1:]):
        if h1 < l2:
            pts.append((h1 + l2) / 2)
        elif g(h1) != 0:
            pts.append(h1)
        else:
            # the left root sits exactly on the shared endpoint
            while True:
                mid = (h1 + h2) / 2
                if real_root_count(g, h1, mid) == 0:
                    pts.append((h1 + mid) / 2)
                    break
                h2 = mid
    pts.append(iv[-1][1] + 1)
    return pts


def exists_nonneg_value(f: RatPoly) -> bool:
    """True iff f(x) >= 0 for some real x."""
    if not f:
        return True
    if f.degree == 0:
        return f.lc > 0
    if f.degree % 2 or f.lc > 0:
        return True
    return real_root_count(f) > 0


def interpolate(points: Sequence[tuple]) -> RatPoly:
    """Lagrange interpolation through (x, y) pairs with distinct x."""
    result = RatPoly()
    xs = [as_rational(x) for x, _ in points]
    for i, (_, yi) in enumerate(points):
        yi = as_rational(yi)
        if yi == 0:
            continue
        term = RatPoly([yi])
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                term = term * RatPoly([-xj, 1])
                denom *= xs[i] - xj
        result = result + term.scale(1 / denom)
    return result
