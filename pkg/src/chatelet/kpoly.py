"""Polynomials over a number field, as lists of NFElement (lowest degree first)."""

from __future__ import annotations

from typing import Sequence

from .numfield import NFElement, NumberField
from .ratpoly import RatPoly


def kp(F: NumberField, coeffs) -> list[NFElement]:
    """Normalise a coefficient list (rationals, coordinate lists or elements)."""
    if isinstance(coeffs, RatPoly):
        coeffs = coeffs.coeffs
    return trim([F.element(c) for c in coeffs])


def trim(f: Sequence[NFElement]) -> list[NFElement]:
    f = list(f)
    while f and not f[-1]:
        f.pop()
    return f


def degree(f) -> int:
    return len(f) - 1


def add(f, g):
    n = max(len(f), len(g))
    zero = (f or g)[0] * 0
    return trim([(f[i] if i < len(f) else zero) + (g[i] if i < len(g) else zero) for i in range(n)])


def sub(f, g):
    return add(f, [-c for c in g])


def mul(f, g):
    if not f or not g:
        return []
    out = [f[0] * 0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return trim(out)


def scale(f, c):
    return trim([a * c for a in f])


def divmod_(f, g):
    g = trim(g)
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(trim(f))
    if len(rem) < len(g):
        return [], rem
    inv = g[-1].inverse()
    quot = [g[0] * 0] * (len(rem) - len(g) + 1)
    for k in range(len(rem) - len(g), -1, -1):
        coef = rem[k + len(g) - 1] * inv
        quot[k] = coef
        if coef:
            for j, b in enumerate(g):
                rem[k + j] = rem[k + j] - coef * b
    return trim(quot), trim(rem[: len(g) - 1])


def derivative(f):
    return trim([c * i for i, c in enumerate(f) if i])


def evaluate(f, x):
    acc = x * 0
    for c in reversed(f):
        acc = acc * x + c
    return acc


def resultant(f, g) -> NFElement:
    f, g = trim(f), trim(g)
    if not f or not g:
        raise ZeroDivisionError("resultant with the zero polynomial")
    m, n = degree(f), degree(g)
    if n == 0:
        return g[-1] ** m
    if m == 0:
        return f[-1] ** n
    if m < n:
        return resultant(g, f) * ((-1) ** (m * n))
    r = divmod_(f, g)[1]
    if not r:
        return f[0] * 0
    return resultant(g, r) * (g[-1] ** (m - degree(r))) * ((-1) ** (m * n))


def discriminant(f) -> NFElement:
    n = degree(f)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return resultant(f, derivative(f)) * sign / f[-1]


def to_ratpoly(f) -> RatPoly:
    return RatPoly(c.rational() for c in f)


def is_rational(f) -> bool:
    return all(c.is_rational() for c in f)


def fmt(f) -> str:
    if all(c.is_rational() for c in f):
        return str(to_ratpoly(f))
    terms = []
    for i in range(len(f) - 1, -1, -1):
        if f[i]:
            coef = str(f[i].poly).replace("x", "t")
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(f"({coef})" + (f"*{mono}" if mono else ""))
    return " + ".join(terms) or "0"
