"""Residue field arithmetic for F_p and its extensions F_p[t]/(g).

Elements are coordinate tuples over the basis 1, t, t^2, ...: ``(a,)`` in
F_p, ``(a0, a1)`` in F_{p^2} = F_p[delta]/(delta^2 - d), and so on.
Polynomials are lists of elements, lowest degree first.
"""

from __future__ import annotations

import random
from itertools import product


class ResidueField:
    def __init__(self, p: int, d: int | None = None, modulus: tuple | None = None):
        """F_p, F_p[delta]/(delta^2 - d), or F_p[t]/(modulus) for a monic modulus."""
        self.p = p
        self.d = d
        if modulus is None and d is not None:
            modulus = (-d, 0, 1)
        self.modulus = tuple(c % p for c in modulus) if modulus else None
        self.degree = 1 if modulus is None else len(modulus) - 1
        self.q = p ** self.degree

    def __repr__(self):
        if self.modulus is None:
            return f"F_{self.p}"
        if self.d is not None:
            return f"F_{self.p}^2[d={self.d}]"
        return f"F_{self.p}^{self.degree}[{self.modulus}]"

    # element arithmetic

    def elem(self, *coords) -> tuple:
        cs = [c % self.p for c in coords] + [0] * (self.degree - len(coords))
        return tuple(cs[: self.degree])

    @property
    def zero(self):
        return (0,) * self.degree

    @property
    def one(self):
        return (1,) + (0,) * (self.degree - 1)

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a % self.p for a in x)

    def mul(self, x, y):
        p = self.p
        if self.degree == 1:
            return (x[0] * y[0] % p,)
        if self.d is not None:
            a0, a1 = x
            b0, b1 = y
            return ((a0 * b0 + self.d * a1 * b1) % p, (a0 * b1 + a1 * b0) % p)
        n = self.degree
        prod = [0] * (2 * n - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        g = self.modulus
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c:
                for j in range(n):
                    prod[k - n + j] -= c * g[j]
        return tuple(c % p for c in prod[:n])

    def pow(self, x, n: int):
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, x)
            x = self.mul(x, x)
            n >>= 1
        return result

    def inv(self, x):
        if x == self.zero:
            raise ZeroDivisionError("inverse of zero in residue field")
        return self.pow(x, self.q - 2)

    def is_zero(self, x) -> bool:
        return not any(x)

    def chi(self, x) -> int:
        """Quadratic character: 1 on nonzero squares, -1 on nonsquares, 0 at 0."""
        if self.is_zero(x):
            return 0
        if self.p == 2:
            return 1
        return 1 if self.pow(x, (self.q - 1) // 2) == self.one else -1

    def elements(self):
        for coords in product(range(self.p), repeat=self.degree):
            yield tuple(coords)

    def lift(self, x) -> tuple[int, ...]:
        return tuple(int(c) for c in x)

    # polynomials

    def ptrim(self, f):
        f = list(f)
        while f and self.is_zero(f[-1]):
            f.pop()
        return f

    def peval(self, f, x):
        acc = self.zero
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def pmul(self, f, g):
        if not f or not g:
            return []
        out = [self.zero] * (len(f) + len(g) - 1)
        for i, a in enumerate(f):
            if self.is_zero(a):
                continue
            for j, b in enumerate(g):
                out[i + j] = self.add(out[i + j], self.mul(a, b))
        return self.ptrim(out)

    def psub(self, f, g):
        n = max(len(f), len(g))
        f = list(f) + [self.zero] * (n - len(f))
        g = list(g) + [self.zero] * (n - len(g))
        return self.ptrim(self.sub(a, b) for a, b in zip(f, g))

    def pdivmod(self, f, g):
        g = self.ptrim(g)
        if not g:
            raise ZeroDivisionError("polynomial division by zero")
        rem = self.ptrim(f)
        if len(rem) < len(g):
            return [], rem
        inv = self.inv(g[-1])
        quot = [self.zero] * (len(rem) - len(g) + 1)
        for k in range(len(rem) - len(g), -1, -1):
            coef = self.mul(rem[k + len(g) - 1], inv)
            quot[k] = coef
            if not self.is_zero(coef):
                for j, b in enumerate(g):
                    rem[k + j] = self.sub(rem[k + j], self.mul(coef, b))
        return self.ptrim(quot), self.ptrim(rem[: len(g) - 1])

    def pmonic(self, f):
        f = self.ptrim(f)
        if not f:
            return f
        inv = self.inv(f[-1])
        return [self.mul(c, inv) for c in f]

    def pgcd(self, f, g):
        f, g = self.ptrim(f), self.ptrim(g)
        while g:
            f, g = g, self.pdivmod(f, g)[1]
        return self.pmonic(f)

    def pderiv(self, f):
        return self.ptrim(self.mul(self.elem(i), c) for i, c in enumerate(f) if i)

    def ppowmod(self, f, n: int, m):
        result = [self.one]
        base = self.pdivmod(f, m)[1]
        while n:
            if n & 1:
                result = self.pdivmod(self.pmul(result, base), m)[1]
            base = self.pdivmod(self.pmul(base, base), m)[1]
            n >>= 1
        return result

    def roots(self, f, seed: int = 0) -> list:
        """Distinct roots of f in the field, sorted."""
        f = self.ptrim(f)
        if len(f) <= 1:
            return []
        if self.q <= 2000:
            return sorted(x for x in self.elements() if self.is_zero(self.peval(f, x)))
        f = self.pmonic(f)
        x = [self.zero, self.one]
        xq = self.ppowmod(x, self.q, f)
        split = self.pgcd(f, self.psub(xq, x))
        rng = random.Random(seed)
        out = []
        self._equal_degree_roots(split, rng, out)
        return sorted(out)

    def _equal_degree_roots(self, f, rng, out):
        if len(f) <= 1:
            return
        if len(f) == 2:
            out.append(self.neg(self.mul(f[0], self.inv(f[1]))))
            return
        while True:
            r = [self.elem(*(rng.randrange(self.p) for _ in range(self.degree))), self.one]
            h = self.ppowmod(r, (self.q - 1) // 2, f)
            g = self.pgcd(f, self.psub(h, [self.one]))
            if 1 < len(g) < len(f):
                self._equal_degree_roots(g, rng, out)
                self._equal_degree_roots(self.pdivmod(f, g)[0], rng, out)
                return

    def is_const_times_square(self, f) -> bool:
        """Whether f = c * h^2 over the algebraic closure (odd characteristic above deg f)."""
        f = self.pmonic(f)
        if len(f) <= 1:
            return True
        # Yun's square-free decomposition: f = prod a_i^i
        d = self.pderiv(f)
        a = self.pgcd(f, d)
        b = self.pdivmod(f, a)[0]
        c = self.pdivmod(d, a)[0]
        i = 1
        while len(b) > 1:
            dd = self.psub(c, self.pderiv(b))
            ai = self.pgcd(b, dd)
            if i % 2 and len(ai) > 1:
                return False
            b = self.pdivmod(b, ai)[0]
            c = self.pdivmod(dd, ai)[0]
            i += 1
        return True


def is_irreducible_mod_p(g, p: int) -> bool:
    """Whether the integer polynomial g (lowest degree first) is irreducible mod p."""
    rf = ResidueField(p)
    f = rf.pmonic([rf.elem(c) for c in g])
    n = len(f) - 1
    if n < 1 or len(rf.ptrim([rf.elem(c) for c in g])) != len(g):
        return False
    x = [rf.zero, rf.one]
    power = x
    for _ in range(n // 2):
        power = rf.ppowmod(power, p, f)
        if len(rf.pgcd(f, rf.psub(power, x))) > 1:
            return False
    return True
