"""Local conditions on a rational number and a deterministic solver for them.

A constraint restricts the value ``scale * x + shift`` at one place.  The
solver writes x = N / D with D built from the allowed denominator primes,
turns every finite condition into a set of residues of N modulo a prime
power, folds the most selective of those sets by CRT, and walks the
resulting progression in order of increasing |N| (positive first).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import InvalidInput, SearchExhausted, Unsatisfiable
from .hilbert import INF, hilbert_symbol
from .localfield import LocalElement, Padic, is_square, vp
from .numfield import NumberField, find_split_primes, splitting_type
from .ratpoly import as_rational

DEFAULT_CAP = 10 ** 6
FOLD_LIMIT = 200_000
MAX_TWO_POWER = 12
MAX_ODD_POWER = 3
WINDOW_WIDTHS = (2, 4, 6, 8)


# ---------------------------------------------------------------------------
# constraint language


@dataclass(frozen=True)
class LocalConstraint:
    """Base class; ``scale`` and ``shift`` select the value scale*x + shift."""

    def value(self, x: Fraction) -> Fraction:
        return as_rational(self.scale) * x + as_rational(self.shift)

    @property
    def place(self):
        return self.p

    def describe(self) -> str:
        inner = "x" if (self.scale, self.shift) == (1, 0) else f"{self.scale}*x + {self.shift}"
        return f"{type(self).__name__}({self._args()}; {inner})"


@dataclass(frozen=True)
class SignAt(LocalConstraint):
    sign: int
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)
    p: str = INF

    def _args(self):
        return f"inf, {'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class SquareAt(LocalConstraint):
    p: object
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return str(self.p)


@dataclass(frozen=True)
class NonsquareAt(LocalConstraint):
    p: object
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return str(self.p)


@dataclass(frozen=True)
class ValParity(LocalConstraint):
    p: int
    odd: bool
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return f"{self.p}, {'odd' if self.odd else 'even'}"


@dataclass(frozen=True)
class ValEquals(LocalConstraint):
    p: int
    n: int
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return f"{self.p}, {self.n}"


@dataclass(frozen=True)
class UnitAt(LocalConstraint):
    p: int
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return str(self.p)


@dataclass(frozen=True)
class HilbertEq(LocalConstraint):
    p: object
    ref: Fraction
    target: int
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)

    def _args(self):
        return f"{self.p}, ref={self.ref}, target={self.target:+d}"


@dataclass(frozen=True)
class IntegralOutside(LocalConstraint):
    primes: frozenset
    scale: Fraction = Fraction(1)
    shift: Fraction = Fraction(0)
    p: object = None

    def _args(self):
        return "{" + ", ".join(map(str, sorted(self.primes))) + "}"


KINDS = {cls.__name__: cls for cls in
         (SignAt, SquareAt, NonsquareAt, ValParity, ValEquals, UnitAt, HilbertEq, IntegralOutside)}


@dataclass(frozen=True)
class ConstraintSet:
    """Constraints plus the primes allowed in denominators (empty: integers only)."""

    constraints: tuple = ()
    denominator_support: frozenset = dc_field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "denominator_support", frozenset(self.denominator_support))
        seen = set()
        for c in self.constraints:
            if isinstance(c, (ValParity, ValEquals, UnitAt)):
                key = (c.p, as_rational(c.scale), as_rational(c.shift))
                if key in seen:
                    raise InvalidInput(f"two valuation constraints on the same value at {c.p}")
                seen.add(key)
            if isinstance(c, SignAt) and c.sign not in (1, -1):
                raise InvalidInput("sign must be +1 or -1")
            if isinstance(c, HilbertEq) and c.target not in (1, -1):
                raise InvalidInput("Hilbert target must be +1 or -1")

    def to_dict(self) -> dict:
        out = []
        for c in self.constraints:
            d = {"kind": type(c).__name__}
            for name in c.__dataclass_fields__:
                val = getattr(c, name)
                if isinstance(val, frozenset):
                    val = sorted(val, key=str)
                elif name in ("scale", "shift", "ref"):
                    val = str(as_rational(val))
                d[name] = val
            out.append(d)
        return {"constraints": out, "denominator_support": sorted(self.denominator_support)}

    @classmethod
    def from_dict(cls, data: dict) -> "ConstraintSet":
        cons = []
        for d in data.get("constraints", []):
            d = dict(d)
            kind = KINDS.get(d.pop("kind", None))
            if kind is None:
                raise InvalidInput("unknown constraint kind")
            for name in ("scale", "shift", "ref"):
                if name in d:
                    d[name] = as_rational(d[name])
            if "primes" in d:
                d["primes"] = frozenset(d["primes"])
            cons.append(kind(**d))
        return cls(tuple(cons), frozenset(data.get("denominator_support", ())))


# ---------------------------------------------------------------------------
# checking


@dataclass(frozen=True)
class Violation:
    constraint: LocalConstraint
    datum: str

    def __str__(self):
        return f"{self.constraint.describe()}: {self.datum}"


def _holds(c: LocalConstraint, y: Fraction) -> tuple[bool, str]:
    """Whether the value y satisfies c, with the local datum that decided it."""
    if isinstance(c, IntegralOutside):
        bad = [p for p in _prime_factors(y.denominator) if p not in c.primes]
        return not bad, f"denominator {y.denominator}"
    if y == 0:
        return False, "value is 0"
    if isinstance(c, SignAt):
        return (y > 0) == (c.sign > 0), f"value {y}"
    if isinstance(c, (SquareAt, NonsquareAt)):
        sq = y > 0 if c.p == INF else is_square(LocalElement.exact(y, Padic(c.p)))
        return sq == isinstance(c, SquareAt), "square" if sq else "nonsquare"
    if isinstance(c, HilbertEq):
        s = hilbert_symbol(c.ref, y, c.p)
        return s == c.target, f"symbol {s:+d}"
    v = vp(y, c.p)
    if isinstance(c, ValParity):
        return (v % 2 == 1) == c.odd, f"valuation {v}"
    if isinstance(c, ValEquals):
        return v == c.n, f"valuation {v}"
    if isinstance(c, UnitAt):
        return v == 0, f"valuation {v}"
    raise InvalidInput(f"unknown constraint {c!r}")


def check_constraints(x, cs: ConstraintSet) -> list[Violation]:
    """Every violated constraint with the local datum computed for x."""
    x = as_rational(x)
    if x == 0:
        raise InvalidInput("x must be nonzero")
    out = []
    for c in cs.constraints:
        ok, datum = _holds(c, c.value(x))
        if not ok:
            out.append(Violation(c, datum))
    outside = [p for p in _prime_factors(x.denominator) if p not in cs.denominator_support]
    if outside:
        out.append(Violation(IntegralOutside(cs.denominator_support), f"denominator {x.denominator}"))
    return out


def _prime_factors(n: int) -> list[int]:
    from sympy import factorint

    return sorted(factorint(abs(n))) if abs(n) > 1 else []


# ---------------------------------------------------------------------------
# solving


def _margin(p: int) -> int:
    return 3 if p == 2 else 1


def _window(cons: list, p: int, lowest: int = 0, width: int = 2) -> list[int]:
    """Admissible valuations of one value at p, in preference order."""
    pinned = [c.n for c in cons if isinstance(c, ValEquals)] + [0 for c in cons if isinstance(c, UnitAt)]
    if pinned:
        if len(set(pinned)) > 1:
            raise Unsatisfiable(f"conflicting valuations at {p}")
        return [pinned[0]]
    window = list(range(lowest, lowest + width))
    for c in cons:
        if isinstance(c, ValParity):
            window = [v for v in window if (v % 2 == 1) == c.odd]
        elif isinstance(c, SquareAt):
            window = [v for v in window if v % 2 == 0]
    if not window:
        raise Unsatisfiable(f"no valuation at {p} meets every constraint")
    return window


def _transform_key(c):
    return (as_rational(c.scale), as_rational(c.shift))


def _residues(p: int, cons: list, D: int, width: int = 2) -> tuple[int, set]:
    """Residues N mod p^k for which every constraint at p holds for x = N / D."""
    groups: dict = {}
    for c in cons:
        groups.setdefault(_transform_key(c), []).append(c)
    specs = []
    vD = vp(D, p)
    k = 1
    for (s, t), group in groups.items():
        if s == 0:
            for c in group:
                ok, datum = _holds(c, t)
                if not ok:
                    raise Unsatisfiable(f"constant value {t} violates {c.describe()}")
            continue
        # generic valuation of (s N + t D) / D over integers N
        lowest = min(vp(s, p), vp(t, p) + vD) if t else vp(s, p)
        window = _window(group, p, lowest - vD, width)
        # value(N) = (s N + t D) / D; decided once its valuation is below k + v(s) - v(D) - margin
        k = max(k, max(window) + vD - vp(s, p) + _margin(p))
        specs.append((s, t, window, group))
    if not specs:
        return 1, {0}
    mod = p ** k
    found = set()
    stack = [(0, 0)]  # residue mod p^j, j
    while stack:
        r, j = stack.pop()
        if _pruned(r, j, specs, p, D, vD):
            continue
        if j == k:
            if _leaf_ok(r, k, specs, p, D, vD):
                found.add(r)
            continue
        step = p ** j
        stack.extend((r + d * step, j + 1) for d in range(p))
    if not found:
        raise Unsatisfiable(f"no residue class at {p} satisfies the constraints")
    return mod, found


def _widening_residues(p: int, cons: list, D: int):
    """Residues for the narrowest valuation window that admits any."""
    for width in WINDOW_WIDTHS[:-1]:
        try:
            return _residues(p, cons, D, width)
        except Unsatisfiable:
            pass
    return _residues(p, cons, D, WINDOW_WIDTHS[-1])


def _pruned(r, j, specs, p, D, vD) -> bool:
    for s, t, window, _ in specs:
        w = s * r + t * D
        bound = j + vp(s, p)  # s N + t D is known modulo p^bound
        vw = vp(w, p) if w else None
        if vw is not None and vw < bound:
            if vw - vD not in window:
                return True
        elif bound - vD > max(window):
            return True
    return False


def _leaf_ok(r, k, specs, p, D, vD) -> bool:
    for s, t, window, group in specs:
        y = (s * r + t * D) / D
        if y == 0:
            return False
        v = vp(y, p)
        if v not in window or v + _margin(p) > k + vp(s, p) - vD:
            return False
        for c in group:
            if not _holds(c, y)[0]:
                return False
    return True


def _real_interval(cons: list) -> tuple:
    lo, hi = None, None
    for c in cons:
        if isinstance(c, HilbertEq):
            ref = as_rational(c.ref)
            if ref > 0:
                if c.target == -1:
                    raise Unsatisfiable("(ref, x) at the real place is +1 for ref > 0")
                continue
            sign = c.target
        elif isinstance(c, SquareAt):
            sign = 1
        elif isinstance(c, NonsquareAt):
            sign = -1
        else:
            sign = c.sign
        s, t = _transform_key(c)
        if s == 0:
            if (t > 0) != (sign > 0) or t == 0:
                raise Unsatisfiable(f"constant value {t} has the wrong sign")
            continue
        bound = -t / s
        if (s > 0) == (sign > 0):
            lo = bound if lo is None else max(lo, bound)
        else:
            hi = bound if hi is None else min(hi, bound)
    if lo is not None and hi is not None and lo >= hi:
        raise Unsatisfiable("sign conditions at the real place are incompatible")
    return lo, hi


def _denominators(cs: ConstraintSet):
    """Denominators to try in increasing order: the forced part times small powers of the support."""
    base = 1
    pinned = set()
    for c in cs.constraints:
        if isinstance(c, (ValEquals, UnitAt)) and _transform_key(c) == (1, 0):
            pinned.add(c.p)
            if isinstance(c, ValEquals) and c.n < 0:
                if c.p not in cs.denominator_support:
                    raise Unsatisfiable(f"valuation {c.n} at {c.p} needs {c.p} in the denominator")
                base *= c.p ** (-c.n)
    extra = [1]
    for p in sorted(cs.denominator_support - pinned):
        top = MAX_TWO_POWER if p == 2 else MAX_ODD_POWER
        extra = [m * p ** e for m in extra for e in range(top + 1)]
    for m in sorted(extra):
        yield base * m


def _progression(M: int, R: list, sign: int):
    """sign * n for n > 0 with sign * n congruent to R mod M, in increasing n."""
    base = sorted({(sign * r) % M for r in R})
    j = 0
    while True:
        for r in base:
            n = r + j * M
            if n:
                yield (n, sign < 0), sign * n
        j += 1


def _by_abs(M: int, R: list, lo, hi):
    """Nonzero integers congruent to R mod M by increasing |N|, positive first, inside (lo, hi)."""
    limit = None if lo is None or hi is None else max(abs(lo), abs(hi))
    for (n, _), N in heapq.merge(_progression(M, R, 1), _progression(M, R, -1)):
        if limit is not None and n > limit:
            return
        if (lo is None or N > lo) and (hi is None or N < hi):
            yield N


def solve_constraints(cs: ConstraintSet, cap: int = DEFAULT_CAP) -> Fraction:
    """The first rational satisfying every constraint in the solver's order."""
    by_place: dict = {}
    for c in cs.constraints:
        if isinstance(c, IntegralOutside):
            continue
        by_place.setdefault(c.place, []).append(c)
    support = cs.denominator_support
    for c in cs.constraints:
        if isinstance(c, IntegralOutside):
            support = support & c.primes
    real = by_place.pop(INF, [])
    lo, hi = _real_interval(real)
    tried = 0
    feasible = False
    for D in _denominators(ConstraintSet(cs.constraints, support)):
        try:
            tables = []
            for p, cons in sorted(by_place.items()):
                M, R = _widening_residues(p, cons, D)
                tables.append((len(R) / M, p, M, R))
        except Unsatisfiable:
            continue
        feasible = True
        tables.sort()
        M, R = 1, [0]
        rest = []
        for _, p, m, r in tables:
            if len(R) * len(r) <= FOLD_LIMIT:
                M, R = _crt_fold(M, R, m, sorted(r))
            else:
                rest.append((m, r))
        nlo = None if lo is None else lo * D
        nhi = None if hi is None else hi * D
        for N in _by_abs(M, R, nlo, nhi):
            if N == 0:
                continue
            tried += 1
            if tried > cap:
                raise SearchExhausted(f"no solution among the first {cap} candidates")
            if any(N % m not in r for m, r in rest):
                continue
            x = Fraction(N, D)
            if not check_constraints(x, ConstraintSet(cs.constraints, support)):
                return x
    if not feasible:
        raise Unsatisfiable("no admissible denominator meets the local conditions")
    raise SearchExhausted("no solution for any admissible denominator")


def _crt_fold(M1: int, R1: list, M2: int, R2: list):
    if M2 == 1:
        return M1, R1
    inv = pow(M1, -1, M2)
    M = M1 * M2
    out = []
    for a in R1:
        for b in R2:
            out.append((a + M1 * ((b - a) * inv % M2)) % M)
    return M, sorted(out)


# ---------------------------------------------------------------------------
# the choice of a


@dataclass
class ChoiceOfA:
    a: Fraction
    S: tuple
    S_prime: tuple
    constraints: ConstraintSet
    replaced_empty_S: bool = False
    nonsquare_over_L: str = ""


def s_prime_of(a) -> tuple:
    """Real place if a < 0, then the odd primes where a has odd valuation."""
    a = as_rational(a)
    out = [INF] if a < 0 else []
    out += [p for p in _prime_factors(a.numerator * a.denominator) if p != 2 and vp(a, p) % 2]
    return tuple(out)


def choose_a_constraints(S) -> ConstraintSet:
    cons = [SquareAt(2)]
    for v in S:
        if v == INF:
            cons.append(SignAt(-1))
        else:
            cons.append(ValParity(v, True))
    return ConstraintSet(tuple(cons))


def _validate_S(S):
    out = []
    for v in S:
        if v == INF:
            out.append(INF)
        elif isinstance(v, int) and v > 2 and _prime_factors(v) == [v]:
            out.append(v)
        else:
            raise InvalidInput(f"S must consist of odd primes and inf, got {v!r}")
    return sorted(set(out), key=lambda v: (v != INF, 0 if v == INF else v))


def choose_a(L: NumberField, S, cap: int = DEFAULT_CAP) -> ChoiceOfA:
    """An integral non-square a meeting the recipe's conditions for S.

    Real places outside S are asked for a > 0 first, so that S' stays small;
    that preference is dropped if it makes the search fail.
    """
    S = _validate_S(S)
    replaced = False
    if not S:
        S = [find_split_primes(L, 1, 2)[0]]
        replaced = True
    cs = choose_a_constraints(S)
    try:
        preferred = cs if INF in S else ConstraintSet(cs.constraints + (SignAt(1),))
        a = solve_constraints(preferred, cap)
    except (Unsatisfiable, SearchExhausted):
        a = solve_constraints(cs, cap)
    note = ""
    for v in S:
        if v != INF and splitting_type(L, v) == [1] * L.degree:
            note = f"a is a nonsquare at the split prime {v}, hence not a square in L"
            assert not check_constraints(a, ConstraintSet((NonsquareAt(v),)))
            break
    return ChoiceOfA(a, tuple(S), s_prime_of(a), cs, replaced, note)
