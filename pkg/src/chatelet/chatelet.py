"""Chatelet surfaces y^2 - a z^2 = P(x): local solvability, Brauer invariants, verdicts.

Local questions are decided by covering K_w and the chart at infinity with
p-adic balls.  On a ball the square class of a polynomial is read off its
reduction modulo the maximal ideal (odd residue characteristic) or from a
Taylor-stability bound (p = 2); balls around roots are certified with
Newton's criterion.  Everything outside the bad places is settled by the
good-reduction argument and contributes a solvable place with invariant 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import isqrt

from sympy import factorint

from . import kpoly
from .errors import (
    InsufficientPrecision, InvalidInput, MissingFactorization, PrecisionCapExceeded,
    UnsupportedPlace,
)
from .hilbert import INF, hilbert_symbol_local
from .localfield import (
    PRECISION_CAP, LocalElement, LocalField, Padic, is_square, taylor_coeffs,
)
from .numfield import (
    RAMIFIED, NFElement, NumberField, PlaceOfL, local_embed, local_field_at, places_above,
)
from .ratpoly import sample_points

HALF = Fraction(1, 2)
WEIL_THRESHOLD = 400
DEPTH_CAP = 200
START_PRECISION = 16

QQ = NumberField.rationals()


# ---------------------------------------------------------------------------
# the surface


@dataclass(frozen=True)
class Factorization:
    """P = const * f1 * f2 with f1, f2 quadratic; the generator is (a, f1)."""

    const: NFElement
    f1: tuple
    f2: tuple


@dataclass(frozen=True)
class ChateletSurface:
    field: NumberField
    a: NFElement
    poly: tuple
    factorization: Factorization | None = None

    @classmethod
    def create(cls, a, P, factorization=None, field: NumberField | None = None) -> "ChateletSurface":
        """Build and validate a surface.

        ``factorization`` is ``(const, f1, f2)``; coefficients may be
        rationals or coordinate lists in ``field`` (default Q).
        """
        F = field or QQ
        a = F.element(a)
        poly = tuple(kpoly.kp(F, P))
        fac = None
        if factorization is not None:
            k, f1, f2 = factorization
            fac = Factorization(F.element(k), tuple(kpoly.kp(F, f1)), tuple(kpoly.kp(F, f2)))
        surf = cls(F, a, poly, fac)
        surf._validate()
        return surf

    def _validate(self):
        if not self.a:
            raise InvalidInput("a must be nonzero")
        if kpoly.degree(self.poly) != 4:
            raise InvalidInput("P must have degree 4")
        if not kpoly.discriminant(list(self.poly)):
            raise InvalidInput("P is not separable")
        if _is_global_square(self.a):
            raise InvalidInput(f"a = {self.a} is a square in the base field")
        if self.factorization is not None:
            fac = self.factorization
            if kpoly.degree(fac.f1) != 2 or kpoly.degree(fac.f2) != 2:
                raise InvalidInput("factorization must use two quadratics")
            prod = kpoly.scale(kpoly.mul(list(fac.f1), list(fac.f2)), fac.const)
            if kpoly.sub(prod, list(self.poly)):
                raise InvalidInput("const * f1 * f2 differs from P")

    @property
    def is_over_q(self) -> bool:
        return self.field.is_rational

    @property
    def cofactor(self) -> list:
        """P / f1, the partner of the generator's quadratic."""
        if self.factorization is None:
            raise MissingFactorization("no factorization supplied")
        q, r = kpoly.divmod_(list(self.poly), list(self.factorization.f1))
        assert not r
        return q

    def scaled(self, t, s) -> "ChateletSurface":
        """The isomorphic surface with a -> a t^2 and P -> P s^2."""
        F = self.field
        t, s = F.element(t), F.element(s)
        fac = None
        if self.factorization is not None:
            f = self.factorization
            fac = Factorization(f.const * s * s, f.f1, f.f2)
        return ChateletSurface(F, self.a * t * t, tuple(kpoly.scale(list(self.poly), s * s)), fac)

    def describe(self) -> str:
        return f"y^2 - ({_fmt_elem(self.a)}) z^2 = {kpoly.fmt(list(self.poly))}"


def _fmt_elem(x: NFElement) -> str:
    if x.is_rational():
        return str(x.rational())
    return str(x.poly).replace("x", "t")


def _is_global_square(a: NFElement) -> bool:
    F = a.field
    if F.is_rational:
        q = a.rational()
        return q > 0 and _is_square_int(q.numerator) and _is_square_int(q.denominator)
    # a nonsquare at some degree-1 place certifies a nonsquare in F
    p = 3
    from sympy import nextprime

    while p < 2000:
        if F.disc.numerator % p and a.denominator() % p and a.norm() % p:
            for pl in places_above(F, p):
                if pl.degree == 1 and not is_square(local_embed(a, pl, 4)):
                    return False
        p = nextprime(p)
    return True


def _is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


# ---------------------------------------------------------------------------
# places


def _primes_of(x: NFElement) -> set[int]:
    out = set()
    for n in (x.norm().numerator, x.norm().denominator, x.denominator()):
        if n:
            out.update(factorint(abs(n)))
    out.discard(1)
    return out


def bad_primes(V: ChateletSurface) -> list[int]:
    P = list(V.poly)
    primes = {2}
    primes |= _primes_of(V.a)
    primes |= _primes_of(P[-1])
    primes |= _primes_of(kpoly.discriminant(P))
    for c in P:
        if c:
            primes.update(factorint(c.denominator()))
    if V.factorization is not None:
        f1, f2 = list(V.factorization.f1), list(V.factorization.f2)
        primes |= _primes_of(kpoly.resultant(f1, f2))
        primes |= _primes_of(f1[-1] * f2[-1])
        for c in f1 + f2:
            if c:
                primes.update(factorint(c.denominator()))
    primes.discard(1)
    return sorted(primes)


def bad_places(V: ChateletSurface) -> list[PlaceOfL]:
    """Places outside which the surface is certified solvable with invariant 0."""
    out = []
    for pl in places_above(V.field, INF):
        if pl.kind == "real" and local_embed(V.a, pl).sign < 0:
            out.append(pl)
    for p in bad_primes(V):
        out.extend(places_above(V.field, p))
    return out


def place_label(place: PlaceOfL, field: NumberField) -> str:
    if field.is_rational:
        return str(place.under)
    return place.label()


def resolve_place(V: ChateletSurface, w) -> PlaceOfL:
    """Accept a PlaceOfL, or "inf" / a prime when the base field is Q."""
    if isinstance(w, PlaceOfL):
        return w
    if not V.field.is_rational:
        raise InvalidInput("places of a number field must be given as PlaceOfL")
    return places_above(QQ, w)[0]


# ---------------------------------------------------------------------------
# results


@dataclass
class LocalResult:
    place: str
    solvable: bool | None
    invariants: tuple | None
    local_field: str
    method: str
    precision: int | None = None
    status: str = "ok"
    note: str = ""

    @property
    def two_valued(self) -> bool:
        return self.invariants is not None and len(self.invariants) == 2


@dataclass
class Verdict:
    classification: str
    places: tuple = ()
    adelic_nonempty: bool | None = None
    forced_sum: object = None
    provenance: str = ""
    partial: bool = False

    def summary(self) -> str:
        if self.places:
            return f"{self.classification}({', '.join(self.places)})"
        return self.classification


@dataclass
class AnalysisReport:
    surface: ChateletSurface
    over: NumberField
    per_place: list
    verdict: Verdict
    elapsed: float = 0.0
    notes: list = dc_field(default_factory=list)

    def result_at(self, label: str) -> LocalResult:
        for r in self.per_place:
            if r.place == label:
                return r
        raise KeyError(label)

    def results_above(self, prime) -> list:
        key = str(prime)
        return [r for r in self.per_place if r.place == key or r.place.split("#")[0].split(":")[0] == key]


# ---------------------------------------------------------------------------
# local engines


class _BallSearch:
    """Exhaustive certified search over balls of K_w and the chart at infinity."""

    def __init__(self, field: LocalField, a: LocalElement, charts, want_invariants: bool):
        self.field = field
        self.a = a
        self.charts = charts  # list of (polys, start_radius)
        self.want_invariants = want_invariants
        self.p = field.p
        self.solvable = False
        self.values: set = set()
        if self.p != 2:
            self.rf = field.residue_field
            self.alpha = a.valuation
            self.chi_a = self.rf.chi(a.unit_residue(1))
            self.sign_parity = ((self.rf.q - 1) // 2) % 2

    # symbols

    def _sym_reduced(self, m: int, chi_u: int) -> int:
        s = -1 if (self.alpha * m * self.sign_parity) % 2 else 1
        if m % 2:
            s *= self.chi_a
        if self.alpha % 2:
            s *= chi_u
        return s

    def _record(self, s1: int, s2: int | None = None):
        if s2 is None:
            if s1 == 1:
                self.solvable = True
            return
        if s1 * s2 == 1:
            self.solvable = True
            self.values.add(Fraction(0) if s1 == 1 else HALF)

    def _done(self) -> bool:
        if self.want_invariants:
            return len(self.values) == 2
        return self.solvable

    # driver

    def run(self):
        for polys, r0 in self.charts:
            stack = [(LocalElement.exact(0, self.field), r0)]
            while stack:
                if self._done():
                    return
                c, r = stack.pop()
                if r > DEPTH_CAP:
                    raise PrecisionCapExceeded("ball refinement did not terminate")
                if self.p == 2:
                    stack.extend(self._dyadic_ball(polys, c, r))
                else:
                    stack.extend(self._odd_ball(polys, c, r))

    # odd residue characteristic

    def _reduction(self, F, c, r):
        T = taylor_coeffs(F, c)
        scaled = [t * Fraction(self.p) ** (r * j) for j, t in enumerate(T)]
        known = [s.valuation for s in scaled if s.known_nonzero()]
        if not known:
            raise InsufficientPrecision("polynomial vanishes to working precision on a ball")
        m = min(known)
        red = []
        for s in scaled:
            if s.known_nonzero():
                red.append(self.rf.elem(*s.unit_residue(1)) if s.valuation == m else self.rf.zero)
            elif s.v_lower() <= m:
                raise InsufficientPrecision("Gauss valuation undetermined")
            else:
                red.append(self.rf.zero)
        return m, self.rf.ptrim(red)

    def _odd_ball(self, polys, c, r):
        reds = [self._reduction(F, c, r) for F in polys]
        roots = set()
        for _, red in reds:
            roots.update(self.rf.roots(red))
        if self.rf.q <= WEIL_THRESHOLD:
            for t in self.rf.elements():
                if t in roots:
                    continue
                syms = [self._sym_reduced(m, self.rf.chi(self.rf.peval(red, t))) for m, red in reds]
                self._record(*syms)
                if self._done():
                    return []
        else:
            for chis in self._weil_patterns([red for _, red in reds]):
                self._record(*(self._sym_reduced(m, ch) for (m, _), ch in zip(reds, chis)))
        children = []
        step = Fraction(self.p) ** r
        for t in sorted(roots):
            c2 = c + LocalElement(self.field, tuple(x * step for x in t))
            if not self._certified_root_ball(polys, c2, r + 1):
                children.append((c2, r + 1))
        return children

    def _weil_patterns(self, reds):
        """Character patterns realised off the roots (valid for q above the threshold)."""
        rf = self.rf

        def const_square(h):
            return len(h) <= 1 or rf.is_const_times_square(h)

        def lead_chi(h):
            return rf.chi(h[-1])

        if len(reds) == 1:
            h = reds[0]
            return [(lead_chi(h),)] if const_square(h) else [(1,), (-1,)]
        h1, h2 = reds
        sq1, sq2 = const_square(h1), const_square(h2)
        if sq1 and sq2:
            return [(lead_chi(h1), lead_chi(h2))]
        if sq1:
            return [(lead_chi(h1), 1), (lead_chi(h1), -1)]
        if sq2:
            return [(1, lead_chi(h2)), (-1, lead_chi(h2))]
        if const_square(rf.pmul(h1, h2)):
            prod = lead_chi(h1) * lead_chi(h2)
            return [(1, prod), (-1, -prod)]
        return [(1, 1), (1, -1), (-1, 1), (-1, -1)]

    # dyadic: Taylor stability with margin 3

    def _dyadic_ball(self, polys, c, r):
        values = []
        for F in polys:
            T = taylor_coeffs(F, c)
            if not self._stable(T, r):
                break
            values.append(T[0])
        else:
            self._record(*(hilbert_symbol_local(self.a, v) for v in values))
            return []
        if self._certified_root_ball(polys, c, r):
            return []
        step = Fraction(2) ** r
        return [(c, r + 1), (c + step, r + 1)]

    def _stable(self, T, r) -> bool:
        if not T[0].known_nonzero():
            return False
        v0 = T[0].valuation
        margin = self.field.square_margin
        if T[0].relprec <= margin:
            raise InsufficientPrecision("value known to too few digits")
        return all(t.v_lower() + r * j >= v0 + margin for j, t in enumerate(T) if j)

    # balls holding a root of P

    def _newton_root(self, F, c, r) -> bool:
        T = taylor_coeffs(F, c)
        if len(T) < 2 or not T[1].known_nonzero():
            return False
        e = T[1].valuation
        lb = T[0].v_lower()
        return lb > 2 * e and lb - e >= r

    def _certified_root_ball(self, polys, c, r) -> bool:
        if len(polys) == 1:
            if self._newton_root(polys[0], c, r):
                self.solvable = True
                return True
            return False
        for i in (0, 1):
            F, G = polys[i], polys[1 - i]
            if self._newton_root(F, c, r):
                T = taylor_coeffs(G, c)
                if self._stable(T, r):
                    s = hilbert_symbol_local(self.a, T[0])
                    self.solvable = True
                    self.values.add(Fraction(0) if s == 1 else HALF)
                    return True
        return False


def _reverse(coeffs, degree):
    cs = list(coeffs) + [None] * (degree + 1 - len(coeffs))
    return list(reversed(cs))


def _finite_result(V, place: PlaceOfL, field: LocalField, embed, want_invariants: bool, precision):
    """Run the ball search, doubling precision until certified."""
    N = precision or START_PRECISION
    while True:
        try:
            a = embed(V.a, N)
            if is_square(a):
                return True, (Fraction(0),), N, "a is a local square"
            if field.p == 2 and field.dim != 1:
                raise UnsupportedPlace("dyadic place with a nonsquare")
            P = [embed(c, N) for c in V.poly]
            if want_invariants:
                f1 = [embed(c, N) for c in V.factorization.f1]
                g = [embed(c, N) for c in V.cofactor]
                charts = [([f1, g], 0), ([_reverse(f1, 2), _reverse(g, 2)], 1)]
            else:
                charts = [([P], 0), ([_reverse(P, 4)], 1)]
            search = _BallSearch(field, a, charts, want_invariants)
            search.run()
            invs = tuple(sorted(search.values)) if want_invariants else None
            return search.solvable, invs, N, "ball search"
        except InsufficientPrecision:
            if N >= PRECISION_CAP:
                raise PrecisionCapExceeded(f"precision cap {PRECISION_CAP} reached")
            N = min(2 * N, PRECISION_CAP)


def _embedder(V: ChateletSurface, place: PlaceOfL, field: LocalField, exact: bool):
    if V.field.is_rational:
        if exact:
            return lambda x, N: LocalElement.exact(x.rational(), field)
        from .localfield import embed_rational

        return lambda x, N: embed_rational(x.rational(), field, N)
    return lambda x, N: local_embed(x, place, N)


def _real_result(V: ChateletSurface, place: PlaceOfL, want_invariants: bool):
    if local_embed(V.a, place).sign > 0:
        return True, (Fraction(0),) if want_invariants else None, "a > 0"
    if not kpoly.is_rational(list(V.poly)):
        raise UnsupportedPlace("real place with irrational coefficients")
    P = kpoly.to_ratpoly(list(V.poly))
    positive = [x for x in sample_points(P) if P(x) > 0]
    if not want_invariants:
        return bool(positive), None, "sign analysis"
    f1 = kpoly.to_ratpoly(list(V.factorization.f1))
    vals = {Fraction(0) if f1(x) > 0 else HALF for x in positive}
    return bool(positive), tuple(sorted(vals)), "sign analysis"


def local_result(V: ChateletSurface, w, want_invariants: bool | None = None,
                 precision: int | None = None, field_override: LocalField | None = None) -> LocalResult:
    """Solvability (and invariant set when factored) at one place of the base field."""
    place = resolve_place(V, w)
    if want_invariants is None:
        want_invariants = V.factorization is not None
    if want_invariants and V.factorization is None:
        raise MissingFactorization("invariant sets need P = k f1 f2")
    label = place_label(place, V.field)
    if place.kind == "complex":
        return LocalResult(label, True, (Fraction(0),) if want_invariants else None, "C", "complex place")
    if place.kind == "real":
        solv, invs, how = _real_result(V, place, want_invariants)
        return LocalResult(label, solv, invs if solv or invs is None else (), "R", how)
    if place.kind == RAMIFIED:
        a = V.a
        if a.is_rational() and is_square(LocalElement.exact(a.rational(), Padic(place.under))):
            return LocalResult(label, True, (Fraction(0),) if want_invariants else None,
                               f"ext of Q_{place.under}", "a is a square in Q_p")
        raise UnsupportedPlace(f"ramified place above {place.under}")
    field = field_override or local_field_at(V.field, place)
    exact = V.field.is_rational and precision is None
    embed = _embedder(V, place, field, exact)
    solv, invs, N, how = _finite_result(V, place, field, embed, want_invariants, precision)
    if invs is not None and not solv:
        invs = ()
    return LocalResult(label, solv, invs, repr(field), how, None if exact else N)


def locally_solvable(V: ChateletSurface, w, precision: int | None = None) -> bool:
    return local_result(V, w, want_invariants=False, precision=precision).solvable


def invariant_set(V: ChateletSurface, w, precision: int | None = None) -> frozenset:
    return frozenset(local_result(V, w, want_invariants=True, precision=precision).invariants)


# ---------------------------------------------------------------------------
# global verdicts


def _verdict(V: ChateletSurface, results: list, unsupported: list) -> Verdict:
    partial = bool(unsupported)
    bad = tuple(r.place for r in results if r.solvable is False)
    if bad:
        return Verdict("LocallyInsolvable", bad, False, None, "local computation", partial)
    if partial:
        return Verdict("Undetermined", tuple(unsupported), None, None,
                       "unsupported places", True)
    if V.factorization is None:
        return Verdict("Undetermined", (), True, None,
                       "adelic points exist; no Brauer generator supplied")
    two = tuple(r.place for r in results if r.two_valued)
    if two:
        return Verdict("RationalPointsExistWAFailsOff", two, True, "Mixed",
                       "conditional on CTSSD87 (Brauer-Manin obstruction is the only one)")
    total = sum((r.invariants[0] for r in results), Fraction(0))
    if total % 1:
        return Verdict("HasseCounterexampleBM", (), True, total, "Brauer-Manin reciprocity")
    return Verdict("RationalPointsExistWAHolds", (), True, Fraction(0), _wa_provenance(V))


def _wa_provenance(V: ChateletSurface) -> str:
    # a factor proportional to x^2 - a makes the generator trivial and V birational to a quadric
    a = V.a
    for f in (V.factorization.f1, V.factorization.f2):
        f = list(f)
        if not f[1] and f[0] == -a * f[2]:
            return "quadric reduction (unconditional)"
    return "conditional on CTSSD87 (Brauer-Manin obstruction is the only one)"


def global_analysis(V: ChateletSurface, precision: int | None = None) -> AnalysisReport:
    start = time.perf_counter()
    results, unsupported, notes = [], [], []
    for pl in bad_places(V):
        try:
            results.append(local_result(V, pl, precision=precision))
        except UnsupportedPlace as exc:
            label = place_label(pl, V.field)
            unsupported.append(label)
            results.append(LocalResult(label, None, None, "?", "unsupported", status="unsupported", note=str(exc)))
    if not V.field.irreducibility_verified:
        notes.append("irreducibility of the field polynomial not certified")
    supported = [r for r in results if r.status == "ok"]
    verdict = _verdict(V, supported, unsupported)
    return AnalysisReport(V, V.field, results, verdict, time.perf_counter() - start, notes)


def analyze_over_extension(V: ChateletSurface, L: NumberField, precision: int | None = None) -> AnalysisReport:
    """Per-place analysis of a surface over Q after base change to L."""
    if not V.is_over_q:
        raise InvalidInput("base change is only supported from Q")
    start = time.perf_counter()
    results, unsupported = [], []
    want = V.factorization is not None
    for p in bad_primes(V):
        base_res = None
        for pl in places_above(L, p):
            label = pl.label()
            try:
                if pl.kind == RAMIFIED or (pl.degree > 1 and p == 2):
                    if is_square(LocalElement.exact(V.a.rational(), Padic(p))):
                        res = LocalResult(label, True, (Fraction(0),) if want else None,
                                          f"ext of Q_{p}", "a is a square in Q_p")
                    else:
                        raise UnsupportedPlace(f"{label}: ramified or dyadic extension place")
                elif pl.degree == 1:
                    if base_res is None:
                        base_res = local_result(V, p, precision=precision)
                    res = _relabel(base_res, label)
                else:
                    field = local_field_at(L, pl)
                    res = local_result(V, p, precision=precision, field_override=field)
                    res = _relabel(res, label)
            except UnsupportedPlace as exc:
                unsupported.append(label)
                res = LocalResult(label, None, None, "?", "unsupported", status="unsupported", note=str(exc))
            results.append(res)
    inf_res = None
    for pl in places_above(L, INF):
        if pl.kind == "complex":
            results.append(LocalResult(pl.label(), True, (Fraction(0),) if want else None, "C", "complex place"))
            continue
        if inf_res is None:
            inf_res = local_result(V, INF, precision=precision)
        results.append(_relabel(inf_res, pl.label()))
    results.sort(key=lambda r: (0 if r.place.startswith(("real", "complex")) else 1, _num_key(r.place)))
    supported = [r for r in results if r.status == "ok"]
    verdict = _verdict(V, supported, unsupported)
    return AnalysisReport(V, L, results, verdict, time.perf_counter() - start)


def _num_key(label: str):
    head = label.split("#")[0].split(":")[0]
    return (int(head) if head.isdigit() else 0, label)


def _relabel(res: LocalResult, label: str) -> LocalResult:
    return LocalResult(label, res.solvable, res.invariants, res.local_field, res.method,
                       res.precision, res.status, res.note)
