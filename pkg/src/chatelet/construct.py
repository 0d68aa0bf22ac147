"""Recipes producing Chatelet surfaces with prescribed local behaviour on a set S.

* V1: no local points exactly at the places of S.
* V2: a rational point, with the generator taking both invariants on S.
* V3: local points everywhere, invariant 1/2 forced on S and 0 elsewhere.

Each recipe chooses a, then b, then c with the constraint solver and records
the choices in a trace.  ``check_recipe`` re-derives the auxiliary sets from
(a, b, c) and reports every violated condition, so externally supplied and
freshly constructed parameters go through the same gate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .chatelet import ChateletSurface, analyze_over_extension, global_analysis
from .chooser import (
    ConstraintSet, HilbertEq, SignAt, SquareAt, UnitAt, ValEquals, ValParity,
    _prime_factors, _validate_S, check_constraints, choose_a, choose_a_constraints, s_prime_of,
    solve_constraints,
)
from .errors import InvalidInput
from .hilbert import INF
from .localfield import vp
from .numfield import NumberField, find_split_primes, splitting_type
from .ratpoly import RatPoly, as_rational

X = RatPoly.x()


@dataclass
class ConstructionTrace:
    recipe: str
    S: tuple
    S_prime: tuple
    S_doubleprime: tuple
    a: Fraction
    b: Fraction | None = None
    c: Fraction | None = None
    v1: int | None = None
    v2: int | None = None
    constraint_sets: dict = dc_field(default_factory=dict)
    notes: list = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "recipe": self.recipe,
            "S": [str(v) for v in self.S],
            "S_prime": [str(v) for v in self.S_prime],
            "S_doubleprime": [str(v) for v in self.S_doubleprime],
            "a": _q(self.a), "b": _q(self.b), "c": _q(self.c),
            "v1": self.v1, "v2": self.v2,
            "constraint_sets": {k: cs.to_dict() for k, cs in self.constraint_sets.items()},
            "notes": list(self.notes),
        }


def _q(x):
    return None if x is None else str(x)


def _finite(S):
    return [v for v in S if v != INF]


def _odd_primes_where(x: Fraction, test) -> tuple:
    x = as_rational(x)
    return tuple(p for p in _prime_factors(x.numerator * x.denominator) if p != 2 and test(vp(x, p)))


def s_doubleprime(recipe: str, b) -> tuple:
    """Odd primes where v(b) is odd (V1) or nonzero (V2, V3)."""
    if recipe == "V1":
        return _odd_primes_where(b, lambda v: v % 2 == 1)
    return _odd_primes_where(b, lambda v: v != 0)


# ---------------------------------------------------------------------------
# constraint sets of each recipe


def v1_b_constraints(a, S, S_prime) -> ConstraintSet:
    cons = []
    if INF in S:
        cons.append(SignAt(-1))
    elif INF in S_prime:
        cons.append(SignAt(1))
    cons += [HilbertEq(p, a, -1) for p in _finite(S)]
    cons += [HilbertEq(p, a, 1) for p in _finite(S_prime) if p not in S]
    return ConstraintSet(tuple(cons))


def v1_c_constraints(S, S_prime, S2) -> ConstraintSet:
    cons = [SquareAt(v) for v in S]
    cons += [ValParity(p, True) for p in S2 if p not in S_prime]
    return ConstraintSet(tuple(cons))


def v2_b_constraints(a, S, S_prime) -> ConstraintSet:
    cons = [ValEquals(p, -vp(a, p)) for p in _finite(S)]
    cons += [ValEquals(p, vp(a, p)) for p in _finite(S_prime) if p not in S]
    return ConstraintSet(tuple(cons), frozenset(_finite(S)) | {2})


def v2_c_constraints(a, b, S, S_prime, v1, v2) -> ConstraintSet:
    b2 = as_rational(b) ** 2
    cons = []
    if INF in S:
        cons.append(SignAt(-1, b2, 1))
    elif INF in S_prime:
        cons.append(SignAt(1))
    for p in _finite(S):
        cons += [HilbertEq(p, a, -1), UnitAt(p)]
    cons += [ValEquals(v1, 1), ValEquals(v2, 1, b2, 1)]
    return ConstraintSet(tuple(cons), frozenset({2}))


def v3_b_constraints(a, S, S_prime) -> ConstraintSet:
    cons = []
    if INF in S:
        cons.append(SignAt(-1))
    elif INF in S_prime:
        cons.append(SignAt(1))
    for p in _finite(S):
        cons += [HilbertEq(p, a, -1), UnitAt(p)]
    for p in _finite(S_prime):
        if p not in S:
            cons += [HilbertEq(p, a, 1), UnitAt(p)]
    return ConstraintSet(tuple(cons), frozenset({2}))


def v3_c_constraints(a, b, S, S_prime, S2, v1, v2) -> ConstraintSet:
    b = as_rational(b)
    cons = []
    if INF in S:
        # 0 < c < -1/b with b < 0
        cons += [SignAt(1), SignAt(1, b, 1)]
    elif INF in S_prime:
        cons.append(SignAt(-1, b, 1))
    cons += [ValEquals(p, vp(a, p) + 2, b, 1) for p in _finite(S_prime)]
    cons += [HilbertEq(p, a, 1) for p in S2]
    cons += [ValEquals(v1, 1), ValEquals(v2, 1, b, 1)]
    return ConstraintSet(tuple(cons), frozenset({2}))


# ---------------------------------------------------------------------------
# recipes


def _check_S(L: NumberField, S):
    S = _validate_S(S)
    for v in _finite(S):
        if splitting_type(L, v) != [1] * L.degree:
            raise InvalidInput(f"{v} does not split completely in the extension")
    return S


def _split_pair(L, avoid):
    return tuple(find_split_primes(L, 2, 2, avoid=set(avoid) | {2}))


def construct_V1(L: NumberField, S):
    S = _check_S(L, S)
    choice = choose_a(L, S)
    a = choice.a
    if not S:
        trace = ConstructionTrace("V1", (), choice.S_prime, (), a,
                                  constraint_sets={"a": choice.constraints},
                                  notes=["S empty: P = 1 - x^4 with the rational point (0, 1, 0)"])
        return ChateletSurface.create(a, 1 - X ** 4), trace
    Sp = choice.S_prime
    bcs = v1_b_constraints(a, S, Sp)
    b = solve_constraints(bcs)
    S2 = s_doubleprime("V1", b)
    ccs = v1_c_constraints(S, Sp, S2)
    c = solve_constraints(ccs)
    trace = ConstructionTrace("V1", tuple(S), Sp, S2, a, b, c,
                              constraint_sets={"a": choice.constraints, "b": bcs, "c": ccs})
    return surface_V1(a, b, c), trace


def construct_V2(L: NumberField, S):
    S = _check_S(L, S)
    choice = choose_a(L, S)
    a, S = choice.a, list(choice.S)
    Sp = choice.S_prime
    bcs = v2_b_constraints(a, S, Sp)
    b = solve_constraints(bcs)
    S2 = s_doubleprime("V2", b)
    v1, v2 = _split_pair(L, set(_finite(Sp)) | set(S2))
    ccs = v2_c_constraints(a, b, S, Sp, v1, v2)
    c = solve_constraints(ccs)
    trace = ConstructionTrace("V2", tuple(S), Sp, S2, a, b, c, v1, v2,
                              {"a": choice.constraints, "b": bcs, "c": ccs},
                              [f"rational point (x, y, z) = (0, {b}, 0)"])
    return surface_V2(a, b, c), trace


def construct_V3(L: NumberField, S):
    S = _check_S(L, S)
    choice = choose_a(L, S)
    a, S = choice.a, list(choice.S)
    Sp = choice.S_prime
    bcs = v3_b_constraints(a, S, Sp)
    b = solve_constraints(bcs)
    S2 = s_doubleprime("V3", b)
    v1, v2 = _split_pair(L, set(_finite(Sp)) | set(S2))
    ccs = v3_c_constraints(a, b, S, Sp, S2, v1, v2)
    c = solve_constraints(ccs)
    trace = ConstructionTrace("V3", tuple(S), Sp, S2, a, b, c, v1, v2,
                              {"a": choice.constraints, "b": bcs, "c": ccs})
    return surface_V3(a, b, c), trace


def surface_V1(a, b, c) -> ChateletSurface:
    a, b, c = map(as_rational, (a, b, c))
    return ChateletSurface.create(a, (X ** 4 - a * c) * b)


def surface_V2(a, b, c) -> ChateletSurface:
    a, b, c = map(as_rational, (a, b, c))
    f1 = RatPoly([1, 0, c])
    f2 = RatPoly([b * b, 0, 1 + c * b * b])
    return ChateletSurface.create(a, f1 * f2, (1, f1, f2))


def surface_V3(a, b, c) -> ChateletSurface:
    a, b, c = map(as_rational, (a, b, c))
    f1 = RatPoly([-c, 0, 1])
    f2 = RatPoly([-b * c - 1, 0, b])
    return ChateletSurface.create(a, f1 * f2, (1, f1, f2))


SURFACES = {"V1": surface_V1, "V2": surface_V2, "V3": surface_V3}


# ---------------------------------------------------------------------------
# verification


def check_recipe(recipe: str, S, a, b, c, v1=None, v2=None, L: NumberField | None = None) -> list:
    """Violations of the recipe's conditions by (a, b, c); empty when all hold.

    S' and S'' are recomputed from a and b rather than taken as input.
    """
    S = _validate_S(S)
    a, b, c = map(as_rational, (a, b, c))
    out: list = []
    acs = choose_a_constraints(S)
    out += check_constraints(a, acs)
    if a.denominator != 1:
        out.append(f"a = {a} is not integral")
    Sp = s_prime_of(a)
    if not set(S) <= set(Sp):
        out.append(f"S' = {Sp} does not contain S")
    if recipe == "V1":
        out += check_constraints(b, v1_b_constraints(a, S, Sp))
        out += check_constraints(c, v1_c_constraints(S, Sp, s_doubleprime("V1", b)))
        return out
    S2 = s_doubleprime(recipe, b)
    if v1 is None or v2 is None or v1 == v2:
        return out + ["two distinct auxiliary primes v1, v2 are required"]
    for v in (v1, v2):
        if v == 2 or v in S2 or (recipe == "V3" and v in Sp):
            out.append(f"auxiliary prime {v} lies in an excluded set")
        if L is not None and splitting_type(L, v) != [1] * L.degree:
            out.append(f"auxiliary prime {v} does not split completely")
    if recipe == "V2":
        out += check_constraints(b, v2_b_constraints(a, S, Sp))
        out += check_constraints(c, v2_c_constraints(a, b, S, Sp, v1, v2))
    elif recipe == "V3":
        if set(Sp) & set(S2):
            out.append("S' and S'' intersect")
        out += check_constraints(b, v3_b_constraints(a, S, Sp))
        out += check_constraints(c, v3_c_constraints(a, b, S, Sp, S2, v1, v2))
    else:
        raise InvalidInput(f"unknown recipe {recipe!r}")
    return out


def closed_loop_check(V: ChateletSurface, trace: ConstructionTrace, L: NumberField | None = None) -> list[str]:
    """Mismatches between the analysis of V and the pattern its recipe promises."""
    S = {str(v) for v in trace.S}
    report = global_analysis(V)
    problems = []
    for r in report.per_place:
        if r.status != "ok":
            problems.append(f"{r.place}: {r.status}")
            continue
        if trace.recipe == "V1":
            if (r.place in S) == bool(r.solvable):
                problems.append(f"{r.place}: solvable={r.solvable}")
        else:
            if not r.solvable:
                problems.append(f"{r.place}: not solvable")
                continue
            want = {"V2": (Fraction(0), Fraction(1, 2)), "V3": (Fraction(1, 2),)}[trace.recipe]
            expected = want if r.place in S else (Fraction(0),)
            if tuple(r.invariants) != expected:
                problems.append(f"{r.place}: invariants {r.invariants}")
    missing = S - {r.place for r in report.per_place}
    if missing:
        problems.append(f"places of S not examined: {sorted(missing)}")
    verdict = report.verdict
    if trace.recipe == "V2" and verdict.classification != "RationalPointsExistWAFailsOff":
        problems.append(f"verdict {verdict.summary()}")
    if trace.recipe == "V3":
        expected = "HasseCounterexampleBM" if len(S) % 2 else "RationalPointsExistWAHolds"
        if verdict.classification != expected:
            problems.append(f"verdict {verdict.summary()}")
    if L is not None and trace.S:
        ext = analyze_over_extension(V, L)
        for v in S:
            above = [r for r in ext.per_place if _under(r.place) == v]
            if len(above) != L.degree:
                problems.append(f"{v}: {len(above)} places above, expected {L.degree}")
            for r in above:
                if trace.recipe == "V1" and r.solvable is not False:
                    problems.append(f"{r.place}: expected no local points")
                if trace.recipe == "V3" and r.invariants != (Fraction(1, 2),):
                    problems.append(f"{r.place}: invariants {r.invariants}")
                if trace.recipe == "V2" and r.invariants != (Fraction(0), Fraction(1, 2)):
                    problems.append(f"{r.place}: invariants {r.invariants}")
    return problems


def _under(label: str) -> str:
    if label.startswith(("real", "complex")):
        return INF
    return label.split("#")[0].split(":")[0]
