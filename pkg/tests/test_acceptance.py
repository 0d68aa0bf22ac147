"""Acceptance suite: one check per criterion, each reported as a PASS/FAIL line.

Run under pytest (the lines are printed in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
from sympy import primefactors

sys.path.insert(0, str(Path(__file__).resolve().parent))

from chatelet import kpoly  # noqa: E402
from chatelet.chatelet import (  # noqa: E402
    ChateletSurface, analyze_over_extension, bad_places, global_analysis, local_result,
)
from chatelet.construct import (  # noqa: E402
    check_recipe, closed_loop_check, construct_V1, construct_V2, construct_V3,
)
from chatelet.fibration import (  # noqa: E402
    CURVE_CM, CURVE_CUBIC, branch_disjoint, branch_locus_u, check_points, divides, example_specs,
)
from chatelet.hilbert import INF, conic_oracle, hilbert_symbol  # noqa: E402
from chatelet.numfield import NumberField, find_split_primes  # noqa: E402
from chatelet.ratpoly import RatPoly, resultant  # noqa: E402
from oracles import random_surface_data  # noqa: E402

X = RatPoly.x()
HALF = Fraction(1, 2)
SQRT3 = NumberField(RatPoly([-3, 0, 1]), "s")
CUBIC = NumberField(RatPoly([-1, -2, 1, 1]), "t")
GAUSS = NumberField(RatPoly([1, 0, 1]), "i")

RESULTS: dict = {}


def _under(label):
    if label.startswith(("real", "complex")):
        return "inf"
    return label.split("#")[0].split(":")[0]


def _unsolvable(report):
    return {r.place for r in report.per_place if r.solvable is False}


# ---------------------------------------------------------------------------


def criterion_1():
    rng = random.Random(2024)
    failures = 0
    for _ in range(500):
        a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 10 ** 4), rng.randint(1, 300))
        b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 10 ** 4), rng.randint(1, 300))
        primes = primefactors(2 * a.numerator * a.denominator * b.numerator * b.denominator)
        prod = hilbert_symbol(a, b, INF)
        for p in primes:
            prod *= hilbert_symbol(a, b, p)
        failures += prod != 1
    return failures == 0, f"{failures} of 500 products differ from 1"


def criterion_2():
    disagreements, total = [], 0
    for v in (INF, 2, 3, 5, 13):
        p = 7 if v == INF else v
        vals = [1, 2, 3, 5, p, 2 * p]
        vals += [-x for x in vals]
        effort = 6 if v == 2 else 3
        for a in vals:
            for b in vals:
                total += 1
                oracle = 1 if conic_oracle(a, b, v, effort) else -1
                if hilbert_symbol(a, b, v) != oracle:
                    disagreements.append((a, b, v))
    return not disagreements, f"{len(disagreements)} disagreements in {total} triples"


def criterion_3():
    V = ChateletSurface.create(377, (X ** 4 - 89726) * 14)
    over_q = _unsolvable(global_analysis(V))
    over_L = analyze_over_extension(V, CUBIC)
    above = over_L.results_above(29)
    ok = over_q == {"29"} and len(above) == 3 and all(r.solvable is False for r in above)
    return ok, f"unsolvable over Q at {sorted(over_q)}; above 29 over L: {[r.solvable for r in above]}"


def criterion_4():
    first = _unsolvable(global_analysis(ChateletSurface.create(-23, (X ** 4 + 115) * -5)))
    second = _unsolvable(global_analysis(ChateletSurface.create(-23, (X ** 4 + 805) * 5)))
    return first == {"inf"} and second == {"23"}, f"unsolvable at {sorted(first)} and {sorted(second)}"


def criterion_5():
    f1, f2 = RatPoly([1, 0, 99]), RatPoly([Fraction(1, 5329), 0, Fraction(5428, 5329)])
    V = ChateletSurface.create(73, f1 * f2, (1, f1, f2))
    report = global_analysis(V)
    invariants_ok = all(r.invariants == ((0, HALF) if r.place == "73" else (0,)) for r in report.per_place)
    point_ok = Fraction(1, 73) ** 2 - 73 * 0 == (f1 * f2)(0)
    verdict = report.verdict.summary()
    ok = invariants_ok and point_ok and verdict == "RationalPointsExistWAFailsOff(73)"
    return ok, f"verdict {verdict}; point (0, 1/73, 0) {'verifies' if point_ok else 'fails'}"


def criterion_6():
    c = 878755181
    f1, f2 = X ** 2 - c, 5 * X ** 2 - 5 * c - 1
    V = ChateletSurface.create(377, f1 * f2, (1, f1, f2))
    report = global_analysis(V)
    q_ok = (report.verdict.adelic_nonempty
            and all(r.invariants == ((HALF,) if r.place == "13" else (0,)) for r in report.per_place)
            and report.verdict.classification == "HasseCounterexampleBM")
    over_L = analyze_over_extension(V, CUBIC)
    above = over_L.results_above(13)
    L_ok = (len(above) == 3 and all(r.invariants == (HALF,) for r in above)
            and over_L.verdict.forced_sum == Fraction(3, 2)
            and over_L.verdict.classification == "HasseCounterexampleBM")
    return q_ok and L_ok, (f"over Q {report.verdict.summary()}; over L forced sum "
                           f"{over_L.verdict.forced_sum}, {over_L.verdict.summary()}")


def criterion_7():
    Vinf = ChateletSurface.create(-15, [30, 0, -20, 0, 2], field=GAUSS)
    inf_bad = {_under(p) for p in _unsolvable(global_analysis(Vinf))}
    # generator (a, f1) with f1 = (-1 + 5i)x^2 - 15i; the other factor differs by the constant algebra (-15, -2)
    f1, f2 = [[0, -15], 0, [-1, 5]], [[-5, -1], 0, 1]
    P = kpoly.scale(kpoly.mul(kpoly.kp(GAUSS, f1), kpoly.kp(GAUSS, f2)), GAUSS.element(-2))
    V1 = ChateletSurface.create(-15, P, (-2, f1, f2), field=GAUSS)
    report = global_analysis(V1)
    solvable = all(r.solvable for r in report.per_place)
    certified = all(r.status == "ok" for r in report.per_place)
    halves = {r.place for r in report.per_place if r.invariants == (HALF,)}
    others_zero = all(r.invariants == (0,) for r in report.per_place if r.place not in halves)
    ok = (inf_bad == {"5"} and solvable and certified and halves == {"3#0(f=2)"} and others_zero
          and report.verdict.classification == "HasseCounterexampleBM")
    return ok, f"V_inf fails above {sorted(inf_bad)}; V_1 halves at {sorted(halves)}, {report.verdict.summary()}"


def criterion_8():
    runs = [
        (construct_V1, SQRT3, [23]), (construct_V1, SQRT3, [INF]), (construct_V1, CUBIC, [29]),
        (construct_V2, SQRT3, [73]), (construct_V3, CUBIC, [13]),
    ]
    problems = []
    for build, L, S in runs:
        V, trace = build(L, S)
        problems += [f"{trace.recipe} {S}: {p}" for p in closed_loop_check(V, trace, L)]
    triples = [
        ("V1", [29], (377, 14, 238), None, None, CUBIC),
        ("V1", [INF], (-23, -5, 5), None, None, SQRT3),
        ("V1", [23], (-23, 5, 35), None, None, SQRT3),
        ("V2", [73], (73, Fraction(1, 73), 99), 11, 23, SQRT3),
        ("V3", [13], (377, 5, 878755181), 43, 41, CUBIC),
    ]
    for recipe, S, abc, v1, v2, L in triples:
        problems += [f"{recipe} {abc}: {p}" for p in check_recipe(recipe, S, *abc, v1, v2, L)]
    return not problems, "; ".join(map(str, problems)) or "5 closed loops and 5 parameter triples"


def criterion_9():
    cubic = find_split_primes(CUBIC, 4, 2)
    quad = find_split_primes(SQRT3, 3, 2)
    return cubic == [13, 29, 41, 43] and {11, 23} <= set(quad), f"{cubic}; {quad}"


FACTORS = {
    "7.1": [[-537372, 0, 5329], [-1, 0, 389017], [5329, 0, 157730624, 0, 27625536]],
    "7.2": [[5, 0, 14], [-137894762198231040, 0, 44863], [1, 0, -216218987126801139936, 0, 70345184]],
    "7.3": [[-1, 0, 1], [-1, 0, 7]],
    "7.4": [[2, -5, 1], [160, -360, 181, -180, 40]],
}


def criterion_10():
    failures = []
    for name, spec in example_specs().items():
        if resultant(spec.Pinf, spec.P0) == 0:
            failures.append(f"{name}: quartics share a root")
        R = branch_locus_u(spec)
        for f in FACTORS[name]:
            if not divides(f, R):
                failures.append(f"{name}: {str(RatPoly(f)).replace('x', 'u')} does not divide")
        if not branch_disjoint(spec):
            failures.append(f"{name}: branch loci meet")
    s, i, t = SQRT3.element([0, 1]), GAUSS.element([0, 1]), CUBIC.element([0, 1])
    points = (check_points(CURVE_CM, [(4, 4 * s, 1), (4, -4 * s, 1)], SQRT3)
              + check_points(CURVE_CM, [(0, 4 * i, 1), (0, -4 * i, 1)], GAUSS)
              + check_points(CURVE_CUBIC, [(7 * t ** 2 + 14 * t - 7, 0, 1)], CUBIC))
    if not all(points):
        failures.append(f"curve points {points}")
    return not failures, "; ".join(failures) or "all factor, disjointness and point checks hold"


def criterion_11():
    corpus = random_surface_data(31, 50)
    flips = []
    for a, k, f1, f2 in corpus:
        V = ChateletSurface.create(a, RatPoly(f1) * RatPoly(f2) * k, (k, f1, f2))
        W = V.scaled(Fraction(3, 5), Fraction(7, 2))
        places = sorted({pl.under for pl in bad_places(V) + bad_places(W)}, key=str)
        base = {}
        for w in places:
            r, s = local_result(V, w), local_result(W, w)
            base[w] = (r.solvable, r.invariants)
            if base[w] != (s.solvable, s.invariants):
                flips.append(f"scaling changes {w} for {(a, k, f1, f2)}")
        for N in (16, 32, 64):
            for w in places:
                r = local_result(V, w, precision=N)
                if (r.solvable, r.invariants) != base[w]:
                    flips.append(f"precision {N} changes {w} for {(a, k, f1, f2)}")
    return not flips, "; ".join(flips[:3]) or f"{len(corpus)} surfaces stable under scaling and precision"


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 12)}


def run_criterion(n):
    start = time.perf_counter()
    try:
        ok, detail = CRITERIA[n]()
    except Exception as exc:  # a crash is reported as a failure with its cause
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    RESULTS[n] = (ok, detail, time.perf_counter() - start)
    return ok, detail


def summary_lines():
    return [f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}"
            for n, (ok, detail, secs) in sorted(RESULTS.items())]


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = run_criterion(n)
    assert ok, detail


if __name__ == "__main__":
    for n in CRITERIA:
        run_criterion(n)
        print(summary_lines()[-1], flush=True)
    sys.exit(0 if all(ok for ok, _, _ in RESULTS.values()) else 1)
