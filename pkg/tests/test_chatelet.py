from fractions import Fraction

import pytest

from chatelet import kpoly
from chatelet.chatelet import (
    ChateletSurface, analyze_over_extension, bad_places, global_analysis, invariant_set,
    local_result, locally_solvable,
)
from chatelet.errors import InvalidInput, MissingFactorization
from chatelet.hilbert import INF, conic_oracle
from chatelet.numfield import NumberField, places_above
from chatelet.ratpoly import RatPoly
from oracles import random_surface_data, sampled_local_behaviour

X = RatPoly.x()
HALF = Fraction(1, 2)
CUBIC = RatPoly([-1, -2, 1, 1])


def unsolvable_places(report):
    return {r.place for r in report.per_place if r.solvable is False}


def surface(a, k, f1, f2):
    return ChateletSurface.create(a, RatPoly(f1) * RatPoly(f2) * k, (k, f1, f2))


def v3_surface():
    c = 878755181
    return ChateletSurface.create(377, (X ** 2 - c) * (5 * X ** 2 - 5 * c - 1),
                                  (1, X ** 2 - c, 5 * X ** 2 - 5 * c - 1))


def gaussian_v1():
    K = NumberField(RatPoly([1, 0, 1]), "i")
    f1, f2 = [[0, -15], 0, [-1, 5]], [[-5, -1], 0, 1]
    P = kpoly.scale(kpoly.mul(kpoly.kp(K, f1), kpoly.kp(K, f2)), K.element(-2))
    return ChateletSurface.create(-15, P, (-2, f1, f2), field=K)


def test_validation():
    with pytest.raises(InvalidInput):
        ChateletSurface.create(4, X ** 4 + 1)
    with pytest.raises(InvalidInput):
        ChateletSurface.create(3, (X ** 2 - 1) ** 2)
    with pytest.raises(InvalidInput):
        ChateletSurface.create(3, X ** 3 + 1)
    with pytest.raises(InvalidInput):
        ChateletSurface.create(3, (X ** 2 + 1) * (X ** 2 + 2), (2, X ** 2 + 1, X ** 2 + 2))
    with pytest.raises(MissingFactorization):
        invariant_set(ChateletSurface.create(3, X ** 4 + 7), 3)


def test_cubic_example_unsolvable_only_at_29():
    V = ChateletSurface.create(377, (X ** 4 - 89726) * 14)
    report = global_analysis(V)
    assert unsolvable_places(report) == {"29"}
    assert report.verdict.classification == "LocallyInsolvable"
    over_L = analyze_over_extension(V, NumberField(CUBIC))
    assert unsolvable_places(over_L) == {"29#0(f=1)", "29#1(f=1)", "29#2(f=1)"}


def test_real_examples():
    assert unsolvable_places(global_analysis(ChateletSurface.create(-23, (X ** 4 + 115) * -5))) == {"inf"}
    assert unsolvable_places(global_analysis(ChateletSurface.create(-23, (X ** 4 + 805) * 5))) == {"23"}


def test_weak_approximation_example():
    V = surface(73, 1, [1, 0, 99], [Fraction(1, 5329), 0, Fraction(5428, 5329)])
    report = global_analysis(V)
    assert report.result_at("73").invariants == (0, HALF)
    assert all(r.invariants == (0,) for r in report.per_place if r.place != "73")
    assert report.verdict.summary() == "RationalPointsExistWAFailsOff(73)"
    # the rational point (x, y, z) = (0, 1/73, 0)
    assert Fraction(1, 73) ** 2 == V.poly[0].rational()


def test_hasse_counterexample_and_odd_degree_extension():
    V = v3_surface()
    report = global_analysis(V)
    assert report.verdict.classification == "HasseCounterexampleBM"
    assert report.verdict.adelic_nonempty
    assert report.result_at("13").invariants == (HALF,)
    assert all(r.invariants == (0,) for r in report.per_place if r.place != "13")
    over_L = analyze_over_extension(V, NumberField(CUBIC))
    above_13 = over_L.results_above(13)
    assert [r.invariants for r in above_13] == [(HALF,)] * 3
    assert over_L.verdict.forced_sum == Fraction(3, 2)
    assert over_L.verdict.classification == "HasseCounterexampleBM"


def test_gaussian_suite():
    K = NumberField(RatPoly([1, 0, 1]), "i")
    Vinf = ChateletSurface.create(-15, [30, 0, -20, 0, 2], field=K)
    report = global_analysis(Vinf)
    assert {r.place.split("#")[0] for r in report.per_place if r.solvable is False} == {"5"}
    V1 = gaussian_v1()
    report = global_analysis(V1)
    assert all(r.solvable for r in report.per_place)
    assert report.result_at("3#0(f=2)").invariants == (HALF,)
    assert all(r.invariants == (0,) for r in report.per_place if r.place != "3#0(f=2)")
    assert report.verdict.classification == "HasseCounterexampleBM"


def test_iskovskikh_surface():
    V = surface(-1, -1, [-2, 0, 1], [-3, 0, 1])
    assert global_analysis(V).verdict.classification == "HasseCounterexampleBM"


def test_quadric_reduction_provenance():
    V = surface(-1, 1, [1, 0, 1], [-3, 0, 1])
    verdict = global_analysis(V).verdict
    assert verdict.classification == "RationalPointsExistWAHolds"
    assert "quadric" in verdict.provenance


def test_good_places_are_trivial():
    V = v3_surface()
    labels = {pl.under for pl in bad_places(V)}
    assert 7 not in labels and 11 not in labels
    assert local_result(V, 7).invariants == (0,)
    assert locally_solvable(V, 11)


DEPTHS = {2: (5, 6), 3: (3, 3), 5: (3, 3), 13: (2, 2)}


@pytest.mark.parametrize("seed", [1, 2])
def test_agrees_with_sampling_oracle(seed):
    for a, k, f1, f2 in random_surface_data(seed, 30):
        V = surface(a, k, f1, f2)
        for p, (depth, effort) in DEPTHS.items():
            res = local_result(V, p)
            seen, invs = sampled_local_behaviour(
                a, k, f1, f2, p, lambda a_, c: conic_oracle(a_, c, p, effort), depth=depth)
            assert seen == res.solvable, (a, k, f1, f2, p)
            assert invs == set(res.invariants), (a, k, f1, f2, p)


def _outputs(V, places, precision=None):
    return {w: (r.solvable, r.invariants)
            for w in places
            for r in [local_result(V, w, precision=precision)]}


def test_scaling_invariance():
    for a, k, f1, f2 in random_surface_data(11, 20):
        V = surface(a, k, f1, f2)
        W = V.scaled(Fraction(3, 5), Fraction(7, 2))
        places = sorted({pl.under for pl in bad_places(V) + bad_places(W)}, key=str)
        assert _outputs(V, places) == _outputs(W, places)


def test_precision_monotone():
    for a, k, f1, f2 in random_surface_data(12, 15):
        V = surface(a, k, f1, f2)
        places = [pl.under for pl in bad_places(V)]
        exact = _outputs(V, places)
        for N in (16, 32, 64):
            assert _outputs(V, places, precision=N) == exact


def test_places_above_real_field():
    assert [pl.kind for pl in places_above(NumberField(CUBIC), INF)] == ["real"] * 3
