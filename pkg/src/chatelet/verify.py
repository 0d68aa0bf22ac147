"""Runner for the bundled manifest of worked examples.

Each manifest entry has an id, a one-line claim and a list of checks; a
check is a small JSON object whose ``kind`` selects one of the runners
below.  Runners return ``(description, ok, detail)`` triples.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from . import construct
from .chatelet import analyze_over_extension, global_analysis
from .errors import ChateletError, InvalidInput
from .fibration import (
    branch_disjoint, branch_locus_u, branches_at_infinity, chart_consistent, check_points, divides,
    example_specs,
)
from .hilbert import hilbert_symbol
from .numfield import find_split_primes
from .ratpoly import RatPoly, as_rational, resultant
from .serial import parse_field, parse_place, parse_places, point_on_surface, surface_from_json


@dataclass(frozen=True)
class Outcome:
    entry: str
    check: str
    ok: bool
    detail: str = ""


def load_manifest() -> dict:
    text = resources.files("chatelet").joinpath("data/manifest.json").read_text(encoding="utf-8")
    return json.loads(text)


def entry_ids(manifest: dict | None = None) -> list[str]:
    return [e["id"] for e in (manifest or load_manifest())["entries"]]


def find_entry(entry_id: str, manifest: dict | None = None) -> dict:
    for e in (manifest or load_manifest())["entries"]:
        if e["id"] == entry_id:
            return e
    raise InvalidInput(f"no manifest entry {entry_id!r}")


def run_entry(entry: dict) -> list[Outcome]:
    out = []
    for check in entry["checks"]:
        runner = RUNNERS.get(check.get("kind"))
        if runner is None:
            raise InvalidInput(f"unknown check kind {check.get('kind')!r}")
        try:
            results = runner(check)
        except ChateletError as exc:
            results = [(check.get("kind"), False, f"{type(exc).__name__}: {exc}")]
        out += [Outcome(entry["id"], desc, ok, detail) for desc, ok, detail in results]
    return out


# ---------------------------------------------------------------------------
# runners


def _hilbert(check):
    a, b, p = as_rational(check["a"]), as_rational(check["b"]), parse_place(check["place"])
    got = hilbert_symbol(a, b, p)
    return [(f"({a}, {b}) at {p}", got == check["expect"], f"got {got:+d}")]


def _under(label: str) -> str:
    if label.startswith(("real", "complex")):
        return "inf"
    return label.split("#")[0].split(":")[0]


def _inv_text(invs) -> list | None:
    return None if invs is None else [str(i) for i in invs]


def _surface(check):
    V = surface_from_json(check["surface"])
    ext = check.get("extension")
    report = analyze_over_extension(V, parse_field(ext)) if ext else global_analysis(V)
    expect = check["expect"]
    tag = check.get("label", "surface") + (f" over {ext}" if ext else "")
    out = []
    unsupported = [r.place for r in report.per_place if r.status != "ok"]
    if not expect.get("allow_unsupported"):
        out.append((f"{tag}: every bad place certified", not unsupported, ", ".join(unsupported)))
    if "unsolvable_under" in expect:
        got = sorted({_under(r.place) for r in report.per_place if r.solvable is False})
        out.append((f"{tag}: unsolvable exactly above {expect['unsolvable_under']}",
                    got == sorted(expect["unsolvable_under"]), f"unsolvable above {got}"))
    if "places_above" in expect:
        for prime, want in expect["places_above"].items():
            above = report.results_above(prime)
            count_ok = len(above) == want["count"]
            if "solvable" in want:
                ok = count_ok and all(r.solvable is want["solvable"] for r in above)
                what = f"solvable={want['solvable']}"
            else:
                ok = count_ok and all(_inv_text(r.invariants) == want["invariants"] for r in above)
                what = f"invariants {want['invariants']}"
            out.append((f"{tag}: {want['count']} places above {prime}, each {what}", ok,
                        "; ".join(f"{r.place}: {r.solvable} {_inv_text(r.invariants)}" for r in above)))
    if "invariants" in expect:
        table = expect["invariants"]
        bad = []
        for r in report.per_place:
            want = table.get(r.place, table.get(_under(r.place), table.get("*")))
            if want is not None and _inv_text(r.invariants) != want:
                bad.append(f"{r.place}: {_inv_text(r.invariants)}")
        out.append((f"{tag}: invariant sets {table}", not bad, "; ".join(bad)))
    if "all_solvable" in expect:
        bad = [r.place for r in report.per_place if r.solvable is not True]
        out.append((f"{tag}: solvable at every place", not bad, ", ".join(bad)))
    if "verdict" in expect:
        got = report.verdict.summary()
        out.append((f"{tag}: verdict {expect['verdict']}", got == expect["verdict"], got))
    if "forced_sum" in expect:
        got = report.verdict.forced_sum
        out.append((f"{tag}: forced invariant sum {expect['forced_sum']}",
                    got is not None and got == as_rational(expect["forced_sum"]), str(got)))
    for pt in check["surface"].get("points", ()):
        out.append((f"{tag}: point {pt} lies on the surface", point_on_surface(V, pt), ""))
    return out


def _recipe(check):
    a, b, c = check["triple"]
    v1, v2 = check.get("aux", (None, None))
    L = parse_field(check["field"]) if check.get("field") else None
    problems = construct.check_recipe(check["recipe"], parse_places(check["S"]), a, b, c, v1, v2, L)
    return [(f"{check['recipe']} parameters {check['triple']} for S = {check['S']}",
             not problems, "; ".join(map(str, problems)))]


def _construct(check):
    L = parse_field(check["field"])
    build = {"V1": construct.construct_V1, "V2": construct.construct_V2,
             "V3": construct.construct_V3}[check["recipe"]]
    V, trace = build(L, parse_places(check["S"]))
    problems = construct.closed_loop_check(V, trace, L)
    return [(f"{check['recipe']} over {check['field']} for S = {check['S']} (a, b, c) = "
             f"({trace.a}, {trace.b}, {trace.c})", not problems, "; ".join(problems))]


def _split_primes(check):
    F = parse_field(check["field"])
    got = find_split_primes(F, check["count"], check.get("lower", 2))
    if "expect" in check:
        return [(f"first {check['count']} split primes of {check['field']}", got == check["expect"], str(got))]
    return [(f"split primes of {check['field']} include {check['contains']}",
             set(check["contains"]) <= set(got), str(got))]


def _in_u(f: RatPoly) -> str:
    return str(f).replace("x", "u")


def _fibration(check):
    spec = example_specs()[check["example"]]
    R = branch_locus_u(spec)
    out = [("quartics coprime", resultant(spec.Pinf, spec.P0) != 0, "")]
    if "locus" in check:
        want = RatPoly([1])
        for f in check["locus"]:
            want = want * RatPoly(f)
        out.append(("branch locus equals the listed product", R == want, _in_u(R)))
    for f in check.get("factors", ()):
        out.append((f"{_in_u(RatPoly(f))} divides the branch locus", divides(f, R), ""))
    out.append((f"branch locus avoids {_in_u(spec.gamma_branch)} and infinity", branch_disjoint(spec), ""))
    out.append(("chart at infinity consistent", chart_consistent(spec) and not branches_at_infinity(spec), ""))
    if "points" in check:
        F = parse_field(check["points"]["field"])
        pts = [[F.element(c) for c in pt] for pt in check["points"]["coords"]]
        ok = check_points(spec.curve_eqn, pts, F)
        out.append((f"{len(pts)} curve points over {check['points']['field']} verify", all(ok), str(ok)))
    return out


RUNNERS = {
    "hilbert": _hilbert,
    "surface": _surface,
    "recipe": _recipe,
    "construct": _construct,
    "split-primes": _split_primes,
    "fibration": _fibration,
}
