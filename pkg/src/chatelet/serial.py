"""JSON encodings of fields, surfaces, bundles and analysis reports.

Every number is written exactly: rationals as "p/q" strings (integers as
"n"), number-field elements as lists of such strings.  Dumping a loaded
report reproduces it byte for byte.
"""

from __future__ import annotations

import json

from . import kpoly
from .chatelet import AnalysisReport, ChateletSurface, LocalResult
from .errors import InvalidInput
from .fibration import BundleSpec
from .hilbert import INF
from .numfield import NFElement, NumberField
from .ratpoly import RatPoly, as_rational

SCHEMA = "chatelet-report/1"

NAMED_FIELDS = {
    "Q": ([0, 1], "Q"),
    "sqrt3": ([-3, 0, 1], "s"),
    "i": ([1, 0, 1], "i"),
    "cubic7": ([-1, -2, 1, 1], "t"),
}


def q(x) -> str:
    return str(as_rational(x))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"malformed JSON: {exc}") from exc


def load_file(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------------------
# fields and places


def parse_field(spec) -> NumberField:
    """A field from a registry name, a "c0,c1,..." string, a coefficient list or {"poly", "name"}."""
    if spec is None:
        return NumberField.rationals()
    if isinstance(spec, str):
        if spec in NAMED_FIELDS:
            coeffs, name = NAMED_FIELDS[spec]
            return NumberField.rationals() if spec == "Q" else NumberField(RatPoly(coeffs), name)
        spec = [c for c in spec.split(",") if c.strip()]
    if isinstance(spec, dict):
        if "poly" not in spec:
            raise InvalidInput("field needs a 'poly' entry")
        coeffs, name = spec["poly"], spec.get("name")
    elif isinstance(spec, list):
        coeffs, name = spec, None
    else:
        raise InvalidInput(f"cannot read a field from {spec!r}")
    poly = RatPoly(coeffs)
    return NumberField.rationals() if poly.degree == 1 else NumberField(poly, name)


def field_to_json(F: NumberField):
    if F.is_rational:
        return None
    return {"poly": [q(c) for c in F.poly.coeffs], "name": F.name}


def parse_place(text: str):
    text = str(text).strip()
    if text.lower() in ("inf", "oo", "infinity", "∞"):
        return INF
    try:
        return int(text)
    except ValueError as exc:
        raise InvalidInput(f"not a place: {text!r}") from exc


def parse_places(text: str) -> list:
    return [parse_place(t) for t in str(text).split(",") if t.strip()]


# ---------------------------------------------------------------------------
# elements and surfaces


def element_to_json(x: NFElement):
    if x.is_rational():
        return q(x.rational())
    return [q(c) for c in x.coords]


def poly_to_json(coeffs) -> list:
    if isinstance(coeffs, RatPoly):
        return [q(c) for c in coeffs.coeffs]
    return [element_to_json(c) for c in coeffs]


def surface_from_json(data: dict) -> ChateletSurface:
    if not isinstance(data, dict) or "a" not in data or "P" not in data:
        raise InvalidInput("a surface needs 'a' and 'P'")
    F = parse_field(data.get("field"))
    fac = data.get("factorization")
    if fac is not None:
        try:
            fac = (fac["const"], fac["f1"], fac["f2"])
        except (KeyError, TypeError) as exc:
            raise InvalidInput("factorization needs 'const', 'f1' and 'f2'") from exc
    return ChateletSurface.create(data["a"], data["P"], fac, field=F)


def surface_to_json(V: ChateletSurface, points=()) -> dict:
    out = {
        "field": field_to_json(V.field),
        "a": element_to_json(V.a),
        "P": poly_to_json(V.poly),
    }
    if V.factorization is not None:
        f = V.factorization
        out["factorization"] = {"const": element_to_json(f.const), "f1": poly_to_json(f.f1),
                                "f2": poly_to_json(f.f2)}
    if points:
        out["points"] = [[element_to_json(V.field.element(c)) for c in pt] for pt in points]
    return out


def point_on_surface(V: ChateletSurface, pt) -> bool:
    """Whether (x, y, z) satisfies y^2 - a z^2 = P(x)."""
    if len(pt) != 3:
        raise InvalidInput("points are (x, y, z) triples")
    x, y, z = (V.field.element(c) for c in pt)
    return not (y * y - V.a * z * z - kpoly.evaluate(list(V.poly), x))


# ---------------------------------------------------------------------------
# bundles


def bundle_from_json(data: dict) -> BundleSpec:
    try:
        return BundleSpec.create(
            data["Pinf"], data["P0"], data["weights"], data.get("gamma_branch"),
            data.get("gamma_branches_at_infinity", True), None, data.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise InvalidInput("a bundle needs 'Pinf', 'P0' and 'weights'") from exc


def bundle_to_json(spec: BundleSpec) -> dict:
    return {
        "name": spec.name,
        "Pinf": poly_to_json(spec.Pinf),
        "P0": poly_to_json(spec.P0),
        "weights": [poly_to_json(w) for w in spec.weights],
        "gamma_branch": None if spec.gamma_branch is None else poly_to_json(spec.gamma_branch),
        "gamma_branches_at_infinity": spec.gamma_branches_at_infinity,
    }


# ---------------------------------------------------------------------------
# reports


def _invariants(invs):
    return None if invs is None else [q(i) for i in invs]


def local_result_to_json(r: LocalResult) -> dict:
    return {
        "place": r.place,
        "status": r.status,
        "solvable": r.solvable,
        "invariant_set": _invariants(r.invariants),
        "local_field": r.local_field,
        "certificate": r.method,
        "precision": r.precision,
        "note": r.note,
    }


def report_to_json(report: AnalysisReport, command: str, echo: dict, points=(), timing=True) -> dict:
    v = report.verdict
    forced = v.forced_sum
    out = {
        "schema": SCHEMA,
        "command": command,
        "input": echo,
        "over": field_to_json(report.over),
        "places": [local_result_to_json(r) for r in report.per_place],
        "verdict": {
            "classification": v.classification,
            "summary": v.summary(),
            "places": list(v.places),
            "adelic_points": v.adelic_nonempty,
            "forced_sum": forced if forced is None or isinstance(forced, str) else q(forced),
            "partial": v.partial,
        },
        "provenance": [v.provenance] + list(report.notes),
        "rational_points": [
            {"point": [element_to_json(report.surface.field.element(c)) for c in pt],
             "on_surface": point_on_surface(report.surface, pt)} for pt in points],
    }
    if timing:
        out["timing"] = {"seconds": f"{report.elapsed:.3f}"}
    return out


def envelope(command: str, **body) -> dict:
    return {"schema": SCHEMA, "command": command, **body}

