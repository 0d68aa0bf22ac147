"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 unsupported
request, 4 partial result (some place could not be decided), 5 a search or
precision cap was hit.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import construct as recipes
from . import serial
from .chatelet import analyze_over_extension, global_analysis
from .errors import (
    ChateletError, EffortExhausted, InvalidInput, MissingFactorization, PrecisionCapExceeded,
    SearchExhausted, Unsatisfiable, UnsupportedPlace,
)
from .fibration import (
    branch_disjoint, branch_locus_u, branches_at_infinity, chart_consistent, divides, example_specs,
)
from .hilbert import INF, hilbert_symbol
from .numfield import find_split_primes
from .ratpoly import RatPoly, as_rational, resultant
from .verify import find_entry, load_manifest, run_entry

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_UNSUPPORTED, EXIT_PARTIAL, EXIT_CAP = 0, 1, 2, 3, 4, 5

ERROR_CODES = (
    ((InvalidInput, Unsatisfiable, MissingFactorization), EXIT_INPUT),
    ((UnsupportedPlace,), EXIT_UNSUPPORTED),
    ((PrecisionCapExceeded, SearchExhausted, EffortExhausted), EXIT_CAP),
)


def _emit(obj, out_path=None):
    text = serial.dumps(obj)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _field_arg(value):
    """A field given by registry name, coefficient list "c0,c1,..." or a JSON file."""
    if value and os.path.isfile(value):
        return serial.parse_field(serial.load_file(value))
    return serial.parse_field(value)


def _is_prime(n: int) -> bool:
    from sympy import isprime

    return isprime(n)


# ---------------------------------------------------------------------------
# subcommands


def cmd_hilbert(args) -> int:
    a, b = as_rational(args.a), as_rational(args.b)
    place = serial.parse_place(args.p)
    if place != INF and not _is_prime(place):
        raise UnsupportedPlace(f"{place} is not a place of Q")
    symbol = hilbert_symbol(a, b, place)
    if args.json:
        _emit(serial.envelope("hilbert", input={"a": serial.q(a), "b": serial.q(b), "place": str(place)},
                              symbol=symbol))
    else:
        print(symbol)
    return EXIT_OK


def cmd_analyze(args) -> int:
    data = serial.load_file(args.surface)
    V = serial.surface_from_json(data)
    if args.extension:
        report = analyze_over_extension(V, _field_arg(args.extension))
    else:
        report = global_analysis(V, precision=args.precision)
    echo = serial.surface_to_json(V)
    if args.extension:
        echo["extension"] = serial.field_to_json(_field_arg(args.extension))
    out = serial.report_to_json(report, "analyze", echo, data.get("points", ()), timing=not args.no_timing)
    _emit(out, args.out)
    return EXIT_PARTIAL if report.verdict.partial else EXIT_OK


def cmd_construct(args) -> int:
    L = _field_arg(args.field)
    build = {"V1": recipes.construct_V1, "V2": recipes.construct_V2, "V3": recipes.construct_V3}[args.recipe]
    V, trace = build(L, serial.parse_places(args.S))
    points = [(0, trace.b, 0)] if args.recipe == "V2" else [(0, 1, 0)] if not trace.S else []
    surface = serial.surface_to_json(V, points)
    trace_json = trace.to_dict()
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        _emit(surface, os.path.join(args.out_dir, "surface.json"))
        _emit(serial.envelope("construct", trace=trace_json), os.path.join(args.out_dir, "trace.json"))
    else:
        _emit(serial.envelope("construct", surface=surface, trace=trace_json))
    return EXIT_OK


def cmd_split_primes(args) -> int:
    F = _field_arg(args.field)
    avoid = [int(p) for p in args.avoid.split(",") if p.strip()] if args.avoid else ()
    primes = find_split_primes(F, args.count, args.lower, avoid=avoid)
    if args.json:
        _emit(serial.envelope("split-primes", field=serial.field_to_json(F), primes=primes))
    else:
        print(" ".join(map(str, primes)))
    return EXIT_OK


def cmd_fibration_check(args) -> int:
    specs = example_specs()
    if args.bundle in specs:
        spec = specs[args.bundle]
        factors = find_entry(args.bundle)["checks"][0].get("factors", [])
    else:
        data = serial.load_file(args.bundle)
        spec, factors = serial.bundle_from_json(data), data.get("factors", [])
    R = branch_locus_u(spec)
    body = {
        "bundle": serial.bundle_to_json(spec),
        "coprime": resultant(spec.Pinf, spec.P0) != 0,
        "branch_locus": serial.poly_to_json(R),
        "branches_at_infinity": branches_at_infinity(spec),
        "chart_consistent": chart_consistent(spec),
        "branch_disjoint": branch_disjoint(spec) if spec.gamma_branch else None,
        "factors": [{"factor": serial.poly_to_json(RatPoly(f)), "divides": divides(f, R)} for f in factors],
    }
    _emit(serial.envelope("fibration-check", **body))
    ok = body["coprime"] and body["branch_disjoint"] is not False and all(f["divides"] for f in body["factors"])
    return EXIT_OK if ok else EXIT_FAILED


def cmd_verify(args) -> int:
    manifest = load_manifest()
    entries = manifest["entries"] if args.id == "all" else [find_entry(args.id, manifest)]
    outcomes = [o for e in entries for o in run_entry(e)]
    if args.json:
        _emit(serial.envelope("verify-paper", results=[
            {"entry": o.entry, "check": o.check, "ok": o.ok, "detail": o.detail} for o in outcomes]))
    else:
        claims = {e["id"]: e["claim"] for e in entries}
        current = None
        for o in outcomes:
            if o.entry != current:
                current = o.entry
                print(f"[{o.entry}] {claims[o.entry]}")
            line = f"  {'PASS' if o.ok else 'FAIL'}  {o.check}"
            print(line + (f"  ({o.detail})" if o.detail and not o.ok else ""))
        failed = sum(not o.ok for o in outcomes)
        print(f"{len(outcomes) - failed}/{len(outcomes)} checks passed")
    return EXIT_OK if all(o.ok for o in outcomes) else EXIT_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chatelet", description="Exact local-global computations "
                                     "for Chatelet surfaces y^2 - a z^2 = P(x).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hilbert", help="Hilbert symbol (a, b)_v over Q")
    p.add_argument("-a", required=True, help="rational, e.g. -15 or 3/7")
    p.add_argument("-b", required=True)
    p.add_argument("-p", required=True, help="a prime or inf")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_hilbert)

    p = sub.add_parser("analyze", help="local solvability, invariants and verdict for a surface file")
    p.add_argument("surface", help="surface JSON file")
    p.add_argument("--extension", help="analyse over this field instead (name, coefficients or JSON file)")
    p.add_argument("--precision", type=int, help="starting p-adic precision")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--no-timing", action="store_true", help="omit timing so output is reproducible")
    p.set_defaults(run=cmd_analyze)

    p = sub.add_parser("construct", help="build a surface with prescribed local behaviour")
    p.add_argument("recipe", choices=["V1", "V2", "V3"])
    p.add_argument("--field", required=True, help="the extension L (name, coefficients or JSON file)")
    p.add_argument("--S", default="", help="places of Q, e.g. 23,inf")
    p.add_argument("--out-dir", help="write surface.json and trace.json here")
    p.set_defaults(run=cmd_construct)

    p = sub.add_parser("split-primes", help="primes splitting completely in a field")
    p.add_argument("--field", required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--lower", type=int, default=2)
    p.add_argument("--avoid", default="")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_split_primes)

    p = sub.add_parser("fibration-check", help="branch-locus checks for a quartic bundle")
    p.add_argument("bundle", help="a bundled example id (7.1 .. 7.4) or a bundle JSON file")
    p.set_defaults(run=cmd_fibration_check)

    p = sub.add_parser("verify-paper", help="run the bundled manifest of worked examples")
    p.add_argument("id", nargs="?", default="all")
    p.add_argument("--json", action="store_true")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.run(args)
    except ChateletError as exc:
        for classes, code in ERROR_CODES:
            if isinstance(exc, classes):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
