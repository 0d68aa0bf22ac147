"""Fibrations of quartics over the projective line and their branch loci.

A bundle is given by two quartics P_inf, P_0 and weights w_inf(u), w_0(u) of
degree at most 2; the fibre over u is the quartic
    s'(u, x) = w_inf(u) P_inf(x) + w_0(u) P_0(x).
Its branch locus in u is where that quartic stops being separable of degree
4, computed as the squarefree part of Res_x(s', ds'/dx).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import kpoly
from .errors import InvalidInput
from .numfield import NFElement, NumberField, verify_projective_point
from .ratpoly import RatPoly, discriminant, interpolate, poly_gcd, resultant, squarefree_part

QUARTIC = 4


@dataclass(frozen=True)
class BundleSpec:
    Pinf: RatPoly
    P0: RatPoly
    weights: tuple  # (w_inf, w_0), polynomials in u
    gamma_branch: RatPoly | None = None
    gamma_branches_at_infinity: bool = True
    curve_eqn: dict | None = None
    name: str = ""

    @classmethod
    def create(cls, Pinf, P0, weights, gamma_branch=None, gamma_branches_at_infinity=True,
               curve_eqn=None, name="") -> "BundleSpec":
        Pinf, P0 = RatPoly(_coeffs(Pinf)), RatPoly(_coeffs(P0))
        w = tuple(RatPoly(_coeffs(x)) for x in weights)
        g = None if gamma_branch is None else RatPoly(_coeffs(gamma_branch))
        spec = cls(Pinf, P0, w, g, gamma_branches_at_infinity, curve_eqn, name)
        spec.validate()
        return spec

    def validate(self):
        for P in (self.Pinf, self.P0):
            if P.degree != QUARTIC:
                raise InvalidInput("both quartics must have degree 4")
            if discriminant(P) == 0:
                raise InvalidInput(f"{P} is not separable")
        if resultant(self.Pinf, self.P0) == 0:
            raise InvalidInput("P_inf and P_0 share a root")
        if len(self.weights) != 2 or any(w.degree > 2 for w in self.weights):
            raise InvalidInput("weights must be two polynomials of degree <= 2")
        w_inf, w0 = self.weights
        if not w_inf and not w0:
            raise InvalidInput("weights vanish identically")
        if poly_gcd(w_inf, w0).degree > 0:
            raise InvalidInput("weights have a common zero")


def _coeffs(p):
    if isinstance(p, RatPoly):
        return p.coeffs
    return p


def section_poly(spec: BundleSpec) -> dict:
    """s'(u, x) as {(i, j): coefficient of u^i x^j}."""
    out: dict = {}
    for w, P in zip(spec.weights, (spec.Pinf, spec.P0)):
        for i, a in enumerate(w.coeffs):
            for j, b in enumerate(P.coeffs):
                if a and b:
                    out[(i, j)] = out.get((i, j), Fraction(0)) + a * b
    return {k: v for k, v in sorted(out.items()) if v}


def fiber(spec: BundleSpec, u) -> RatPoly:
    """The quartic over a rational value of u."""
    w_inf, w0 = spec.weights
    return spec.Pinf * w_inf(u) + spec.P0 * w0(u)


def fiber_over(spec: BundleSpec, u: NFElement) -> list:
    """The fibre over a number-field value of u, as a list of field elements."""
    F = u.field
    w_inf, w0 = (kpoly.evaluate(kpoly.kp(F, w.coeffs), u) for w in spec.weights)
    return kpoly.add(kpoly.scale(kpoly.kp(F, spec.Pinf.coeffs), w_inf),
                     kpoly.scale(kpoly.kp(F, spec.P0.coeffs), w0))


def fiber_at_infinity(spec: BundleSpec) -> RatPoly:
    """The fibre over u = (1 : 0): the u^2 coefficients of the weights."""
    w_inf, w0 = spec.weights
    top = [w.coeffs[2] if w.degree == 2 else Fraction(0) for w in (w_inf, w0)]
    return spec.Pinf * top[0] + spec.P0 * top[1]


def _leading(spec: BundleSpec) -> RatPoly:
    w_inf, w0 = spec.weights
    return w_inf * spec.Pinf.coeffs[QUARTIC] + w0 * spec.P0.coeffs[QUARTIC]


def _fiber_resultant(Q: RatPoly) -> Fraction:
    return resultant(Q, Q.derivative())


def _raw_branch_poly(spec: BundleSpec) -> RatPoly:
    """Res_x(s', ds'/dx) as a polynomial in u (degree <= 14), by interpolation."""
    lead = _leading(spec)
    bound = 2 * (2 * QUARTIC - 1)
    points = []
    u = 0
    while len(points) <= bound:
        if lead(u) != 0:
            points.append((Fraction(u), _fiber_resultant(fiber(spec, u))))
        u += 1
    return interpolate(points)


def branch_locus_u(spec: BundleSpec) -> RatPoly:
    """Squarefree part of Res_x(s', ds'/dx) in the chart u_1 = 1, with integer coefficients.

    Returns the zero polynomial when the fibre does not depend on u.
    """
    w_inf, w0 = spec.weights
    if not w_inf or not w0:
        return RatPoly([])
    raw = _raw_branch_poly(spec)
    if not raw:
        return raw
    sq = squarefree_part(raw)
    return _normalise(sq)


def _normalise(f: RatPoly) -> RatPoly:
    f = f.primitive_part()
    return -f if f.lc < 0 else f


def branches_at_infinity(spec: BundleSpec) -> bool:
    """Whether u = (1 : 0) is a branch point of the fibration."""
    Q = fiber_at_infinity(spec)
    return Q.degree < QUARTIC or discriminant(Q) == 0


def chart_consistent(spec: BundleSpec) -> bool:
    """The affine branch polynomial has full degree exactly when infinity is not a branch point."""
    raw = _raw_branch_poly(spec)
    full = raw.degree == 2 * (2 * QUARTIC - 1)
    return full != branches_at_infinity(spec)


def branch_disjoint(spec: BundleSpec) -> bool:
    """Whether the fibration's branch locus avoids the covering map's branch locus."""
    if spec.gamma_branch is None or not spec.gamma_branch:
        raise InvalidInput("gamma_branch must be a nonzero polynomial")
    R = branch_locus_u(spec)
    if not R:
        return False
    if poly_gcd(R, spec.gamma_branch).degree > 0:
        return False
    return not (spec.gamma_branches_at_infinity and branches_at_infinity(spec))


def divides(factor, f: RatPoly) -> bool:
    factor = RatPoly(_coeffs(factor))
    return bool(f) and not (f % factor)


def check_points(eqn: dict, points, F: NumberField | None = None) -> list[bool]:
    return [verify_projective_point(eqn, pt, F) for pt in points]


# ---------------------------------------------------------------------------
# the four bundles of the worked examples

X = RatPoly.x()
U = RatPoly.x()
CURVE_CM = {(0, 2, 1): 1, (3, 0, 0): -1, (0, 0, 3): 16}            # w1^2 w2 = w0^3 - 16 w2^3
CURVE_CUBIC = {(0, 2, 1): 1, (3, 0, 0): -1, (1, 0, 2): 343, (0, 0, 3): 2401}
CM_BRANCH = (U + 4) ** 3 - 16                                        # (u + 4)^3 = 16


def example_specs() -> dict:
    half = Fraction(1, 5329)
    return {
        "7.1": BundleSpec.create(
            (1 - X ** 2) * (X ** 2 - 73), (99 * X ** 2 + 1) * (5428 * half * X ** 2 + half),
            (U ** 2, RatPoly([1])), CM_BRANCH, curve_eqn=CURVE_CM, name="weak approximation over Q(sqrt 3)"),
        "7.2": BundleSpec.create(
            (X ** 4 - 89726) * 14, (X ** 2 - 878755181) * (5 * X ** 2 - 4393775906),
            (U ** 2, RatPoly([1])), 27 * U ** 4 + 129654 * U ** 2 - 5764801,
            curve_eqn=CURVE_CUBIC, name="Hasse principle over the cubic field"),
        "7.3": BundleSpec.create(
            (X ** 4 + 805) * 5, (X ** 4 + 115) * -5, (U ** 2, RatPoly([1])), CM_BRANCH,
            curve_eqn=CURVE_CM, name="Hasse principle over Q(sqrt 3), real place"),
        "7.4": BundleSpec.create(
            (X ** 4 - 10 * X ** 2 + 15) * 2, (5 * X ** 4 - 39 * X ** 2 + 75) * -2,
            (U ** 2 + 2, U), U ** 2 + 1, curve_eqn=CURVE_CM, name="Hasse principle over Q(i)"),
    }

