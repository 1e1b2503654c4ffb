"""
Fibration geometry over Q
The section s' of O(2) x O(4) on P^1 x P^1 defining the auxiliary Chatelet
family, its branch locus, the pencil gamma: E -> P^1 and the certificate
that gamma is etale over the branch locus, plus chart-wise membership of
points on the total space X.

All computations are exact (sympy over QQ); algebraic numbers enter only
through minimal polynomials or Q(i) field elements.
"""

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Optional, Sequence, Tuple, Union

from sympy import (
    Mul,
    Poly,
    QQ,
    ZZ,
    Rational,
    Symbol,
    diff,
    discriminant,
    expand,
    factor_list,
    groebner,
    minimal_polynomial,
    resultant,
    sqrt,
    symbols,
    sympify,
)

from wacert.config import Config
from wacert.errors import EliminationError, InvalidInputError, PreconditionError, UsageError
from wacert.logger import logger
from wacert.nf_core import QuadraticField

U, V, W, X = symbols('u v w x')
XP, YP, ZP = symbols("x' y' z'")
Y, Z, T = symbols('y z t')
R = Symbol('r')

SECTION_GROUPS = (((U, V), 2), ((W, X), 4))
P2_VARS = (XP, YP, ZP)
P1_VARS = (W, X)
CHART_IDS = tuple(f"{p}{q}" for p in ("x'", "y'", "z'") for q in ("w", "x"))

# sqrt(31 + sqrt(-155))/6, one conjugate of the non-rational branch points
PRINTED_BRANCH_RADICAL = sqrt(31 + sqrt(-155)) / 6


@dataclass(frozen=True)
class ExampleSurface:
    """y^2 - a z^2 = b (x^4 + 2c x^2 + d) over Q."""

    a: int = 17
    b: int = 137
    c: int = 5
    d: int = -155

    def p_inf(self):
        return self.b * (X**4 + 2 * self.c * X**2 + self.d)

    def p_zero(self):
        return -self.b * (X**4 + self.d)


EXAMPLE = ExampleSurface()


# ---- Polynomial text formats ----

def _format_terms(poly: Poly) -> str:
    terms = []
    for monom, coeff in poly.terms(order='grlex'):
        factors = [str(coeff)]
        for var, exp in zip(poly.gens, monom):
            if exp:
                factors.append(var.name if exp == 1 else f"{var.name}^{exp}")
        terms.append("*".join(factors))
    return " + ".join(terms) if terms else "0"


def _parse_terms(text: str, gens: Sequence[Symbol]):
    names = {g.name: g for g in gens}
    total = sympify(0)
    for term in text.split(" + "):
        coeff, *factors = term.split("*")
        value = Rational(coeff)
        for factor in factors:
            name, _, exp = factor.partition("^")
            if name not in names:
                raise InvalidInputError(f"unknown variable {name!r} in {text!r}")
            value *= names[name] ** int(exp or 1)
        total += value
    return total


@dataclass(frozen=True)
class MultiPoly:
    """A polynomial over QQ, homogeneous of fixed degree in each variable group."""

    poly: Poly
    groups: Tuple[Tuple[Tuple[Symbol, ...], int], ...]

    def __post_init__(self):
        if self.poly.is_zero:
            raise InvalidInputError("zero polynomial")
        offset = 0
        for group_vars, degree in self.groups:
            width = len(group_vars)
            for monom in self.poly.monoms():
                if sum(monom[offset:offset + width]) != degree:
                    raise InvalidInputError(
                        f"not homogeneous of degree {degree} in {group_vars}"
                    )
            offset += width

    @staticmethod
    def gens_of(groups) -> Tuple[Symbol, ...]:
        return tuple(v for group_vars, _ in groups for v in group_vars)

    @classmethod
    def from_expr(cls, expr, groups) -> "MultiPoly":
        return cls(Poly(expr, *cls.gens_of(groups), domain=QQ), groups)

    @property
    def expr(self):
        return self.poly.as_expr()

    @property
    def multidegree(self) -> Tuple[int, ...]:
        return tuple(degree for _, degree in self.groups)

    def to_text(self) -> str:
        return _format_terms(self.poly)

    @classmethod
    def from_text(cls, text: str, groups=SECTION_GROUPS) -> "MultiPoly":
        return cls.from_expr(_parse_terms(text, cls.gens_of(groups)), groups)


def _homogenize(p: Poly, var, hvar, degree: int):
    return sum(c * var**k * hvar**(degree - k) for (k,), c in p.terms())


@dataclass(frozen=True)
class BinaryForm:
    """A binary form in (u, v) with integer coefficients; r = u/v is the affine coordinate."""

    poly: Poly

    @classmethod
    def from_expr(cls, expr) -> "BinaryForm":
        p = Poly(expr, U, V, domain=QQ)
        if p.is_zero:
            raise EliminationError("zero binary form")
        if not p.is_homogeneous:
            raise InvalidInputError("binary form must be homogeneous")
        _, p = p.clear_denoms(convert=True)
        return cls(p)

    @classmethod
    def from_affine(cls, g: Poly, degree: int) -> "BinaryForm":
        """v^degree * g(u/v)."""
        if g.degree() > degree:
            raise InvalidInputError("degree below that of the affine polynomial")
        return cls.from_expr(_homogenize(g, U, V, degree))

    @property
    def degree(self) -> int:
        return self.poly.total_degree()

    def primitive(self) -> "BinaryForm":
        _, prim = self.poly.primitive()
        if prim.LC() < 0:
            prim = -prim
        return BinaryForm(prim)

    def dehomogenize(self) -> Poly:
        return Poly(self.poly.as_expr().subs({U: R, V: 1}, simultaneous=True), R, domain=ZZ)

    def vanishes_at_infinity(self) -> bool:
        return self.poly.as_expr().subs({U: 1, V: 0}, simultaneous=True) == 0

    def max_coefficient(self) -> int:
        return max(abs(int(c)) for c in self.poly.coeffs())

    def to_text(self) -> str:
        return _format_terms(self.poly)


# ---- Exact resultants and gcds ----

def exact_resultant(f, g, var=R):
    return Poly(f, var).resultant(Poly(g, var))


def exact_discriminant(f, var=X):
    return expand(discriminant(f, var))


def subresultant_gcd(f, g, var=R) -> Poly:
    """Monic gcd over QQ, read off the last subresultant."""
    f, g = Poly(f, var, domain=QQ), Poly(g, var, domain=QQ)
    if f.degree() < g.degree():
        f, g = g, f
    last = f.subresultants(g)[-1]
    return last.monic() if not last.is_zero else last


# ---- The section and its degenerate locus ----

def build_section(p_inf, p_zero) -> MultiPoly:
    """s' = u^2 P_inf(x, w) + v^2 P_0(x, w) for coprime separable quartics."""
    f, g = Poly(p_inf, X, domain=QQ), Poly(p_zero, X, domain=QQ)
    for name, p in (("P_inf", f), ("P_0", g)):
        if p.degree() != 4:
            raise InvalidInputError(f"{name} must be a quartic", name)
        if p.discriminant() == 0:
            raise PreconditionError(f"{name} has a repeated root", name)
    if exact_resultant(f, g, X) == 0:
        raise PreconditionError("P_inf and P_0 share a root", "section")
    expr = U**2 * _homogenize(f, X, W, 4) + V**2 * _homogenize(g, X, W, 4)
    return MultiPoly.from_expr(expand(expr), SECTION_GROUPS)


def _no_common_zero(polys, gens) -> bool:
    polys = [p for p in polys if p != 0]
    if not polys:
        return False
    basis = groebner(polys, *gens, order='grevlex', domain=QQ)
    return list(basis.exprs) == [1]


SECTION_CHARTS = (
    ({U: 1, W: 1}, (V, X)),
    ({U: 1, X: 1}, (V, W)),
    ({V: 1, W: 1}, (U, X)),
    ({V: 1, X: 1}, (U, W)),
)


def degenerate_locus_smooth(section: MultiPoly) -> bool:
    """{s' = 0} has no singular point in any of the four affine charts."""
    for fixed, free in SECTION_CHARTS:
        f = expand(section.expr.subs(fixed, simultaneous=True))
        system = [f] + [diff(f, v) for v in free]
        if not _no_common_zero(system, free):
            logger.log_check("degenerate_locus_smooth", False, f"singular point in chart {fixed}")
            return False
    logger.log_check("degenerate_locus_smooth", True, "4 charts")
    return True


# ---- Branch locus ----

@dataclass(frozen=True)
class BranchLocus:
    discriminant: BinaryForm
    squarefree: BinaryForm
    rational_roots: Tuple[Union[Rational, str], ...]
    orbits: Tuple[BinaryForm, ...]
    radicals_match: Optional[bool]

    @property
    def root_count(self) -> int:
        return self.squarefree.degree

    @property
    def infinity_is_root(self) -> bool:
        return self.squarefree.vanishes_at_infinity()

    def to_dict(self) -> dict:
        return {
            "discriminant_degree": self.discriminant.degree,
            "squarefree": self.squarefree.to_text(),
            "root_count": self.root_count,
            "infinity_is_root": self.infinity_is_root,
            "rational_roots": [str(r) for r in self.rational_roots],
            "orbits": [o.to_text() for o in self.orbits],
            "radicals_match": self.radicals_match,
        }


def _radicals_match(orbits: Sequence[BinaryForm]) -> Optional[bool]:
    if not orbits:
        return None
    printed = Poly(minimal_polynomial(PRINTED_BRANCH_RADICAL, R), R, domain=QQ).monic()
    return any(
        Poly(o.dehomogenize().as_expr(), R, domain=QQ).monic() == printed for o in orbits
    )


def branch_locus(section: MultiPoly) -> BranchLocus:
    """Points (u:v) where the binary quartic s'(u, v; x, w) acquires a repeated root."""
    f = expand(section.expr.subs(W, 1))
    if Poly(f, X).degree() != 4:
        raise EliminationError("the quartic drops degree identically")
    disc = exact_discriminant(f, X)
    if disc == 0:
        raise EliminationError("discriminant vanishes identically")

    _, factors = factor_list(disc, U, V)
    rational_roots, orbits = [], []
    for fac, _ in factors:
        p = Poly(fac, U, V)
        if p.total_degree() == 1:
            cu, cv = p.coeff_monomial(U), p.coeff_monomial(V)
            rational_roots.append("inf" if cu == 0 else Rational(-cv, cu))
        else:
            orbits.append(BinaryForm.from_expr(fac).primitive())
    squarefree = BinaryForm.from_expr(Mul(*(fac for fac, _ in factors))).primitive()
    finite = sorted(r for r in rational_roots if r != "inf")
    infinite = [r for r in rational_roots if r == "inf"]
    locus = BranchLocus(
        discriminant=BinaryForm.from_expr(disc),
        squarefree=squarefree,
        rational_roots=tuple(finite) + tuple(infinite),
        orbits=tuple(orbits),
        radicals_match=_radicals_match(orbits),
    )
    logger.info(f"branch locus: {locus.root_count} points, rational {list(map(str, locus.rational_roots))}")
    return locus


# ---- The elliptic curve and the pencil gamma ----

Point = Tuple


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 z = x^3 + A x z^2 + B z^3."""

    A: int
    B: int

    @property
    def identity(self) -> Point:
        return (0, 1, 0)

    def projective_equation(self):
        return YP**2 * ZP - XP**3 - self.A * XP * ZP**2 - self.B * ZP**3

    def affine_equation(self):
        return self.projective_equation().subs(ZP, 1)

    def residual(self, point: Point):
        x, y, z = point
        return y * y * z - x * x * x - self.A * x * z * z - self.B * z * z * z

    def contains(self, point: Point) -> bool:
        return self.residual(point) == 0

    @staticmethod
    def normalize(point: Point) -> Point:
        x, y, z = (Fraction(c) for c in point)
        if z != 0:
            return (x / z, y / z, Fraction(1))
        if y != 0:
            return (x / y, Fraction(1), Fraction(0))
        raise InvalidInputError("(0:0:0) is not a projective point")

    def negate(self, point: Point) -> Point:
        x, y, z = self.normalize(point)
        return self.normalize((x, -y, z))

    def add(self, p: Point, q: Point) -> Point:
        p, q = self.normalize(p), self.normalize(q)
        if p[2] == 0:
            return q
        if q[2] == 0:
            return p
        x1, y1, _ = p
        x2, y2, _ = q
        if x1 == x2 and y1 == -y2:
            return self.normalize(self.identity)
        if p == q:
            lam = (3 * x1 * x1 + self.A) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        return (x3, lam * (x1 - x3) - y1, Fraction(1))

    def double(self, point: Point) -> Point:
        return self.add(point, point)

    def two_torsion(self) -> Tuple[Point, ...]:
        """Rational 2-torsion: the identity and (r:0:1) for rational roots r."""
        cubic = Poly(X**3 + self.A * X + self.B, X, domain=ZZ)
        roots = sorted(Fraction(int(r)) for r in cubic.ground_roots())
        return (self.normalize(self.identity),) + tuple((r, Fraction(0), Fraction(1)) for r in roots)

    def label(self) -> str:
        return f"y^2 = x^3 + ({self.A})x + ({self.B})"


E_EXAMPLE = WeierstrassCurve(-4, 0)


@dataclass(frozen=True)
class Pencil:
    """gamma = (P : Q) with P, Q forms of equal degree in (x', y', z')."""

    P: object
    Q: object

    def image(self, point: Point) -> Optional[Tuple]:
        """(u : v) normalized to (r : 1) or (1 : 0); None at a base point."""
        values = dict(zip(P2_VARS, (sympify(c) for c in point)))
        u = self.P.xreplace(values)
        v = self.Q.xreplace(values)
        if u == 0 and v == 0:
            return None
        if v == 0:
            return (1, 0)
        return (u / v, 1)


DEFAULT_PENCIL = Pencil(YP**2 + ZP**2, XP * YP)
PERTURBED_PENCIL = Pencil(YP**2 + ZP**2, XP * ZP - ZP**2)


@dataclass(frozen=True)
class EPointsReport:
    rows: Tuple[dict, ...]
    complete: bool

    @property
    def ok(self) -> bool:
        return self.complete and all(
            row["on_curve"] and row["order_divides_2"] and row["maps_to_infinity"] for row in self.rows
        )

    def to_dict(self) -> dict:
        return {"points": list(self.rows), "complete_two_torsion": self.complete, "ok": self.ok}


def verify_E_points(curve: WeierstrassCurve = E_EXAMPLE, pencil: Pencil = DEFAULT_PENCIL) -> EPointsReport:
    """The rational 2-torsion of E is exactly the fiber of gamma over infinity."""
    torsion = curve.two_torsion()
    identity = curve.normalize(curve.identity)
    rows = []
    for point in torsion:
        rows.append({
            "point": [str(c) for c in point],
            "on_curve": curve.contains(point),
            "order_divides_2": curve.double(point) == identity,
            "maps_to_infinity": pencil.image(point) == (1, 0),
        })
    report = EPointsReport(tuple(rows), complete=len(torsion) == 4)
    logger.log_check("E_points", report.ok, f"{len(torsion)} rational 2-torsion points")
    return report


@dataclass(frozen=True)
class IndeterminacyReport:
    rows: Tuple[dict, ...]

    @property
    def disjoint(self) -> bool:
        return all(row["base_point"] and row["off_curve"] for row in self.rows)

    def to_dict(self) -> dict:
        return {"base_points": list(self.rows), "disjoint": self.disjoint}


def indeterminacy_report(curve: WeierstrassCurve = E_EXAMPLE) -> IndeterminacyReport:
    """Base points of (y'^2 + z'^2 : x'y') are (1:0:0) and (0:+-i:1); none lies on E.

    x'y' = 0 forces x' = 0 or y' = 0; with y'^2 + z'^2 = 0 that leaves exactly these three.
    """
    Ki = QuadraticField(-1)
    i = Ki.parse("i")
    one, zero = Ki.one(), Ki.element(0)
    rows = []
    for point in ((one, zero, zero), (zero, i, one), (zero, -i, one)):
        x, y, z = point
        residual = curve.residual(point)
        rows.append({
            "point": [str(c) for c in point],
            "base_point": (y * y + z * z).is_zero() and (x * y).is_zero(),
            "residual": str(residual),
            "off_curve": not residual.is_zero(),
        })
    return IndeterminacyReport(tuple(rows))


def indeterminacy_disjoint(curve: WeierstrassCurve = E_EXAMPLE) -> bool:
    return indeterminacy_report(curve).disjoint


# ---- Etaleness of gamma over the branch locus ----

def _pencil_charts(pencil: Pencil, curve: WeierstrassCurve):
    e = curve.affine_equation()
    P, Q = pencil.P.subs(ZP, 1), pencil.Q.subs(ZP, 1)
    F = expand(P - R * Q)
    J = expand(diff(e, XP) * diff(F, YP) - diff(e, YP) * diff(F, XP))
    return e, F, J


def _y_parity_parts(F, curve: WeierstrassCurve):
    """F = even(x') + y' odd(x') on E, after replacing y'^2 by the cubic."""
    cubic = expand(YP**2 - curve.affine_equation())
    even, odd = sympify(0), sympify(0)
    for (k,), coeff in Poly(F, YP).terms():
        if k % 2 == 0:
            even += coeff * cubic ** (k // 2)
        else:
            odd += coeff * cubic ** (k // 2)
    return expand(even), expand(odd), cubic


def _integral_r_poly(expr) -> Poly:
    p = Poly(expr, R, domain=QQ)
    if p.is_zero:
        raise EliminationError("elimination collapsed to zero")
    _, p = p.clear_denoms(convert=True)
    return -p if p.LC() < 0 else p


def groebner_ramification(pencil: Pencil = DEFAULT_PENCIL,
                          curve: WeierstrassCurve = E_EXAMPLE) -> Poly:
    """Primitive generator in r of the lex elimination ideal of (E, P - rQ, Jacobian)."""
    e, F, J = _pencil_charts(pencil, curve)
    basis = groebner([e, F, J], YP, XP, R, order='lex', domain=QQ)
    eliminated = [g for g in basis.exprs if not g.has(XP) and not g.has(YP)]
    if not eliminated:
        raise EliminationError("no polynomial in r alone; the ramification locus is not finite")
    _, g = _integral_r_poly(eliminated[0]).primitive()
    return g


@dataclass(frozen=True)
class RamificationData:
    """Finite ramification of gamma|_E, eliminated to r by resultants.

    total is Res_x'(h, dh/dx') for the fiber polynomial h = Res_y'(E, P - rQ);
    collisions cuts out the r where two points (x', +-y') share a fiber, and
    finite = total / collisions^2 is the branch polynomial of the affine part.
    """

    total: Poly
    collisions: Optional[Poly]
    finite: Poly
    groebner: Poly
    fiber_degree: int

    @property
    def radicals_agree(self) -> bool:
        ours = Poly(self.finite.as_expr(), R, domain=QQ).sqf_part().monic()
        theirs = Poly(self.groebner.as_expr(), R, domain=QQ).sqf_part().monic()
        return ours == theirs

    def census(self) -> dict:
        out = {}
        for name, poly in (("resultant", self.finite), ("groebner", self.groebner)):
            biggest = max(abs(int(c)) for c in poly.coeffs())
            out[name] = {"max_coefficient": str(biggest), "digits": len(str(biggest))}
        return out


def ramification_data(pencil: Pencil = DEFAULT_PENCIL,
                      curve: WeierstrassCurve = E_EXAMPLE) -> RamificationData:
    if pencil.image(curve.identity) != (1, 0):
        raise UsageError("the pencil must send the point at infinity of E to r = infinity")
    e, F, _ = _pencil_charts(pencil, curve)
    even, odd, cubic = _y_parity_parts(F, curve)
    h = resultant(e, F, YP)
    fiber_degree = Poly(h, XP).degree()

    if odd == 0:
        # gamma factors through x': ramified over y' = 0 and, doubly, where x' -> r ramifies
        total = _integral_r_poly(resultant(even, cubic, XP) * resultant(even, diff(even, XP), XP) ** 2)
        collisions, finite = None, total
    else:
        total = _integral_r_poly(resultant(h, diff(h, XP), XP))
        collisions = _integral_r_poly(resultant(even, odd, XP))
        quotient, remainder = Poly(total.as_expr(), R, domain=QQ).div(
            Poly((collisions ** 2).as_expr(), R, domain=QQ))
        if not remainder.is_zero:
            raise EliminationError("x'-collisions do not divide the discriminant twice")
        finite = _integral_r_poly(quotient.as_expr())

    data = RamificationData(total, collisions, finite, groebner_ramification(pencil, curve), fiber_degree)
    logger.log_check("ramification_radicals", data.radicals_agree, f"finite degree {finite.degree()}")
    return data


def ramification_polynomial(pencil: Pencil = DEFAULT_PENCIL,
                            curve: WeierstrassCurve = E_EXAMPLE) -> Tuple[Poly, int]:
    """(g, deg gamma) with g the resultant-route branch polynomial of the affine part."""
    data = ramification_data(pencil, curve)
    return data.finite, data.fiber_degree


def fiber_unramified(r0, pencil: Pencil = DEFAULT_PENCIL, curve: WeierstrassCurve = E_EXAMPLE) -> bool:
    """No point of the affine fiber over r0 has a vanishing Jacobian."""
    e, F, J = _pencil_charts(pencil, curve)
    r0 = sympify(r0)
    return _no_common_zero([e, F.subs(R, r0), J.subs(R, r0)], (YP, XP))


@dataclass(frozen=True)
class EtaleCertificate:
    g6: Poly
    g12: BinaryForm
    ramification_degree: int
    fiber_degree: int
    resultant: object
    gcd: Poly
    cofactors: Tuple[Poly, Poly]
    per_point: Dict[str, bool]
    infinity_clash: bool
    radicals_agree: bool
    census: Dict[str, dict]

    @property
    def coprime(self) -> bool:
        return self.resultant != 0

    @property
    def etale(self) -> bool:
        return (self.coprime and self.radicals_agree and not self.infinity_clash
                and all(self.per_point.values()))

    @property
    def padding(self) -> int:
        return self.g12.degree - self.ramification_degree

    def to_dict(self) -> dict:
        return {
            "G6": _format_terms(self.g6),
            "G12": self.g12.to_text(),
            "ramification_degree": self.ramification_degree,
            "fiber_degree": self.fiber_degree,
            "padding": self.padding,
            "resultant": str(self.resultant),
            "gcd": _format_terms(self.gcd),
            "cofactors": [_format_terms(c) for c in self.cofactors],
            "coprime": self.coprime,
            "per_point": dict(self.per_point),
            "infinity_clash": self.infinity_clash,
            "radicals_agree": self.radicals_agree,
            "census": self.census,
            "etale": self.etale,
        }


def etale_over_branch(branch: Optional[BranchLocus] = None,
                      pencil: Pencil = DEFAULT_PENCIL,
                      curve: WeierstrassCurve = E_EXAMPLE) -> EtaleCertificate:
    """gamma is etale over every branch point iff G6 and G12 are coprime."""
    if branch is None:
        branch = branch_locus(build_section(EXAMPLE.p_inf(), EXAMPLE.p_zero()))
    logger.log_stage("etale_over_branch")

    ramification = ramification_data(pencil, curve)
    g, fiber_degree = ramification.finite, ramification.fiber_degree
    g12 = BinaryForm.from_affine(g, 2 * fiber_degree)
    g6 = branch.squarefree.dehomogenize()

    res = exact_resultant(g6, g)
    gcd = subresultant_gcd(g6, g)
    s, t, _ = Poly(g6.as_expr(), R, domain=QQ).gcdex(Poly(g.as_expr(), R, domain=QQ))
    per_point = {
        str(r0): fiber_unramified(r0, pencil, curve)
        for r0 in branch.rational_roots if r0 != "inf"
    }
    infinity_clash = branch.infinity_is_root and g12.vanishes_at_infinity()
    cert = EtaleCertificate(
        g6=g6,
        g12=g12,
        ramification_degree=g.degree(),
        fiber_degree=fiber_degree,
        resultant=res,
        gcd=gcd,
        cofactors=(s, t),
        per_point=per_point,
        infinity_clash=infinity_clash,
        radicals_agree=ramification.radicals_agree,
        census=ramification.census(),
    )
    logger.log_check("etale_over_branch", cert.etale, f"resultant={res} per_point={per_point}")
    return cert


# ---- Points of the total space X ----

@dataclass(frozen=True)
class TotalSpaceModel:
    """y^2 - a z^2 = t^2 gamma*(s') over E x P^1, chart by chart."""

    a: int
    section: MultiPoly
    pencil: Pencil = DEFAULT_PENCIL
    curve: WeierstrassCurve = E_EXAMPLE

    @cached_property
    def section_on_E(self):
        return expand(self.section.expr.subs({U: self.pencil.P, V: self.pencil.Q}, simultaneous=True))


@lru_cache(maxsize=1)
def default_model() -> TotalSpaceModel:
    return TotalSpaceModel(EXAMPLE.a, build_section(EXAMPLE.p_inf(), EXAMPLE.p_zero()))


def _split_chart(chart: str) -> Tuple[Symbol, Symbol]:
    if chart not in CHART_IDS:
        raise UsageError(f"unknown chart {chart!r}; expected one of {', '.join(CHART_IDS)}")
    p2_name, p1_name = chart[:2], chart[2:]
    p2 = next(v for v in P2_VARS if v.name == p2_name)
    p1 = W if p1_name == "w" else X
    return p2, p1


def _homogeneous_point(chart: str, coords) -> Tuple[Dict, Dict, Tuple]:
    p2var, p1var = _split_chart(chart)
    try:
        c1, c2, c3, fiber = coords
        y, z, t = fiber
    except (TypeError, ValueError) as exc:
        raise UsageError("coordinates are (c1, c2, c3, (y, z, t))") from exc
    others = [v for v in P2_VARS if v != p2var]
    p2 = {p2var: sympify(1), others[0]: sympify(c1), others[1]: sympify(c2)}
    other_p1 = X if p1var == W else W
    p1 = {p1var: sympify(1), other_p1: sympify(c3)}
    return p2, p1, tuple(sympify(v) for v in (y, z, t))


def point_residuals(chart: str, coords, model: Optional[TotalSpaceModel] = None) -> Tuple:
    """(main, curve) residuals of a chart point; both vanish iff the point is on X."""
    model = model or default_model()
    p2, p1, (y, z, t) = _homogeneous_point(chart, coords)
    values = {**p2, **p1}
    if model.pencil.image(tuple(p2[v] for v in P2_VARS)) is None:
        raise PreconditionError("point lies over a base point of the pencil", chart)
    main = y**2 - model.a * z**2 - t**2 * model.section_on_E.xreplace(values)
    curve = model.curve.projective_equation().xreplace(values)
    return main, curve


def verify_point_on_X(chart: str, coords, model: Optional[TotalSpaceModel] = None) -> bool:
    try:
        main, curve = point_residuals(chart, coords, model)
    except PreconditionError:
        return False
    return main == 0 and curve == 0


def chart_transition(src: str, dst: str, coords) -> Tuple:
    """Re-express a point of chart src in chart dst, keeping y and z fixed."""
    p2, p1, (y, z, t) = _homogeneous_point(src, coords)
    p2var, p1var = _split_chart(dst)
    c, ell = p2[p2var], p1[p1var]
    if c == 0 or ell == 0:
        raise UsageError(f"point is not in chart {dst}", dst)
    others = [v for v in P2_VARS if v != p2var]
    other_p1 = X if p1var == W else W
    # s' has bidegree (4, 4) after pulling back, so t scales by c^2 ell^2
    return (p2[others[0]] / c, p2[others[1]] / c, p1[other_p1] / ell, (y, z, t * c**2 * ell**2))


def _random_chart_point(rng: random.Random) -> Tuple:
    def rand_q():
        return Rational(rng.randint(-9, 9), rng.randint(1, 5))

    return (rand_q(), rand_q(), rand_q(), (rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(1, 9)))


def check_chart_transitions(model: Optional[TotalSpaceModel] = None,
                            samples: Optional[int] = None,
                            seed: Optional[int] = None) -> bool:
    """Transition maps preserve the main residual and the vanishing of the curve equation."""
    model = model or default_model()
    samples = samples or Config.TRANSITION_SAMPLES
    rng = random.Random(Config.RANDOM_SEED if seed is None else seed)
    for src in CHART_IDS:
        for dst in CHART_IDS:
            done = 0
            while done < samples:
                coords = _random_chart_point(rng)
                p2, p1, _ = _homogeneous_point(src, coords)
                dst_p2, dst_p1 = _split_chart(dst)
                if p2[dst_p2] == 0 or p1[dst_p1] == 0:
                    continue
                if model.pencil.image(tuple(p2[v] for v in P2_VARS)) is None:
                    continue
                main_src, curve_src = point_residuals(src, coords, model)
                main_dst, curve_dst = point_residuals(dst, chart_transition(src, dst, coords), model)
                if main_src != main_dst or curve_dst != curve_src / p2[dst_p2] ** 3:
                    logger.log_check("chart_transition", False, f"{src} -> {dst} at {coords}")
                    return False
                done += 1
    logger.log_check("chart_transition", True, f"{len(CHART_IDS) ** 2} chart pairs")
    return True

