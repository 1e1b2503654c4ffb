"""
Brauer-Manin evaluation over L = K(sqrt(D))
Local invariants of the quaternion algebra (a, x^2 + c + sqrt(D)) at the
ramified place P above p_c, and the certificate that two L_P-points carry
different invariants while every other place contributes nothing.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from wacert.chatelet import ChateletParams, resolve_field
from wacert.errors import PreconditionError
from wacert.local_fields import (
    ExtensionElement,
    RamifiedPlace,
    ramified_valuation,
    valuation,
)
from wacert.logger import logger
from wacert.nf_core import FieldElement, QuadraticField, is_square_mod, principal_prime
from wacert.symbols import hilbert_odd

NORM_CRITERION_CITATION = "Neukirch, Algebraic Number Theory, Cor. V.1.2"


@dataclass(frozen=True)
class Invariant:
    value: Fraction

    @classmethod
    def from_parity(cls, v: int) -> "Invariant":
        return cls(Fraction(v % 2, 2))

    @property
    def symbol(self) -> int:
        return -1 if self.value else 1

    def to_dict(self) -> dict:
        return {"invariant": str(self.value), "symbol": self.symbol}


@dataclass(frozen=True)
class EvaluatedPoint:
    label: str
    x: str
    val_x: int
    val_quartic: int
    val_quartic_base: int
    val_symbol_arg: int
    invariant: Invariant

    @property
    def has_local_point(self) -> bool:
        return self.val_quartic % 2 == 0

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "x": self.x,
            "val_x": self.val_x,
            "val_quartic": self.val_quartic,
            "val_quartic_base": self.val_quartic_base,
            "val_symbol_arg": self.val_symbol_arg,
            "local_point": self.has_local_point,
            **self.invariant.to_dict(),
        }


def ramified_place(params: ChateletParams) -> RamifiedPlace:
    return RamifiedPlace(params.p_c, params.D)


def pole_element(place: RamifiedPlace, k: int) -> ExtensionElement:
    """An element of L with v_P equal to -k, namely sqrt(D)^(-k)."""
    if valuation(place.extension_disc, place.base_prime) != 1:
        raise PreconditionError("sqrt(D) is a uniformizer only when v(D) = 1", place.label)
    return place.extension.sqrt_D ** (-k)


def _check_algebra(params: ChateletParams, place: RamifiedPlace) -> bool:
    """Whether a is a non-square mod P; raises when it is not."""
    if not place.base_prime.is_odd:
        raise PreconditionError("P lies over 2", place.label)
    nonsquare = not is_square_mod(params.a, place.base_prime)
    logger.log_check("a_nonsquare_mod_P", nonsquare, place.label)
    if not nonsquare:
        raise PreconditionError("a is a square mod P, the algebra splits", place.label)
    return nonsquare


def invariant_of_argument(params: ChateletParams, xi) -> Invariant:
    """inv_P (a, xi) for xi in L: a is a non-square unit, so it is the parity of v_P(xi)."""
    place = ramified_place(params)
    _check_algebra(params, place)
    return Invariant.from_parity(ramified_valuation(xi, place))


def quaternion_invariant(params: ChateletParams, x) -> Invariant:
    """inv_P of (a, x^2 + c + sqrt(D)) at an L_P-point with coordinate x."""
    place = ramified_place(params)
    x = place.extension.coerce(x)
    xi = x * x + params.c + place.extension.sqrt_D
    return invariant_of_argument(params, xi)


def archimedean_triviality(params: ChateletParams) -> bool:
    """a > 0 at every real place of L (imaginary places contribute nothing)."""
    for emb in params.field.real_embeddings:
        if emb.sign(params.D) > 0 and emb.sign(params.a) <= 0:
            return False
    return True


def _evaluate(params: ChateletParams, place: RamifiedPlace, label: str, x: FieldElement) -> EvaluatedPoint:
    base = valuation(params.quartic(x), params.p_c)
    xi = place.extension.coerce(x * x + params.c) + place.extension.sqrt_D
    v_arg = ramified_valuation(xi, place)
    point = EvaluatedPoint(
        label=label,
        x=str(x),
        val_x=2 * valuation(x, params.p_c),
        val_quartic=2 * base,
        val_quartic_base=base,
        val_symbol_arg=v_arg,
        invariant=Invariant.from_parity(v_arg),
    )
    logger.log_check(f"brauer:{label}", point.has_local_point,
                     f"x={x} v_P(arg)={v_arg} inv={point.invariant.value}")
    return point


@dataclass(frozen=True)
class WAFailureCertificate:
    params: ChateletParams
    place: RamifiedPlace
    point_even: EvaluatedPoint
    point_odd: EvaluatedPoint
    archimedean_trivial: bool
    a_nonsquare_mod_P: bool

    def to_dict(self) -> dict:
        return {
            "L": self.place.extension.describe(),
            "P_over": str(self.place.base_prime.generator),
            "v_p_D": valuation(self.params.D, self.params.p_c),
            "ramification_index": self.place.ramification_index,
            "a_nonsquare_mod_P": self.a_nonsquare_mod_P,
            "points": [self.point_even.to_dict(), self.point_odd.to_dict()],
            "archimedean_trivial": self.archimedean_trivial,
            "local_point_criterion": {
                "statement": "b P(x) is a norm from L_P(sqrt(a)) iff its valuation is even",
                "citation": NORM_CRITERION_CITATION,
            },
        }


def certify_wa_failure(params: ChateletParams) -> WAFailureCertificate:
    """Two L_P-points with invariants 0 and 1/2 and trivial archimedean contribution."""
    logger.log_stage("wa_failure", f"L = K(sqrt({params.D}))")
    place = ramified_place(params)
    nonsquare = _check_algebra(params, place)

    even = _evaluate(params, place, "point_even", 1 / params.c)
    odd = _evaluate(params, place, "point_odd", params.c)
    if not (even.has_local_point and even.invariant.value == 0):
        raise PreconditionError(f"expected invariant 0 with a local point, got {even.to_dict()}", "point_even")
    if not (odd.has_local_point and odd.invariant.value == Fraction(1, 2)):
        raise PreconditionError(f"expected invariant 1/2 with a local point, got {odd.to_dict()}", "point_odd")
    archimedean = archimedean_triviality(params)
    if not archimedean:
        raise PreconditionError("a is negative at a real place of L", "archimedean")
    return WAFailureCertificate(params, place, even, odd, archimedean, nonsquare)


# ---- The variant surface over K itself ----

@dataclass(frozen=True)
class VariantWACertificate:
    a: FieldElement
    b: FieldElement
    point_even: EvaluatedPoint
    point_odd: EvaluatedPoint

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "place": f"v_b:{self.b}",
            "points": [self.point_even.to_dict(), self.point_odd.to_dict()],
        }


def variant_wa_failure(a, b, K: Optional[QuadraticField] = None) -> VariantWACertificate:
    """Invariants of (a, x^2 + b) at v_b on y^2 - a z^2 = -(x^2 + b)(x^2 - b)."""
    K = resolve_field(K, a, b)
    a, b = K.coerce(a), K.coerce(b)
    p_b = principal_prime(b, stage="b")
    principal_prime(a, stage="a")
    if not p_b.is_odd:
        raise PreconditionError("b must be odd", "b")
    if is_square_mod(a, p_b):
        raise PreconditionError("a is a square mod b, the algebra splits at v_b", "b")

    points = []
    for label, x in (("point_even", 1 / b), ("point_odd", b)):
        arg = x * x + b
        quartic = -(x * x + b) * (x * x - b)
        v_arg = valuation(arg, p_b)
        invariant = Invariant.from_parity(v_arg)
        if hilbert_odd(a, arg, p_b) != invariant.symbol:
            raise PreconditionError("Hilbert symbol disagrees with the parity rule", label)
        v_q = valuation(quartic, p_b)
        points.append(EvaluatedPoint(label, str(x), valuation(x, p_b), v_q, v_q, v_arg, invariant))
        logger.log_check(f"variant:{label}", v_q % 2 == 0, f"x={x} inv={invariant.value}")

    even, odd = points
    if even.invariant.value != 0 or odd.invariant.value != Fraction(1, 2):
        raise PreconditionError("invariants do not separate the two points", "variant")
    if not (even.has_local_point and odd.has_local_point):
        raise PreconditionError("quartic valuation is odd at a test point", "variant")
    return VariantWACertificate(a, b, even, odd)
