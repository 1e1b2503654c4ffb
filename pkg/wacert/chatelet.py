"""
Chatelet surface parameters
Checks of the arithmetic conditions on (a, b, c, e), the effective search
for such a tuple, and certificates of local solvability of
    y^2 - a z^2 = b (x^4 + 2c x^2 + d),   d = c e.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Optional, Tuple

from wacert.config import Config
from wacert.errors import (
    ConditionFailedError,
    InvalidInputError,
    MathCheckError,
    PreconditionError,
)
from wacert.local_fields import (
    PadicApprox,
    QuadraticExtension,
    hensel_sqrt,
    places_above_two,
    two_adic_square_criterion,
    valuation,
)
from wacert.logger import logger
from wacert.nf_core import (
    FieldElement,
    PrincipalPrime,
    QuadraticField,
    ResidueRing,
    is_principal_prime,
    is_square_mod,
    principal_prime,
    totally_positive_and_large,
)
from wacert.prime_search import Congruence, CongruenceSystem, find_principal_prime

CONDITION_NAMES = (
    "condition_1",
    "condition_2",
    "condition_3",
    "condition_4",
    "derived_a_square_mod_p_b",
    "derived_a_nonsquare_mod_p_c",
    "derived_bd_square_mod_p_a",
    "ramification_v_c_D_is_1",
)

GENERIC_CRITERION = "unramified-even-valuation"
GENERIC_CITATION = "Neukirch, Algebraic Number Theory, Cor. V.1.2"


@dataclass(frozen=True)
class ConditionCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    checks: Tuple[ConditionCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def first_failure(self) -> Optional[ConditionCheck]:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> Dict[str, dict]:
        return {c.name: {"passed": c.passed, "detail": c.detail} for c in self.checks}


@dataclass(frozen=True)
class ChateletParams:
    field: QuadraticField
    a: FieldElement
    b: FieldElement
    c: FieldElement
    e: FieldElement
    p_a: PrincipalPrime
    p_b: PrincipalPrime
    p_c: PrincipalPrime
    p_e: PrincipalPrime
    report: Optional[ConditionReport] = dc_field(default=None, compare=False)

    @property
    def d(self) -> FieldElement:
        return self.c * self.e

    @property
    def D(self) -> FieldElement:
        return self.c * self.c - self.d

    @property
    def extension(self) -> QuadraticExtension:
        return QuadraticExtension(self.field, self.D)

    def quartic(self, x) -> FieldElement:
        """b (x^4 + 2c x^2 + d)."""
        x = self.field.coerce(x)
        x2 = x * x
        return self.b * (x2 * x2 + 2 * self.c * x2 + self.d)

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "c": str(self.c),
            "e": str(self.e),
            "d": str(self.d),
            "D": str(self.D),
        }


def resolve_field(K: Optional[QuadraticField], *values) -> QuadraticField:
    if K is not None:
        return K
    for v in values:
        if isinstance(v, FieldElement):
            return v.field
    return QuadraticField(1)


def _run_check(name: str, test: Callable[[], bool], detail: str) -> ConditionCheck:
    try:
        passed = bool(test())
    except MathCheckError as exc:
        passed, detail = False, f"{detail}: {exc}"
    logger.log_check(name, passed, detail)
    return ConditionCheck(name, passed, detail)


def verify_params(a, b, c, e, K: Optional[QuadraticField] = None) -> ChateletParams:
    """Check the primality, distinctness and residue conditions on (a, b, c, e)."""
    K = resolve_field(K, a, b, c, e)
    a, b, c, e = (K.coerce(x) for x in (a, b, c, e))
    for name, x in zip("abce", (a, b, c, e)):
        if not x.is_integral():
            raise InvalidInputError(f"{x} is not integral", name)

    primes = {name: principal_prime(x, stage=name) for name, x in zip("abce", (a, b, c, e))}
    for (n1, p1), (n2, p2) in combinations(primes.items(), 2):
        if p1.same_ideal(p2):
            raise PreconditionError(f"{n1} and {n2} generate the same prime ideal", "distinctness")
    p_a, p_b, p_c = primes["a"], primes["b"], primes["c"]

    d = c * e
    D = c * c - d
    eight, two = ResidueRing(K.element(8)), ResidueRing(K.element(2))
    two_a = ResidueRing(2 * a)

    checks = (
        _run_check("condition_1",
                   lambda: eight.congruent(a, 1) and totally_positive_and_large(a, 0),
                   "a = 1 mod 8 and totally positive"),
        _run_check("condition_2", lambda: two_a.congruent(b, 1), "b = 1 mod 2a"),
        _run_check("condition_3",
                   lambda: two.congruent(c, 1) and not is_square_mod(c, p_a),
                   "c = 1 mod 2 and c non-square mod p_a"),
        _run_check("condition_4", lambda: not is_square_mod(e, p_a), "e non-square mod p_a"),
        _run_check("derived_a_square_mod_p_b", lambda: is_square_mod(a, p_b), "a square mod p_b"),
        _run_check("derived_a_nonsquare_mod_p_c",
                   lambda: not is_square_mod(a, p_c), "a non-square mod p_c"),
        _run_check("derived_bd_square_mod_p_a",
                   lambda: is_square_mod(b * d, p_a), f"bd = {b * d} square mod p_a"),
        _run_check("ramification_v_c_D_is_1",
                   lambda: valuation(D, p_c) == 1, f"D = {D}"),
    )
    report = ConditionReport(checks)
    failure = report.first_failure()
    if failure is not None:
        raise ConditionFailedError(failure.name, report, stage=failure.name)
    return ChateletParams(K, a, b, c, e, p_a, p_b, p_c, primes["e"], report)


@dataclass(frozen=True)
class SearchBounds:
    radius: int = dc_field(default_factory=lambda: Config.SEARCH_RADIUS)
    positivity_bound: Fraction = dc_field(default_factory=lambda: Config.POSITIVITY_BOUND)
    workers: Optional[int] = None


def _distinct_from(*primes: PrincipalPrime):
    return lambda p: not any(p.same_ideal(q) for q in primes)


def _nonsquare_mod(prime: PrincipalPrime):
    return lambda p: not is_square_mod(p.generator, prime)


def choose_params(K: QuadraticField, bounds: Optional[SearchBounds] = None) -> ChateletParams:
    """Four chained prime searches for a, b, c, e, then verify_params."""
    bounds = bounds or SearchBounds()
    logger.log_stage("choose_params", str(K))

    def search(label, congruences, filters, positivity):
        system = CongruenceSystem(
            K, tuple(congruences), positivity, bounds.radius, tuple(filters), label
        )
        return find_principal_prime(system, workers=bounds.workers).prime

    p_a = search("a", [Congruence(K.element(8), K.one())], [], bounds.positivity_bound)
    a = p_a.generator
    p_b = search("b", [Congruence(2 * a, K.one())], [_distinct_from(p_a)], bounds.positivity_bound)
    p_c = search("c", [Congruence(K.element(2), K.one())],
                 [_distinct_from(p_a, p_b), _nonsquare_mod(p_a)], None)
    p_e = search("e", [], [_distinct_from(p_a, p_b, p_c), _nonsquare_mod(p_a)], None)
    return verify_params(a, p_b.generator, p_c.generator, p_e.generator, K)


def eisenstein_check(params: ChateletParams) -> bool:
    """x^4 + 2c x^2 + d is Eisenstein at p_c."""
    p_c = params.p_c
    ok = (
        valuation(2 * params.c, p_c) >= 1
        and valuation(params.d, p_c) == 1
        and valuation(params.b, p_c) == 0
    )
    logger.log_check("eisenstein", ok, f"at {p_c.label}")
    return ok


# ---- Local solvability ----

@dataclass(frozen=True)
class PlaceEvidence:
    place: str
    kind: str
    evidence: dict

    def to_dict(self) -> dict:
        return {"place": self.place, "kind": self.kind, "evidence": self.evidence}


@dataclass(frozen=True)
class SolvabilityCertificate:
    params: ChateletParams
    precision: int
    places: Tuple[PlaceEvidence, ...]

    def to_dict(self) -> dict:
        return {
            "field": self.params.field.describe(),
            "params": self.params.to_dict(),
            "precision": self.precision,
            "places": [p.to_dict() for p in self.places],
        }


def _hensel_evidence(label: str, target_name: str, target: FieldElement,
                     approx: PadicApprox, point: Dict[str, FieldElement]) -> PlaceEvidence:
    logger.log_witness(label, "hensel")
    return PlaceEvidence(label, "hensel", {
        "target": target_name,
        "value": str(target),
        "approx": approx.to_dict(),
        "point": {k: str(v) for k, v in point.items()},
        "verified": True,
    })


def _generates(x: FieldElement, prime: PrincipalPrime) -> bool:
    if not x.is_integral() or x.is_zero() or x.is_unit():
        return False
    return isinstance(is_principal_prime(x), PrincipalPrime)


def _unit_outside(x: FieldElement, prime: PrincipalPrime) -> bool:
    # (x) = prime exactly: x lies in it and |N(x)| = N(prime)
    if not x.is_integral() or x.is_zero():
        return False
    return prime.contains(x) and abs(x.norm()) == prime.residue_char ** prime.residue_degree


def generic_premises(params: ChateletParams) -> Dict[str, bool]:
    """The facts the generic-place argument leans on, each one recomputed."""
    return {
        "a_generates_prime": _generates(params.a, params.p_a),
        "b_generates_prime": _generates(params.b, params.p_b),
        "a_unit_outside_v_a": _unit_outside(params.a, params.p_a),
        "b_unit_outside_v_b": _unit_outside(params.b, params.p_b),
    }


def require_generic_premises(params: ChateletParams) -> Dict[str, bool]:
    premises = generic_premises(params)
    failed = [name for name, ok in premises.items() if not ok]
    logger.log_check("generic_premises", not failed, ", ".join(failed) or "all hold")
    if failed:
        raise PreconditionError(f"generic-place premises fail: {', '.join(failed)}", "generic")
    return premises


def certify_local_solvability(params: ChateletParams, precision: Optional[int] = None) -> SolvabilityCertificate:
    """Evidence of a local point at every place, in the order real, 2-adic, v_a, v_b, generic."""
    N = precision or Config.HENSEL_PRECISION
    K, a, b = params.field, params.a, params.b
    logger.log_stage("local_solvability", f"precision {N}")
    evidence = []

    for emb in K.real_embeddings:
        if emb.sign(a) <= 0:
            raise PreconditionError("a is not positive", emb.label)
        logger.log_witness(emb.label, "real")
        evidence.append(PlaceEvidence(emb.label, "real", {
            "a_lower_bound": str(emb.lower_bound(a)),
            "point": "x arbitrary, b*P(x) = y^2 - a z^2 solvable since a > 0",
        }))

    for place in places_above_two(K):
        if not two_adic_square_criterion(a, place):
            raise PreconditionError("a is not 1 mod 8 at this place", place.label)
        logger.log_witness(place.label, "two-adic")
        evidence.append(PlaceEvidence(place.label, "two-adic", {
            "criterion": "v(a - 1) >= 3 v(2)",
            "v_a_minus_1": place.valuation(a - 1),
            "bound": 3 * place.valuation(K.element(2)),
        }))

    # v_a: x = z = 0 and y^2 = b d
    q0 = params.quartic(0)
    root = hensel_sqrt(q0, params.p_a, N)
    if not root.ring.contains(root.value * root.value - q0):
        raise PreconditionError("point at v_a does not re-verify", params.p_a.label)
    evidence.append(_hensel_evidence(
        f"v_a:{params.p_a.label}", "b*d", q0, root,
        {"x": K.element(0), "y": root.value, "z": K.element(0)},
    ))

    # v_b: a = zeta^2, then y = (bd+1)/2, z = (bd-1)/(2 zeta)
    zeta = hensel_sqrt(a, params.p_b, N)
    ring = zeta.ring
    y = ring.reduce_local((q0 + 1) / 2)
    z = ring.mul(q0 - 1, ring.inverse(2 * zeta.value))
    if not ring.contains(y * y - a * z * z - q0):
        raise PreconditionError("point at v_b does not re-verify", params.p_b.label)
    evidence.append(_hensel_evidence(
        f"v_b:{params.p_b.label}", "a", a, zeta,
        {"x": K.element(0), "y": y, "z": z},
    ))

    excluded = [e.place for e in evidence]
    premises = require_generic_premises(params)
    logger.log_witness("generic", GENERIC_CRITERION)
    evidence.append(PlaceEvidence("generic", GENERIC_CRITERION, {
        "citation": GENERIC_CITATION,
        "excluded_places": excluded,
        "premises": premises,
        "statement": "a unit and v(b P(x)) = 4 v(x) even for v(x) < 0, so b P(x) is a "
                     "norm from the unramified extension K_v(sqrt(a))",
    }))
    return SolvabilityCertificate(params, N, tuple(evidence))


# ---- The conic-bundle variant y^2 - a z^2 = -(x^2 + b)(x^2 - b) ----

@dataclass(frozen=True)
class VariantSurface:
    field: QuadraticField
    a: FieldElement
    b: FieldElement
    p_a: PrincipalPrime
    p_b: PrincipalPrime

    @property
    def rational_point(self) -> Tuple[FieldElement, FieldElement, FieldElement]:
        """(x, y, z) = (0, b, 0)."""
        zero = self.field.element(0)
        return zero, self.b, zero

    def quartic(self, x) -> FieldElement:
        x = self.field.coerce(x)
        return -(x * x + self.b) * (x * x - self.b)

    def verify_point(self) -> bool:
        x, y, z = self.rational_point
        return y * y - self.a * z * z == self.quartic(x)

    def to_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "point": [str(v) for v in self.rational_point]}


def variant_surface(a, b, K: Optional[QuadraticField] = None) -> VariantSurface:
    K = resolve_field(K, a, b)
    a, b = K.coerce(a), K.coerce(b)
    p_a = principal_prime(a, stage="a")
    p_b = principal_prime(b, stage="b")
    if p_a.same_ideal(p_b):
        raise PreconditionError("a and b generate the same prime ideal", "distinctness")
    if not totally_positive_and_large(a, 0):
        raise PreconditionError("a must be totally positive", "a")
    surface = VariantSurface(K, a, b, p_a, p_b)
    if not surface.verify_point():
        raise PreconditionError("(0, b, 0) does not lie on the surface", "point")
    return surface


