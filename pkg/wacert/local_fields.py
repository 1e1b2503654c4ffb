"""
Local arithmetic at finite places
Valuations, Hensel-lifted square roots, the 2-adic square criterion and
valuations at the ramified place of a quadratic extension L = K(sqrt(D)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple, Union

from sympy import factorint, multiplicity

from wacert.config import Config
from wacert.errors import InfiniteValuationError, InvalidInputError, PreconditionError
from wacert.logger import logger
from wacert.nf_core import (
    FieldElement,
    PrincipalPrime,
    QuadraticField,
    ResidueRing,
    is_square_mod,
    principal_prime,
    split_prime_power,
)


def valuation(alpha: FieldElement, prime: PrincipalPrime) -> int:
    """v_pi(alpha) for a nonzero element of K."""
    alpha = prime.field.coerce(alpha)
    if alpha.is_zero():
        raise InfiniteValuationError("valuation of 0", prime.label)
    m = alpha.denominator()
    k_num, _ = split_prime_power(alpha * m, prime)
    k_den, _ = split_prime_power(prime.field.element(m), prime)
    return k_num - k_den


@dataclass(frozen=True)
class PadicApprox:
    """A class in O_K / pi^precision, stored by its canonical representative."""

    prime: PrincipalPrime
    value: FieldElement
    precision: int

    @cached_property
    def ring(self) -> ResidueRing:
        return ResidueRing(self.prime.generator ** self.precision)

    def digits(self) -> Tuple[FieldElement, ...]:
        """pi-adic digits d_0..d_{N-1} in the residue system of O_K/(pi)."""
        base = ResidueRing(self.prime.generator)
        inv_pi = self.prime.generator.inverse()
        rest, out = self.value, []
        for _ in range(self.precision):
            digit = base.reduce(rest)
            out.append(digit)
            rest = (rest - digit) * inv_pi
        return tuple(out)

    def squares_to(self, target: FieldElement) -> bool:
        return self.ring.contains(self.value * self.value - self.ring.reduce_local(target))

    def _merge(self, other: "PadicApprox", value: FieldElement) -> "PadicApprox":
        if not self.prime.same_ideal(other.prime):
            raise InvalidInputError("approximations at different primes")
        precision = min(self.precision, other.precision)
        ring = ResidueRing(self.prime.generator ** precision)
        return PadicApprox(self.prime, ring.reduce(value), precision)

    def __add__(self, other: "PadicApprox") -> "PadicApprox":
        return self._merge(other, self.value + other.value)

    def __mul__(self, other: "PadicApprox") -> "PadicApprox":
        return self._merge(other, self.value * other.value)

    def to_dict(self) -> dict:
        return {
            "generator": str(self.prime.generator),
            "N": self.precision,
            "digits": [str(d) for d in self.digits()],
        }

    @classmethod
    def from_dict(cls, field: QuadraticField, data: dict) -> "PadicApprox":
        prime = principal_prime(field.parse(data["generator"]))
        precision = int(data["N"])
        pi = prime.generator
        total = field.element(0)
        for k, digit in enumerate(data["digits"]):
            total = total + field.parse(digit) * pi ** k
        ring = ResidueRing(pi ** precision)
        return cls(prime, ring.reduce(total), precision)


def hensel_sqrt(t: FieldElement, prime: PrincipalPrime, precision: Optional[int] = None) -> PadicApprox:
    """y with y^2 = t mod pi^precision, for a unit t that is a square mod pi."""
    N = precision or Config.HENSEL_PRECISION
    if N < 1:
        raise InvalidInputError("precision must be at least 1")
    if not prime.is_odd:
        raise PreconditionError("Hensel lifting needs odd residue characteristic", prime.label)
    t = prime.field.coerce(t)
    if valuation(t, prime) != 0:
        raise PreconditionError(f"{t} is not a unit", prime.label)
    if not is_square_mod(t, prime):
        raise PreconditionError(f"{t} is a non-residue", prime.label)

    ring = ResidueRing(prime.generator ** N)
    target = ring.reduce_local(t)
    F = prime.residue_field
    y = F.lift(F.sqrt(F.from_element(target)))
    # Newton doubles the precision each round
    for _ in range(N.bit_length() + 1):
        step = ring.mul(y * y - target, ring.inverse(2 * y))
        y = ring.reduce(y - step)
    approx = PadicApprox(prime, y, N)
    if not approx.squares_to(t):
        raise PreconditionError(f"lift of sqrt({t}) failed re-verification", prime.label)
    logger.debug(f"hensel_sqrt({t}) at {prime.label} to precision {N}: {y}")
    return approx


# ---- Places above 2 ----

@dataclass(frozen=True)
class TwoAdicPlace:
    field: QuadraticField
    kind: str  # 'rational', 'inert', 'ramified' or 'split'
    index: int = 0

    @property
    def label(self) -> str:
        if self.kind == 'rational':
            return "2"
        if self.kind == 'split':
            return f"2:split:{self.index}"
        return f"2:{self.kind}"

    @property
    def ramification_index(self) -> int:
        return 2 if self.kind == 'ramified' else 1

    def _omega_root(self, bits: int) -> int:
        # root of w^2 - w - n in Z_2 with w = index mod 2
        mod = 1 << bits
        n = self.field.omega_norm
        r = self.index
        for _ in range(bits.bit_length() + 1):
            r = (r - (r * r - r - n) * pow(2 * r - 1, -1, mod)) % mod
        return r

    def _valuation_integral(self, beta: FieldElement) -> int:
        a, b = beta.integral_coords()
        if self.kind == 'rational':
            return multiplicity(2, abs(a))
        if self.kind == 'inert':
            return min(multiplicity(2, abs(c)) for c in (a, b) if c != 0)
        norm = abs(int(beta.norm()))
        if self.kind == 'ramified':
            return multiplicity(2, norm)
        bits = multiplicity(2, norm) + 1
        return multiplicity(2, (a + b * self._omega_root(bits)) % (1 << bits))

    def valuation(self, alpha: FieldElement) -> int:
        alpha = self.field.coerce(alpha)
        if alpha.is_zero():
            raise InfiniteValuationError("valuation of 0", self.label)
        m = alpha.denominator()
        return (self._valuation_integral(alpha * m)
                - self._valuation_integral(self.field.element(m)))


def places_above_two(K: QuadraticField) -> Tuple[TwoAdicPlace, ...]:
    kind = K.splitting_type(2)
    if kind == 'split':
        return (TwoAdicPlace(K, 'split', 0), TwoAdicPlace(K, 'split', 1))
    return (TwoAdicPlace(K, kind),)


def two_adic_square_criterion(t: FieldElement, place: TwoAdicPlace) -> bool:
    """Sufficient test that the unit t is a square at the place: v(t - 1) >= 3 v(2)."""
    t = place.field.coerce(t)
    if place.valuation(t) != 0:
        raise PreconditionError(f"{t} is not a unit", place.label)
    if t == 1:
        return True
    return place.valuation(t - 1) >= 3 * place.valuation(place.field.element(2))


# ---- The quadratic extension L = K(sqrt(D)) ----

@dataclass(frozen=True)
class QuadraticExtension:
    base: QuadraticField
    D: FieldElement

    def __post_init__(self):
        if self.D.is_zero():
            raise InvalidInputError("D must be nonzero")

    def element(self, u, v=0) -> "ExtensionElement":
        return ExtensionElement(self, self.base.coerce(u), self.base.coerce(v))

    @property
    def sqrt_D(self) -> "ExtensionElement":
        return self.element(0, 1)

    def coerce(self, value) -> "ExtensionElement":
        if isinstance(value, ExtensionElement):
            if value.ext != self:
                raise InvalidInputError("element of a different extension")
            return value
        return self.element(value)

    @property
    def rational_square_class(self) -> Optional[int]:
        """Square-free integer delta with D in delta * (Q^*)^2, for rational D."""
        if not self.D.is_rational():
            return None
        q = Fraction(self.D.a)
        kernel = -1 if q < 0 else 1
        for p, k in factorint(abs(q.numerator * q.denominator)).items():
            if k % 2:
                kernel *= p
        return kernel

    def describe(self) -> dict:
        out = {"base": self.base.describe(), "D": str(self.D)}
        if self.D.is_rational():
            out["L_delta"] = self.rational_square_class
        return out


@dataclass(frozen=True)
class ExtensionElement:
    """u + v*sqrt(D) with u, v in K."""

    ext: QuadraticExtension
    u: FieldElement
    v: FieldElement

    def _other(self, other) -> Optional["ExtensionElement"]:
        if isinstance(other, (ExtensionElement, FieldElement, int, Fraction)):
            return self.ext.coerce(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return ExtensionElement(self.ext, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return ExtensionElement(self.ext, -self.u, -self.v)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        D = self.ext.D
        return ExtensionElement(
            self.ext, self.u * o.u + D * self.v * o.v, self.u * o.v + self.v * o.u
        )

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        base = self if exponent >= 0 else self.inverse()
        result = self.ext.element(1)
        for _ in range(abs(exponent)):
            result = result * base
        return result

    def conjugate(self) -> "ExtensionElement":
        return ExtensionElement(self.ext, self.u, -self.v)

    def norm(self) -> FieldElement:
        return self.u * self.u - self.ext.D * self.v * self.v

    def inverse(self) -> "ExtensionElement":
        nrm = self.norm()
        if nrm.is_zero():
            raise ZeroDivisionError("inverse of zero")
        inv = nrm.inverse()
        return ExtensionElement(self.ext, self.u * inv, -self.v * inv)

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def __str__(self) -> str:
        return f"({self.u}) + ({self.v})*sqrt(D)"


@dataclass(frozen=True)
class RamifiedPlace:
    """The place P of L above the base prime; requires v_p(D) odd."""

    base_prime: PrincipalPrime
    extension_disc: FieldElement

    def __post_init__(self):
        v = valuation(self.extension_disc, self.base_prime)
        if v % 2 == 0:
            raise PreconditionError(
                f"v(D) = {v} is even, so L/K is not ramified here", self.base_prime.label
            )

    @property
    def ramification_index(self) -> int:
        return 2

    @property
    def extension(self) -> QuadraticExtension:
        return QuadraticExtension(self.base_prime.field, self.extension_disc)

    @property
    def label(self) -> str:
        return f"P|{self.base_prime.generator}"


def ramified_valuation(xi: Union[ExtensionElement, FieldElement], place: RamifiedPlace) -> int:
    """v_P(xi) = v_p(N_{L/K}(xi)) when P is totally ramified over p."""
    xi = place.extension.coerce(xi)
    if xi.is_zero():
        raise InfiniteValuationError("valuation of 0", place.label)
    return valuation(xi.norm(), place.base_prime)
