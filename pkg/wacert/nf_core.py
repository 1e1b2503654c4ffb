"""
Quadratic field arithmetic
Exact elements of K = Q(sqrt(delta0)) (delta0 = 1 is Q itself), residue rings
modulo principal ideals via Hermite normal forms, residue fields and
principal-prime certification.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, total_ordering
from itertools import count
from typing import Iterator, Optional, Sequence, Tuple, Union

from sympy import factorint, integer_nthroot, isprime
from sympy.core.intfunc import igcdex as _igcdex
from sympy.functions.combinatorial.numbers import legendre_symbol as _legendre_symbol

from wacert.errors import InvalidInputError, NotCoprimeError, NotPrimeError, PreconditionError

Rational = Union[int, Fraction]
Residue = Tuple[int, int]


def igcdex(a: int, b: int) -> Tuple[int, int, int]:
    # sympy returns gmpy2 mpz when gmpy2 is installed; keep plain ints
    x, y, g = _igcdex(a, b)
    return int(x), int(y), int(g)


def legendre_symbol(a: int, p: int) -> int:
    # sympy returns a symbolic Integer here; keep plain ints
    return int(_legendre_symbol(a, p))


def sign_quadratic(r: Fraction, s: Fraction, delta: int) -> int:
    """Exact sign of r + s*sqrt(delta) for delta > 0 not a square."""
    if s == 0 or delta == 0:
        return (r > 0) - (r < 0)
    if r == 0:
        return (s > 0) - (s < 0)
    if (r > 0) == (s > 0):
        return 1 if r > 0 else -1
    diff = r * r - s * s * delta
    return (diff > 0) - (diff < 0) if r > 0 else (diff < 0) - (diff > 0)


@dataclass(frozen=True)
class QuadraticField:
    """K = Q(sqrt(delta0)) with integral basis (1, w)."""

    delta0: int

    def __post_init__(self):
        if self.delta0 == 0:
            raise InvalidInputError("delta0 must be nonzero")
        if any(exp > 1 for exp in factorint(abs(self.delta0)).values()):
            raise InvalidInputError(f"delta0={self.delta0} is not square-free")

    @property
    def degree(self) -> int:
        return 1 if self.delta0 == 1 else 2

    @property
    def omega_trace(self) -> int:
        # w^2 = omega_trace * w + omega_norm
        return 1 if self.degree == 2 and self.delta0 % 4 == 1 else 0

    @property
    def omega_norm(self) -> int:
        return (self.delta0 - 1) // 4 if self.omega_trace else self.delta0

    @property
    def discriminant(self) -> int:
        if self.degree == 1:
            return 1
        return self.delta0 if self.delta0 % 4 == 1 else 4 * self.delta0

    @property
    def integral_basis(self) -> Tuple[str, str]:
        if self.degree == 1:
            return ("1", "")
        if self.omega_trace:
            return ("1", f"(1+sqrt({self.delta0}))/2")
        return ("1", f"sqrt({self.delta0})")

    @cached_property
    def real_embeddings(self) -> Tuple["RealEmbedding", ...]:
        if self.degree == 1:
            return (RealEmbedding(self, 0),)
        if self.delta0 > 0:
            return (RealEmbedding(self, 0), RealEmbedding(self, 1))
        return ()

    def splitting_type(self, q: int) -> str:
        """'split', 'inert' or 'ramified' for a rational prime q ('rational' over Q)."""
        if self.degree == 1:
            return 'rational'
        if q == 2:
            if self.delta0 % 4 in (2, 3):
                return 'ramified'
            return 'split' if self.delta0 % 8 == 1 else 'inert'
        if self.delta0 % q == 0:
            return 'ramified'
        return 'split' if legendre_symbol(self.delta0 % q, q) == 1 else 'inert'

    def element(self, a: Rational, b: Rational = 0) -> "FieldElement":
        return FieldElement(self, Fraction(a), Fraction(b))

    def from_sqrt_form(self, x: Rational, y: Rational) -> "FieldElement":
        """The element x + y*sqrt(delta0)."""
        if self.omega_trace:
            return self.element(Fraction(x) - Fraction(y), 2 * Fraction(y))
        return self.element(x, y)

    def one(self) -> "FieldElement":
        return self.element(1)

    def omega(self) -> "FieldElement":
        if self.degree == 1:
            raise InvalidInputError("Q has no second basis element")
        return self.element(0, 1)

    def coerce(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.field != self:
                raise InvalidInputError(f"element of {value.field} used in {self}")
            return value
        if isinstance(value, (int, Fraction)):
            return self.element(value)
        if isinstance(value, str):
            return self.parse(value)
        raise InvalidInputError(f"cannot interpret {value!r} as an element of {self}")

    _TERM = re.compile(r'[+-]?[^+-]+')

    def parse(self, text: str) -> "FieldElement":
        """Parse "q0 + q1*w" style literals ("2+w", "-6+5*w", "1/5", "3*w")."""
        compact = text.replace(' ', '')
        if not compact:
            raise InvalidInputError("empty field literal")
        a = b = Fraction(0)
        consumed = 0
        for match in self._TERM.finditer(compact):
            term = match.group(0)
            consumed += len(term)
            sign = -1 if term.startswith('-') else 1
            body = term.lstrip('+-')
            generator = body[-1:] in ('w', 'i') if body else False
            if generator and body[-1] == 'i' and self.delta0 != -1:
                raise InvalidInputError(f"'i' only makes sense in Q(sqrt(-1)): {text!r}")
            try:
                if generator:
                    coeff = body[:-1].rstrip('*') or '1'
                    b += sign * Fraction(coeff)
                else:
                    a += sign * Fraction(body)
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidInputError(f"bad field literal {text!r}") from exc
        if consumed != len(compact):
            raise InvalidInputError(f"bad field literal {text!r}")
        if b and self.degree == 1:
            raise InvalidInputError(f"{text!r} has a w-part but the field is Q")
        return self.element(a, b)

    def describe(self) -> dict:
        return {"delta0": self.delta0}

    def __str__(self) -> str:
        return "Q" if self.degree == 1 else f"Q(sqrt({self.delta0}))"


@dataclass(frozen=True, eq=False)
class FieldElement:
    """a + b*w with exact rational coordinates."""

    field: QuadraticField
    a: Fraction
    b: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'a', Fraction(self.a))
        object.__setattr__(self, 'b', Fraction(self.b))
        if self.field.degree == 1 and self.b != 0:
            raise InvalidInputError("second coordinate must vanish over Q")

    # ---- Coercion and comparison ----

    def _other(self, other) -> Optional["FieldElement"]:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise InvalidInputError(f"mixing elements of {self.field} and {other.field}")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, Fraction(other))
        return None

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return other.field == self.field and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.delta0, self.a, self.b))

    # ---- Ring operations ----

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, -self.a, -self.b)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        t, n = self.field.omega_trace, self.field.omega_norm
        bb = self.b * o.b
        return FieldElement(
            self.field,
            self.a * o.a + bb * n,
            self.a * o.b + self.b * o.a + bb * t,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self if exponent >= 0 else self.inverse()
        result = self.field.one()
        for bit in bin(abs(exponent))[2:]:
            result = result * result
            if bit == '1':
                result = result * base
        return result

    def conjugate(self) -> "FieldElement":
        if self.field.degree == 1:
            return self
        return FieldElement(self.field, self.a + self.b * self.field.omega_trace, -self.b)

    def norm(self) -> Fraction:
        if self.field.degree == 1:
            return self.a
        t, n = self.field.omega_trace, self.field.omega_norm
        return self.a * self.a + self.a * self.b * t - self.b * self.b * n

    def trace(self) -> Fraction:
        if self.field.degree == 1:
            return self.a
        return 2 * self.a + self.b * self.field.omega_trace

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.field.degree == 1:
            return FieldElement(self.field, 1 / self.a)
        nrm = self.norm()
        conj = self.conjugate()
        return FieldElement(self.field, conj.a / nrm, conj.b / nrm)

    # ---- Predicates ----

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_unit(self) -> bool:
        return self.is_integral() and not self.is_zero() and abs(self.norm()) == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def denominator(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def integral_coords(self) -> Tuple[int, int]:
        if not self.is_integral():
            raise InvalidInputError(f"{self} is not integral")
        return int(self.a), int(self.b)

    def sqrt_coordinates(self) -> Tuple[Fraction, Fraction]:
        """(X, Y) with self = X + Y*sqrt(delta0)."""
        if self.field.omega_trace:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*w"
        if self.b > 0:
            return f"{self.a} + {self.b}*w"
        return f"{self.a} - {-self.b}*w"

    def __repr__(self) -> str:
        return f"FieldElement({self}, delta0={self.field.delta0})"


@total_ordering
@dataclass(frozen=True)
class QuadraticMagnitude:
    """r + s*sqrt(delta) compared exactly; s = 0 for Q and imaginary fields."""

    r: Fraction
    s: Fraction
    delta: int

    def __lt__(self, other: "QuadraticMagnitude") -> bool:
        return sign_quadratic(other.r - self.r, other.s - self.s, self.delta) > 0


def embedding_magnitude(alpha: FieldElement) -> QuadraticMagnitude:
    """Monotone key for the largest absolute embedding of alpha."""
    K = alpha.field
    if K.degree == 1:
        return QuadraticMagnitude(abs(alpha.a), Fraction(0), 1)
    if K.delta0 < 0:
        # |sigma(alpha)|^2 is the norm
        return QuadraticMagnitude(alpha.norm(), Fraction(0), K.delta0)
    X, Y = alpha.sqrt_coordinates()
    return QuadraticMagnitude(abs(X), abs(Y), K.delta0)


@dataclass(frozen=True)
class RealEmbedding:
    """Index 0 sends sqrt(delta0) to the positive root, index 1 to the negative one."""

    field: QuadraticField
    index: int

    @property
    def label(self) -> str:
        return f"real:{self.index}"

    def enclosure(self, alpha: FieldElement, bits: int) -> Tuple[Fraction, Fraction]:
        """Certified rational interval containing the image of alpha."""
        if self.field.degree == 1:
            return alpha.a, alpha.a
        X, Y = alpha.sqrt_coordinates()
        if self.index == 1:
            Y = -Y
        scale = 1 << bits
        root = math.isqrt(self.field.delta0 * scale * scale)
        lo, hi = Fraction(root, scale), Fraction(root + 1, scale)
        if Y >= 0:
            return X + Y * lo, X + Y * hi
        return X + Y * hi, X + Y * lo

    def sign(self, alpha: FieldElement) -> int:
        if alpha.is_zero():
            return 0
        for bits in count(0, 8):
            lo, hi = self.enclosure(alpha, bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
        raise AssertionError("unreachable")

    def lower_bound(self, alpha: FieldElement) -> Fraction:
        """A certified rational lower bound with the same sign as alpha."""
        sgn = self.sign(alpha)
        for bits in count(0, 8):
            lo, hi = self.enclosure(alpha, bits)
            if (sgn > 0 and lo > 0) or (sgn < 0 and hi < 0) or sgn == 0:
                return lo
        raise AssertionError("unreachable")


def totally_positive_and_large(alpha: FieldElement, bound: Rational) -> bool:
    """Every real embedding of alpha exceeds bound (vacuous for imaginary K)."""
    shifted = alpha - Fraction(bound)
    return all(emb.sign(shifted) > 0 for emb in alpha.field.real_embeddings)


# ---- Lattices in O_K (coordinates over the integral basis) ----

@dataclass(frozen=True)
class LatticeHnf:
    """Basis rows (A, B), (0, C) with 0 <= B < C, each tracked in the generators.

    C == 0 means the lattice has rank one (only happens over Q).
    """

    A: int
    B: int
    C: int
    row1: Tuple[int, ...]
    row2: Tuple[int, ...]

    @property
    def index(self) -> int:
        return self.A * self.C if self.C else self.A


def _combine(x: int, u: Sequence[int], y: int, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(x * ui + y * vi for ui, vi in zip(u, v))


def _fold_kernel(c: int, crow: Tuple[int, ...], k: int, krow: Tuple[int, ...]):
    if k == 0:
        return c, crow
    x, y, g = igcdex(c, k)
    return g, _combine(x, crow, y, krow)


def lattice_hnf(vectors: Sequence[Tuple[int, int]]) -> LatticeHnf:
    """Hermite normal form of the Z-span of integer 2-vectors."""
    n = len(vectors)
    pivot: Optional[Tuple[int, int]] = None
    prow: Tuple[int, ...] = ()
    c, crow = 0, (0,) * n
    for i, vec in enumerate(vectors):
        row = tuple(1 if j == i else 0 for j in range(n))
        if vec[0] == 0:
            c, crow = _fold_kernel(c, crow, vec[1], row)
            continue
        if pivot is None:
            pivot, prow = vec, row
            continue
        x, y, g = igcdex(pivot[0], vec[0])
        p0, v0 = pivot[0] // g, vec[0] // g
        kernel = v0 * pivot[1] - p0 * vec[1]
        krow = _combine(v0, prow, -p0, row)
        pivot, prow = (g, x * pivot[1] + y * vec[1]), _combine(x, prow, y, row)
        c, crow = _fold_kernel(c, crow, kernel, krow)
    if pivot is None:
        raise InvalidInputError("lattice generators span no full-rank lattice")
    if pivot[0] < 0:
        pivot, prow = (-pivot[0], -pivot[1]), tuple(-r for r in prow)
    B = pivot[1]
    if c:
        q = B // c
        B -= q * c
        prow = _combine(1, prow, -q, crow)
    return LatticeHnf(pivot[0], B, c, prow, crow)


def _ideal_generators(mu: FieldElement) -> Tuple[FieldElement, ...]:
    if mu.field.degree == 1:
        return (mu,)
    return (mu, mu * mu.field.omega())


def ideal_sum_index(alpha: FieldElement, beta: FieldElement) -> int:
    """[O_K : (alpha) + (beta)]; 1 iff the ideals are coprime."""
    gens = _ideal_generators(alpha) + _ideal_generators(beta)
    return lattice_hnf([g.integral_coords() for g in gens]).index


def bezout(mu1: FieldElement, mu2: FieldElement) -> Tuple[FieldElement, FieldElement]:
    """(e, f) with e in (mu1), f in (mu2) and e + f = 1."""
    g1, g2 = _ideal_generators(mu1), _ideal_generators(mu2)
    hnf = lattice_hnf([g.integral_coords() for g in g1 + g2])
    if hnf.index != 1:
        raise NotCoprimeError(f"({mu1}) and ({mu2}) are not coprime")
    # with C == 1 the reduced B is 0, so row1 expresses (1, 0) exactly
    coeffs = hnf.row1
    K = mu1.field
    e = sum((coeffs[i] * g for i, g in enumerate(g1)), K.element(0))
    f = sum((coeffs[len(g1) + i] * g for i, g in enumerate(g2)), K.element(0))
    return e, f


def same_ideal(alpha: FieldElement, beta: FieldElement) -> bool:
    """(alpha) == (beta): norms agree up to sign and the quotient is a unit."""
    if abs(alpha.norm()) != abs(beta.norm()):
        return False
    return (alpha / beta).is_unit()


@dataclass(frozen=True)
class ResidueRing:
    """O_K / (modulus) with canonical representatives in the HNF box."""

    modulus: FieldElement
    hnf: LatticeHnf = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.modulus.is_zero() or not self.modulus.is_integral():
            raise InvalidInputError(f"modulus {self.modulus} must be integral and nonzero")
        gens = _ideal_generators(self.modulus)
        object.__setattr__(self, 'hnf', lattice_hnf([g.integral_coords() for g in gens]))

    @property
    def field(self) -> QuadraticField:
        return self.modulus.field

    @property
    def lattice_basis(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        return (self.hnf.A, self.hnf.B), (0, self.hnf.C)

    @property
    def cardinality(self) -> int:
        return self.hnf.index

    def reduce(self, alpha: FieldElement) -> FieldElement:
        x, y = self.field.coerce(alpha).integral_coords()
        k = x // self.hnf.A
        x, y = x - k * self.hnf.A, y - k * self.hnf.B
        if self.hnf.C:
            y %= self.hnf.C
        return self.field.element(x, y)

    def reduce_local(self, alpha: FieldElement) -> FieldElement:
        """Reduce an element whose denominator is a unit modulo the modulus."""
        alpha = self.field.coerce(alpha)
        m = alpha.denominator()
        if m == 1:
            return self.reduce(alpha)
        if math.gcd(m, self.cardinality) != 1:
            raise PreconditionError(f"denominator {m} of {alpha} is not invertible mod ({self.modulus})")
        return self.mul(alpha * m, self.inverse(self.field.element(m)))

    def contains(self, alpha: FieldElement) -> bool:
        return self.reduce(alpha).is_zero()

    def congruent(self, alpha, beta) -> bool:
        return self.contains(self.field.coerce(alpha) - self.field.coerce(beta))

    def mul(self, alpha: FieldElement, beta: FieldElement) -> FieldElement:
        return self.reduce(self.reduce(alpha) * self.reduce(beta))

    def pow(self, alpha: FieldElement, exponent: int) -> FieldElement:
        result = self.reduce(self.field.one())
        base = self.reduce(alpha)
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def is_unit(self, alpha: FieldElement) -> bool:
        alpha = self.field.coerce(alpha)
        return not alpha.is_zero() and ideal_sum_index(alpha, self.modulus) == 1

    def inverse(self, alpha: FieldElement) -> FieldElement:
        alpha = self.field.coerce(alpha)
        if self.cardinality == 1:
            return self.field.element(0)
        e, _ = bezout(alpha, self.modulus)
        return self.reduce(e / alpha)

    def elements(self) -> Iterator[FieldElement]:
        for x in range(self.hnf.A):
            for y in range(self.hnf.C or 1):
                yield self.field.element(x, y)


# ---- Residue fields and principal primes ----

@dataclass(frozen=True)
class ResidueField:
    """F_q (degree 1, w maps to `root`) or F_q[w]/(minpoly) (degree 2)."""

    field: QuadraticField
    q: int
    degree: int
    root: int = 0

    @property
    def size(self) -> int:
        return self.q ** self.degree

    def _mod(self, value: Fraction) -> int:
        if value.denominator % self.q == 0:
            raise PreconditionError(f"denominator of {value} vanishes in F_{self.q}")
        return value.numerator * pow(value.denominator, -1, self.q) % self.q

    def from_element(self, alpha: FieldElement) -> Residue:
        alpha = self.field.coerce(alpha)
        if self.degree == 1:
            return (self._mod(alpha.a) + self._mod(alpha.b) * self.root) % self.q, 0
        return self._mod(alpha.a), self._mod(alpha.b)

    def lift(self, x: Residue) -> FieldElement:
        return self.field.element(x[0], x[1] if self.degree == 2 else 0)

    @property
    def zero(self) -> Residue:
        return (0, 0)

    @property
    def one(self) -> Residue:
        return (1 % self.q, 0)

    def mul(self, x: Residue, y: Residue) -> Residue:
        q = self.q
        if self.degree == 1:
            return x[0] * y[0] % q, 0
        t, n = self.field.omega_trace, self.field.omega_norm
        bb = x[1] * y[1]
        return (x[0] * y[0] + bb * n) % q, (x[0] * y[1] + x[1] * y[0] + bb * t) % q

    def pow(self, x: Residue, exponent: int) -> Residue:
        result, base = self.one, x
        while exponent:
            if exponent & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            exponent >>= 1
        return result

    def elements(self) -> Iterator[Residue]:
        for c0 in range(self.q):
            for c1 in range(self.q if self.degree == 2 else 1):
                yield c0, c1

    def is_square(self, x: Residue) -> bool:
        """Euler's criterion in F_q or F_{q^2} (odd q)."""
        if self.q == 2:
            raise PreconditionError("Euler criterion needs odd characteristic")
        if x == self.zero:
            return True
        return self.pow(x, (self.size - 1) // 2) == self.one

    @cached_property
    def nonresidue(self) -> Residue:
        for x in self.elements():
            if x != self.zero and not self.is_square(x):
                return x
        raise AssertionError("no non-residue in an odd finite field")

    def sqrt(self, x: Residue) -> Residue:
        """Tonelli-Shanks square root."""
        if x == self.zero:
            return x
        if not self.is_square(x):
            raise PreconditionError(f"{x} is not a square in F_{self.size}")
        Q, S = self.size - 1, 0
        while Q % 2 == 0:
            Q //= 2
            S += 1
        M = S
        c = self.pow(self.nonresidue, Q)
        t = self.pow(x, Q)
        R = self.pow(x, (Q + 1) // 2)
        while t != self.one:
            i, t2 = 0, t
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (M - i - 1))
            M, c = i, self.mul(b, b)
            t, R = self.mul(t, c), self.mul(R, b)
        return R


@dataclass(frozen=True)
class PrincipalPrime:
    generator: FieldElement
    residue_char: int
    residue_degree: int
    residue_field: ResidueField
    splitting: str

    @property
    def field(self) -> QuadraticField:
        return self.generator.field

    @property
    def is_odd(self) -> bool:
        return self.residue_char != 2

    @property
    def label(self) -> str:
        return str(self.generator)

    def same_ideal(self, other: "PrincipalPrime") -> bool:
        return same_ideal(self.generator, other.generator)

    def contains(self, alpha: FieldElement) -> bool:
        """alpha in (pi) for integral alpha."""
        return self.residue_field.from_element(alpha) == self.residue_field.zero

    def to_dict(self) -> dict:
        return {
            "generator": str(self.generator),
            "residue_char": self.residue_char,
            "residue_degree": self.residue_degree,
            "splitting": self.splitting,
        }


@dataclass(frozen=True)
class PrimeRejection:
    reason: str


def _omega_root(pi: FieldElement, q: int) -> int:
    # pi = a + b w lies in the prime over q, so w = -a/b there
    a, b = pi.integral_coords()
    if pi.field.degree == 1:
        return 0
    return (-a * pow(b, -1, q)) % q


def is_principal_prime(pi: FieldElement) -> Union[PrincipalPrime, PrimeRejection]:
    """Decide whether (pi) is a prime ideal of O_K."""
    if not pi.is_integral():
        raise InvalidInputError(f"{pi} is not integral")
    if pi.is_zero() or pi.is_unit():
        raise InvalidInputError(f"{pi} is zero or a unit")
    K = pi.field
    n = abs(int(pi.norm()))
    if isprime(n):
        if K.degree == 1:
            return PrincipalPrime(pi, n, 1, ResidueField(K, n, 1), 'rational')
        return PrincipalPrime(
            pi, n, 1, ResidueField(K, n, 1, _omega_root(pi, n)), K.splitting_type(n)
        )
    root, exact = integer_nthroot(n, 2)
    q = int(root)
    if K.degree == 2 and exact and isprime(q):
        if K.splitting_type(q) != 'inert':
            return PrimeRejection(f"norm {n} = {q}^2 but {q} is {K.splitting_type(q)} in {K}")
        if not (pi / q).is_unit():
            return PrimeRejection(f"norm {n} = {q}^2 but {pi} is not associate to {q}")
        return PrincipalPrime(pi, q, 2, ResidueField(K, q, 2), 'inert')
    return PrimeRejection(f"norm {n} is neither prime nor the square of an inert prime")


def principal_prime(pi, field: Optional[QuadraticField] = None, stage: Optional[str] = None) -> PrincipalPrime:
    """is_principal_prime that raises NotPrimeError on rejection."""
    if field is not None:
        pi = field.coerce(pi)
    verdict = is_principal_prime(pi)
    if isinstance(verdict, PrimeRejection):
        raise NotPrimeError(verdict.reason, stage or str(pi))
    return verdict


def split_prime_power(beta: FieldElement, prime: PrincipalPrime) -> Tuple[int, FieldElement]:
    """(k, beta / pi^k) with k maximal, for integral nonzero beta."""
    inv_pi = prime.generator.inverse()
    k = 0
    while prime.contains(beta):
        beta = beta * inv_pi
        k += 1
    return k, beta


def is_square_mod(s: FieldElement, prime: PrincipalPrime) -> bool:
    """Whether the residue of the unit s is a square in O_K/(pi)."""
    if not prime.is_odd:
        raise PreconditionError("even residue characteristic", prime.label)
    s = prime.field.coerce(s)
    if s.is_zero():
        raise PreconditionError("0 is not a unit", prime.label)
    m = s.denominator()
    k_num, unit = split_prime_power(s * (m * m), prime)
    k_den, _ = split_prime_power(prime.field.element(m), prime)
    if k_num != 2 * k_den:
        raise PreconditionError(f"{s} is not a unit at ({prime.generator})", prime.label)
    # unit = s * (m / pi^k_den)^2 lies in the square class of s
    F = prime.residue_field
    return F.is_square(F.from_element(unit))


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    q = Fraction(q)
    if q < 0:
        return None
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        return None
    return Fraction(num, den)


def field_sqrt(x: FieldElement) -> Optional[FieldElement]:
    """A square root of x inside K, or None."""
    K = x.field
    if x.is_zero():
        return x
    if K.degree == 1:
        root = rational_sqrt(x.a)
        return None if root is None else K.element(root)
    X, Y = x.sqrt_coordinates()
    n = rational_sqrt(x.norm())
    if n is None:
        return None
    # (u + v sqrt(delta))^2 = x gives u^2 = (X +- n) / 2 and 2uv = Y
    for m in (n, -n):
        u = rational_sqrt((X + m) / 2)
        if u is None:
            continue
        if u != 0:
            candidate = K.from_sqrt_form(u, Y / (2 * u))
        else:
            v = rational_sqrt(X / K.delta0)
            if v is None:
                continue
            candidate = K.from_sqrt_form(0, v)
        if candidate * candidate == x:
            return candidate
    return None
