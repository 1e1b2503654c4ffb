"""
Quadratic Hilbert symbols
Odd places of a quadratic field, every place of Q, and the quadratic
reciprocity check between two principal primes.
"""

from fractions import Fraction
from typing import Union

from sympy import isprime, multiplicity

from wacert.errors import InvalidInputError, PreconditionError, ReciprocityViolation
from wacert.local_fields import valuation
from wacert.logger import logger
from wacert.nf_core import (
    FieldElement,
    PrincipalPrime,
    ResidueRing,
    is_square_mod,
    legendre_symbol,
    principal_prime,
)

INFINITY = "inf"

Place = Union[int, str]


def hilbert_odd(s, t, prime: PrincipalPrime) -> int:
    """(s, t) at an odd finite place, from valuations and residue squares."""
    if not prime.is_odd:
        raise PreconditionError("hilbert_odd needs an odd place", prime.label)
    K = prime.field
    s, t = K.coerce(s), K.coerce(t)
    if s.is_zero() or t.is_zero():
        raise InvalidInputError("Hilbert symbol of zero")

    alpha, beta = valuation(s, prime), valuation(t, prime)
    pi = prime.generator
    unit_s, unit_t = s * pi ** (-alpha), t * pi ** (-beta)
    alpha, beta = alpha % 2, beta % 2

    if alpha == 0 and beta == 0:
        return 1
    if alpha == 0:
        return 1 if is_square_mod(unit_s, prime) else -1
    if beta == 0:
        return 1 if is_square_mod(unit_t, prime) else -1
    # (pi u, pi w) = (pi u, -u w)
    return 1 if is_square_mod(-unit_s * unit_t, prime) else -1


def _square_free_integer(x: Fraction) -> int:
    # p/q and p*q share a square class
    return x.numerator * x.denominator


def hilbert_rational(s, t, v: Place) -> int:
    """(s, t)_v over Q for a prime v or v = 'inf'."""
    s, t = Fraction(s), Fraction(t)
    if s == 0 or t == 0:
        raise InvalidInputError("Hilbert symbol of zero")
    if v == INFINITY:
        return -1 if s < 0 and t < 0 else 1
    p = int(v)
    if not isprime(p):
        raise InvalidInputError(f"{v} is not a prime")

    a, b = _square_free_integer(s), _square_free_integer(t)
    alpha, beta = multiplicity(p, abs(a)), multiplicity(p, abs(b))
    u, w = a // p ** alpha, b // p ** beta

    if p != 2:
        eps = (p - 1) // 2
        sign = (-1) ** (alpha * beta * eps)
        sign *= legendre_symbol(u % p, p) ** beta * legendre_symbol(w % p, p) ** alpha
        return sign

    def eps2(x: int) -> int:
        return ((x % 8) - 1) // 2 % 2

    def omega2(x: int) -> int:
        return ((x % 8) ** 2 - 1) // 8 % 2

    exponent = eps2(u) * eps2(w) + alpha * omega2(w) + beta * omega2(u)
    return -1 if exponent % 2 else 1


def reciprocity_check(s: FieldElement, t: FieldElement) -> bool:
    """Check (s mod t is a square) == (t mod s is a square) under the reciprocity premises."""
    K = s.field
    t = K.coerce(t)
    ps = principal_prime(s, stage="s")
    pt = principal_prime(t, stage="t")

    problems = []
    if ps.same_ideal(pt):
        problems.append("s and t generate the same prime ideal")
    if not ps.is_odd or not pt.is_odd:
        problems.append("both primes must be odd")
    eight = ResidueRing(K.element(8))
    if not (eight.congruent(s, 1) or eight.congruent(t, 1)):
        problems.append("neither s nor t is 1 mod 8")
    for emb in K.real_embeddings:
        if emb.sign(s) < 0 and emb.sign(t) < 0:
            problems.append(f"s and t are both negative at {emb.label}")
    if problems:
        raise PreconditionError("; ".join(problems), "reciprocity", report=problems)

    lhs = is_square_mod(s, pt)
    rhs = is_square_mod(t, ps)
    logger.log_check("reciprocity", lhs == rhs, f"s={s} t={t} lhs={lhs} rhs={rhs}")
    if lhs != rhs:
        raise ReciprocityViolation(f"s={s} square mod t: {lhs}; t square mod s: {rhs}")
    return True
