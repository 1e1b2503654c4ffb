import random
from fractions import Fraction

import pytest
from sympy import primefactors

from wacert.errors import PreconditionError
from wacert.nf_core import (
    PrincipalPrime,
    QuadraticField,
    ResidueRing,
    is_principal_prime,
    principal_prime,
    totally_positive_and_large,
)
from wacert.symbols import INFINITY, hilbert_odd, hilbert_rational, reciprocity_check

Q = QuadraticField(1)


def _conic_has_point_mod(s: int, t: int, p: int) -> bool:
    """Brute force for odd p and s, t of valuation at most 1: s x^2 + t y^2 = z^2 primitively mod p^2."""
    m = p ** 2
    squares = {}
    for z in range(m):
        squares.setdefault(z * z % m, []).append(z)
    for x in range(m):
        for y in range(m):
            value = (s * x * x + t * y * y) % m
            for z in squares.get(value, ()):
                if x % p or y % p or z % p:
                    return True
    return False


def test_hilbert_rational_examples():
    assert hilbert_rational(17, 5, 5) == -1
    assert hilbert_rational(-1, -1, INFINITY) == -1
    assert hilbert_rational(-1, -1, 2) == -1
    assert hilbert_rational(-1, -1, 3) == 1
    assert hilbert_rational(2, 5, 5) == -1
    assert hilbert_rational(Fraction(1, 5), 2, 5) == -1


def test_hilbert_odd_agrees_with_brute_force():
    for p in (3, 5, 7):
        prime = principal_prime(p, Q)
        for s in (1, 2, 3, 5, 6, 7, 10, 14, -1, -3):
            for t in (1, 2, 3, 5, 7, 15, -2, -5):
                expected = 1 if _conic_has_point_mod(s, t, p) else -1
                assert hilbert_odd(s, t, prime) == expected
                assert hilbert_rational(s, t, p) == expected


def test_hilbert_product_formula():
    rng = random.Random(1)
    for _ in range(200):
        s = rng.choice([-1, 1]) * rng.randint(1, 500)
        t = rng.choice([-1, 1]) * rng.randint(1, 500)
        places = [INFINITY] + sorted(set(primefactors(2 * s * t)))
        product = 1
        for v in places:
            product *= hilbert_rational(s, t, v)
        assert product == 1


def test_hilbert_odd_matches_rational_formula():
    rng = random.Random(2)
    for _ in range(200):
        p = rng.choice([3, 5, 7, 11, 13, 17, 137])
        s = Fraction(rng.choice([-1, 1]) * rng.randint(1, 300), rng.randint(1, 20))
        t = rng.choice([-1, 1]) * rng.randint(1, 300)
        assert hilbert_odd(s, t, principal_prime(p, Q)) == hilbert_rational(s, t, p)


def test_hilbert_odd_in_gaussian_integers():
    K = QuadraticField(-1)
    prime = principal_prime(K.parse("2+i"), K)
    # the residue field is F_5 and i = -2 there, a non-square
    assert hilbert_odd(K.parse("i"), K.parse("2+i"), prime) == -1
    assert hilbert_odd(K.element(-1), K.parse("2+i"), prime) == 1
    with pytest.raises(PreconditionError):
        hilbert_odd(K.element(3), K.element(5), principal_prime(K.parse("1+i"), K))


def _prime_corpus(K, congruent_to_one: bool, limit: int = 8):
    eight = ResidueRing(K.element(8))
    found = []
    span = range(-40, 41) if K.degree == 2 else range(-300, 301)
    for a in span:
        for b in (span if K.degree == 2 else (0,)):
            x = K.element(a, b)
            if x.is_zero() or x.is_unit():
                continue
            if congruent_to_one and not eight.congruent(x, 1):
                continue
            if not totally_positive_and_large(x, 0):
                continue
            verdict = is_principal_prime(x)
            if isinstance(verdict, PrincipalPrime) and verdict.is_odd:
                if all(not verdict.same_ideal(p) for p in found):
                    found.append(verdict)
            if len(found) == limit:
                return [p.generator for p in found]
    return [p.generator for p in found]


@pytest.mark.parametrize("delta0", [1, -1, -5, 3])
def test_reciprocity_biconditional(delta0):
    K = QuadraticField(delta0)
    ones = _prime_corpus(K, congruent_to_one=True, limit=5)
    others = _prime_corpus(K, congruent_to_one=False, limit=8)
    assert ones and others
    checked = 0
    for s in ones:
        for t in others:
            if principal_prime(s).same_ideal(principal_prime(t)):
                continue
            assert reciprocity_check(s, t)
            checked += 1
    assert checked > 10


def test_reciprocity_preconditions():
    with pytest.raises(PreconditionError) as excinfo:
        reciprocity_check(Q.element(3), Q.element(7))
    assert excinfo.value.report == ["neither s nor t is 1 mod 8"]
    with pytest.raises(PreconditionError):
        reciprocity_check(Q.element(17), Q.element(17))
    with pytest.raises(PreconditionError):
        reciprocity_check(Q.element(-7), Q.element(-23))


def test_hilbert_bilinear():
    rng = random.Random(5)
    K = QuadraticField(-1)
    gaussian = principal_prime(K.parse("3+2*i"), K)
    for _ in range(120):
        s1, s2, t = (rng.choice([-1, 1]) * rng.randint(1, 400) for _ in range(3))
        for v in (INFINITY, 2, 3, 5, 13):
            assert (hilbert_rational(s1 * s2, t, v)
                    == hilbert_rational(s1, t, v) * hilbert_rational(s2, t, v))
            assert hilbert_rational(s1, t, v) == hilbert_rational(t, s1, v)
        g1, g2, h = (K.element(rng.randint(-30, 30), rng.randint(-30, 30)) for _ in range(3))
        if g1.is_zero() or g2.is_zero() or h.is_zero():
            continue
        assert (hilbert_odd(g1 * g2, h, gaussian)
                == hilbert_odd(g1, h, gaussian) * hilbert_odd(g2, h, gaussian))
