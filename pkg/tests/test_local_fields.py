import random
from fractions import Fraction

import pytest

from wacert.errors import InfiniteValuationError, InvalidInputError, PreconditionError
from wacert.local_fields import (
    PadicApprox,
    QuadraticExtension,
    RamifiedPlace,
    hensel_sqrt,
    places_above_two,
    ramified_valuation,
    two_adic_square_criterion,
    valuation,
)
from wacert.nf_core import QuadraticField, principal_prime

Q = QuadraticField(1)
QI = QuadraticField(-1)


def test_valuation_examples():
    p5 = principal_prime(5, Q)
    assert valuation(Q.element(180), p5) == 1
    assert valuation(Q.element(Fraction(1, 25)), p5) == -2
    assert valuation(Q.element(7), p5) == 0
    with pytest.raises(InfiniteValuationError):
        valuation(Q.element(0), p5)


def test_valuation_additive_random():
    rng = random.Random(21)
    for K, g in ((Q, "3"), (QI, "2+i"), (QuadraticField(-5), "3+2*w")):
        prime = principal_prime(K.parse(g), K)
        for _ in range(150):
            alpha = K.element(rng.randint(1, 60), rng.randint(-60, 60) if K.degree == 2 else 0)
            beta = K.element(Fraction(rng.randint(1, 60), rng.randint(1, 9)),
                             rng.randint(-60, 60) if K.degree == 2 else 0)
            if alpha.is_zero() or beta.is_zero():
                continue
            assert valuation(alpha * beta, prime) == valuation(alpha, prime) + valuation(beta, prime)


def test_hensel_witness_at_17():
    p17 = principal_prime(17, Q)
    target = Q.element(137 * -155)
    approx = hensel_sqrt(target, p17, 8)
    assert approx.precision == 8
    assert approx.squares_to(target)
    assert (approx.value * approx.value - target).a % 17 ** 8 == 0
    assert len(approx.digits()) == 8


def test_hensel_digits_reload():
    prime = principal_prime(QI.parse("2+i"), QI)
    approx = hensel_sqrt(QI.element(-1), prime, 6)
    again = PadicApprox.from_dict(QI, approx.to_dict())
    assert again.value == approx.value
    assert again.squares_to(QI.element(-1))


def test_hensel_rejects_non_residue_and_non_unit():
    p17 = principal_prime(17, Q)
    with pytest.raises(PreconditionError):
        hensel_sqrt(Q.element(5), p17)
    with pytest.raises(PreconditionError):
        hensel_sqrt(Q.element(34), p17)
    with pytest.raises(PreconditionError):
        hensel_sqrt(Q.element(17 * 4 + 1), principal_prime(2, Q))
    with pytest.raises(InvalidInputError):
        hensel_sqrt(Q.element(2), p17, -1)


def test_padic_arithmetic_keeps_lower_precision():
    p = principal_prime(13, Q)
    x = hensel_sqrt(Q.element(3), p, 6)
    y = hensel_sqrt(Q.element(3), p, 3)
    product = x * y
    assert product.precision == 3
    assert product.squares_to(Q.element(9))


def test_places_above_two():
    assert [pl.kind for pl in places_above_two(Q)] == ["rational"]
    assert [pl.kind for pl in places_above_two(QI)] == ["ramified"]
    assert [pl.kind for pl in places_above_two(QuadraticField(-3))] == ["inert"]
    split = places_above_two(QuadraticField(-7))
    assert [pl.label for pl in split] == ["2:split:0", "2:split:1"]
    assert all(pl.ramification_index == 1 for pl in split)


def test_two_adic_square_criterion():
    (place,) = places_above_two(Q)
    assert two_adic_square_criterion(Q.element(17), place)
    assert not two_adic_square_criterion(Q.element(5), place)
    with pytest.raises(PreconditionError):
        two_adic_square_criterion(Q.element(6), place)

    (ram,) = places_above_two(QI)
    assert ram.valuation(QI.element(2)) == 2
    assert ram.valuation(QI.parse("1+i")) == 1
    assert two_adic_square_criterion(QI.element(17), ram)
    assert not two_adic_square_criterion(QI.element(5), ram)

    for pl in places_above_two(QuadraticField(-7)):
        assert pl.valuation(QuadraticField(-7).element(2)) == 1
        assert two_adic_square_criterion(QuadraticField(-7).element(17), pl)


def test_split_places_separate_the_two_primes():
    K = QuadraticField(-7)
    w = K.omega()
    # w (w - 1) = -2 in O_K, each factor lying over one of the two places
    assert w * (w - 1) == -2
    first, second = places_above_two(K)
    assert sorted([first.valuation(w), second.valuation(w)]) == [0, 1]


def test_ramified_place_and_valuation():
    p5 = principal_prime(5, Q)
    place = RamifiedPlace(p5, Q.element(180))
    L = place.extension
    assert isinstance(L, QuadraticExtension)
    assert ramified_valuation(L.sqrt_D, place) == 1
    assert ramified_valuation(L.element(5), place) == 2
    assert ramified_valuation(L.element(30, 1), place) == 1
    with pytest.raises(PreconditionError):
        RamifiedPlace(p5, Q.element(25))
    with pytest.raises(InfiniteValuationError):
        ramified_valuation(L.element(0), place)


def test_extension_arithmetic():
    L = QuadraticExtension(Q, Q.element(180))
    xi = L.element(3, 2)
    assert (xi * xi.inverse()).u == 1
    assert (xi * xi.conjugate()).v.is_zero()
    assert (xi * xi.conjugate()).u == xi.norm()
    assert L.sqrt_D ** 2 == L.element(180)


def test_rational_square_class():
    assert QuadraticExtension(Q, Q.element(180)).rational_square_class == 5
    assert QuadraticExtension(Q, Q.element(-6)).rational_square_class == -6
    assert QuadraticExtension(Q, Q.element(Fraction(3, 4))).rational_square_class == 3
    assert QuadraticExtension(Q, Q.element(180)).describe()["L_delta"] == 5
    assert QuadraticExtension(QI, QI.element(0, 1)).rational_square_class is None


def test_ramified_valuation_additive_and_restricts_to_base():
    rng = random.Random(33)
    for K, g, D in ((Q, "5", "180"), (QI, "2+i", "2+i"), (QuadraticField(3), "7", "21")):
        place = RamifiedPlace(principal_prime(K.parse(g), K), K.parse(D))
        L = place.extension
        for _ in range(80):
            u = K.element(Fraction(rng.randint(-40, 40), rng.randint(1, 9)),
                          rng.randint(-40, 40) if K.degree == 2 else 0)
            xi = L.element(u, rng.randint(-40, 40))
            eta = L.element(rng.randint(-40, 40), Fraction(rng.randint(-40, 40), rng.randint(1, 5)))
            if xi.is_zero() or eta.is_zero():
                continue
            assert (ramified_valuation(xi * eta, place)
                    == ramified_valuation(xi, place) + ramified_valuation(eta, place))
            if not u.is_zero():
                assert ramified_valuation(u, place) == 2 * valuation(u, place.base_prime)
