import dataclasses
from fractions import Fraction

import pytest

from wacert.chatelet import (
    CONDITION_NAMES,
    GENERIC_CRITERION,
    SearchBounds,
    certify_local_solvability,
    choose_params,
    eisenstein_check,
    generic_premises,
    require_generic_premises,
    variant_surface,
    verify_params,
)
from wacert.errors import ConditionFailedError, NotPrimeError, PreconditionError
from wacert.local_fields import PadicApprox
from wacert.nf_core import QuadraticField, ResidueRing, totally_positive_and_large

Q = QuadraticField(1)


@pytest.fixture(scope="module")
def example():
    return verify_params(17, 137, 5, -31)


def test_example_parameters(example):
    assert example.d == -155
    assert example.D == 180
    assert example.report.passed
    assert [c.name for c in example.report.checks] == list(CONDITION_NAMES)
    assert example.to_dict() == {"a": "17", "b": "137", "c": "5", "e": "-31", "d": "-155", "D": "180"}


def test_failing_condition_is_labelled():
    # 139 is prime but 139 = 3 mod 34
    with pytest.raises(ConditionFailedError) as excinfo:
        verify_params(17, 139, 5, -31)
    assert excinfo.value.condition == "condition_2"
    assert excinfo.value.stage == "condition_2"
    assert not excinfo.value.report.to_dict()["condition_2"]["passed"]


def test_non_prime_parameter():
    with pytest.raises(NotPrimeError) as excinfo:
        verify_params(17, 135, 5, -31)
    assert excinfo.value.stage == "b"


def test_repeated_prime_rejected():
    with pytest.raises(PreconditionError):
        verify_params(17, 137, 5, -5)


def test_choose_params_over_q():
    params = choose_params(Q)
    assert (params.a, params.b, params.c, params.e) == (17, 103, -3, -5)
    assert params.D == -6
    assert eisenstein_check(params)


def test_choose_params_honours_positivity_bound():
    params = choose_params(Q, SearchBounds(positivity_bound=Fraction(20)))
    assert params.a == 41
    assert totally_positive_and_large(params.b, Fraction(20))
    assert ResidueRing(2 * params.a).congruent(params.b, 1)


def test_choose_params_over_gaussian_integers():
    K = QuadraticField(-1)
    params = choose_params(K, SearchBounds(radius=12))
    assert params.report.passed
    assert ResidueRing(K.element(8)).congruent(params.a, 1)
    assert eisenstein_check(params)


def test_eisenstein(example):
    assert eisenstein_check(example)


def test_local_solvability_certificate(example):
    cert = certify_local_solvability(example, 8)
    kinds = [p.kind for p in cert.places]
    assert kinds == ["real", "two-adic", "hensel", "hensel", GENERIC_CRITERION]
    labels = [p.place for p in cert.places]
    assert labels[:4] == ["real:0", "2", "v_a:17", "v_b:137"]

    v_a = cert.places[2].evidence
    assert v_a["target"] == "b*d"
    approx = PadicApprox.from_dict(Q, v_a["approx"])
    assert approx.squares_to(Q.element(137 * -155))
    assert len(v_a["approx"]["digits"]) == 8

    generic = cert.places[4].evidence
    assert generic["excluded_places"] == labels[:4]
    assert all(generic["premises"].values())


def test_point_at_v_b_satisfies_the_equation(example):
    cert = certify_local_solvability(example, 6)
    point = cert.places[3].evidence["point"]
    y, z = Q.parse(point["y"]), Q.parse(point["z"])
    residual = y * y - 17 * z * z - example.quartic(0)
    assert ResidueRing(Q.element(137 ** 6)).contains(residual)


def test_variant_surface():
    surface = variant_surface(17, 5)
    assert surface.verify_point()
    assert surface.quartic(0) == 25
    with pytest.raises(PreconditionError):
        variant_surface(-7, 137)
    with pytest.raises(PreconditionError):
        variant_surface(17, 17)


def test_generic_premises_are_recomputed(example):
    assert generic_premises(example) == {
        "a_generates_prime": True,
        "b_generates_prime": True,
        "a_unit_outside_v_a": True,
        "b_unit_outside_v_b": True,
    }
    # a = 17 does not lie in (137)
    swapped = dataclasses.replace(example, p_a=example.p_b)
    premises = generic_premises(swapped)
    assert premises["a_generates_prime"]
    assert not premises["a_unit_outside_v_a"]
    with pytest.raises(PreconditionError) as excinfo:
        require_generic_premises(swapped)
    assert excinfo.value.stage == "generic"


def test_composite_b_breaks_generic_premises(example):
    broken = dataclasses.replace(example, b=Q.element(137 * 3))
    premises = generic_premises(broken)
    assert not premises["b_generates_prime"]
    assert not premises["b_unit_outside_v_b"]


@pytest.mark.parametrize("delta0", [3, -5])
def test_choose_then_verify_over_quadratic_fields(delta0):
    K = QuadraticField(delta0)
    params = choose_params(K)
    assert params.field == K
    assert params.report.passed
    assert ResidueRing(K.element(8)).congruent(params.a, 1)
    assert totally_positive_and_large(params.a, 0)
    assert ResidueRing(2 * params.a).congruent(params.b, 1)
    assert eisenstein_check(params)
    again = verify_params(params.a, params.b, params.c, params.e, K)
    assert again == params
    assert again.report.to_dict() == params.report.to_dict()
    assert all(generic_premises(params).values())
