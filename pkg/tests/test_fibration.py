import random
from fractions import Fraction

import pytest
from sympy import QQ, ZZ, Matrix, Poly

from wacert.errors import InvalidInputError, PreconditionError, UsageError
from wacert.fibration import (
    CHART_IDS,
    E_EXAMPLE,
    EXAMPLE,
    PERTURBED_PENCIL,
    R,
    X,
    BinaryForm,
    MultiPoly,
    WeierstrassCurve,
    branch_locus,
    build_section,
    chart_transition,
    check_chart_transitions,
    degenerate_locus_smooth,
    etale_over_branch,
    exact_resultant,
    indeterminacy_disjoint,
    point_residuals,
    ramification_data,
    subresultant_gcd,
    verify_E_points,
    verify_point_on_X,
)

RATIONAL_POINT = (0, 0, 1, (48, 36, 1))


@pytest.fixture(scope="module")
def section():
    return build_section(EXAMPLE.p_inf(), EXAMPLE.p_zero())


@pytest.fixture(scope="module")
def branch(section):
    return branch_locus(section)


def _sylvester_resultant(f: Poly, g: Poly):
    m, n = f.degree(), g.degree()
    fc, gc = f.all_coeffs(), g.all_coeffs()
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (n - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (m - 1 - i))
    return Matrix(rows).det()


def test_section_shape(section):
    assert section.multidegree == (2, 4)
    again = MultiPoly.from_text(section.to_text())
    assert again.poly == section.poly


def test_section_rejects_bad_quartics():
    with pytest.raises(PreconditionError):
        build_section(X**4, EXAMPLE.p_zero())
    with pytest.raises(InvalidInputError):
        build_section(X**3 + 1, EXAMPLE.p_zero())
    with pytest.raises(PreconditionError):
        build_section(X**4 - 16, (X - 2) * (X + 1) * (X + 3) * (X + 5))


def test_degenerate_locus_smooth(section):
    assert degenerate_locus_smooth(section)


def test_branch_locus(branch):
    assert branch.root_count == 6
    assert not branch.infinity_is_root
    assert [str(r) for r in branch.rational_roots] == ["-1", "1"]
    assert [o.degree for o in branch.orbits] == [4]
    assert branch.radicals_match is True


def test_resultant_matches_sylvester_determinant():
    rng = random.Random(17)
    for _ in range(500):
        f = Poly([rng.randint(-9, 9) for _ in range(rng.randint(2, 4))], R, domain=ZZ)
        g = Poly([rng.randint(-9, 9) for _ in range(rng.randint(2, 4))], R, domain=ZZ)
        if f.degree() < 1 or g.degree() < 1:
            continue
        assert exact_resultant(f, g) == _sylvester_resultant(f, g)


def test_subresultant_gcd():
    f = Poly((R - 1) * (R + 2) * (R - 3), R)
    g = Poly((R - 1) * (R + 5), R)
    assert subresultant_gcd(f, g) == Poly(R - 1, R)
    assert subresultant_gcd(Poly(R**2 + 1, R), Poly(R - 4, R)).is_ground


def test_weierstrass_group_law():
    E = E_EXAMPLE
    torsion = E.two_torsion()
    assert len(torsion) == 4
    identity = E.normalize(E.identity)
    for point in torsion:
        assert E.contains(point)
        assert E.double(point) == identity
    a, b = torsion[1], torsion[2]
    assert E.add(a, b) == torsion[3]
    assert E.negate(a) == E.normalize(a)


def test_weierstrass_addition_on_a_rank_one_curve():
    E = WeierstrassCurve(-2, 0)
    P = (Fraction(2), Fraction(2), Fraction(1))
    assert E.contains(P)
    Q2 = E.double(P)
    assert E.contains(Q2)
    assert E.add(P, E.negate(P)) == E.normalize(E.identity)
    assert E.add(E.add(P, P), P) == E.add(P, Q2)


def test_E_points_and_indeterminacy():
    report = verify_E_points()
    assert report.ok
    assert report.complete
    assert indeterminacy_disjoint()


def test_etale_over_branch(branch):
    cert = etale_over_branch(branch)
    assert cert.g12.degree == 12
    assert cert.g6.degree() == 6
    assert cert.coprime
    assert cert.gcd.is_ground
    assert cert.etale
    assert all(cert.per_point.values())
    s, t = cert.cofactors
    g6 = Poly(cert.g6.as_expr(), R, domain=QQ)
    g = Poly(cert.g12.dehomogenize().as_expr(), R, domain=QQ)
    assert s * g6 + t * g == Poly(1, R, domain=QQ)
    assert cert.padding == 12 - cert.ramification_degree


def test_perturbed_pencil_is_not_etale(branch):
    cert = etale_over_branch(branch, pencil=PERTURBED_PENCIL)
    assert not cert.etale
    assert not (cert.per_point["1"] and cert.per_point["-1"])


def test_rational_point_on_X():
    main, curve = point_residuals("z'w", RATIONAL_POINT)
    assert main == 0 and curve == 0
    assert verify_point_on_X("z'w", RATIONAL_POINT)
    assert not verify_point_on_X("z'w", (0, 0, 1, (48, 35, 1)))
    # both sides of the chart equation
    assert 48**2 - 17 * 36**2 == -19728
    assert EXAMPLE.p_inf().subs(X, 1) == -19728


def test_point_survives_chart_change():
    moved = chart_transition("z'w", "z'x", RATIONAL_POINT)
    assert verify_point_on_X("z'x", moved)


def test_unknown_chart():
    with pytest.raises(UsageError):
        verify_point_on_X("q'w", RATIONAL_POINT)
    assert len(CHART_IDS) == 6


def test_chart_transitions():
    assert check_chart_transitions(samples=2, seed=3)


def test_binary_form_helpers():
    form = BinaryForm.from_affine(Poly(R**2 - 1, R), 4)
    assert form.degree == 4
    assert form.vanishes_at_infinity()
    assert form.dehomogenize() == Poly(R**2 - 1, R, domain=ZZ)
    assert form.max_coefficient() == 1


@pytest.fixture(scope="module")
def ramification():
    return ramification_data()


def test_resultant_route_discriminant(ramification):
    total = ramification.total
    assert total.degree() == 16
    assert total.LC() == 110592
    # over r = 0 the three pairs (x', +-i) share x', giving exactly r^6
    (low,), coeff = total.terms()[-1]
    assert low == 6
    assert abs(coeff) == 1832 ** 2
    assert ramification.collisions.as_expr() == R**3


def test_resultant_route_matches_groebner(ramification):
    finite = ramification.finite
    assert finite.degree() == 10
    assert finite.LC() == 110592
    assert abs(finite.eval(0)) == 1832 ** 2
    assert ramification.radicals_agree
    quotient, remainder = Poly(finite.as_expr(), R, domain=QQ).div(
        Poly(ramification.groebner.as_expr(), R, domain=QQ))
    assert remainder.is_zero and quotient.is_ground
    content = quotient.LC()
    assert content.is_integer and 64 % abs(int(content)) == 0


def test_resultant_route_census(ramification):
    census = ramification.census()
    biggest = int(census["resultant"]["max_coefficient"])
    assert 10**6 < biggest < 10**9
    assert int(census["groebner"]["max_coefficient"]) <= biggest


def test_perturbed_pencil_factors_through_x(branch):
    data = ramification_data(PERTURBED_PENCIL)
    assert data.collisions is None
    assert data.radicals_agree
    # the 2-torsion points (0, 0) and (2, 0) land on the rational branch points
    assert data.finite.eval(1) == 0 and data.finite.eval(-1) == 0
