from fractions import Fraction

import pytest

from transverify.charring import FAMILIES, TILDE_FAMILIES, RingSpec, pi_grade
from transverify.modforms import delta
from transverify.scalars import PI, SQRT2, Scalar
from transverify.theta import YSeries, sin_series
from transverify.transgress import (
    cs_form,
    cs_prefactor,
    cs_tilde,
    cs_tm,
    cs_xi,
    tm_trace,
    top_component,
    xi_trace,
)

D3 = RingSpec.for_dimension(3, 8)


def test_prefactors():
    inv = (Scalar.rational(8) * PI * PI).inverse()
    assert cs_prefactor("Phi_L") == SQRT2 * inv
    assert cs_prefactor("Phi_W") == inv
    assert cs_prefactor("tPhi_W'") == inv


def test_tm_trace_reads_odd_coefficients():
    spec = RingSpec.for_dimension(7, 1)
    h = sin_series(8).scale(PI)
    el = tm_trace(h, spec)
    unit = (0,) * spec.n_roots
    assert el.coeff((unit, 0, "a0")).coeff(0) == Scalar.rational(1)
    assert el.coeff((unit, 0, "a1")).coeff(0) == Scalar.rational(Fraction(-1, 6))


def test_xi_trace_uses_powers_of_u():
    spec = RingSpec.for_dimension(7, 1)
    el = xi_trace(sin_series(8).scale(PI), spec)
    unit = (0,) * spec.n_roots
    assert el.coeff((unit, 1, "b")).coeff(0) == Scalar.rational(1)
    assert el.coeff((unit, 3, "b")).coeff(0) == Scalar.rational(Fraction(-1, 6))


def test_xi_trace_requires_twist_generator():
    spec = RingSpec(1, 3, 1, has_xi=False)
    with pytest.raises(ValueError):
        xi_trace(YSeries.constant(Scalar.rational(1)), spec)


# reference dimension-3 coefficients: 1/(2 pi^2), 1/(8 pi^2), 1/(8 pi^2); U b carries a factor 8
@pytest.mark.parametrize("family,index,coefficient", [
    ("Phi_L", 1, Fraction(1, 2)), ("Phi_W", 2, Fraction(1, 8)), ("Phi_W'", 3, Fraction(1, 8)),
])
def test_dimension_three_xi_transgression(family, index, coefficient):
    el = cs_xi(family, D3).element.restrict_degree(3)
    unit_b = ((0,), 1, "b")
    assert set(el.terms) == {unit_b}
    expected = delta(index, 8).series.scale(Scalar.rational(8 * coefficient) * (PI * PI).inverse())
    assert el.coeff(unit_b).agrees(expected)


@pytest.mark.parametrize("kind", ["tm", "xi"])
def test_cs_forms_have_pi_degree_minus_two(kind):
    spec = RingSpec.for_dimension(7, 2)
    for fam in FAMILIES:
        assert pi_grade(cs_form(kind, fam, spec).element) == -2


def test_tilde_cs_pi_degree():
    spec = RingSpec.for_dimension(5, 2)
    for fam in TILDE_FAMILIES:
        assert pi_grade(cs_tilde(fam, spec).element) == -2


@pytest.mark.parametrize("kind,D,fams", [
    ("tm", 7, FAMILIES), ("xi", 7, FAMILIES), ("tilde", 5, TILDE_FAMILIES)])
def test_t_laws(kind, D, fams):
    spec = RingSpec.for_dimension(D, 4)
    L, W, Wp = (cs_form(kind, f, spec).element for f in fams)
    assert L.tau_shift().agrees(L)
    assert W.tau_shift().agrees(Wp)
    assert Wp.tau_shift().agrees(W)


def test_top_component_has_top_degree():
    spec = RingSpec.for_dimension(7, 1)
    top = top_component(cs_tm("Phi_W", spec))
    assert top.degrees() == {7}


def test_family_validation():
    spec = RingSpec.for_dimension(3, 1)
    with pytest.raises(ValueError):
        cs_tm("tPhi_W", spec)
    with pytest.raises(ValueError):
        cs_tilde("Phi_W", RingSpec.for_dimension(5, 1))
    with pytest.raises(ValueError):
        cs_form("other", "Phi_W", spec)
