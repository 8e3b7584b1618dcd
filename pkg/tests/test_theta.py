from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import theta_lattice
from strategies import qexpansions, rational_scalars
from transverify.modforms import delta
from transverify.qseries import QExpansion
from transverify.scalars import ONE, PI, Scalar
from transverify.theta import (
    COMBOS,
    PARITY,
    THETA_FAMILIES,
    YSeries,
    cos_series,
    f_quotient,
    logderiv,
    logderiv_combo,
    sin_series,
    theta_expand,
    theta_null,
    theta_prime_null,
    tilde_u_factor,
    u_factor,
    y_div,
)


def as_fractions(s: YSeries) -> dict:
    return {d: {n: c.as_fraction() for n, c in q.terms.items()} for d, q in s.coeffs.items()}


@pytest.mark.parametrize("family", THETA_FAMILIES)
def test_product_expansion_matches_lattice_sum(family):
    # oracle: bilateral theta sums, which never touch the product formula
    assert as_fractions(theta_expand(family, 10, 6)) == theta_lattice(family, 10, 6)


def test_odd_theta_first_coefficient():
    c1 = theta_expand("theta", 3, 4).coeff(1)
    assert c1.agrees(QExpansion({1: 2, 9: -6, 25: 10}, 33))


def test_theta2_null_leading_terms():
    assert theta_null("theta2", 3).agrees(QExpansion({0: 1, 4: -2, 16: 2}, 24))


@pytest.mark.parametrize("family", THETA_FAMILIES)
def test_parity_tags(family):
    s = theta_expand(family, 9, 3)
    assert s.scan_parity() == PARITY[family] == s.parity


def test_trig_series():
    assert (sin_series(9) ** 2 + cos_series(9) ** 2).truncate(9).agrees(YSeries.constant(ONE).truncate(9))


def test_derivative_of_sine_is_cosine():
    assert sin_series(10).derivative().agrees(cos_series(9))


def test_y_div_round_trip_on_theta():
    th = theta_expand("theta", 8, 3)
    t1 = theta_expand("theta1", 8, 3)
    q = y_div(th, t1)
    assert (q * t1).truncate(7).agrees(th.truncate(7))


def test_y_div_produces_laurent_poles():
    inv = y_div(YSeries.constant(ONE).truncate(6), sin_series(8))
    assert inv.valuation() == -1
    assert inv.coeff(-1) == QExpansion.constant(ONE)
    assert inv.coeff(1).coeff(0).as_fraction() == Fraction(1, 6)


@pytest.mark.parametrize("family", ["Phi_L", "Phi_W", "Phi_W'"])
def test_quotients_are_normalized_even_series(family):
    f = f_quotient(family, 6, 3)
    u = u_factor(family, 6, 3)
    for s in (f, u):
        assert s.scan_parity() == "even"
        assert s.coeff(0).agrees(QExpansion.constant(ONE))
    t = tilde_u_factor(family, 6, 3)
    assert t.scan_parity() == "odd" and t.valuation() >= 1


@pytest.mark.parametrize("name", sorted(COMBOS))
def test_combos_are_odd_pole_free_and_pi_homogeneous(name):
    h = logderiv_combo(name, 8, 3)
    assert h.valuation() >= 1
    assert h.scan_parity() == "odd"
    assert h.pi_degrees() == {1}


def test_unknown_combo_rejected():
    with pytest.raises(ValueError):
        logderiv_combo("tm-X", 4, 2)


def test_logderiv_of_odd_theta_has_simple_pole():
    h = logderiv("theta", 6, 2)
    assert h.valuation() == -1
    assert h.coeff(-1).agrees(QExpansion.constant(PI))


def test_xi_l_combo_linear_term_is_delta1_multiple():
    h = logderiv_combo("xi-L", 3, 8)
    assert h.coeff(1).agrees(delta(1, 8).series.scale(Scalar.rational(8) * PI))


def test_theta_prime_null_is_pi_times_linear_coefficient():
    assert theta_prime_null(3).agrees(theta_expand("theta", 2, 3).coeff(1).scale(PI))


def test_json_shape():
    data = theta_expand("theta2", 4, 2).to_json()
    assert [row["y_degree"] for row in data] == [0, 2]


@st.composite
def parity_series(draw):
    parity = draw(st.sampled_from(["even", "odd"]))
    start = 0 if parity == "even" else 1
    degs = draw(st.lists(st.sampled_from(range(start, 12, 2)), min_size=1, max_size=4, unique=True))
    coeffs = {d: draw(qexpansions(16, 3, rational_scalars())) for d in degs}
    return parity, YSeries(coeffs, 12)


@given(parity_series())
def test_parity_scan_detects_parity(case):
    parity, s = case
    if s.is_zero():
        return
    assert s.scan_parity() == parity
    square = s * s
    if not square.is_zero():
        assert square.scan_parity() == "even"
    ds = s.derivative()
    if not ds.is_zero():
        assert ds.scan_parity() == {"even": "odd", "odd": "even"}[parity]


@given(parity_series(), parity_series())
def test_mixed_parity_is_reported(a, b):
    (pa, sa), (pb, sb) = a, b
    if pa == pb or sa.is_zero() or sb.is_zero():
        return
    assert (sa + sb).scan_parity() == "none"


@given(parity_series())
def test_y_series_tau_shift_has_order_eight(case):
    _, s = case
    t = s
    for _ in range(8):
        t = t.tau_shift()
    assert t.agrees(s)
