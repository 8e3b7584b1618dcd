from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import given
from hypothesis import strategies as st

from transverify.cancel import (
    CASES,
    CancellationCase,
    InsufficientOrderError,
    decompose_form,
    derive,
    normalize_case_id,
)
from transverify.charring import FormElement, RingSpec
from transverify.modforms import DecompositionError, basis_build, delta
from transverify.qseries import QExpansion
from transverify.scalars import Scalar
from transverify.transgress import cs_form, top_component


@lru_cache(maxsize=None)
def report(case):
    return derive(case, 4)


@pytest.mark.parametrize("case", sorted(CASES))
def test_cancellation_case_closes(case):
    r = report(case)
    assert r.failure is None
    assert r.w_residual_zero
    assert r.residual_zero
    assert r.constants_equal


@pytest.mark.parametrize("case", sorted(CASES))
def test_coefficients_are_q_free_and_pi_homogeneous(case):
    r = report(case)
    for z in (r.z0, r.z1):
        assert not z.is_zero()
        for c in z.terms.values():
            assert set(c.terms) == {0}
            assert c.pi_degrees() == {-2}


@pytest.mark.parametrize("case", sorted(CASES))
def test_closed_form_for_z0_matches(case):
    checks = report(case).display_checks
    z0 = [c for c in checks if c["quantity"] == "z0"]
    assert z0 and all(c["matches"] for c in z0)
    lhs = [c for c in checks if c["quantity"] == "lhs"]
    assert lhs and all(c["matches"] for c in lhs)


def test_tm_case_matches_with_doubled_sine_argument():
    by_label = {c["display"]: c for c in report("TM-11").display_checks}
    assert by_label["z1 with sin(R/2pi) and +61"]["matches"]
    assert not by_label["z1 reference, sin(R/4pi) and +61"]["matches"]


@pytest.mark.parametrize("case,quantity,offset", [
    ("XI-11", "z1", "-144"), ("XI-11", "rhs", "-16"),
    ("TILDE-9", "z1", "2"), ("TILDE-9", "rhs", "2"),
])
def test_constant_offsets_against_reference_forms(case, quantity, offset):
    found = [c for c in report(case).display_checks if c["quantity"] == quantity]
    assert [c.get("constant_offset") for c in found] == [offset]


def test_json_report_fields():
    data = report("XI-11").to_json()
    assert data["residual_zero"] is True
    assert data["constant_terms_equal"] is True
    assert "matched_display" in data and data["failure"] is None


def test_case_id_normalization():
    assert normalize_case_id("cancel-tm-11") == "TM-11"
    with pytest.raises(ValueError):
        normalize_case_id("TM-7")


def test_insufficient_order():
    with pytest.raises(InsufficientOrderError):
        CancellationCase.named("TM-11", 1)


def test_decomposition_failure_is_reported():
    spec = RingSpec.for_dimension(7, 2)
    w = top_component(cs_form("tm", "Phi_W", spec))
    m = next(iter(w.terms))
    broken = w + type(w)(spec, {m: QExpansion({8: 1}, spec.q_trunc)})
    with pytest.raises(DecompositionError):
        decompose_form(broken, 4)


@lru_cache(maxsize=None)
def _weight4_form():
    spec = RingSpec.for_dimension(7, 2)
    return top_component(cs_form("tm", "Phi_W", spec))


@given(st.fractions(min_value=-50, max_value=50, max_denominator=30).filter(lambda x: x != 0))
def test_decomposition_scales_linearly(c):
    w = _weight4_form()
    z = decompose_form(w, 4)
    zc = decompose_form(w.scale(Scalar.rational(c)), 4)
    for a, b in zip(z, zc):
        assert b.agrees(a.scale(Scalar.rational(c)))


def test_weight4_rebuild():
    w = _weight4_form()
    z0, z1 = decompose_form(w, 4)
    for m, c in w.terms.items():
        rebuilt = basis_build({(2, 0): z0.coeff(m).coeff(0), (0, 1): z1.coeff(m).coeff(0)},
                              4, 2, 2)
        assert c.agrees(rebuilt)


def test_delta_multiple_decomposes_to_itself():
    d = delta(2, 3).series.scale(Scalar.rational(8))
    spec = RingSpec.for_dimension(3, 3)
    el = FormElement(spec, {((0,), 1, "b"): d.scale(Scalar.rational(Fraction(1, 3)))})
    (z,) = decompose_form(el, 2)
    assert z.coeff(((0,), 1, "b")).coeff(0) == Scalar.rational(Fraction(1, 3))
