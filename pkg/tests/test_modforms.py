from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import modform_divisor_sums
from transverify.modforms import (
    DecompositionError,
    InsufficientOrderError,
    ModularForm,
    ModularGroup,
    basis_build,
    basis_decompose,
    basis_monomials,
    delta,
    epsilon,
    t_transform,
)
from transverify.qseries import QExpansion
from transverify.scalars import Scalar

FORMS = {"delta": delta, "epsilon": epsilon}


def fractions_of(f: ModularForm) -> dict:
    return {n: c.as_fraction() for n, c in f.series.terms.items()}


# reference leading terms, exponents in eighths of q
@pytest.mark.parametrize("name,i,expected", [
    ("delta", 1, {0: Fraction(1, 4), 8: 6}),
    ("epsilon", 1, {0: Fraction(1, 16), 8: -1}),
    ("delta", 2, {0: Fraction(-1, 8), 4: -3}),
    ("epsilon", 2, {0: 0, 4: 1}),
    ("delta", 3, {0: Fraction(-1, 8), 4: 3}),
    ("epsilon", 3, {0: 0, 4: -1}),
])
def test_leading_fourier_coefficients(name, i, expected):
    f = FORMS[name](i, 4)
    for n, c in expected.items():
        assert f.series.coeff(n) == Scalar.rational(c)


@pytest.mark.parametrize("name", ["delta", "epsilon"])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_expansions_match_divisor_sums(name, i):
    # independent oracle: classical divisor-sum expansions
    assert fractions_of(FORMS[name](i, 10)) == modform_divisor_sums(f"{name}{i}", 10)


@pytest.mark.parametrize("name", ["delta", "epsilon"])
@pytest.mark.parametrize("i", [1, 2, 3])
def test_higher_coefficients_are_integers(name, i):
    f = FORMS[name](i, 8)
    for n, c in f.series.terms.items():
        if n > 8:
            assert c.as_fraction().denominator == 1


def test_groups_and_weights():
    assert delta(1, 2).group is ModularGroup.GAMMA0_2
    assert epsilon(2, 2).group is ModularGroup.GAMMA0_2_UPPER
    assert delta(3, 2).group is ModularGroup.GAMMA_THETA
    assert delta(1, 2).weight == 2 and epsilon(1, 2).weight == 4


@pytest.mark.parametrize("name", ["delta", "epsilon"])
def test_t_transform_swaps_indices_two_and_three(name):
    fn = FORMS[name]
    assert t_transform(fn(2, 6)).series.agrees(fn(3, 6).series)
    assert t_transform(fn(3, 6)).series.agrees(fn(2, 6).series)
    assert t_transform(fn(1, 6)).series.agrees(fn(1, 6).series)
    assert t_transform(fn(2, 6)).group is ModularGroup.GAMMA_THETA


def test_modular_form_validation():
    with pytest.raises(ValueError):
        ModularForm(QExpansion({1: 1}, 8), 2, ModularGroup.GAMMA0_2)
    with pytest.raises(ValueError):
        ModularForm(QExpansion({0: 1}, 8), 3, ModularGroup.GAMMA0_2)


def test_basis_monomials():
    assert basis_monomials(6) == [(3, 0), (1, 1)]
    assert basis_monomials(8) == [(4, 0), (2, 1), (0, 2)]


def test_decomposition_needs_enough_terms():
    with pytest.raises(InsufficientOrderError):
        basis_decompose(delta(2, 1).series.truncate(4) ** 3, 6)


def test_non_modular_series_is_rejected():
    bogus = (delta(2, 3).series.scale(Scalar.rational(8)) ** 3) + QExpansion({16: 1}, 24)
    with pytest.raises(DecompositionError) as info:
        basis_decompose(bogus, 6)
    assert info.value.exponent == 16


def test_epsilon_is_not_a_cube_of_delta():
    out = dict(basis_decompose(epsilon(2, 3).series * delta(2, 3).series.scale(Scalar.rational(8)), 6))
    assert out[(3, 0)] == Scalar.rational(0)
    assert out[(1, 1)] == Scalar.rational(1)


coefficient = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@given(st.sampled_from([2, 4, 6, 8]), st.sampled_from([1, 2, 3]), st.data())
def test_decompose_build_round_trip(weight, index, data):
    monos = basis_monomials(weight)
    coeffs = {m: Scalar.rational(data.draw(coefficient)) for m in monos}
    built = basis_build(coeffs, weight, index, 4)
    got = dict(basis_decompose(built, weight, index))
    assert got == coeffs


@given(coefficient, coefficient, coefficient)
def test_decomposition_is_linear(a, b, c):
    f = basis_build({(3, 0): Scalar.rational(a), (1, 1): Scalar.rational(b)}, 6, 2, 3)
    got = dict(basis_decompose(f.scale(Scalar.rational(c)), 6, 2))
    assert got[(3, 0)] == Scalar.rational(a * c)
    assert got[(1, 1)] == Scalar.rational(b * c)
