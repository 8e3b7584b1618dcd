import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given

from strategies import qexpansions, rational_scalars, units
from transverify.qseries import (
    DENOM,
    NotInvertibleError,
    QExpansion,
    q_eval,
    q_invert,
    qtrunc,
    tau_shift,
)
from transverify.scalars import ONE, Scalar, ZETA8

T = 24


def test_qtrunc_counts_eighths():
    assert qtrunc(6) == 48


def test_truncation_drops_high_terms():
    s = QExpansion({0: 1, 8: 2, 30: 5}, 16)
    assert s.terms == {0: Scalar.rational(1), 8: Scalar.rational(2)}


def test_product_truncation_is_pessimistic():
    a = QExpansion({4: 1}, 20)
    b = QExpansion({0: 1}, 12)
    assert (a * b).trunc == 16


def test_geometric_series_inverse():
    one_minus_q = QExpansion({0: 1, 8: -1}, 40)
    inv = q_invert(one_minus_q)
    assert inv.agrees(QExpansion({8 * n: 1 for n in range(5)}, 40))


def test_zero_is_not_invertible():
    with pytest.raises(NotInvertibleError):
        q_invert(QExpansion.zero(16))


def test_tau_shift_multiplies_by_zeta_powers():
    s = QExpansion({1: 1, 4: 1, 8: 1}, 16)
    shifted = tau_shift(s)
    assert shifted.coeff(1) == ZETA8
    assert shifted.coeff(4) == -ONE
    assert shifted.coeff(8) == ONE


def test_q_eval_matches_direct_sum():
    s = QExpansion({0: 1, 4: -3, 8: 2}, 16)
    tau = 0.2 + 1.1j
    q = cmath.exp(2j * math.pi * tau)
    val, tail = q_eval(s, tau)
    assert abs(val - (1 - 3 * q ** 0.5 + 2 * q)) < 1e-12
    assert tail < 1e-5


def test_json_round_trip():
    s = QExpansion({0: Scalar.rational(Fraction(1, 4)), 8: 6}, 32)
    assert QExpansion.from_json(s.to_json()) == s
    assert s.to_json()["denom"] == DENOM


@given(qexpansions(T), qexpansions(T), qexpansions(T))
def test_ring_axioms(a, b, c):
    assert (a + b).agrees(b + a)
    assert (a * b).agrees(b * a)
    assert ((a * b) * c).agrees(a * (b * c))
    assert (a * (b + c)).agrees(a * b + a * c)
    assert (a - a).is_zero()


@given(qexpansions(T))
def test_tau_shift_has_order_eight(a):
    s = a
    for _ in range(8):
        s = s.tau_shift()
    assert s == a


@given(qexpansions(T), qexpansions(T))
def test_tau_shift_is_a_ring_homomorphism(a, b):
    assert (a * b).tau_shift().agrees(a.tau_shift() * b.tau_shift())
    assert (a + b).tau_shift().agrees(a.tau_shift() + b.tau_shift())


@given(units(T))
def test_inverse_round_trip(u):
    prod = u * q_invert(u)
    assert prod.agrees(QExpansion.constant(ONE, prod.trunc))


@given(qexpansions(T, coeffs=rational_scalars()), units(T))
def test_division_undoes_multiplication(a, u):
    assert ((a * u) / u).agrees(a)
