import numpy as np
import pytest

from oracles import theta_mp, theta_mp_deriv
from transverify import _kernels
from transverify.numeval import (
    DEFAULT_TAUS,
    DEFAULT_VS,
    EvalConfig,
    check_oracle_agreement,
    check_quotient_s_laws,
    check_s_laws,
    modform_eval,
    numeric_fourier_coefficient,
    residual,
    theta_deriv_eval,
    theta_eval,
)
from transverify.theta import THETA_FAMILIES


@pytest.mark.parametrize("family", THETA_FAMILIES)
def test_product_kernel_matches_mpmath(family):
    # independent oracle: mpmath Jacobi theta with nome e^(pi i tau)
    for tau in DEFAULT_TAUS:
        for v in DEFAULT_VS:
            assert residual(theta_eval(family, v, tau), theta_mp(family, v, tau)) < 1e-12
            assert residual(theta_deriv_eval(family, v, tau), theta_mp_deriv(family, v, tau)) < 1e-11


@pytest.mark.parametrize("code", range(4))
def test_backends_agree(code):
    if _kernels._theta_jit is None:
        pytest.skip("numba unavailable")
    v = np.array(DEFAULT_VS * 3)
    tau = np.repeat(np.array(DEFAULT_TAUS), 3)
    a, da = _kernels.theta_kernel(code, v, tau, 40, backend="numpy")
    b, db = _kernels.theta_kernel(code, v, tau, 40, backend="numba")
    assert np.allclose(a, b, rtol=1e-13, atol=0)
    assert np.allclose(da, db, rtol=1e-13, atol=0)


def test_low_imaginary_part_rejected():
    with pytest.raises(ValueError):
        EvalConfig(tau_samples=(0.1 + 0.2j,))


def test_lower_half_plane_rejected():
    with pytest.raises(ValueError):
        theta_eval("theta", 0.1, -1j)


def test_residual_is_relative_above_one():
    assert residual(100.0, 101.0) == pytest.approx(0.01)
    assert residual(0.0, 1e-12) == pytest.approx(1e-12)


def test_s_laws_pass_at_default_samples():
    rep = check_s_laws()
    assert rep.passed, [c.id for c in rep.failures()]
    assert len(rep.checks) == 4 * 2 + 1 + 2
    for c in rep.checks:
        assert c.detail["max_residual"] < 1e-9


def test_quotient_s_laws_pass():
    rep = check_quotient_s_laws()
    assert rep.passed, [c.id for c in rep.failures()]


def test_s_law_check_fails_at_impossible_tolerance():
    rep = check_s_laws(EvalConfig(tol=1e-30))
    assert not rep.passed


def test_exact_and_numerical_kernels_agree():
    rep = check_oracle_agreement()
    assert rep.passed
    for c in rep.checks:
        assert c.detail["max_residual"] < 1e-8
        assert c.detail["truncation_bound"] < 1e-8


def test_modform_values_match_q_expansions():
    from transverify.modforms import delta
    from transverify.qseries import q_eval
    tau = 0.3 + 1.2j
    assert residual(modform_eval("delta1", tau), q_eval(delta(1, 12).series, tau).value) < 1e-12


def test_numerical_fourier_coefficient():
    assert abs(numeric_fourier_coefficient("delta1", 1) - 6) < 1e-8
    assert abs(numeric_fourier_coefficient("epsilon1", 1) + 1) < 1e-8
