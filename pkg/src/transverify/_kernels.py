"""Complex product kernels for the four theta functions.

Both backends return the value and the v-derivative (by the product rule, not
finite differences) for arrays of samples.  ``TRANSVERIFY_NUMBA=0`` forces
the numpy path; otherwise numba is used when it imports.
"""

from __future__ import annotations

import math
import os

import numpy as np

# family code -> (sign in front of cos, half-integer q powers)
_SIGN = np.array([-1.0, 1.0, -1.0, 1.0])
_HALF = np.array([0.0, 0.0, 0.5, 0.5])

TWO_PI_I = 2j * math.pi


def _theta_numpy(code: int, v: np.ndarray, tau: np.ndarray, J: int):
    sgn = _SIGN[code]
    h = _HALF[code]
    c2 = np.cos(2 * np.pi * v)
    s2 = np.sin(2 * np.pi * v)
    P = np.ones_like(v)
    dP = np.zeros_like(v)
    for j in range(1, J + 1):
        qj = np.exp(TWO_PI_I * tau * j)
        qe = np.exp(TWO_PI_I * tau * (j - h))
        euler = 1.0 - qj
        f = euler * (1.0 + sgn * 2.0 * c2 * qe + qe * qe)
        df = euler * (-sgn * 4.0 * np.pi * s2 * qe)
        dP = dP * f + P * df
        P = P * f
    return _prefactor(code, v, tau, P, dP)


def _prefactor(code, v, tau, P, dP):
    if code >= 2:
        return P, dP
    q8 = 2.0 * np.exp(TWO_PI_I * tau / 8.0)
    if code == 0:
        A = q8 * np.sin(np.pi * v)
        dA = q8 * np.pi * np.cos(np.pi * v)
    else:
        A = q8 * np.cos(np.pi * v)
        dA = -q8 * np.pi * np.sin(np.pi * v)
    return A * P, dA * P + A * dP


def _theta_loop(code, v, tau, J, out, dout):
    sgn = -1.0 if code == 0 or code == 2 else 1.0
    h = 0.5 if code >= 2 else 0.0
    for i in range(v.shape[0]):
        vi = v[i]
        ti = tau[i]
        c2 = np.cos(2 * np.pi * vi)
        s2 = np.sin(2 * np.pi * vi)
        P = 1.0 + 0.0j
        dP = 0.0 + 0.0j
        for j in range(1, J + 1):
            qj = np.exp(2j * np.pi * ti * j)
            qe = np.exp(2j * np.pi * ti * (j - h))
            euler = 1.0 - qj
            f = euler * (1.0 + sgn * 2.0 * c2 * qe + qe * qe)
            df = euler * (-sgn * 4.0 * np.pi * s2 * qe)
            dP = dP * f + P * df
            P = P * f
        if code >= 2:
            out[i] = P
            dout[i] = dP
        else:
            q8 = 2.0 * np.exp(2j * np.pi * ti / 8.0)
            if code == 0:
                A = q8 * np.sin(np.pi * vi)
                dA = q8 * np.pi * np.cos(np.pi * vi)
            else:
                A = q8 * np.cos(np.pi * vi)
                dA = -q8 * np.pi * np.sin(np.pi * vi)
            out[i] = A * P
            dout[i] = dA * P + A * dP


def _load_numba():
    if os.environ.get("TRANSVERIFY_NUMBA", "1") == "0":
        return None
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a declared dependency
        return None
    return numba.njit(cache=True)(_theta_loop)


_theta_jit = _load_numba()
BACKEND = "numba" if _theta_jit is not None else "numpy"


def _theta_numba(code: int, v: np.ndarray, tau: np.ndarray, J: int):
    out = np.empty(v.shape[0], dtype=np.complex128)
    dout = np.empty(v.shape[0], dtype=np.complex128)
    _theta_jit(code, v, tau, J, out, dout)
    return out, dout


def theta_kernel(code: int, v, tau, J: int, backend: str | None = None):
    """(values, derivatives) of theta family ``code`` at paired samples."""
    v = np.ascontiguousarray(np.atleast_1d(np.asarray(v, dtype=np.complex128)))
    tau = np.ascontiguousarray(np.atleast_1d(np.asarray(tau, dtype=np.complex128)))
    v, tau = np.broadcast_arrays(v, tau)
    v = np.ascontiguousarray(v)
    tau = np.ascontiguousarray(tau)
    backend = backend or BACKEND
    if backend == "numba":
        if _theta_jit is None:
            raise RuntimeError("numba backend requested but unavailable")
        return _theta_numba(code, v, tau, J)
    return _theta_numpy(code, v, tau, J)
