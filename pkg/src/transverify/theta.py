"""Two-variable expansions of the four Jacobi theta functions.

Everything is written in the normalized variable ``y = pi * v``.  With that
substitution ``sin(pi v)`` and ``cos(2 pi v)`` expand with rational
coefficients, and a derivative in ``v`` is ``pi`` times a derivative in ``y``;
the ``pi`` is carried in the scalar grade so the coefficients stay exact.

Families are named ``"theta"``, ``"theta1"``, ``"theta2"``, ``"theta3"``::

    theta (v) = 2 q^(1/8) sin(pi v) prod (1-q^j)(1 - 2cos(2 pi v) q^j + q^(2j))
    theta1(v) = 2 q^(1/8) cos(pi v) prod (1-q^j)(1 + 2cos(2 pi v) q^j + q^(2j))
    theta2(v) =                     prod (1-q^j)(1 - 2cos(2 pi v) q^(j-1/2) + q^(2j-1))
    theta3(v) =                     prod (1-q^j)(1 + 2cos(2 pi v) q^(j-1/2) + q^(2j-1))
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .qseries import DENOM, QExpansion, q_eval, q_invert, qtrunc, tau_shift
from .scalars import ONE, PI, ZERO, Scalar, as_scalar

__all__ = [
    "THETA_FAMILIES",
    "PARITY",
    "YSeries",
    "PoleError",
    "theta_expand",
    "theta_prime",
    "theta_null",
    "theta_prime_null",
    "y_div",
    "f_quotient",
    "u_factor",
    "tilde_u_factor",
    "logderiv",
    "logderiv_combo",
    "COMBOS",
    "sin_series",
    "cos_series",
    "exp_series",
    "y_monomial",
]

THETA_FAMILIES = ("theta", "theta1", "theta2", "theta3")
PARITY = {"theta": "odd", "theta1": "even", "theta2": "even", "theta3": "even"}

_INF = math.inf


class PoleError(ArithmeticError):
    """A pole that should cancel did not."""


def _t(x):
    return _INF if x is None else x


def _u(x):
    return None if x == _INF else int(x)


def _flip(parity: str) -> str:
    return {"even": "odd", "odd": "even"}.get(parity, "none")


def _mul_parity(a: str, b: str) -> str:
    if "none" in (a, b):
        return "none"
    return "even" if a == b else "odd"


class YSeries:
    """Truncated Laurent series in ``y`` with :class:`QExpansion` coefficients.

    ``y_trunc`` is the exclusive y-order bound (``None`` for exact).  All
    coefficients share a common q-truncation ``q_trunc``; degrees that are not
    stored are zero up to that truncation.
    """

    __slots__ = ("coeffs", "y_trunc", "q_trunc", "parity")

    def __init__(self, coeffs: Mapping[int, QExpansion], y_trunc: int | None = None,
                 parity: str | None = None, q_trunc: int | None = None):
        qt = _t(q_trunc)
        for c in coeffs.values():
            qt = min(qt, _t(c.trunc))
        clean = {}
        for d, c in coeffs.items():
            if y_trunc is not None and d >= y_trunc:
                continue
            c = c.truncate(_u(qt))
            if not c.is_zero():
                clean[int(d)] = c
        self.coeffs = dict(sorted(clean.items()))
        self.y_trunc = y_trunc
        self.q_trunc = _u(qt)
        self.parity = parity if parity is not None else self.scan_parity()

    # -- construction helpers ---------------------------------------------
    @classmethod
    def from_scalars(cls, coeffs: Mapping[int, object], y_trunc: int | None = None,
                     parity: str | None = None) -> "YSeries":
        return cls({d: QExpansion.constant(as_scalar(c)) for d, c in coeffs.items()},
                   y_trunc, parity)

    @classmethod
    def constant(cls, c) -> "YSeries":
        if isinstance(c, QExpansion):
            return cls({0: c}, None, "even", c.trunc)
        return cls.from_scalars({0: c}, None, "even")

    # -- inspection ---------------------------------------------------------
    def coeff(self, d: int) -> QExpansion:
        if self.y_trunc is not None and d >= self.y_trunc:
            raise ValueError(f"y^{d} lies beyond the y-truncation {self.y_trunc}")
        return self.coeffs.get(d, QExpansion.zero(self.q_trunc))

    def valuation(self):
        if self.coeffs:
            return next(iter(self.coeffs))
        return _t(self.y_trunc)

    def q_valuation(self):
        v = _t(self.q_trunc)
        for c in self.coeffs.values():
            v = min(v, c.valuation())
        return v

    def scan_parity(self) -> str:
        odd = any(d % 2 for d in self.coeffs)
        even = any(d % 2 == 0 for d in self.coeffs)
        if odd and even:
            return "none"
        return "odd" if odd else "even"

    def is_zero(self) -> bool:
        return not self.coeffs

    def pi_degrees(self) -> set:
        out = set()
        for c in self.coeffs.values():
            out |= c.pi_degrees()
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, YSeries):
            return NotImplemented
        return (self.coeffs == other.coeffs and self.y_trunc == other.y_trunc
                and self.q_trunc == other.q_trunc)

    def agrees(self, other: "YSeries") -> bool:
        return (self - other).is_zero()

    # -- arithmetic ---------------------------------------------------------
    def truncate(self, y_trunc: int | None = None, q_trunc: int | None = None) -> "YSeries":
        yt = _u(min(_t(self.y_trunc), _t(y_trunc)))
        qt = _u(min(_t(self.q_trunc), _t(q_trunc)))
        return YSeries(self.coeffs, yt, self.parity, qt)

    def __add__(self, other) -> "YSeries":
        if not isinstance(other, YSeries):
            other = YSeries.constant(other)
        yt = min(_t(self.y_trunc), _t(other.y_trunc))
        out = dict(self.coeffs)
        for d, c in other.coeffs.items():
            out[d] = out[d] + c if d in out else c
        parity = self.parity if self.parity == other.parity else None
        return YSeries(out, _u(yt), parity,
                       _u(min(_t(self.q_trunc), _t(other.q_trunc))))

    __radd__ = __add__

    def __neg__(self) -> "YSeries":
        return YSeries({d: -c for d, c in self.coeffs.items()}, self.y_trunc,
                       self.parity, self.q_trunc)

    def __sub__(self, other) -> "YSeries":
        if not isinstance(other, YSeries):
            other = YSeries.constant(other)
        return self + (-other)

    def scale(self, s) -> "YSeries":
        """Multiply every coefficient by a Scalar or QExpansion."""
        if isinstance(s, QExpansion):
            return self * YSeries.constant(s)
        s = as_scalar(s)
        return YSeries({d: c.scale(s) for d, c in self.coeffs.items()}, self.y_trunc,
                       self.parity, self.q_trunc)

    def shift_y(self, k: int) -> "YSeries":
        """Multiply by y**k."""
        yt = _u(_t(self.y_trunc) + k)
        parity = self.parity if k % 2 == 0 else _flip(self.parity)
        return YSeries({d + k: c for d, c in self.coeffs.items()}, yt, parity, self.q_trunc)

    def __mul__(self, other) -> "YSeries":
        if not isinstance(other, YSeries):
            return self.scale(other)
        yt = min(_t(self.y_trunc) + other.valuation(), _t(other.y_trunc) + self.valuation())
        qt = min(_t(self.q_trunc) + other.q_valuation(), _t(other.q_trunc) + self.q_valuation())
        acc: dict = {}
        b_items = list(other.coeffs.items())
        for d1, c1 in self.coeffs.items():
            for d2, c2 in b_items:
                d = d1 + d2
                if d >= yt:
                    break
                p = c1 * c2
                acc[d] = acc[d] + p if d in acc else p
        return YSeries(acc, _u(yt), _mul_parity(self.parity, other.parity), _u(qt))

    def __rmul__(self, other) -> "YSeries":
        return self.scale(other)

    def __pow__(self, k: int) -> "YSeries":
        if k < 0:
            raise ValueError("use y_div for negative powers")
        out = YSeries.constant(ONE)
        for _ in range(k):
            out = out * self
        return out

    def derivative(self) -> "YSeries":
        """Plain d/dy (no pi factor)."""
        out = {d - 1: c.scale(Scalar.rational(d)) for d, c in self.coeffs.items() if d}
        yt = None if self.y_trunc is None else self.y_trunc - 1
        return YSeries(out, yt, _flip(self.parity), self.q_trunc)

    def tau_shift(self) -> "YSeries":
        return YSeries({d: tau_shift(c) for d, c in self.coeffs.items()}, self.y_trunc,
                       self.parity, self.q_trunc)

    def map_coeffs(self, fn) -> "YSeries":
        return YSeries({d: fn(c) for d, c in self.coeffs.items()}, self.y_trunc,
                       None, self.q_trunc)

    def evaluate(self, y: complex, tau: complex) -> tuple[complex, float]:
        """Numerical value at (y, tau), with the summed q-tail estimates."""
        val = 0j
        tail = 0.0
        for d, c in self.coeffs.items():
            ev = q_eval(c, tau)
            val += ev.value * y**d
            tail += ev.tail * abs(y) ** d
        return val, tail

    def to_json(self) -> list:
        return [{"y_degree": d, "q": c.to_json()} for d, c in self.coeffs.items()]

    def __repr__(self) -> str:
        return (f"YSeries(degrees={list(self.coeffs)}, y_trunc={self.y_trunc}, "
                f"q_trunc={self.q_trunc}, parity={self.parity})")


def y_monomial(d: int, c=ONE) -> YSeries:
    return YSeries.from_scalars({d: c}, None)


def _taylor(kind: str, y_order: int, scale=ONE) -> YSeries:
    """Exact coefficients of sin/cos/exp(scale*y) up to y^(y_order-1)."""
    scale = as_scalar(scale)
    out = {}
    power = ONE
    for d in range(y_order):
        if d:
            power = power * scale
        fact = Fraction(1, math.factorial(d))
        if kind == "exp":
            out[d] = power * fact
        elif kind == "sin" and d % 2 == 1:
            out[d] = power * (fact * (-1) ** (d // 2))
        elif kind == "cos" and d % 2 == 0:
            out[d] = power * (fact * (-1) ** (d // 2))
    parity = {"sin": "odd", "cos": "even", "exp": None}[kind]
    return YSeries.from_scalars(out, y_order, parity)


def sin_series(y_order: int, scale=ONE) -> YSeries:
    return _taylor("sin", y_order, scale)


def cos_series(y_order: int, scale=ONE) -> YSeries:
    return _taylor("cos", y_order, scale)


def exp_series(y_order: int, scale=ONE) -> YSeries:
    return _taylor("exp", y_order, scale)


def _qpoly(terms: dict, trunc: int) -> QExpansion:
    return QExpansion({n: Scalar.rational(c) for n, c in terms.items()}, trunc)


@lru_cache(maxsize=256)
def theta_expand(family: str, y_order: int, q_order: int) -> YSeries:
    """Truncated expansion of a theta function.

    The result is exact for every ``y^d`` with ``d < y_order`` and every
    ``q^(n/8)`` below the q-order (one extra eighth for the ``q^(1/8)``
    prefactor of ``theta`` and ``theta1``).
    """
    if family not in THETA_FAMILIES:
        raise ValueError(f"unknown theta family {family!r}")
    if y_order < 1 or q_order < 1:
        raise ValueError("orders must be >= 1")
    T = qtrunc(q_order)
    cos2 = cos_series(y_order, Scalar.rational(2))
    sign = -1 if family in ("theta", "theta2") else 1
    half = family in ("theta2", "theta3")
    prod = YSeries({0: QExpansion.constant(ONE, T)}, y_order, "even", T)
    for j in range(1, q_order + 1):
        n = DENOM * j - (DENOM // 2 if half else 0)
        # (1 - q^j) * (1 + sign*2cos(2y) q^n + q^(2n))
        euler = _qpoly({0: 1, DENOM * j: -1}, T)
        factor = {}
        for d, c in cos2.coeffs.items():
            mid = c.scale(Scalar.rational(2 * sign)).shift(n).truncate(T)
            if d == 0:
                mid = mid + _qpoly({0: 1, 2 * n: 1}, T)
            factor[d] = mid * euler
        prod = prod * YSeries(factor, y_order, "even", T)
    if family in ("theta", "theta1"):
        trig = sin_series if family == "theta" else cos_series
        full = trig(y_order).scale(Scalar.rational(2)) * prod
        # the q^(1/8) prefactor moves the truncation up by one eighth as well
        return YSeries({d: c.shift(1) for d, c in full.coeffs.items()}, y_order,
                       PARITY[family], T + 1)
    return prod


def _with_parity(self: YSeries, parity: str) -> YSeries:
    return YSeries(self.coeffs, self.y_trunc, parity, self.q_trunc)


YSeries._with_parity = _with_parity


def theta_prime(s: YSeries) -> YSeries:
    """Derivative in ``v``: d/dy times pi."""
    return s.derivative().scale(PI)


def theta_null(family: str, q_order: int) -> QExpansion:
    """theta_j(0, tau) as a q-expansion."""
    return theta_expand(family, 1, q_order).coeff(0)


def theta_prime_null(q_order: int) -> QExpansion:
    """theta'(0, tau) = pi * (y^1 coefficient of theta)."""
    return theta_expand("theta", 2, q_order).coeff(1).scale(PI)


def y_div(a: YSeries, b: YSeries) -> YSeries:
    """Laurent quotient a / b.

    The lowest y-coefficient of ``b`` must be an invertible q-series.
    """
    if b.is_zero():
        raise ZeroDivisionError("division by a y-series that is zero up to truncation")
    vb = b.valuation()
    b0 = b.coeffs[vb]
    inv0 = q_invert(b0)
    rel_trunc = _t(b.y_trunc) - vb
    # inverse of b / y^vb as a power series in y
    n_terms = _t(a.y_trunc) - a.valuation() if rel_trunc == _INF else rel_trunc
    if n_terms == _INF:
        raise ValueError("exact division needs a truncated operand")
    n_terms = int(n_terms)
    rel = [(d - vb, c) for d, c in b.coeffs.items() if d != vb]
    inv = {}
    for m in range(n_terms):
        if m == 0:
            inv[0] = inv0
            continue
        s = None
        for k, bk in rel:
            if k > m:
                break
            prev = inv.get(m - k)
            if prev is None:
                continue
            term = bk * prev
            s = term if s is None else s + term
        if s is not None:
            inv[m] = -(s * inv0)
    binv = YSeries({m - vb: c for m, c in inv.items()}, int(rel_trunc - vb) if rel_trunc != _INF
                   else n_terms - vb, b.parity, inv0.trunc)
    return a * binv


# -- quotients used by the characteristic forms -------------------------------

_FAMILY_THETA = {"Phi_L": "theta1", "Phi_W": "theta2", "Phi_W'": "theta3"}


@lru_cache(maxsize=64)
def f_quotient(family: str, y_order: int, q_order: int) -> YSeries:
    """v theta'(0)/theta(v) * theta_j(v)/theta_j(0) in the variable y."""
    tj = _FAMILY_THETA[family]
    Y = y_order + 2
    th = theta_expand("theta", Y, q_order)
    num = theta_expand(tj, Y, q_order)
    c1 = th.coeff(1)              # theta'(0)/pi
    cj = num.coeff(0)             # theta_j(0)
    out = y_div(num.shift_y(1).scale(c1), th.scale(cj))
    return out.truncate(y_order)._with_parity("even")


# (squared theta, the two plain ones) for the u-dependent factor
_U_FACTOR = {
    "Phi_L": ("theta1", "theta3", "theta2"),
    "Phi_W": ("theta2", "theta3", "theta1"),
    "Phi_W'": ("theta3", "theta1", "theta2"),
}


@lru_cache(maxsize=64)
def u_factor(family: str, y_order: int, q_order: int) -> YSeries:
    """theta_a(0)^2/theta_a(u)^2 * theta_b(u)/theta_b(0) * theta_c(u)/theta_c(0)."""
    a, b, c = _U_FACTOR[family]
    Y = y_order + 1
    ta, tb, tc = (theta_expand(f, Y, q_order) for f in (a, b, c))
    ca, cb, cc = ta.coeff(0), tb.coeff(0), tc.coeff(0)
    num = (tb * tc).scale(ca * ca)
    den = (ta * ta).scale(cb * cc)
    return y_div(num, den).truncate(y_order)._with_parity("even")


@lru_cache(maxsize=64)
def tilde_u_factor(family: str, y_order: int, q_order: int) -> YSeries:
    """theta'(0)/theta(u) * (theta_a(u)/theta_a(0) - theta_a(0) theta_b(u) theta_c(u)
    / (theta_a(u) theta_b(0) theta_c(0))).

    The simple pole of the first factor must cancel against the zero of the
    bracket at u = 0; a :class:`PoleError` is raised otherwise.
    """
    a, b, c = _U_FACTOR[family]
    Y = y_order + 3
    th = theta_expand("theta", Y, q_order)
    ta, tb, tc = (theta_expand(f, Y, q_order) for f in (a, b, c))
    ca, cb, cc = ta.coeff(0), tb.coeff(0), tc.coeff(0)
    first = ta.scale(q_invert(ca))
    second = y_div((tb * tc).scale(ca), ta.scale(cb * cc))
    bracket = first - second
    pole = y_div(YSeries.constant(th.coeff(1).scale(PI)).truncate(Y), th)
    out = pole * bracket
    if out.valuation() < 0:
        raise PoleError("u-pole of theta'(0)/theta(u) did not cancel")
    return out.truncate(y_order)._with_parity("odd")


# -- logarithmic derivatives ---------------------------------------------------

@lru_cache(maxsize=64)
def logderiv(family: str, y_order: int, q_order: int) -> YSeries:
    """theta_j'(v)/theta_j(v) (derivative in v) as a Laurent series in y."""
    Y = y_order + 2
    th = theta_expand(family, Y, q_order)
    return y_div(theta_prime(th), th).truncate(y_order)


# name -> (coefficient of pi/y, {family: coefficient})
COMBOS = {
    "tm-L": (1, {"theta": -1, "theta1": 1}),
    "tm-W": (1, {"theta": -1, "theta2": 1}),
    "tm-W'": (1, {"theta": -1, "theta3": 1}),
    "xi-L": (0, {"theta2": 1, "theta3": 1, "theta1": -2}),
    "xi-W": (0, {"theta3": 1, "theta1": 1, "theta2": -2}),
    "xi-W'": (0, {"theta2": 1, "theta1": 1, "theta3": -2}),
}


@lru_cache(maxsize=64)
def logderiv_combo(name: str, y_order: int, q_order: int) -> YSeries:
    """One of the six odd log-derivative combinations.

    ``tm-*`` are ``1/v - theta'/theta + theta_j'/theta_j``; ``xi-*`` are the
    pole-free combinations ``theta_a'/theta_a + theta_b'/theta_b - 2 theta_c'/theta_c``.
    All coefficients carry pi-degree 1.
    """
    if name not in COMBOS:
        raise ValueError(f"unknown combination {name!r}; expected one of {sorted(COMBOS)}")
    pole, parts = COMBOS[name]
    total = YSeries.from_scalars({-1: PI * pole}) if pole else YSeries.constant(ZERO)
    for fam, k in parts.items():
        total = total + logderiv(fam, y_order, q_order).scale(Scalar.rational(k))
    total = total.truncate(y_order)
    if total.valuation() < 1:
        raise PoleError(f"combination {name} is not pole-free at v = 0")
    return total._with_parity("odd")
