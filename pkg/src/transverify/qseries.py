"""Truncated Puiseux series in q with exponents in (1/8)Z.

A :class:`QExpansion` stores ``{n: Scalar}`` meaning ``sum c_n q**(n/8)``
together with an exclusive truncation numerator ``trunc``: every exponent
``n >= trunc`` is unknown.  ``trunc=None`` marks an exact (finite) series.
Truncation is propagated pessimistically through every operation.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Mapping, NamedTuple

from .scalars import ONE, ZERO, CycloRational, Scalar, as_scalar

__all__ = [
    "DENOM",
    "QExpansion",
    "QEval",
    "NotInvertibleError",
    "q_add",
    "q_mul",
    "q_neg",
    "q_invert",
    "tau_shift",
    "q_eval",
    "qtrunc",
]

DENOM = 8
_INF = math.inf


class NotInvertibleError(ArithmeticError):
    """Raised when a series or its leading coefficient cannot be inverted."""


class QEval(NamedTuple):
    value: complex
    tail: float


def qtrunc(q_order: int) -> int:
    """Truncation numerator for a working order q**q_order."""
    return DENOM * q_order


def _t(trunc):
    return _INF if trunc is None else trunc


def _untrunc(t):
    return None if t == _INF else int(t)


class QExpansion:
    __slots__ = ("terms", "trunc")

    def __init__(self, terms: Mapping[int, object] | None = None, trunc: int | None = None):
        clean = {}
        if terms:
            for n, c in terms.items():
                n = int(n)
                if trunc is not None and n >= trunc:
                    continue
                c = as_scalar(c)
                if c:
                    clean[n] = c
        self.terms = dict(sorted(clean.items()))
        self.trunc = trunc

    @classmethod
    def _raw(cls, terms: dict, trunc) -> "QExpansion":
        obj = object.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, trunc: int | None = None) -> "QExpansion":
        return cls._raw({}, trunc)

    @classmethod
    def constant(cls, c=1, trunc: int | None = None) -> "QExpansion":
        c = as_scalar(c)
        if trunc is not None and trunc <= 0:
            return cls._raw({}, trunc)
        return cls._raw({0: c} if c else {}, trunc)

    @classmethod
    def monomial(cls, n: int, c=1, trunc: int | None = None) -> "QExpansion":
        return cls({n: c}, trunc)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable, step: int = DENOM, start: int = 0,
                    trunc: int | None = None) -> "QExpansion":
        """Series ``sum coeffs[i] q**((start + i*step)/8)``."""
        return cls({start + i * step: c for i, c in enumerate(coeffs)}, trunc)

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        """No known nonzero coefficient (zero up to truncation)."""
        return not self.terms

    def is_exact(self) -> bool:
        return self.trunc is None

    def valuation(self):
        """Lowest stored exponent numerator; ``trunc`` (or inf) if none."""
        if self.terms:
            return next(iter(self.terms))
        return _t(self.trunc)

    def coeff(self, n: int) -> Scalar:
        if self.trunc is not None and n >= self.trunc:
            raise ValueError(f"coefficient q^({n}/8) lies beyond truncation {self.trunc}")
        return self.terms.get(n, ZERO)

    def leading(self) -> tuple[int, Scalar]:
        if not self.terms:
            raise NotInvertibleError("series has no known nonzero coefficient")
        n = next(iter(self.terms))
        return n, self.terms[n]

    def exponents(self) -> list:
        return list(self.terms)

    def pi_degrees(self) -> set:
        out = set()
        for c in self.terms.values():
            out |= c.pi_degrees()
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, QExpansion):
            return self.terms == other.terms and self.trunc == other.trunc
        return NotImplemented

    def __hash__(self):
        return hash((tuple(self.terms.items()), self.trunc))

    def agrees(self, other: "QExpansion") -> bool:
        """Equal on every exponent known in both series."""
        return (self - other).is_zero()

    # -- arithmetic -------------------------------------------------------
    def truncate(self, trunc: int | None) -> "QExpansion":
        if trunc is None:
            return self
        t = min(_t(self.trunc), trunc)
        return QExpansion._raw({n: c for n, c in self.terms.items() if n < t}, _untrunc(t))

    def __add__(self, other) -> "QExpansion":
        if not isinstance(other, QExpansion):
            other = QExpansion.constant(other)
        t = min(_t(self.trunc), _t(other.trunc))
        out = {n: c for n, c in self.terms.items() if n < t}
        for n, c in other.terms.items():
            if n >= t:
                continue
            prev = out.get(n)
            if prev is None:
                out[n] = c
            else:
                s = prev + c
                if s:
                    out[n] = s
                else:
                    del out[n]
        return QExpansion._raw(dict(sorted(out.items())), _untrunc(t))

    __radd__ = __add__

    def __neg__(self) -> "QExpansion":
        return QExpansion._raw({n: -c for n, c in self.terms.items()}, self.trunc)

    def __sub__(self, other) -> "QExpansion":
        if not isinstance(other, QExpansion):
            other = QExpansion.constant(other)
        return self + (-other)

    def __rsub__(self, other) -> "QExpansion":
        return QExpansion.constant(other) + (-self)

    def scale(self, s) -> "QExpansion":
        s = as_scalar(s)
        if not s:
            return QExpansion._raw({}, self.trunc)
        out = {}
        for n, c in self.terms.items():
            p = c * s
            if p:
                out[n] = p
        return QExpansion._raw(out, self.trunc)

    def shift(self, k: int) -> "QExpansion":
        """Multiply by q**(k/8)."""
        t = _t(self.trunc) + k
        return QExpansion._raw({n + k: c for n, c in self.terms.items()}, _untrunc(t))

    def __mul__(self, other) -> "QExpansion":
        if not isinstance(other, QExpansion):
            return self.scale(other)
        t = min(_t(self.trunc) + other.valuation(), _t(other.trunc) + self.valuation())
        acc: dict = {}
        b_items = list(other.terms.items())
        for n1, c1 in self.terms.items():
            lim = t - n1
            for n2, c2 in b_items:
                if n2 >= lim:
                    break
                n = n1 + n2
                p = c1 * c2
                prev = acc.get(n)
                acc[n] = p if prev is None else prev + p
        out = {n: acc[n] for n in sorted(acc) if acc[n]}
        return QExpansion._raw(out, _untrunc(t))

    def __rmul__(self, other) -> "QExpansion":
        return self.scale(other)

    def __pow__(self, k: int) -> "QExpansion":
        if k < 0:
            return q_invert(self) ** (-k)
        out = QExpansion.constant(ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def invert(self, trunc: int | None = None) -> "QExpansion":
        return q_invert(self, trunc)

    def __truediv__(self, other) -> "QExpansion":
        if isinstance(other, QExpansion):
            return self * q_invert(other, self._default_inv_trunc(other))
        return self.scale(as_scalar(other).inverse())

    def _default_inv_trunc(self, other: "QExpansion"):
        if other.trunc is not None:
            return None
        if self.trunc is None:
            raise NotInvertibleError("division of exact series needs an explicit truncation")
        return self.trunc - self.valuation() + 2 * other.valuation()

    def tau_shift(self) -> "QExpansion":
        return tau_shift(self)

    def map_coeffs(self, fn) -> "QExpansion":
        return QExpansion({n: fn(c) for n, c in self.terms.items()}, self.trunc)

    def galois(self, k: int) -> "QExpansion":
        return self.map_coeffs(lambda c: c.galois(k))

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {
            "denom": DENOM,
            "trunc_num": self.trunc,
            "terms": [{"num": n, "coeff": c.to_json()} for n, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QExpansion":
        if data.get("denom", DENOM) != DENOM:
            raise ValueError("only denominator 8 is supported")
        return cls({t["num"]: Scalar.from_json(t["coeff"]) for t in data["terms"]},
                   data["trunc_num"])

    def __repr__(self) -> str:
        body = " + ".join(f"({c!r})q^({n}/8)" for n, c in self.terms.items()) or "0"
        tail = "" if self.trunc is None else f" + O(q^({self.trunc}/8))"
        return f"QExpansion({body}{tail})"


def q_add(a: QExpansion, b: QExpansion) -> QExpansion:
    return a + b


def q_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    return a * b


def q_neg(a: QExpansion) -> QExpansion:
    return -a


def q_invert(a: QExpansion, trunc: int | None = None) -> QExpansion:
    """Multiplicative inverse.

    The lowest known coefficient must be a single-pi-degree scalar.  For an
    exact input the truncation of the result must be supplied; for a truncated
    input it is derived from the input's relative precision.
    """
    if not a.terms:
        raise NotInvertibleError("cannot invert a series that is zero up to truncation")
    v, lead = a.leading()
    if not lead.is_monomial():
        raise NotInvertibleError(f"leading coefficient {lead!r} is not invertible")
    if a.trunc is None:
        if trunc is None:
            if len(a.terms) == 1:
                return QExpansion._raw({-v: lead.inverse()}, None)
            raise NotInvertibleError("inverting an exact non-monomial series needs trunc")
        t = trunc
    else:
        t = -v + (a.trunc - v)
        if trunc is not None:
            t = min(t, trunc)
    inv_lead = lead.inverse()
    # relative series a / (lead q^v) = 1 + sum r_m q^(m/8)
    rel = [(n - v, c * inv_lead) for n, c in a.terms.items() if n != v]
    length = t + v  # number of relative exponents to produce
    b: dict = {}
    for m in range(max(length, 0)):
        if m == 0:
            b[0] = ONE
            continue
        s = ZERO
        for k, rk in rel:
            if k > m:
                break
            bm = b.get(m - k)
            if bm:
                s = s + rk * bm
        if s:
            b[m] = -s
    out = {}
    for m, c in b.items():
        val = c * inv_lead
        if val:
            out[m - v] = val
    return QExpansion._raw(dict(sorted(out.items())), t)


def tau_shift(a: QExpansion) -> QExpansion:
    """tau -> tau + 1, i.e. q**(n/8) -> zeta_8**n q**(n/8)."""
    out = {}
    for n, c in a.terms.items():
        z = Scalar.from_cyclo(CycloRational.zeta(n))
        out[n] = c * z
    return QExpansion._raw(out, a.trunc)


def q_eval(a: QExpansion, tau: complex) -> QEval:
    """Numerical value at ``tau`` together with a rough tail estimate."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau={tau} is not in the upper half-plane")
    val = 0j
    biggest = 0.0
    for n, c in a.terms.items():
        cz = c.to_complex()
        biggest = max(biggest, abs(cz))
        val += cz * cmath.exp(2j * math.pi * tau * n / DENOM)
    if a.trunc is None:
        return QEval(val, 0.0)
    r = math.exp(-2 * math.pi * tau.imag)
    step = r ** (1 / DENOM)
    tail = max(biggest, 1.0) * r ** (a.trunc / DENOM) / (1 - step)
    return QEval(val, tail)
