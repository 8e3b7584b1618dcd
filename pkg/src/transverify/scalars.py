"""Exact coefficients: rationals extended by the primitive 8th root of unity,
graded by integer powers of pi.

A :class:`CycloRational` is ``c0 + c1*z + c2*z**2 + c3*z**3`` with ``z**4 == -1``
(``z = exp(i*pi/4)``).  A :class:`Scalar` is a finite sum ``sum_d a_d * pi**d``
with cyclotomic coefficients ``a_d``.  Both are immutable value types.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = [
    "CycloRational",
    "Scalar",
    "ZERO",
    "ONE",
    "ZETA8",
    "SQRT2",
    "I",
    "PI",
    "scalar_add",
    "scalar_mul",
    "scalar_to_complex",
    "as_scalar",
]

_ZETA = cmath.exp(1j * math.pi / 4)
_ZETA_POWERS = tuple(_ZETA**k for k in range(4))
_F0 = Fraction(0)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        raise TypeError("floats are not accepted by the exact kernel")
    return Fraction(x)


class CycloRational:
    """Element of Q(zeta_8) in the power basis {1, z, z^2, z^3}."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = (0, 0, 0, 0)):
        c = tuple(_frac(x) for x in coeffs)
        if len(c) != 4:
            raise ValueError("CycloRational needs exactly 4 coefficients")
        self.c = c

    @classmethod
    def _raw(cls, c: tuple) -> "CycloRational":
        obj = object.__new__(cls)
        obj.c = c
        return obj

    @classmethod
    def rational(cls, x) -> "CycloRational":
        return cls._raw((_frac(x), _F0, _F0, _F0))

    @classmethod
    def zeta(cls, k: int = 1) -> "CycloRational":
        """zeta_8 ** k for any integer k."""
        k %= 8
        sign = 1 if k < 4 else -1
        c = [_F0] * 4
        c[k % 4] = Fraction(sign)
        return cls._raw(tuple(c))

    @property
    def coeffs(self) -> tuple:
        return self.c

    def is_zero(self) -> bool:
        a, b, c, d = self.c
        return not (a or b or c or d)

    def is_rational(self) -> bool:
        _, b, c, d = self.c
        return not (b or c or d)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloRational):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __add__(self, other: "CycloRational") -> "CycloRational":
        a, b = self.c, other.c
        return CycloRational._raw((a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]))

    def __sub__(self, other: "CycloRational") -> "CycloRational":
        a, b = self.c, other.c
        return CycloRational._raw((a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]))

    def __neg__(self) -> "CycloRational":
        a = self.c
        return CycloRational._raw((-a[0], -a[1], -a[2], -a[3]))

    def __mul__(self, other) -> "CycloRational":
        if not isinstance(other, CycloRational):
            r = _frac(other)
            a = self.c
            return CycloRational._raw((a[0] * r, a[1] * r, a[2] * r, a[3] * r))
        a, b = self.c, other.c
        if not (b[1] or b[2] or b[3]):
            r = b[0]
            return CycloRational._raw((a[0] * r, a[1] * r, a[2] * r, a[3] * r))
        if not (a[1] or a[2] or a[3]):
            r = a[0]
            return CycloRational._raw((b[0] * r, b[1] * r, b[2] * r, b[3] * r))
        a0, a1, a2, a3 = a
        b0, b1, b2, b3 = b
        # z^4 = -1 folds degrees 4..6 back with a sign flip
        return CycloRational._raw((
            a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
            a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ))

    __rmul__ = __mul__

    def galois(self, k: int) -> "CycloRational":
        """Apply the automorphism z -> z**k (k odd)."""
        if k % 2 == 0:
            raise ValueError("Galois automorphisms of Q(zeta_8) need odd k")
        out = CycloRational._raw((_F0, _F0, _F0, _F0))
        for j, cj in enumerate(self.c):
            if cj:
                out = out + CycloRational.zeta(j * k) * cj
        return out

    def norm(self) -> Fraction:
        prod = self * self.galois(3) * self.galois(5) * self.galois(7)
        if not prod.is_rational():
            raise ArithmeticError("norm is not rational; arithmetic is broken")
        return prod.c[0]

    def inverse(self) -> "CycloRational":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_8)")
        if self.is_rational():
            return CycloRational.rational(1 / self.c[0])
        others = self.galois(3) * self.galois(5) * self.galois(7)
        n = (self * others).c[0]
        return others * (1 / n)

    def __truediv__(self, other) -> "CycloRational":
        if isinstance(other, CycloRational):
            return self * other.inverse()
        return self * (1 / _frac(other))

    def to_complex(self) -> complex:
        return sum(float(cj) * zj for cj, zj in zip(self.c, _ZETA_POWERS))

    def to_json(self) -> list:
        return [f"{x.numerator}/{x.denominator}" for x in self.c]

    def __repr__(self) -> str:
        parts = []
        for j, cj in enumerate(self.c):
            if cj:
                parts.append(str(cj) if j == 0 else f"{cj}*z8^{j}")
        return "CycloRational(" + (" + ".join(parts) or "0") + ")"

    def __str__(self) -> str:
        parts = []
        for j, cj in enumerate(self.c):
            if cj:
                parts.append(str(cj) if j == 0 else f"{cj}*z8^{j}")
        if not parts:
            return "0"
        return parts[0] if len(parts) == 1 else "(" + " + ".join(parts) + ")"


_CZERO = CycloRational.rational(0)
_CONE = CycloRational.rational(1)


class Scalar:
    """Finite pi-graded sum of cyclotomic rationals.

    ``Scalar({2: CycloRational.rational(Fraction(1, 2))})`` is ``pi**2 / 2``.
    Zero coefficients are never stored, so two scalars are equal exactly when
    their term maps are.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, CycloRational] | None = None):
        clean = {}
        if terms:
            for d, c in terms.items():
                if not isinstance(c, CycloRational):
                    c = CycloRational.rational(c)
                if not c.is_zero():
                    clean[int(d)] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Scalar":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def rational(cls, x, pi_degree: int = 0) -> "Scalar":
        x = _frac(x)
        if not x:
            return cls._raw({})
        return cls._raw({pi_degree: CycloRational.rational(x)})

    @classmethod
    def zeta(cls, k: int = 1, pi_degree: int = 0) -> "Scalar":
        return cls._raw({pi_degree: CycloRational.zeta(k)})

    @classmethod
    def from_cyclo(cls, c: CycloRational, pi_degree: int = 0) -> "Scalar":
        if c.is_zero():
            return cls._raw({})
        return cls._raw({pi_degree: c})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def pi_degrees(self) -> set:
        return set(self.terms)

    def is_rational(self) -> bool:
        """True if this is a pi-free rational number."""
        if not self.terms:
            return True
        return set(self.terms) == {0} and self.terms[0].is_rational()

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a pi-free rational")
        return self.terms[0].c[0] if self.terms else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Scalar):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Scalar.rational(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "Scalar":
        other = as_scalar(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for d, c in other.terms.items():
            prev = out.get(d)
            if prev is None:
                out[d] = c
            else:
                s = prev + c
                if s.is_zero():
                    del out[d]
                else:
                    out[d] = s
        return Scalar._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar._raw({d: -c for d, c in self.terms.items()})

    def __sub__(self, other) -> "Scalar":
        return self + (-as_scalar(other))

    def __rsub__(self, other) -> "Scalar":
        return as_scalar(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, Scalar):
            other = as_scalar(other)
        st, ot = self.terms, other.terms
        if not st or not ot:
            return Scalar._raw({})
        if len(st) == 1 and len(ot) == 1:
            (d1, c1), = st.items()
            (d2, c2), = ot.items()
            return Scalar._raw({d1 + d2: c1 * c2})
        out: dict = {}
        for d1, c1 in st.items():
            for d2, c2 in ot.items():
                d = d1 + d2
                p = c1 * c2
                prev = out.get(d)
                out[d] = p if prev is None else prev + p
        return Scalar._raw({d: c for d, c in out.items() if not c.is_zero()})

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        """Inverse of a monomial scalar ``a * pi**d``."""
        if len(self.terms) != 1:
            raise ZeroDivisionError(
                f"only single-pi-degree scalars are invertible, got {self!r}")
        (d, c), = self.terms.items()
        return Scalar._raw({-d: c.inverse()})

    def __truediv__(self, other) -> "Scalar":
        return self * as_scalar(other).inverse()

    def __pow__(self, n: int) -> "Scalar":
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_pi(self, k: int) -> "Scalar":
        """Multiply by pi**k."""
        if not k:
            return self
        return Scalar._raw({d + k: c for d, c in self.terms.items()})

    def galois(self, k: int) -> "Scalar":
        return Scalar({d: c.galois(k) for d, c in self.terms.items()})

    def to_complex(self) -> complex:
        return sum((c.to_complex() * math.pi**d for d, c in self.terms.items()), 0j)

    def to_json(self) -> list:
        return [{"pi_degree": d, "zeta8": self.terms[d].to_json()}
                for d in sorted(self.terms)]

    @classmethod
    def from_json(cls, data: list) -> "Scalar":
        return cls({item["pi_degree"]: CycloRational(item["zeta8"]) for item in data})

    def __repr__(self) -> str:
        if not self.terms:
            return "Scalar(0)"
        parts = [f"{self.terms[d]!r}*pi^{d}" for d in sorted(self.terms)]
        return "Scalar(" + " + ".join(parts) + ")"

    def __str__(self) -> str:
        """Compact form such as ``1/4``, ``3*pi^-2`` or ``(1 + 2*z8^2)*pi``."""
        if not self.terms:
            return "0"
        parts = []
        for d in sorted(self.terms):
            c = str(self.terms[d])
            parts.append(c if d == 0 else f"{c}*pi" + ("" if d == 1 else f"^{d}"))
        return " + ".join(parts)


ZERO = Scalar._raw({})
ONE = Scalar._raw({0: _CONE})
ZETA8 = Scalar.zeta(1)
I = Scalar.zeta(2)
SQRT2 = Scalar._raw({0: CycloRational((0, 1, 0, -1))})
PI = Scalar._raw({1: _CONE})


def as_scalar(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, CycloRational):
        return Scalar.from_cyclo(x)
    return Scalar.rational(x)


def scalar_add(a: Scalar, b: Scalar) -> Scalar:
    return a + b


def scalar_mul(a: Scalar, b: Scalar) -> Scalar:
    return a * b


def scalar_to_complex(a: Scalar) -> complex:
    return a.to_complex()
