"""Universal truncated ring of characteristic forms and the Phi-form builders.

Even generators are the normalized Chern-root variables ``X_1..X_n`` of the
tangent bundle and ``U`` of the rank-two twist bundle (each of form degree 2).
Odd generators stand for trace forms: ``a<k>`` (degree 4k+3) for traces over
the tangent bundle and ``b`` (degree 1) for the twist bundle.  A monomial holds
at most one odd generator; the product of two odd monomials is zero.

Each Phi form is built twice:

* from theta quotients substituted at the Chern roots, and
* from Chern characters of the reduced symmetric/exterior power bundles,
  together with the Hirzebruch factors.

The two constructions share nothing beyond the series arithmetic, so their
agreement is a real check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .qseries import DENOM, QExpansion, q_invert, qtrunc, tau_shift
from .scalars import I, ONE, PI, SQRT2, Scalar, as_scalar
from .theta import (
    PoleError,
    YSeries,
    cos_series,
    exp_series,
    f_quotient,
    sin_series,
    tilde_u_factor,
    u_factor,
    y_div,
)

__all__ = [
    "RingSpec",
    "FormElement",
    "Monomial",
    "ring_add",
    "ring_mul",
    "substitute",
    "phi_theta_route",
    "phi_bundle_route",
    "phi_tilde_route",
    "phi_form",
    "pi_grade",
    "FAMILIES",
    "TILDE_FAMILIES",
]

FAMILIES = ("Phi_L", "Phi_W", "Phi_W'")
TILDE_FAMILIES = ("tPhi_L", "tPhi_W", "tPhi_W'")

Monomial = tuple  # (x_exponents: tuple[int, ...], u_exponent: int, odd: str | None)


@dataclass(frozen=True)
class RingSpec:
    n_roots: int
    D: int
    q_order: int
    has_xi: bool = True
    odd_gens: tuple = field(default=None)

    def __post_init__(self):
        if self.D % 2 != 1 or self.D < 1:
            raise ValueError("form-degree truncation D must be odd and positive")
        if self.q_order < 1:
            raise ValueError("q_order must be >= 1")
        if self.odd_gens is None:
            gens = tuple(f"a{k}" for k in range((self.D - 3) // 4 + 1) if 4 * k + 3 <= self.D)
            if self.has_xi:
                gens = gens + ("b",)
            object.__setattr__(self, "odd_gens", gens)

    @classmethod
    def for_dimension(cls, D: int, q_order: int) -> "RingSpec":
        """n_roots = 2k-1 when D = 4k-1 and 2k when D = 4k+1."""
        if D % 4 == 3:
            n = (D + 1) // 2 - 1
        elif D % 4 == 1:
            n = (D - 1) // 2
        else:
            raise ValueError("dimension must be odd")
        return cls(n, D, q_order)

    @property
    def k(self) -> int:
        return (self.D + 1) // 4 if self.D % 4 == 3 else (self.D - 1) // 4

    @property
    def kind(self) -> str:
        return "4k-1" if self.D % 4 == 3 else "4k+1"

    @property
    def q_trunc(self) -> int:
        return qtrunc(self.q_order)

    def odd_degree(self, name: str) -> int:
        if name == "b":
            return 1
        if name.startswith("a"):
            return 4 * int(name[1:]) + 3
        raise KeyError(name)

    def degree(self, m: Monomial) -> int:
        xs, u, odd = m
        return 2 * (sum(xs) + u) + (self.odd_degree(odd) if odd else 0)

    def to_json(self) -> dict:
        return {"n_roots": self.n_roots, "D": self.D, "q_order": self.q_order,
                "has_xi": self.has_xi, "odd_gens": list(self.odd_gens)}


class FormElement:
    """Sparse element of the truncated form ring with q-series coefficients."""

    __slots__ = ("spec", "terms")

    def __init__(self, spec: RingSpec, terms: Mapping[Monomial, QExpansion] | None = None):
        self.spec = spec
        T = spec.q_trunc
        clean = {}
        for m, c in (terms or {}).items():
            if spec.degree(m) > spec.D:
                continue
            if not isinstance(c, QExpansion):
                c = QExpansion.constant(as_scalar(c))
            c = c.truncate(T)
            if not c.is_zero():
                clean[m] = c
        self.terms = dict(sorted(clean.items(), key=lambda kv: _mono_key(kv[0])))

    # -- constructors -------------------------------------------------------
    @classmethod
    def constant(cls, spec: RingSpec, c=ONE) -> "FormElement":
        return cls(spec, {_unit(spec): c if isinstance(c, QExpansion) else QExpansion.constant(c)})

    @classmethod
    def zero(cls, spec: RingSpec) -> "FormElement":
        return cls(spec, {})

    @classmethod
    def generator(cls, spec: RingSpec, name: str, c=ONE) -> "FormElement":
        """``"X3"``, ``"U"``, ``"a0"`` or ``"b"``."""
        xs = [0] * spec.n_roots
        u, odd = 0, None
        if name == "U":
            u = 1
        elif name.startswith("X"):
            xs[int(name[1:]) - 1] = 1
        elif name in spec.odd_gens:
            odd = name
        else:
            raise ValueError(f"unknown generator {name!r}")
        return cls(spec, {(tuple(xs), u, odd): QExpansion.constant(as_scalar(c))})

    # -- inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormElement):
            return NotImplemented
        return self.spec == other.spec and self.terms == other.terms

    def agrees(self, other: "FormElement") -> bool:
        return (self - other).is_zero()

    def degrees(self) -> set:
        return {self.spec.degree(m) for m in self.terms}

    def coeff(self, m: Monomial) -> QExpansion:
        return self.terms.get(m, QExpansion.zero(self.spec.q_trunc))

    def odd_parts(self) -> set:
        return {m[2] for m in self.terms}

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "FormElement"):
        if self.spec != other.spec:
            raise ValueError("form elements live in different rings")

    def __add__(self, other: "FormElement") -> "FormElement":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return FormElement(self.spec, out)

    def __neg__(self) -> "FormElement":
        return FormElement(self.spec, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "FormElement") -> "FormElement":
        return self + (-other)

    def scale(self, s) -> "FormElement":
        if isinstance(s, QExpansion):
            return FormElement(self.spec, {m: c * s for m, c in self.terms.items()})
        s = as_scalar(s)
        return FormElement(self.spec, {m: c.scale(s) for m, c in self.terms.items()})

    def __mul__(self, other) -> "FormElement":
        if not isinstance(other, FormElement):
            return self.scale(other)
        self._check(other)
        spec = self.spec
        acc: dict = {}
        for m1, c1 in self.terms.items():
            d1 = spec.degree(m1)
            for m2, c2 in other.terms.items():
                if m1[2] and m2[2]:
                    continue
                if d1 + spec.degree(m2) > spec.D:
                    continue
                m = (tuple(a + b for a, b in zip(m1[0], m2[0])), m1[1] + m2[1], m1[2] or m2[2])
                p = c1 * c2
                acc[m] = acc[m] + p if m in acc else p
        return FormElement(spec, acc)

    __rmul__ = scale

    def map_coeffs(self, fn) -> "FormElement":
        return FormElement(self.spec, {m: fn(c) for m, c in self.terms.items()})

    def tau_shift(self) -> "FormElement":
        return self.map_coeffs(tau_shift)

    def restrict_degree(self, d: int) -> "FormElement":
        return FormElement(self.spec, {m: c for m, c in self.terms.items()
                                       if self.spec.degree(m) == d})

    def q_coefficient(self, n: int) -> dict:
        """Scalar coefficients of q^(n/8), keyed by monomial."""
        out = {}
        for m, c in self.terms.items():
            s = c.coeff(n)
            if s:
                out[m] = s
        return out

    def permute_roots(self, perm: Iterable[int]) -> "FormElement":
        perm = list(perm)
        out = {}
        for (xs, u, odd), c in self.terms.items():
            ys = [0] * len(xs)
            for i, e in enumerate(xs):
                ys[perm[i]] = e
            out[(tuple(ys), u, odd)] = c
        return FormElement(self.spec, out)

    def to_json(self) -> list:
        return [{"monomial": {"X": list(m[0]), "U": m[1], "odd": m[2]}, "coeff": c.to_json()}
                for m, c in self.terms.items()]

    def __repr__(self) -> str:
        return f"FormElement({len(self.terms)} terms, D={self.spec.D}, q_order={self.spec.q_order})"


def _unit(spec: RingSpec) -> Monomial:
    return ((0,) * spec.n_roots, 0, None)


def _mono_key(m: Monomial):
    return (m[2] or "", sum(m[0]) + m[1], m[0], m[1])


def ring_add(a: FormElement, b: FormElement) -> FormElement:
    return a + b


def ring_mul(a: FormElement, b: FormElement) -> FormElement:
    return a * b


def pi_grade(f: FormElement) -> int | None:
    """Common pi-degree of every coefficient, or None for zero.

    Raises ValueError when two coefficients sit at different pi-degrees.
    """
    seen = set()
    for c in f.terms.values():
        seen |= c.pi_degrees()
        if len(seen) > 1:
            raise ValueError(f"form element is not pi-homogeneous: degrees {sorted(seen)}")
    return next(iter(seen)) if seen else None


def substitute(s: YSeries, spec: RingSpec, gen: str) -> FormElement:
    """Replace y by the even generator ``gen`` (``"U"`` or ``"X<j>"``)."""
    if s.valuation() < 0:
        raise ValueError("cannot substitute a series with a pole")
    if gen != "U" and not gen.startswith("X"):
        raise ValueError("only even generators can be substituted")
    top = spec.D // 2
    if s.y_trunc is not None and s.y_trunc <= top:
        raise ValueError(f"y-series known only below y^{s.y_trunc}; degree {spec.D} needs y^{top}")
    out = {}
    base = [0] * spec.n_roots
    for d, c in s.coeffs.items():
        if d > top:
            break
        xs = list(base)
        u = 0
        if gen == "U":
            u = d
        else:
            xs[int(gen[1:]) - 1] = d
        out[(tuple(xs), u, None)] = c
    return FormElement(spec, out)


def _product_over_roots(per_root: YSeries, spec: RingSpec) -> FormElement:
    out = FormElement.constant(spec)
    for j in range(1, spec.n_roots + 1):
        out = out * substitute(per_root, spec, f"X{j}")
    return out


def _y_order(spec: RingSpec) -> int:
    return spec.D // 2 + 1


# -- theta route -----------------------------------------------------------

def _sqrt2_power(n: int) -> Scalar:
    return SQRT2 ** n


def phi_theta_route(family: str, spec: RingSpec) -> FormElement:
    """Phi form as a product of theta quotients at the Chern roots."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if spec.kind != "4k-1":
        raise ValueError("Phi forms are built on 4k-1 dimensional configurations")
    Y, Q = _y_order(spec), spec.q_order
    body = _product_over_roots(f_quotient(family, Y, Q), spec)
    body = body * substitute(u_factor(family, Y, Q), spec, "U")
    if family == "Phi_L":
        body = body.scale(_sqrt2_power(4 * spec.k - 1))
    return body


def phi_tilde_theta_route(family: str, spec: RingSpec) -> FormElement:
    if family not in TILDE_FAMILIES:
        raise ValueError(f"unknown tilde family {family!r}")
    if spec.kind != "4k+1":
        raise ValueError("tilde Phi forms are built on 4k+1 dimensional configurations")
    base = family[1:]
    Y, Q = _y_order(spec), spec.q_order
    body = _product_over_roots(f_quotient(base, Y, Q), spec)
    body = body * substitute(tilde_u_factor(base, Y, Q), spec, "U")
    if base == "Phi_L":
        pref = _sqrt2_power(4 * spec.k + 1) * (PI * I).inverse()
    else:
        pref = (PI * I * Scalar.rational(2)).inverse()
    return body.scale(pref)


# -- bundle route ------------------------------------------------------------

def _qmono(n: int, sign: int, T: int) -> QExpansion:
    return QExpansion({n: Scalar.rational(sign)}, T)


def _lambda_pair(t: QExpansion, Y: int) -> YSeries:
    """ch Lambda_t of the reduced two-root bundle with roots +-2i y."""
    plus = exp_series(Y, Scalar.rational(2) * I)
    minus = exp_series(Y, Scalar.rational(-2) * I)
    one = YSeries.constant(QExpansion.constant(ONE, t.trunc)).truncate(Y)
    full = (one + plus.scale(t)) * (one + minus.scale(t))
    rank_part = (QExpansion.constant(ONE, t.trunc) + t) ** 2
    return full.scale(q_invert(rank_part))


def _symmetric_pair(t: QExpansion, Y: int) -> YSeries:
    """ch S_t = 1 / ch Lambda_(-t) on the reduced two-root bundle."""
    lam = _lambda_pair(-t, Y)
    one = YSeries.constant(QExpansion.constant(ONE, t.trunc)).truncate(Y)
    return y_div(one, lam)


def _exponents(half: bool, T: int) -> list[int]:
    out = []
    j = 1
    while True:
        n = DENOM * j - (DENOM // 2 if half else 0)
        if n >= T:
            return out
        out.append(n)
        j += 1


# Witten bundle recipes: (operation, sign of t, half-integer powers, power)
_TM_PART = {
    1: [("S", 1, False, 1), ("L", 1, False, 1)],
    2: [("S", 1, False, 1), ("L", -1, True, 1)],
    3: [("S", 1, False, 1), ("L", 1, True, 1)],
}
_XI_PART = {
    1: [("L", 1, False, -2), ("L", 1, True, 1), ("L", -1, True, 1)],
    2: [("L", -1, True, -2), ("L", 1, True, 1), ("L", 1, False, 1)],
    3: [("L", 1, True, -2), ("L", 1, False, 1), ("L", -1, True, 1)],
}


@lru_cache(maxsize=64)
def witten_part(index: int, part: str, y_order: int, q_order: int) -> YSeries:
    """Per-variable Chern character of the Witten bundle Theta_index.

    ``part="tm"`` gives the factor contributed by one pair of tangent roots,
    ``part="xi"`` the factor contributed by the twist bundle alone.
    """
    T = qtrunc(q_order)
    recipe = (_TM_PART if part == "tm" else _XI_PART)[index]
    out = YSeries.constant(QExpansion.constant(ONE, T)).truncate(y_order)
    for op, sign, half, power in recipe:
        for n in _exponents(half, T):
            t = _qmono(n, sign, T)
            f = _symmetric_pair(t, y_order) if op == "S" else _lambda_pair(t, y_order)
            if power < 0:
                one = YSeries.constant(QExpansion.constant(ONE, T)).truncate(y_order)
                f = y_div(one, f)
            for _ in range(abs(power)):
                out = out * f
    return out.truncate(y_order)


@lru_cache(maxsize=16)
def _hirzebruch(kind: str, y_order: int) -> YSeries:
    """Per-root factor: 2y/tan y for the L-hat form, y/sin y for the A-hat form."""
    Y = y_order + 1
    s = sin_series(Y)
    num = cos_series(Y).scale(Scalar.rational(2)) if kind == "L" else YSeries.constant(ONE).truncate(Y)
    return y_div(num.shift_y(1), s).truncate(y_order)


def _trig(y_order: int):
    return cos_series(y_order), sin_series(y_order)


def phi_bundle_route(family: str, spec: RingSpec) -> FormElement:
    """Phi form from Hirzebruch factors and Chern characters of Witten bundles."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if spec.kind != "4k-1":
        raise ValueError("Phi forms are built on 4k-1 dimensional configurations")
    Y, Q = _y_order(spec), spec.q_order
    index = FAMILIES.index(family) + 1
    cos_u, _ = _trig(Y + 2)
    tm = witten_part(index, "tm", Y, Q)
    xi = witten_part(index, "xi", Y, Q)
    if family == "Phi_L":
        per_root = _hirzebruch("L", Y) * tm
        u_part = y_div(xi.truncate(Y + 2), cos_u * cos_u).truncate(Y)
        zero_root = SQRT2  # the zero Chern root of an odd-dimensional tangent bundle
    else:
        per_root = _hirzebruch("A", Y) * tm
        u_part = (cos_u.truncate(Y) * xi).truncate(Y)
        zero_root = ONE
    body = _product_over_roots(per_root, spec) * substitute(u_part, spec, "U")
    return body.scale(zero_root)


def phi_tilde_bundle_route(family: str, spec: RingSpec) -> FormElement:
    if family not in TILDE_FAMILIES:
        raise ValueError(f"unknown tilde family {family!r}")
    if spec.kind != "4k+1":
        raise ValueError("tilde Phi forms are built on 4k+1 dimensional configurations")
    base = family[1:]
    index = FAMILIES.index(base) + 1
    Y, Q = _y_order(spec), spec.q_order
    W = Y + 3
    T = qtrunc(Q)
    cos_u, sin_u = _trig(W)
    tm_y = witten_part(index, "tm", Y, Q)
    tm_u = witten_part(index, "tm", W, Q)
    xi_u = witten_part(index, "xi", W, Q)
    one = YSeries.constant(QExpansion.constant(ONE, T)).truncate(W)
    if base == "Phi_L":
        per_root = _hirzebruch("L", Y) * tm_y
        coth = y_div(cos_u, sin_u.scale(I))
        bracket = tm_u * (one - y_div(xi_u, cos_u * cos_u))
        u_part = coth * bracket
        zero_root = SQRT2
    else:
        per_root = _hirzebruch("A", Y) * tm_y
        inv_2sinh = y_div(one, sin_u.scale(Scalar.rational(2) * I))
        u_part = inv_2sinh * tm_u * (one - cos_u * xi_u)
        zero_root = ONE
    if u_part.valuation() < 0:
        raise PoleError("U-pole of the twisted Phi form did not cancel")
    u_part = u_part.truncate(Y)
    body = _product_over_roots(per_root, spec) * substitute(u_part, spec, "U")
    return body.scale(zero_root)


def phi_tilde_route(family: str, spec: RingSpec, route: str = "theta") -> FormElement:
    """Twisted Phi form on a 4k+1 configuration, via ``route`` theta or bundle."""
    if route == "theta":
        return phi_tilde_theta_route(family, spec)
    if route == "bundle":
        return phi_tilde_bundle_route(family, spec)
    raise ValueError("route must be 'theta' or 'bundle'")


def phi_form(family: str, spec: RingSpec, route: str = "theta") -> FormElement:
    """Any of the six Phi forms by name."""
    if family in TILDE_FAMILIES:
        return phi_tilde_route(family, spec, route)
    if route == "theta":
        return phi_theta_route(family, spec)
    if route == "bundle":
        return phi_bundle_route(family, spec)
    raise ValueError("route must be 'theta' or 'bundle'")
