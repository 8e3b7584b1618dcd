"""Transgressed (Chern-Simons) integrands of the Phi forms.

The integrands are linear in one trace form.  For the tangent bundle the odd
generator ``a<k>`` stands for ``pi^(2k+2) tr[A (R/4 pi^2)^(2k+1)]``, so an odd
function ``h`` applied inside the trace becomes ``sum_k hhat_k a<k>`` where
``hhat_k`` is the ``y^(2k+1)`` coefficient of ``h`` divided by ``pi``.

For the twist bundle the curvature is ``Omega J`` with ``J`` the 2x2 rotation
generator; with ``u = -i Omega/(4 pi^2)`` one has
``tr[B (R/4 pi^2)^(2k+1)] = i u^(2k+1) tr[B J]``, so the trace collapses to
``hhat(U) b`` with ``b = pi i tr[B J]`` and ``U = pi u``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .charring import FAMILIES, TILDE_FAMILIES, FormElement, RingSpec, phi_form
from .qseries import QExpansion
from .scalars import PI, SQRT2, Scalar
from .theta import YSeries, logderiv_combo

__all__ = [
    "CSForm",
    "cs_tm",
    "cs_xi",
    "cs_tilde",
    "cs_form",
    "top_component",
    "cs_prefactor",
    "tm_trace",
    "xi_trace",
    "CS_KINDS",
]

CS_KINDS = ("tm", "xi", "tilde")

_SUFFIX = {"Phi_L": "L", "Phi_W": "W", "Phi_W'": "W'"}


@dataclass(frozen=True)
class CSForm:
    element: FormElement
    family: str
    kind: str

    @property
    def top_degree(self) -> int:
        return self.element.spec.D

    def tau_shift(self) -> "CSForm":
        return CSForm(self.element.tau_shift(), self.family, self.kind)

    def to_json(self) -> dict:
        return {"family": self.family, "kind": self.kind, "D": self.top_degree,
                "terms": self.element.to_json()}


def cs_prefactor(family: str) -> Scalar:
    """sqrt(2)/(8 pi^2) for the L family, 1/(8 pi^2) for the W families."""
    base = family.lstrip("t")
    inv = (Scalar.rational(8) * PI * PI).inverse()
    return SQRT2 * inv if base == "Phi_L" else inv


def _odd_coeffs(h: YSeries, count: int) -> list[QExpansion]:
    inv_pi = PI.inverse()
    return [h.coeff(2 * k + 1).scale(inv_pi) for k in range(count)]


def tm_trace(h: YSeries, spec: RingSpec) -> FormElement:
    """The tangent-bundle trace of an odd series h, as sum_k hhat_k a<k>."""
    gens = [g for g in spec.odd_gens if g.startswith("a")]
    coeffs = _odd_coeffs(h, len(gens))
    unit = (0,) * spec.n_roots
    return FormElement(spec, {(unit, 0, g): c for g, c in zip(gens, coeffs)})


def xi_trace(h: YSeries, spec: RingSpec) -> FormElement:
    """The twist-bundle trace of an odd series h, as hhat(U) b."""
    if "b" not in spec.odd_gens:
        raise ValueError("ring has no twist-bundle trace generator")
    count = (spec.D - 1) // 4 + 1
    coeffs = _odd_coeffs(h, count)
    unit = (0,) * spec.n_roots
    return FormElement(spec, {(unit, 2 * k + 1, "b"): c for k, c in enumerate(coeffs)})


def _combo_order(spec: RingSpec) -> int:
    return spec.D // 2 + 2


def cs_tm(family: str, spec: RingSpec) -> CSForm:
    """Transgression in the tangent connection of Phi_L, Phi_W or Phi_W'."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    h = logderiv_combo("tm-" + _SUFFIX[family], _combo_order(spec), spec.q_order)
    body = phi_form(family, spec) * tm_trace(h, spec)
    return CSForm(body.scale(cs_prefactor(family)), family, "tm")


def cs_xi(family: str, spec: RingSpec) -> CSForm:
    """Transgression in the twist-bundle connection."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    h = logderiv_combo("xi-" + _SUFFIX[family], _combo_order(spec), spec.q_order)
    body = phi_form(family, spec) * xi_trace(h, spec)
    return CSForm(body.scale(cs_prefactor(family)), family, "xi")


def cs_tilde(family: str, spec: RingSpec) -> CSForm:
    """Tangent transgression of a twisted Phi form on a 4k+1 configuration."""
    if family not in TILDE_FAMILIES:
        raise ValueError(f"unknown tilde family {family!r}")
    h = logderiv_combo("tm-" + _SUFFIX[family[1:]], _combo_order(spec), spec.q_order)
    body = phi_form(family, spec) * tm_trace(h, spec)
    return CSForm(body.scale(cs_prefactor(family)), family, "tilde")


def cs_form(kind: str, family: str, spec: RingSpec) -> CSForm:
    if kind == "tm":
        return cs_tm(family, spec)
    if kind == "xi":
        return cs_xi(family, spec)
    if kind == "tilde":
        return cs_tilde(family if family.startswith("t") else "t" + family, spec)
    raise ValueError(f"kind must be one of {CS_KINDS}")


def top_component(f: CSForm | FormElement) -> FormElement:
    """Part of exact form degree D."""
    el = f.element if isinstance(f, CSForm) else f
    return el.restrict_degree(el.spec.D)
