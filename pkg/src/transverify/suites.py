"""Named verification suites.

Each runner returns a :class:`VerificationReport`; exact suites compare
truncated series, the numerical ones compare residuals against a tolerance.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Callable

from .cancel import CASES, derive
from .charring import (
    FAMILIES,
    TILDE_FAMILIES,
    RingSpec,
    phi_bundle_route,
    phi_form,
    phi_theta_route,
    phi_tilde_route,
)
from .modforms import delta, epsilon, t_transform
from .numeval import (
    EvalConfig,
    check_oracle_agreement,
    check_quotient_s_laws,
    check_s_laws,
)
from .qseries import QExpansion, qtrunc
from .report import CheckResult, VerificationReport
from .scalars import PI, ZETA8, Scalar
from .theta import (
    COMBOS,
    PARITY,
    THETA_FAMILIES,
    f_quotient,
    logderiv_combo,
    theta_expand,
    theta_null,
    theta_prime,
    theta_prime_null,
    u_factor,
)
from .transgress import CS_KINDS, cs_form, cs_xi

__all__ = ["SUITES", "SUITE_IDS", "default_q_order", "run_suite"]


def default_q_order() -> int:
    return int(os.environ.get("TRANSVERIFY_DEFAULT_QORDER", "6"))


def _exact(rep: VerificationReport, cid: str, anchor: str, ok: bool, orders: dict, **detail):
    rep.add(CheckResult(cid, anchor, bool(ok), {"kind": "exact", **detail}, orders))


def _qsum(terms: dict, trunc: int) -> QExpansion:
    return QExpansion({n: Scalar.rational(c) for n, c in terms.items() if c}, trunc)


# -- theta-basics ---------------------------------------------------------------

def _null_by_sum(family: str, q_order: int) -> QExpansion:
    """theta_j(0) from its bilateral sum over the lattice, in eighths of q."""
    T = qtrunc(q_order) + (1 if family == "theta1" else 0)
    terms: dict = {}
    n = 0
    while True:
        if family == "theta1":
            e = (2 * n + 1) ** 2          # 8 * (n + 1/2)^2 / 2
            c = 2
        else:
            e = 4 * n * n                  # 8 * n^2 / 2
            c = 1 if n == 0 else 2
            if family == "theta2" and n % 2:
                c = -c
        if e >= T:
            break
        terms[e] = c
        n += 1
    return _qsum(terms, T)


def _theta_prime_by_sum(q_order: int) -> QExpansion:
    """theta'(0)/pi = 2 sum (-1)^n (2n+1) q^((2n+1)^2/8)."""
    T = qtrunc(q_order) + 1
    terms = {}
    n = 0
    while (2 * n + 1) ** 2 < T:
        terms[(2 * n + 1) ** 2] = 2 * (-1) ** n * (2 * n + 1)
        n += 1
    return _qsum(terms, T)


def suite_theta_basics(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("theta-basics")
    orders = {"q_order": q_order, "y_order": 10}
    for fam in THETA_FAMILIES:
        s = theta_expand(fam, 10, q_order)
        _exact(rep, f"parity-{fam}", f"{fam} is {PARITY[fam]} in v",
               s.scan_parity() == PARITY[fam], orders, found=s.scan_parity())
    for fam in ("theta1", "theta2", "theta3"):
        got = theta_null(fam, q_order)
        _exact(rep, f"null-{fam}", f"product and lattice-sum forms of {fam}(0) agree",
               got.agrees(_null_by_sum(fam, q_order)), orders)
    got = theta_prime_null(q_order).scale(PI.inverse())
    _exact(rep, "null-theta-prime", "theta'(0) against its odd lattice sum",
           got.agrees(_theta_prime_by_sum(q_order)), orders)
    for fam in FAMILIES:
        f = f_quotient(fam, 6, q_order)
        u = u_factor(fam, 6, q_order)
        ok = f.coeff(0).agrees(QExpansion.constant(Scalar.rational(1))) and \
            u.coeff(0).agrees(QExpansion.constant(Scalar.rational(1)))
        _exact(rep, f"normalized-{fam}", f"quotients of {fam} equal 1 at v = 0", ok, orders)
    for name in COMBOS:
        h = logderiv_combo(name, 8, q_order)
        ok = h.valuation() >= 1 and h.scan_parity() == "odd" and h.pi_degrees() == {1}
        _exact(rep, f"combo-{name}", f"{name} is odd, pole-free and of pi-degree 1", ok, orders)
    return rep


# -- jacobi -------------------------------------------------------------------

def suite_jacobi(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("jacobi")
    lhs = theta_prime_null(q_order)
    rhs = (theta_null("theta1", q_order) * theta_null("theta2", q_order)
           * theta_null("theta3", q_order)).scale(PI)
    T = qtrunc(q_order)
    diff = lhs.truncate(T) - rhs.truncate(T)
    _exact(rep, "jacobi-identity", "theta'(0) = pi theta1(0) theta2(0) theta3(0)",
           diff.is_zero(), {"q_order": q_order}, compared_terms=len(lhs.truncate(T).terms))
    return rep


# -- t-laws -------------------------------------------------------------------

_T_PARTNER = {"theta": ("theta", True), "theta1": ("theta1", True),
              "theta2": ("theta3", False), "theta3": ("theta2", False)}


def suite_t_laws(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("t-laws")
    orders = {"q_order": q_order, "y_order": 10}
    for fam in THETA_FAMILIES:
        img, phase = _T_PARTNER[fam]
        s, t = theta_expand(fam, 10, q_order), theta_expand(img, 10, q_order)
        if phase:
            t = t.scale(ZETA8)
        _exact(rep, f"t-law-{fam}", f"{fam}(v, tau+1) in terms of {img}(v, tau)",
               s.tau_shift().agrees(t), orders)
        _exact(rep, f"t-law-{fam}-derivative", f"v-derivative of the {fam} T-law",
               theta_prime(s).tau_shift().agrees(theta_prime(t)), orders)
    for name, fn in (("delta", delta), ("epsilon", epsilon)):
        for i in (1, 2, 3):
            f = fn(i, q_order)
            img = t_transform(f)
            j = {1: 1, 2: 3, 3: 2}[i]
            ok = img.series.agrees(fn(j, q_order).series) and img.group == fn(j, q_order).group
            _exact(rep, f"t-law-{name}{i}", f"{name}{i}(tau+1) = {name}{j}(tau)", ok,
                   {"q_order": q_order})
    spec = RingSpec.for_dimension(11, q_order)
    for fam, img in (("Phi_L", "Phi_L"), ("Phi_W", "Phi_W'"), ("Phi_W'", "Phi_W")):
        ok = phi_form(fam, spec).tau_shift().agrees(phi_form(img, spec))
        _exact(rep, f"t-law-{fam}", f"{fam}(tau+1) = {img}(tau) in dimension 11", ok,
               {"q_order": q_order, "D": 11})
    return rep


# -- cs-t-laws ----------------------------------------------------------------

def suite_cs_t_laws(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("cs-t-laws")
    for kind in CS_KINDS:
        D = 9 if kind == "tilde" else 11
        spec = RingSpec.for_dimension(D, q_order)
        fams = TILDE_FAMILIES if kind == "tilde" else FAMILIES
        L, W, Wp = fams
        forms = {f: cs_form(kind, f, spec) for f in fams}
        for src, dst in ((L, L), (W, Wp), (Wp, W)):
            ok = forms[src].tau_shift().element.agrees(forms[dst].element)
            _exact(rep, f"cs-t-law-{kind}-{src}", f"{kind} transgression of {src} at tau+1 "
                   f"equals that of {dst}", ok, {"q_order": q_order, "D": D})
    return rep


# -- s-laws (numerical) -------------------------------------------------------

def suite_s_laws(q_order: int, tol: float | None = None, taus=None, **_) -> VerificationReport:
    kwargs = {}
    if tol is not None:
        kwargs["tol"] = tol
    if taus:
        kwargs["tau_samples"] = tuple(taus)
    cfg = EvalConfig(**kwargs)
    rep = VerificationReport("s-laws")
    rep.extend(check_s_laws(cfg, q_order=max(q_order, 12)))
    rep.extend(check_quotient_s_laws(cfg))
    rep.extend(check_oracle_agreement(cfg))
    return rep


# -- modform-fourier ----------------------------------------------------------

# leading coefficients, keyed by exponent in eighths of q
_FOURIER_HEADS = {
    ("delta", 1): {0: Fraction(1, 4), 8: 6},
    ("epsilon", 1): {0: Fraction(1, 16), 8: -1},
    ("delta", 2): {0: Fraction(-1, 8), 4: -3},
    ("epsilon", 2): {0: 0, 4: 1},
    ("delta", 3): {0: Fraction(-1, 8), 4: 3},
    ("epsilon", 3): {0: 0, 4: -1},
}


def suite_modform_fourier(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("modform-fourier")
    order = max(q_order, 8)
    for (name, i), head in _FOURIER_HEADS.items():
        f = (delta if name == "delta" else epsilon)(i, order)
        got = {n: f.series.coeff(n) for n in head}
        ok = all(got[n] == Scalar.rational(c) for n, c in head.items())
        _exact(rep, f"fourier-head-{name}{i}", f"leading Fourier coefficients of {name}{i}",
               ok, {"q_order": order}, expected={str(n): str(c) for n, c in head.items()})
        top = max(head)
        higher = [c for n, c in f.series.terms.items() if n > top]
        integral = all(c.is_rational() and c.as_fraction().denominator == 1 for c in higher)
        _exact(rep, f"fourier-integral-{name}{i}",
               f"higher Fourier coefficients of {name}{i} are integers", integral,
               {"q_order": order}, checked=len(higher))
    return rep


# -- route-crosscheck ---------------------------------------------------------

_ROUTE_CASES = (("plain", 1, 3, 2), ("plain", 3, 11, 2), ("tilde", 2, 9, 1))


def suite_route_crosscheck(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("route-crosscheck")
    for kind, k, D, Q in _ROUTE_CASES:
        spec = RingSpec.for_dimension(D, Q)
        fams = TILDE_FAMILIES if kind == "tilde" else FAMILIES
        for fam in fams:
            if kind == "tilde":
                a = phi_tilde_route(fam, spec, "theta")
                b = phi_tilde_route(fam, spec, "bundle")
            else:
                a = phi_theta_route(fam, spec)
                b = phi_bundle_route(fam, spec)
            _exact(rep, f"routes-{fam}-D{D}", f"theta and bundle constructions of {fam} agree",
                   a == b, {"q_order": Q, "D": D, "k": k}, terms=len(a.terms))
    return rep


# -- dim3-special -------------------------------------------------------------

_DIM3 = {"Phi_L": (1, Fraction(1, 2)), "Phi_W": (2, Fraction(1, 8)),
         "Phi_W'": (3, Fraction(1, 8))}


def suite_dim3_special(q_order: int, **_) -> VerificationReport:
    rep = VerificationReport("dim3-special")
    order = max(q_order, 8)
    h = logderiv_combo("xi-L", 3, order)
    # d/dv at 0 is pi times the y^1 coefficient
    lhs = h.coeff(1).scale(PI)
    rhs = delta(1, order).series.scale(Scalar.rational(8) * PI * PI)
    _exact(rep, "dim3-combo", "v-derivative at 0 of the xi-L combination is 8 pi^2 delta1",
           lhs.agrees(rhs), {"q_order": order})
    spec = RingSpec.for_dimension(3, order)
    unit_b = ((0,) * spec.n_roots, 1, "b")
    inv_pi2 = (PI * PI).inverse()
    for fam, (i, c) in _DIM3.items():
        el = cs_xi(fam, spec).element.restrict_degree(3)
        # U b stands for 8 times the Chern-Simons trace of the twist connection
        expected = delta(i, order).series.scale(Scalar.rational(8 * c) * inv_pi2)
        ok = set(el.terms) == {unit_b} and el.coeff(unit_b).agrees(expected)
        _exact(rep, f"dim3-{fam}", f"xi transgression of {fam} in dimension 3 is "
               f"{c}/pi^2 delta{i} times the trace form", ok, {"q_order": order, "D": 3})
    return rep


# -- cancellation -------------------------------------------------------------

def _cancel_runner(case_id: str) -> Callable[..., VerificationReport]:
    def run(q_order: int, **_) -> VerificationReport:
        r = derive(case_id, q_order)
        rep = VerificationReport(f"cancel-{case_id}")
        orders = {"q_order": q_order, "D": CASES[case_id][3]}
        _exact(rep, f"{case_id}-decomposition", "top form of the W family lies in the weight-6 ring",
               r.failure is None and r.w_residual_zero, orders, failure=r.failure)
        _exact(rep, f"{case_id}-l-side", "L family equals 2^6 times the transformed decomposition",
               r.residual_zero, orders)
        _exact(rep, f"{case_id}-constants", "q^0 terms give the cancellation formula",
               r.constants_equal, orders, closed_forms=r.display_checks)
        rep.attachments["cancellation"] = r.to_json()
        return rep
    return run


SUITES: dict[str, Callable[..., VerificationReport]] = {
    "theta-basics": suite_theta_basics,
    "jacobi": suite_jacobi,
    "t-laws": suite_t_laws,
    "s-laws": suite_s_laws,
    "modform-fourier": suite_modform_fourier,
    "route-crosscheck": suite_route_crosscheck,
    "cs-t-laws": suite_cs_t_laws,
    "dim3-special": suite_dim3_special,
}
for _cid in CASES:
    SUITES[f"cancel-{_cid}"] = _cancel_runner(_cid)

SUITE_IDS = tuple(SUITES) + ("all",)


def run_suite(suite: str, q_order: int | None = None, tol: float | None = None,
              taus=None) -> VerificationReport:
    """Run one suite, or every suite for ``"all"``."""
    if suite not in SUITE_IDS:
        raise ValueError(f"unknown suite {suite!r}; expected one of {list(SUITE_IDS)}")
    q = default_q_order() if q_order is None else q_order
    if suite != "all":
        return SUITES[suite](q_order=q, tol=tol, taus=taus)
    rep = VerificationReport("all")
    for name, fn in SUITES.items():
        # cancellation needs at least two half-integer steps
        q_here = max(q, 2) if name.startswith("cancel-") else q
        part = fn(q_order=q_here, tol=tol, taus=taus)
        rep.extend(part)
        rep.attachments.update({f"{name}:{k}": v for k, v in part.attachments.items()})
    return rep
