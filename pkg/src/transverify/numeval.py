"""Floating-point evaluation of theta functions and the S-transformation checks.

``tau -> -1/tau`` is not an operation on truncated q-series, so every law
involving it is checked here by evaluating both sides at sample points.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


from ._kernels import BACKEND, theta_kernel
from .modforms import delta, epsilon
from .qseries import q_eval
from .report import CheckResult, VerificationReport, cjson
from .theta import THETA_FAMILIES, theta_expand

__all__ = [
    "EvalConfig",
    "theta_eval",
    "theta_deriv_eval",
    "check_s_laws",
    "check_quotient_s_laws",
    "check_oracle_agreement",
    "residual",
    "BACKEND",
]

DEFAULT_TAUS = (1.1j, 0.3 + 1.2j, -0.4 + 0.9j)
DEFAULT_VS = (0.3 + 0.1j, 0.17 + 0.05j, -0.21 + 0.08j)
_CODE = {name: i for i, name in enumerate(THETA_FAMILIES)}


@dataclass(frozen=True)
class EvalConfig:
    product_terms: int = 40
    tau_samples: tuple = DEFAULT_TAUS
    v_samples: tuple = DEFAULT_VS
    tol: float = 1e-9

    def __post_init__(self):
        taus = tuple(complex(t) for t in self.tau_samples)
        for t in taus:
            if t.imag < 0.5:
                raise ValueError(f"tau sample {t} has Im tau < 0.5")
        object.__setattr__(self, "tau_samples", taus)
        object.__setattr__(self, "v_samples", tuple(complex(v) for v in self.v_samples))


_DEFAULT = EvalConfig()


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau={tau} is not in the upper half-plane")
    return tau


def theta_eval(family: str, v: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    cfg = cfg or _DEFAULT
    val, _ = theta_kernel(_CODE[family], v, _check_tau(tau), cfg.product_terms)
    return complex(val[0])


def theta_deriv_eval(family: str, v: complex, tau: complex, cfg: EvalConfig | None = None) -> complex:
    """d/dv of the theta function, from the differentiated product."""
    cfg = cfg or _DEFAULT
    _, der = theta_kernel(_CODE[family], v, _check_tau(tau), cfg.product_terms)
    return complex(der[0])


def residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs))


def _sqrt_factor(tau: complex) -> complex:
    """(tau/i)^(1/2) on the principal branch."""
    return cmath.sqrt(tau / 1j)


class _Evaluator:
    """Memoizing wrapper so repeated theta values are computed once."""

    def __init__(self, cfg: EvalConfig):
        self.cfg = cfg
        self._cache: dict = {}

    def both(self, fam: str, v: complex, tau: complex):
        key = (fam, complex(v), complex(tau))
        hit = self._cache.get(key)
        if hit is None:
            val, der = theta_kernel(_CODE[fam], v, _check_tau(tau), self.cfg.product_terms)
            hit = (complex(val[0]), complex(der[0]))
            self._cache[key] = hit
        return hit

    def val(self, fam, v, tau):
        return self.both(fam, v, tau)[0]

    def der(self, fam, v, tau):
        return self.both(fam, v, tau)[1]

    def logd(self, fam, v, tau):
        val, der = self.both(fam, v, tau)
        return der / val


@dataclass
class _Law:
    law_id: str
    anchor: str
    samples: list = field(default_factory=list)

    def add(self, lhs: complex, rhs: complex, **where):
        entry = {k: cjson(x) for k, x in where.items()}
        entry.update(lhs=cjson(lhs), rhs=cjson(rhs), residual=residual(lhs, rhs))
        self.samples.append(entry)

    def result(self, tol: float, orders: dict) -> CheckResult:
        worst = max((s["residual"] for s in self.samples), default=0.0)
        ok = bool(self.samples) and worst < tol
        return CheckResult(self.law_id, self.anchor, ok,
                           {"law_id": self.law_id, "max_residual": worst, "tol": tol,
                            "samples": self.samples}, orders)


# S images of the four families and whether the law carries an extra 1/i
_S_IMAGE = {"theta": ("theta", True), "theta1": ("theta2", False),
            "theta2": ("theta1", False), "theta3": ("theta3", False)}


def check_s_laws(cfg: EvalConfig | None = None, q_order: int = 12) -> VerificationReport:
    """Theta, theta-derivative, theta'(0) and delta/epsilon S-laws."""
    cfg = cfg or _DEFAULT
    ev = _Evaluator(cfg)
    rep = VerificationReport("s-laws")
    orders = {"product_terms": cfg.product_terms}
    for fam in THETA_FAMILIES:
        img, extra = _S_IMAGE[fam]
        law = _Law(f"s-law-{fam}", f"{fam}(v,-1/tau) in terms of {img}(tau v,tau)")
        dlaw = _Law(f"s-law-{fam}-derivative", f"v-derivative of the {fam} S-law")
        for tau in cfg.tau_samples:
            st = -1 / tau
            pref = _sqrt_factor(tau) * (1 / 1j if extra else 1)
            for v in cfg.v_samples:
                gauss = cmath.exp(1j * math.pi * tau * v * v)
                law.add(ev.val(fam, v, st), pref * gauss * ev.val(img, tau * v, tau), v=v, tau=tau)
                rhs = pref * gauss * (2j * math.pi * tau * v * ev.val(img, tau * v, tau)
                                      + tau * ev.der(img, tau * v, tau))
                dlaw.add(ev.der(fam, v, st), rhs, v=v, tau=tau)
        rep.add(law.result(cfg.tol, orders))
        rep.add(dlaw.result(cfg.tol, orders))
    law = _Law("s-law-theta-prime-null", "theta'(0,-1/tau) = (1/i)(tau/i)^(1/2) tau theta'(0,tau)")
    for tau in cfg.tau_samples:
        law.add(ev.der("theta", 0, -1 / tau),
                (1 / 1j) * _sqrt_factor(tau) * tau * ev.der("theta", 0, tau), tau=tau)
    rep.add(law.result(cfg.tol, orders))
    rep.extend(check_modform_s_laws(cfg, q_order))
    return rep


def check_modform_s_laws(cfg: EvalConfig | None = None, q_order: int = 12) -> VerificationReport:
    """delta_2(-1/tau) = tau^2 delta_1(tau), epsilon_2(-1/tau) = tau^4 epsilon_1(tau)."""
    cfg = cfg or _DEFAULT
    rep = VerificationReport("s-laws")
    orders = {"q_order": q_order}
    for name, fn, weight in (("delta", delta, 2), ("epsilon", epsilon, 4)):
        s2, s1 = fn(2, q_order).series, fn(1, q_order).series
        law = _Law(f"s-law-{name}2", f"{name}2(-1/tau) = tau^{weight} {name}1(tau)")
        tails = []
        for tau in cfg.tau_samples:
            lhs = q_eval(s2, -1 / tau)
            rhs = q_eval(s1, tau)
            tails.append(lhs.tail + abs(tau) ** weight * rhs.tail)
            law.add(lhs.value, tau ** weight * rhs.value, tau=tau)
        res = law.result(cfg.tol, orders)
        res.detail["tail_bound"] = max(tails)
        rep.add(res)
    return rep


def _f_quotient(ev, fam_j, z, tau):
    return z * ev.der("theta", 0, tau) / ev.val("theta", z, tau) * ev.val(fam_j, z, tau) / ev.val(fam_j, 0, tau)


def _u_factor(ev, a, b, c, u, tau):
    ra = ev.val(a, 0, tau) / ev.val(a, u, tau)
    return ra * ra * ev.val(b, u, tau) / ev.val(b, 0, tau) * ev.val(c, u, tau) / ev.val(c, 0, tau)


def _tilde_factor(ev, a, b, c, u, tau):
    first = ev.val(a, u, tau) / ev.val(a, 0, tau)
    second = (ev.val(a, 0, tau) / ev.val(a, u, tau) * ev.val(b, u, tau) / ev.val(b, 0, tau)
              * ev.val(c, u, tau) / ev.val(c, 0, tau))
    return ev.der("theta", 0, tau) / ev.val("theta", u, tau) * (first - second)


def _tm_combo(ev, fam_j, z, tau):
    return 1 / z - ev.logd("theta", z, tau) + ev.logd(fam_j, z, tau)


def _xi_combo(ev, a, b, c, z, tau):
    return ev.logd(a, z, tau) + ev.logd(b, z, tau) - 2 * ev.logd(c, z, tau)


_U_ARGS = {"L": ("theta1", "theta3", "theta2"), "W": ("theta2", "theta3", "theta1"),
           "W'": ("theta3", "theta1", "theta2")}
_XI_ARGS = {"L": ("theta2", "theta3", "theta1"), "W": ("theta3", "theta1", "theta2"),
            "W'": ("theta2", "theta1", "theta3")}
_LEAD = {"L": "theta1", "W": "theta2", "W'": "theta3"}
# S maps the L quotients to W ones and back; W' is mapped to itself
_S_PARTNER = {"L": "W", "W": "L", "W'": "W'"}


def check_quotient_s_laws(cfg: EvalConfig | None = None) -> VerificationReport:
    """S-laws of the theta quotients entering the Phi forms and their transgressions."""
    cfg = cfg or _DEFAULT
    ev = _Evaluator(cfg)
    rep = VerificationReport("s-laws")
    orders = {"product_terms": cfg.product_terms}
    for fam, partner in _S_PARTNER.items():
        laws = {
            "f": _Law(f"s-law-f-quotient-{fam}", f"f_{fam}(z,-1/tau) = f_{partner}(tau z,tau)"),
            "tm": _Law(f"s-law-tm-combo-{fam}", f"tm combo {fam} at -1/tau = tau * tm combo {partner}"),
            "u": _Law(f"s-law-u-factor-{fam}", f"u-factor {fam} at -1/tau = u-factor {partner} at tau u"),
            "xi": _Law(f"s-law-xi-combo-{fam}", f"xi combo {fam} at -1/tau = tau * xi combo {partner}"),
            "tilde": _Law(f"s-law-tilde-u-factor-{fam}",
                          f"twisted u-factor {fam} at -1/tau = tau * twisted u-factor {partner}"),
        }
        for tau in cfg.tau_samples:
            st = -1 / tau
            for z in cfg.v_samples:
                tz = tau * z
                laws["f"].add(_f_quotient(ev, _LEAD[fam], z, st), _f_quotient(ev, _LEAD[partner], tz, tau),
                              v=z, tau=tau)
                laws["tm"].add(_tm_combo(ev, _LEAD[fam], z, st), tau * _tm_combo(ev, _LEAD[partner], tz, tau),
                               v=z, tau=tau)
                laws["u"].add(_u_factor(ev, *_U_ARGS[fam], z, st), _u_factor(ev, *_U_ARGS[partner], tz, tau),
                              v=z, tau=tau)
                laws["xi"].add(_xi_combo(ev, *_XI_ARGS[fam], z, st),
                               tau * _xi_combo(ev, *_XI_ARGS[partner], tz, tau), v=z, tau=tau)
                laws["tilde"].add(_tilde_factor(ev, *_U_ARGS[fam], z, st),
                                  tau * _tilde_factor(ev, *_U_ARGS[partner], tz, tau), v=z, tau=tau)
        for law in laws.values():
            rep.add(law.result(cfg.tol, orders))
    return rep


def check_oracle_agreement(cfg: EvalConfig | None = None, y_order: int = 24, q_order: int = 8,
                           tol: float = 1e-8) -> VerificationReport:
    """Exact expansions evaluated numerically against the product kernel."""
    cfg = cfg or _DEFAULT
    rep = VerificationReport("oracle")
    orders = {"y_order": y_order, "q_order": q_order, "product_terms": cfg.product_terms}
    for fam in THETA_FAMILIES:
        s = theta_expand(fam, y_order, q_order)
        law = _Law(f"oracle-{fam}", f"exact {fam} expansion against the product formula")
        bounds = []
        for tau in cfg.tau_samples:
            for v in cfg.v_samples:
                y = math.pi * v
                val, tail = s.evaluate(y, tau)
                # cos(2y) factors make the y^d coefficients grow like 2^d/d!
                r = 2 * abs(y)
                y_tail = 4.0 * math.cosh(2 * abs(y.imag) + 1) * r ** y_order / math.factorial(y_order)
                y_tail /= max(1e-3, 1 - r / (y_order + 1))
                bounds.append(tail + y_tail)
                law.add(theta_eval(fam, v, tau, cfg), val, v=v, tau=tau)
        res = law.result(tol, orders)
        res.detail["truncation_bound"] = max(bounds)
        rep.add(res)
    return rep


def modform_eval(name: str, tau: complex, q_order: int = 12) -> complex:
    """delta_i or epsilon_i from theta nullwerte evaluated numerically."""
    ev = _Evaluator(_DEFAULT)
    t1, t2, t3 = (ev.val(f, 0, tau) ** 4 for f in ("theta1", "theta2", "theta3"))
    table = {
        "delta1": (t2 + t3) / 8, "epsilon1": t2 * t3 / 16,
        "delta2": -(t1 + t3) / 8, "epsilon2": t1 * t3 / 16,
        "delta3": (t1 - t2) / 8, "epsilon3": -t1 * t2 / 16,
    }
    return table[name]


def numeric_fourier_coefficient(name: str, n: int, radius: float = 0.05, points: int = 64) -> complex:
    """q^n coefficient of an integer-exponent form by a discrete Cauchy integral.

    Uses q = radius * e^(2 pi i k / points), i.e. tau = log(q) / (2 pi i).
    """
    acc = 0j
    for k in range(points):
        phase = 2 * math.pi * k / points
        tau = (math.log(radius) + 1j * phase) / (2j * math.pi)
        acc += modform_eval(name, tau) * cmath.exp(-1j * n * phase)
    return acc / points / radius ** n
