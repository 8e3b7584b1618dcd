"""The six weight-2/weight-4 forms built from theta nullwerte, and decomposition
in the two-generator rings they span."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .qseries import DENOM, QExpansion, qtrunc, tau_shift
from .scalars import Scalar
from .theta import theta_null

__all__ = [
    "ModularGroup",
    "ModularForm",
    "DecompositionError",
    "InsufficientOrderError",
    "delta",
    "epsilon",
    "t_transform",
    "basis_monomials",
    "basis_decompose",
    "basis_build",
]


class ModularGroup(str, enum.Enum):
    GAMMA0_2 = "Gamma_0(2)"
    GAMMA0_2_UPPER = "Gamma^0(2)"
    GAMMA_THETA = "Gamma_theta"


# tau -> tau + 1 normalizes Gamma_0(2) and swaps the other two
_T_IMAGE = {
    ModularGroup.GAMMA0_2: ModularGroup.GAMMA0_2,
    ModularGroup.GAMMA0_2_UPPER: ModularGroup.GAMMA_THETA,
    ModularGroup.GAMMA_THETA: ModularGroup.GAMMA0_2_UPPER,
}

_GROUP_OF_INDEX = {1: ModularGroup.GAMMA0_2, 2: ModularGroup.GAMMA0_2_UPPER,
                   3: ModularGroup.GAMMA_THETA}


class DecompositionError(ArithmeticError):
    """The series is not in the span of the basis monomials up to truncation."""

    def __init__(self, message: str, exponent: int | None = None):
        super().__init__(message)
        self.exponent = exponent


class InsufficientOrderError(ValueError):
    """The working q-order is too small for the requested computation."""


@dataclass(frozen=True)
class ModularForm:
    series: QExpansion
    weight: int
    group: ModularGroup
    name: str = ""

    def __post_init__(self):
        if self.weight % 2:
            raise ValueError("only even weights occur here")
        if any(n % (DENOM // 2) for n in self.series.terms):
            raise ValueError("modular form exponents must lie in (1/2)Z")

    def to_json(self) -> dict:
        return {"name": self.name, "weight": self.weight, "group": self.group.value,
                "series": self.series.to_json()}


def _fourth_powers(q_order: int) -> dict:
    T = qtrunc(q_order)
    out = {}
    for fam in ("theta1", "theta2", "theta3"):
        out[fam] = (theta_null(fam, q_order) ** 4).truncate(T)
    return out


@lru_cache(maxsize=64)
def delta(i: int, q_order: int) -> ModularForm:
    """delta_i as a q-expansion truncated at q**q_order."""
    if q_order < 1:
        raise ValueError("q_order must be >= 1")
    p = _fourth_powers(q_order)
    eighth = Scalar.rational(Fraction(1, 8))
    if i == 1:
        s = (p["theta2"] + p["theta3"]).scale(eighth)
    elif i == 2:
        s = -(p["theta1"] + p["theta3"]).scale(eighth)
    elif i == 3:
        s = (p["theta1"] - p["theta2"]).scale(eighth)
    else:
        raise ValueError("index must be 1, 2 or 3")
    return ModularForm(s, 2, _GROUP_OF_INDEX[i], f"delta{i}")


@lru_cache(maxsize=64)
def epsilon(i: int, q_order: int) -> ModularForm:
    """epsilon_i as a q-expansion truncated at q**q_order."""
    if q_order < 1:
        raise ValueError("q_order must be >= 1")
    p = _fourth_powers(q_order)
    sixteenth = Scalar.rational(Fraction(1, 16))
    if i == 1:
        s = (p["theta2"] * p["theta3"]).scale(sixteenth)
    elif i == 2:
        s = (p["theta1"] * p["theta3"]).scale(sixteenth)
    elif i == 3:
        s = -(p["theta1"] * p["theta2"]).scale(sixteenth)
    else:
        raise ValueError("index must be 1, 2 or 3")
    return ModularForm(s.truncate(qtrunc(q_order)), 4, _GROUP_OF_INDEX[i], f"epsilon{i}")


_T_NAME = {"delta2": "delta3", "delta3": "delta2", "epsilon2": "epsilon3",
           "epsilon3": "epsilon2", "delta1": "delta1", "epsilon1": "epsilon1"}


def t_transform(f: ModularForm) -> ModularForm:
    """f(tau + 1), with the group relabelled by conjugation with T."""
    return ModularForm(tau_shift(f.series), f.weight, _T_IMAGE[f.group],
                       _T_NAME.get(f.name, ""))


def basis_monomials(weight: int) -> list[tuple[int, int]]:
    """Exponent pairs (a, b) with 2a + 4b = weight, ordered by b."""
    if weight < 0 or weight % 2:
        raise ValueError("weight must be a non-negative even integer")
    return [((weight - 4 * b) // 2, b) for b in range(weight // 4 + 1)]


def _q_order_for(trunc) -> int:
    if trunc is None:
        raise ValueError("decomposition needs a truncated series")
    return max(1, -(-trunc // DENOM))


def _monomial_series(a: int, b: int, index: int, q_order: int) -> QExpansion:
    d8 = delta(index, q_order).series.scale(Scalar.rational(8))
    e = epsilon(index, q_order).series
    return (d8 ** a) * (e ** b)


def _solve(matrix: list[list[Scalar]], rhs: list[Scalar]) -> list[Scalar] | None:
    """Exact Gaussian elimination; None when the system is singular."""
    n = len(rhs)
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col] and rows[r][col].is_monomial()), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = rows[col][col].inverse()
        rows[col] = [x * inv for x in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return [rows[r][n] for r in range(n)]


def basis_decompose(f: QExpansion, weight: int, index: int = 2) -> list[tuple[tuple[int, int], Scalar]]:
    """Coefficients of f in the monomials (8 delta_i)^a epsilon_i^b.

    The coefficients are fixed by the first few admissible Fourier
    coefficients (steps of q^(1/2) for indices 2 and 3, of q for index 1);
    every remaining coefficient up to the truncation must then vanish.
    """
    if any(n % (DENOM // 2) for n in f.terms):
        raise DecompositionError("exponents are not in (1/2)Z")
    monos = basis_monomials(weight)
    step = DENOM // 2 if index in (2, 3) else DENOM
    need = step * (len(monos) - 1) + 1
    if f.trunc is not None and f.trunc < need:
        raise InsufficientOrderError(
            f"truncation q^({f.trunc}/8) cannot separate {len(monos)} basis monomials")
    q_order = _q_order_for(f.trunc)
    series = [_monomial_series(a, b, index, q_order).truncate(f.trunc) for a, b in monos]
    sample = [step * j for j in range(len(monos))]
    matrix = [[m.coeff(n) for m in series] for n in sample]
    z = _solve(matrix, [f.coeff(n) for n in sample])
    if z is None:
        raise AssertionError("basis monomials are linearly dependent at the sampled exponents")
    residual = f
    for zi, m in zip(z, series):
        if zi:
            residual = residual - m.scale(zi)
    if not residual.is_zero():
        n = next(iter(residual.terms))
        raise DecompositionError(
            f"weight-{weight} decomposition leaves a nonzero q^({n}/8) coefficient", n)
    return list(zip(monos, z))


def basis_build(coeffs, weight: int, index: int, q_order: int) -> QExpansion:
    """Sum of z_(a,b) (8 delta_i)^a epsilon_i^b for coefficients keyed by (a, b)."""
    coeffs = dict(coeffs)
    total = QExpansion.zero(qtrunc(q_order))
    for a, b in basis_monomials(weight):
        z = coeffs.get((a, b))
        if z:
            total = total + _monomial_series(a, b, index, q_order).scale(z)
    return total.truncate(qtrunc(q_order))
