"""Hypothesis strategies shared by the property tests."""

from fractions import Fraction

from hypothesis import strategies as st

from transverify.qseries import QExpansion
from transverify.scalars import CycloRational, Scalar

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)

cyclo = st.lists(small_fractions, min_size=4, max_size=4).map(CycloRational)


@st.composite
def scalars(draw, pi_degrees=(0,)):
    degs = draw(st.lists(st.sampled_from(pi_degrees), min_size=0, max_size=2, unique=True))
    return Scalar({d: draw(cyclo) for d in degs})


@st.composite
def rational_scalars(draw, pi_degree=0):
    return Scalar.rational(draw(small_fractions), pi_degree)


@st.composite
def qexpansions(draw, trunc=24, max_terms=5, coeffs=None):
    coeffs = scalars() if coeffs is None else coeffs
    exps = draw(st.lists(st.integers(0, trunc - 1), max_size=max_terms, unique=True))
    return QExpansion({n: draw(coeffs) for n in exps}, trunc)


@st.composite
def units(draw, trunc=24):
    """Truncated series with an invertible constant term."""
    lead = draw(small_fractions.filter(lambda f: f != 0))
    rest = draw(qexpansions(trunc, 4, rational_scalars()))
    return rest.truncate(trunc) + QExpansion.constant(Scalar.rational(Fraction(lead)), trunc) \
        - QExpansion.constant(rest.coeff(0), trunc)
