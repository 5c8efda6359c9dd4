"""Hypothesis strategies shared by the property tests."""
from fractions import Fraction

from hypothesis import strategies as st

from floorcc.terms import Const, Floor, Scale, Sum, Var

NAMES = ("x", "y", "z")

rationals = st.builds(
    Fraction,
    st.integers(min_value=-40, max_value=40),
    st.sampled_from((1, 2, 3, 4, 6, 7)),
)
small_coeffs = st.sampled_from([Fraction(c) for c in (1, -1, 2, -2, 3)] + [Fraction(1, 2), Fraction(-1, 3), Fraction(2, 3)])


def terms(max_leaves: int = 8):
    leaves = st.one_of(st.builds(Const, rationals), st.builds(Var, st.sampled_from(NAMES)))
    return st.recursive(
        leaves,
        lambda inner: st.one_of(
            st.builds(Scale, small_coeffs, inner),
            st.builds(Sum, inner, inner),
            st.builds(Floor, inner),
        ),
        max_leaves=max_leaves,
    )


envs = st.fixed_dictionaries({n: rationals for n in NAMES})
