import random
from fractions import Fraction as F

import pytest

from floorcc.formulas import And, Eq, Exists, IsInt, Lt, Not, format_formula
from floorcc.parser import ParseError, parse_formula, parse_rational, parse_term
from floorcc.terms import Affine, Floor

from qe_oracle import random_formula


def test_quantified_conjunction():
    f = parse_formula("E x. (Z(x) & 0 < x & x < 1)")
    assert isinstance(f, Exists) and f.var == "x"
    assert isinstance(f.body, And)
    assert f.body.args[0] == IsInt(Affine.var("x"))


def test_axiom_atom_over_floors():
    f = parse_formula("floor(floor(x) + y) = floor(x) + floor(y)")
    assert isinstance(f, Eq)
    floors = [k for k, _ in f.form.terms if isinstance(k, Floor)]
    assert len(floors) == 3


def test_rational_coefficients():
    assert parse_formula("1/3 * x + -2 < 0") == Lt(Affine.make({"x": F(1, 3)}, -2))


def test_derived_relations():
    assert parse_formula("x >= 1") == Not(Lt(Affine.make({"x": 1}, -1)))
    assert parse_formula("x != y") == Not(Eq(Affine.make({"x": 1, "y": -1})))
    assert parse_formula("x > y") == parse_formula("y < x")


def test_multi_variable_quantifier():
    assert parse_formula("A x y. x < y") == parse_formula("A x. A y. x < y")


def test_terms_and_rationals():
    assert str(parse_term("2*(x+y)+x")) == "2*(x + y) + x"
    assert parse_rational("-3/6") == F(-1, 2)


@pytest.mark.parametrize(
    "text, column",
    [("x < ", 5), ("x * y < 1", 5), ("E . x < 1", 3), ("cong(x, 0, 1)", 9), ("foo(x) = 1", 1), ("x < 1)", 6)],
)
def test_errors_carry_position(text, column):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.line == 1
    assert info.value.column == column


def test_error_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_formula("x < 1 &\n  y <")
    assert info.value.line == 2


def test_format_round_trip_on_random_formulas():
    rng = random.Random(3)
    for _ in range(500):
        f = random_formula(rng, floor_depth=2)
        text = format_formula(f)
        g = parse_formula(text)
        assert g == f, text
        assert format_formula(g) == text
