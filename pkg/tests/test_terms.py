import random
from fractions import Fraction as F

from hypothesis import given

from floorcc.terms import (
    Affine,
    Floor,
    Var,
    collapse_floors,
    evaluate_term,
    floor_of,
    floor_q,
    format_term,
    linear_normalize,
    normalize,
)

from strategies import envs, rationals, small_coeffs, terms

x, y = Var("x"), Var("y")


def test_collapse_nested_floor_sum():
    assert format_term(collapse_floors(Floor(Floor(x) + y))) == "floor(x) + floor(y)"


def test_collapse_idempotent_floor():
    assert collapse_floors(Floor(Floor(Floor(x)))) == Affine.make({Floor(Affine.var("x")): 1})


def test_collapse_integer_shift():
    t = Floor(x + 3)
    c = collapse_floors(t)
    assert format_term(c) == "floor(x) + 3"
    rng = random.Random(5)
    for _ in range(20):
        v = F(rng.randint(-200, 200), rng.randint(1, 9))
        assert evaluate_term(t, {"x": v}) == evaluate_term(c, {"x": v})


def test_linear_normalize_examples():
    assert linear_normalize(2 * (x + y) + x) == Affine.make({"x": 3, "y": 2})
    assert linear_normalize(F(1, 2) * Floor(x) + Floor(x)) == Affine.make({Floor(Affine.var("x")): F(3, 2)})
    assert linear_normalize(x - x + 1) == Affine.constant(1)


def test_floor_of_negative_rationals():
    assert floor_q(F(-1, 2)) == -1
    assert floor_q(F(-3)) == -3
    assert floor_q(F(7, 2)) == 3


@given(terms(), envs)
def test_collapse_preserves_value(t, env):
    assert evaluate_term(collapse_floors(t), env) == evaluate_term(t, env)


@given(terms(), envs)
def test_linear_normalize_preserves_value(t, env):
    assert evaluate_term(linear_normalize(t), env) == evaluate_term(t, env)


@given(terms(), envs)
def test_normalize_preserves_value(t, env):
    assert normalize(t).evaluate(env) == evaluate_term(t, env)


@given(terms())
def test_collapse_is_idempotent(t):
    once = collapse_floors(t)
    assert normalize(collapse_floors(once)) == normalize(once)


@given(envs)
def test_floor_axioms_hold_pointwise(env):
    a, b = env["x"], env["y"]
    assert floor_q(F(1)) == 1
    assert floor_q(a) <= a < floor_q(a) + 1
    assert floor_q(floor_q(a) + b) == floor_q(a) + floor_q(b)
    if 0 <= a < 1:
        assert floor_q(a) == 0


def test_floor_merges_with_matching_outer_floor():
    # floor(3/2 u - 2 floor(3/2 u) + 5) = -floor(3/2 u) + 5
    t = normalize(Affine.make({"u": F(3, 2), Floor(Affine.make({"u": F(3, 2)})): -2}, 5))
    assert str(floor_of(t)) == "-floor(3/2*u) + 5"
    for k in range(16):
        u = F(k, 16)
        assert floor_of(t).evaluate({"u": u}) == floor_q(t.evaluate({"u": u}))


@given(small_coeffs, small_coeffs, small_coeffs, rationals, rationals)
def test_floor_of_nested_shapes(a, b, c, d, u):
    inner = Floor(Affine.make({"u": c}, d))
    t = normalize(Affine.make({"u": a, inner: b}, d))
    assert floor_of(t).evaluate({"u": u}) == floor_q(t.evaluate({"u": u}))
