from fractions import Fraction as F

import pytest
from hypothesis import given

from floorcc.formulas import EvaluationError, evaluate, free_vars, nnf, simplify
from floorcc.parser import parse_formula

from strategies import envs


def ev(text, **env):
    return evaluate(parse_formula(text), {k: F(v) for k, v in env.items()})


def test_ground_examples():
    assert ev("Z(7/2)") is False
    assert ev("floor(-1/2) = -1") is True
    assert ev("div(3, 12)") is True
    assert ev("div(3, 10)") is False


def test_congruence():
    assert ev("cong(x, 3, 2)", x=8)
    assert ev("cong(x, 3, 2)", x=-1)
    assert not ev("cong(x, 3, 2)", x=F(5, 2))


def test_quantifiers_rejected_or_unassigned():
    with pytest.raises(EvaluationError):
        ev("x < 1")


def test_free_vars():
    assert free_vars(parse_formula("E x. x < y & Z(z)")) == {"y", "z"}


SAMPLES = [
    "x < 1 & x < 2 & ~(x < 0)",
    "~(Z(x) -> floor(x) = x) | y <= 1/2",
    "cong(2*x + floor(y), 3, 1) & ~(x = y)",
    "(x < y <-> y < z) & Z(x + y)",
]


@pytest.mark.parametrize("text", SAMPLES)
@given(env=envs)
def test_simplify_and_nnf_preserve_truth(text, env):
    f = parse_formula(text)
    assert evaluate(simplify(f), env) == evaluate(f, env)
    assert evaluate(nnf(f), env) == evaluate(f, env)
