from fractions import Fraction as F

from floorcc.constructions import build_ladder, build_sd, squares_spec
from floorcc.polyhedra import box_cell, closed, point_iv
from floorcc.verify import (
    compare_with_oracle,
    oracle_components,
    verify_divisibility,
    verify_ladder,
    verify_multiples,
)


def seg2(p, q):
    return box_cell([closed(min(a, b), max(a, b)) if a != b else point_iv(a) for a, b in zip(p, q)])


def test_oracle_two_disjoint_segments():
    assert oracle_components([seg2((0, 0), (1, 0)), seg2((2, 0), (3, 0))]) == [[0], [1]]


def test_oracle_chain_of_segments():
    pieces = [seg2((0, 0), (1, 0)), seg2((1, 0), (1, 1)), seg2((1, 1), (0, 1))]
    assert oracle_components(pieces) == [[0, 1, 2]]


def test_oracle_needs_a_shared_point():
    # half-open pieces whose closures meet only outside both
    from floorcc.polyhedra import Interval

    a = box_cell([Interval(F(0), F(1), False, True)])
    b = box_cell([Interval(F(1), F(2), True, False)])
    assert oracle_components([a, b]) == [[0], [1]]


def test_oracle_agrees_on_shifted_ladder():
    inst = build_sd(2, 16)
    agreement = compare_with_oracle(inst.pieces, inst.complex())
    assert agreement.ok, agreement.problems
    assert agreement.oracle_classes == agreement.complex_components == 2


def test_oracle_agrees_on_square_ladder():
    inst = build_ladder(squares_spec())
    assert compare_with_oracle(inst.pieces, inst.complex()).ok


def test_verify_multiples_report():
    r = verify_multiples(2, 8)
    assert r.match
    assert [p[0] for p in r.expected] == [2, 4, 6, 8, 10, 12, 14, 16]
    assert r.lines()[0] == "multiples d=2: match"


def test_verify_small_window_warns():
    r = verify_multiples(2, 8, window=10)
    assert r.warnings
    assert r.match


def test_verify_divisibility_small():
    r = verify_divisibility(3)
    assert r.match
    assert (F(7), F(0), F(0), F(3)) in r.computed


def test_verify_ladder_machine_lines():
    r = verify_ladder(squares_spec())
    lines = r.lines(machine=True)
    assert lines[0].startswith("name\tladder")
    assert lines[-1] == "match\ttrue"
    assert [ln for ln in lines if ln.startswith("expected")] == [f"expected\t({k}, 0, 0)" for k in (1, 4, 9, 16, 25)]
