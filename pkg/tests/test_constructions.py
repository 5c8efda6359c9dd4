from fractions import Fraction as F

import pytest

from floorcc.complex import component_of_point, components, trace
from floorcc.constructions import (
    ConstructionError,
    LadderSpec,
    build_cprime,
    build_gamma,
    build_ladder,
    build_s0,
    build_sd,
    build_x,
    gamma_points,
    gamma_tag,
    parse_ladder_spec,
    positive_x_axis,
    powers_of_two_spec,
    predict_orbit,
    segment,
    squares_spec,
)
from floorcc.polyhedra import cells_adjacent


def pt(*xs):
    return tuple(F(x) for x in xs)


def axis_trace(inst, seed):
    lc = inst.complex()
    fixed, extra = positive_x_axis(3)
    return [p[0] for p in trace(lc, component_of_point(lc, seed), fixed, extra)]


def test_segment_through_interior():
    s = segment((0, 0), (2, 1))
    assert s.contains(pt(1, F(1, 2)))
    assert not s.contains(pt(1, 1))
    assert s.contains(pt(0, 0)) and s.contains(pt(2, 1))


def test_s0_smallest_shell():
    inst = build_s0(1)
    lc = inst.complex()
    assert lc.contains(pt(1, 0, 0))
    assert lc.contains(pt(1, 1, 0)) and lc.contains(pt(0, 1, 1)) and lc.contains(pt(1, 0, 1))
    assert not lc.contains(pt(0, 0, 0))
    assert not lc.contains(pt(F(1, 2), F(1, 2), F(1, 2)))
    assert components(lc).count == 1


def test_s0_levels_are_separate():
    assert components(build_s0(4).complex()).count == 4


def test_sd_successor_ladder():
    assert axis_trace(build_sd(1, 6), pt(1, 0, 0)) == [1, 2, 3, 4, 5, 6]


def test_sd_other_residues_excluded():
    lc = build_sd(2, 8).complex()
    assert lc.locate(pt(3, 0, 0)) not in component_of_point(lc, pt(2, 0, 0))


def test_sd_needs_one_rung():
    with pytest.raises(ConstructionError):
        build_sd(3, 3)


def test_gamma_endpoints_and_tags():
    pts = gamma_points(0, 0)
    assert pts[0] == (0, 0, 0, 0, 0, 0)
    assert pts[-1] == (1, 1, 0, 1, 0, 1)
    assert gamma_tag(0, 1) == (0, 1, 1, 0)
    assert gamma_tag(1, 0) == gamma_tag(0, 1)
    assert gamma_tag(1, 0, literal=True) == (1, 0, 0, 1)


def test_gamma_is_a_chain():
    segs = build_gamma(2, 3)
    assert len(segs) == 3
    assert cells_adjacent(segs[0], segs[1]) and cells_adjacent(segs[1], segs[2])
    assert not segs[0].meet(segs[2]).nonempty


def test_x_small_addition_table():
    inst = build_x(4)
    lc = inst.complex()
    assert lc.contains((F(0),) * 7)
    comp = component_of_point(lc, (F(0),) * 7)
    got = trace(lc, comp, {i: F(0) for i in range(3, 7)})
    assert pt(3, 1, 4, 0, 0, 0, 0) in got
    assert pt(3, 1, 3, 0, 0, 0, 0) not in got
    assert all(p[0] + p[1] == p[2] for p in got)
    assert sorted(got) == sorted(pt(a, b, a + b, 0, 0, 0, 0) for a in range(5) for b in range(5) if a + b <= 4)


def test_x_literal_tags_break_addition():
    lc = build_x(4, literal=True).complex()
    comp = component_of_point(lc, (F(0),) * 7)
    got = trace(lc, comp, {i: F(0) for i in range(3, 7)})
    assert pt(1, 0, 1, 0, 0, 0, 0) in got
    assert pt(1, 1, 2, 0, 0, 0, 0) not in got
    assert pt(3, 1, 4, 0, 0, 0, 0) not in got


def test_cprime_small():
    inst = build_cprime(3)
    lc = inst.complex()
    comp = component_of_point(lc, pt(1, 0, 0, 1))
    for d in (1, 2, 3):
        got = [p[0] for p in trace(lc, comp, {1: F(0), 2: F(0), 3: F(d)})]
        assert got == [1 + d * n for n in range(0, 10) if 1 + d * n <= 10]
    assert lc.locate(pt(7, 0, 0, 3)) in comp
    assert lc.locate(pt(8, 0, 0, 3)) not in comp


def test_ladder_squares_and_powers():
    spec = squares_spec()
    assert axis_trace(build_ladder(spec), pt(1, 0, 0)) == [1, 4, 9, 16, 25]
    spec = powers_of_two_spec()
    assert axis_trace(build_ladder(spec), pt(1, 0, 0)) == [1, 2, 4, 8, 16, 32]


def test_ladder_successor_on_initial_segment():
    spec = LadderSpec(tuple(range(7)))
    assert axis_trace(build_ladder(spec), pt(1, 0, 0)) == [1, 2, 3, 4, 5, 6]


def test_ladder_with_explicit_map():
    spec = parse_ladder_spec("0,1,3,5,7;0:1,1:3,3:7")
    assert spec.orbit(F(7)) == [1, 3, 7]
    assert axis_trace(build_ladder(spec), pt(1, 0, 0)) == [1, 3, 7]
    assert predict_orbit(spec, 7) == [pt(1, 0, 0), pt(3, 0, 0), pt(7, 0, 0)]


@pytest.mark.parametrize(
    "text",
    ["0,1", "1,2,3", "0,2,1", "0,1,2;0:0", "0,1,2,3;0:2,1:2", "0,1,2,3;0:5/2"],
)
def test_ladder_spec_validation(text):
    with pytest.raises(ConstructionError):
        parse_ladder_spec(text)
