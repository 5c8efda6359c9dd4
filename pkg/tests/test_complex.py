import itertools
import random
from fractions import Fraction as F

import pytest

from floorcc.complex import (
    DifferentComponents,
    GeometryError,
    InfiniteTrace,
    NotInSet,
    SetFileError,
    WindowTooLarge,
    check_decomposition,
    complex_from_pieces,
    component_of_point,
    components,
    decompose_window,
    read_setfile,
    restrict,
    trace,
    verify_polyline,
    witness_path,
    write_setfile,
)
from floorcc.constructions import build_s0, build_sd, positive_x_axis
from floorcc.parser import parse_formula
from floorcc.polyhedra import Interval, box_cell, closed, point_iv

from qe_oracle import random_formula

P = parse_formula
CLOSED_OPEN01 = Interval(F(0), F(1), False, True)


def pt(*xs):
    return tuple(F(x) for x in xs)


def cells_of(lc):
    return {z: list(cs) for z, cs in lc.fibers.items()}


# -- decomposition ---------------------------------------------------------------------

def test_integers_give_point_cells():
    lc = decompose_window(P("Z(x)"), [(0, 3)])
    assert sorted(lc.fibers) == [(0,), (1,), (2,), (3,)]
    for z, cs in lc.fibers.items():
        assert cs == [box_cell([point_iv(z[0])])]


def test_half_open_interval_fibers():
    lc = decompose_window(P("0 <= x & x < 2"), [(0, 3)])
    assert cells_of(lc) == {(0,): [box_cell([CLOSED_OPEN01])], (1,): [box_cell([Interval(F(1), F(2), False, True)])]}


S0_TEXT = (
    "0 <= x & 0 <= y & 0 <= z & (x = 0 | y = 0 | z = 0) & ("
    "(Z(x) & 1 <= x & y <= x & z <= x) | (Z(y) & 1 <= y & x <= y & z <= y) | (Z(z) & 1 <= z & x <= z & y <= z))"
)


def test_octant_shell_formula_matches_explicit_faces():
    f = P(S0_TEXT)
    lc = decompose_window(f, [(0, 4)] * 3, coords=["x", "y", "z"])
    lc.validate()
    explicit = build_s0(4).complex()
    assert check_decomposition(f, lc, ["x", "y", "z"], step=F(1, 4))
    for p in itertools.product([F(i, 4) for i in range(17)], repeat=3):
        assert lc.contains(p) == explicit.contains(p)
    assert components(lc).count == components(explicit).count == 4


def test_window_cap():
    with pytest.raises(WindowTooLarge):
        decompose_window(P("x < y"), [(0, 1000), (0, 1000)], fiber_cap=1000)


def test_quantified_input_rejected():
    with pytest.raises(GeometryError):
        decompose_window(P("E y. x < y"), [(0, 2)])


def test_random_decompositions_are_partitions():
    rng = random.Random(7)
    checked = 0
    while checked < 25:
        f = random_formula(rng, depth=2, free=("x", "y"), bound=())
        if not f.__class__.__name__ in ("And", "Or", "Not", "Lt", "Eq", "IsInt", "Cong", "Implies"):
            continue
        try:
            lc = decompose_window(f, [(-2, 2), (-2, 2)], coords=["x", "y"])
        except GeometryError:
            continue
        lc.validate()
        assert check_decomposition(f, lc, ["x", "y"], step=F(1, 6))
        checked += 1


# -- components ------------------------------------------------------------------------

def two_intervals():
    return complex_from_pieces([box_cell([closed(0, 1)]), box_cell([closed(2, 3)])], ((0, 3),))


def square_boundary():
    sides = [
        box_cell([closed(0, 1), point_iv(0)]),
        box_cell([closed(0, 1), point_iv(1)]),
        box_cell([point_iv(0), closed(0, 1)]),
        box_cell([point_iv(1), closed(0, 1)]),
    ]
    return complex_from_pieces(sides, ((0, 2), (0, 2)))


def test_component_counts():
    assert components(two_intervals()).count == 2
    assert components(square_boundary()).count == 1


def test_open_gap_separates():
    lc = complex_from_pieces([box_cell([CLOSED_OPEN01]), box_cell([Interval(F(1), F(2), True, False)])], ((0, 2),))
    assert components(lc).count == 2


def test_shifted_ladder_components():
    lc = build_sd(2, 8, window=((-6, 8),) * 3).complex()
    lc.validate()
    comp = component_of_point(lc, pt(2, 0, 0))
    assert lc.locate(pt(4, 0, 0)) in comp
    assert lc.locate(pt(6, 0, 0)) in comp
    assert lc.contains(pt(3, 0, 0))
    assert lc.locate(pt(3, 0, 0)) not in comp
    # filler segments hang off the rungs of the same ladder
    assert lc.locate(pt(1, 0, 2)) in comp


def test_isolated_point_is_singleton():
    lc = complex_from_pieces([box_cell([point_iv(1), point_iv(1)]), box_cell([closed(2, 3), point_iv(0)])], ((0, 3), (0, 3)))
    assert len(component_of_point(lc, pt(1, 1))) == 1


def test_point_outside_set():
    with pytest.raises(NotInSet):
        component_of_point(two_intervals(), pt(F(3, 2)))


# -- traces ------------------------------------------------------------------------------

def test_trace_of_shifted_ladder():
    lc = build_sd(2, 8).complex()
    fixed, extra = positive_x_axis(3)
    got = trace(lc, component_of_point(lc, pt(2, 0, 0)), fixed, extra)
    assert got == [pt(k, 0, 0) for k in (2, 4, 6, 8)]


def test_trace_of_nothing():
    lc = build_sd(2, 8).complex()
    assert trace(lc, [], {1: F(0), 2: F(0)}) == []


def test_infinite_trace():
    lc = square_boundary()
    with pytest.raises(InfiniteTrace):
        trace(lc, lc.vertices(), {1: F(0)})


# -- witness paths ---------------------------------------------------------------------

def test_path_inside_one_cell():
    lc = complex_from_pieces([box_cell([closed(0, 1), closed(0, 1)])], ((0, 1), (0, 1)))
    path = witness_path(lc, pt(F(1, 4), F(1, 4)), pt(F(3, 4), F(1, 2)))
    assert len(path.segments()) == 1


def test_path_climbs_rungs():
    lc = build_sd(2, 8).complex()
    path = witness_path(lc, pt(2, 0, 0), pt(4, 0, 0))
    assert path.vertices[0] == pt(2, 0, 0) and path.vertices[-1] == pt(4, 0, 0)
    assert verify_polyline(lc, path)
    assert max(v[2] for v in path.vertices) > 0


def test_degenerate_path():
    lc = square_boundary()
    path = witness_path(lc, pt(0, F(1, 2)), pt(0, F(1, 2)))
    assert path.vertices == (pt(0, F(1, 2)),)
    assert verify_polyline(lc, path)


def test_path_around_square():
    lc = square_boundary()
    path = witness_path(lc, pt(0, F(1, 2)), pt(1, F(1, 2)))
    assert verify_polyline(lc, path)


def test_path_between_components():
    with pytest.raises(DifferentComponents):
        witness_path(two_intervals(), pt(0), pt(3))


# -- set files -----------------------------------------------------------------------------

def test_setfile_round_trip():
    lc = build_sd(1, 4).complex()
    again = read_setfile(write_setfile(lc))
    assert again.cell_count() == lc.cell_count()
    assert components(again).count == components(lc).count
    assert write_setfile(again) == write_setfile(lc)


def test_setfile_comments_and_empty():
    lc = read_setfile("# nothing here\ndim 2 window 0 3 0 3\n")
    assert components(lc).count == 0


@pytest.mark.parametrize(
    "text, line",
    [
        ("dim 1 window 0 3\ncell 0 : 1 x1 <== 1\n", 2),
        ("dim 2 window 0 3\n", 1),
        ("dim 1 window 0 3\n\ncell 0 1 : 1 x1 <= 1\n", 3),
    ],
)
def test_setfile_errors_have_lines(text, line):
    with pytest.raises(SetFileError) as info:
        read_setfile(text)
    assert info.value.line == line


def test_restrict_shrinks_window():
    lc = build_sd(2, 8).complex()
    small = restrict(lc, ((0, 4),) * 3)
    fixed, extra = positive_x_axis(3)
    assert trace(small, component_of_point(small, pt(2, 0, 0)), fixed, extra) == [pt(2, 0, 0), pt(4, 0, 0)]
