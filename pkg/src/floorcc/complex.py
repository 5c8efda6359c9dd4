"""Bounded windows of semilinear sets, cut into convex cells over unit boxes.

A window is the closed box ``prod [lo_i, hi_i]`` with integer bounds.  The
fiber of lattice index ``z`` is the part of the set inside the half-open box
``prod [z_i, z_i + 1)`` intersected with the window, so the top index in each
coordinate only holds the face ``x_i = hi_i``.
"""
from __future__ import annotations

import functools
import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .formulas import (
    FALSE,
    And,
    BoolConst,
    Cong,
    Div,
    Eq,
    Formula,
    IsInt,
    Lt,
    Not,
    Or,
    evaluate_atom,
    free_vars,
    is_quantifier_free,
    nnf,
    simplify,
    substitute_formula,
)
from .polyhedra import (
    Cell,
    Constraint,
    Interval,
    Point,
    box_cell,
    boxes_meet,
    cell_difference,
    cells_adjacent,
    format_constraints,
    format_point,
    segment_covered,
)
from .qe import case_split_floors
from .terms import Affine

Vertex = tuple[tuple[int, ...], int]
Window = tuple[tuple[int, int], ...]

DEFAULT_FIBER_CAP = 200_000


class GeometryError(ValueError):
    pass


class WindowTooLarge(GeometryError):
    pass


class InfiniteTrace(GeometryError):
    pass


class NotInSet(GeometryError):
    pass


class DifferentComponents(GeometryError):
    pass


def unit_box(z: Sequence[int], window: Window) -> tuple[Interval, ...]:
    """``[z_i, z_i + 1)`` clipped to the window."""
    out = []
    for zi, (lo, hi) in zip(z, window):
        if zi == hi:
            out.append(Interval(Fraction(hi), Fraction(hi)))
        else:
            out.append(Interval(Fraction(zi), Fraction(zi + 1), False, True))
    return tuple(out)


def window_box(window: Window) -> tuple[Interval, ...]:
    return tuple(Interval(Fraction(lo), Fraction(hi)) for lo, hi in window)


def fiber_index(p: Sequence[Fraction], window: Window) -> Optional[tuple[int, ...]]:
    """Lattice index of the fiber holding ``p``, or None outside the window."""
    z = []
    for x, (lo, hi) in zip(p, window):
        if x < lo or x > hi:
            return None
        z.append(math.floor(x))
    return tuple(z)


def _box_constraints(z: Sequence[int], window: Window) -> list[Constraint]:
    return list(box_cell(unit_box(z, window)).constraints)


@dataclass(frozen=True)
class ComponentLabeling:
    labels: dict[Vertex, int]
    count: int

    def members(self, k: int) -> list[Vertex]:
        return [v for v, c in self.labels.items() if c == k]

    def groups(self) -> list[list[Vertex]]:
        out: list[list[Vertex]] = [[] for _ in range(self.count)]
        for v, c in self.labels.items():
            out[c].append(v)
        return out


@dataclass
class LatticeComplex:
    """Cells of a set grouped by the unit box that contains them."""

    dim: int
    window: Window
    fibers: dict[tuple[int, ...], list[Cell]] = field(default_factory=dict)
    # piece index each cell was cut from, when built from explicit pieces
    origin: dict[Vertex, int] = field(default_factory=dict)

    def __post_init__(self):
        self.window = tuple((int(lo), int(hi)) for lo, hi in self.window)
        if len(self.window) != self.dim:
            raise GeometryError("window dimension does not match")
        if any(lo > hi for lo, hi in self.window):
            raise GeometryError("empty window")
        self._graph: Optional[dict[Vertex, list[Vertex]]] = None
        self._labels: Optional[ComponentLabeling] = None

    # -- access ------------------------------------------------------------
    def vertices(self) -> list[Vertex]:
        return [(z, i) for z in sorted(self.fibers) for i in range(len(self.fibers[z]))]

    def cell(self, v: Vertex) -> Cell:
        return self.fibers[v[0]][v[1]]

    def cell_count(self) -> int:
        return sum(len(cs) for cs in self.fibers.values())

    def locate(self, p: Sequence[Fraction]) -> Optional[Vertex]:
        """The vertex whose cell contains ``p``."""
        p = tuple(Fraction(x) for x in p)
        if len(p) != self.dim:
            raise GeometryError("point dimension does not match")
        z = fiber_index(p, self.window)
        if z is None:
            return None
        for i, c in enumerate(self.fibers.get(z, ())):
            if c.contains(p):
                return (z, i)
        return None

    def contains(self, p: Sequence[Fraction]) -> bool:
        return self.locate(p) is not None

    def add(self, z: tuple[int, ...], cell: Cell, origin: Optional[int] = None) -> list[Vertex]:
        """Add the part of ``cell`` not yet covered in fiber ``z``; returns the new vertices."""
        parts = [cell]
        for old in self.fibers.get(z, ()):
            nxt = []
            for p in parts:
                nxt.extend(cell_difference(p, old))
            parts = nxt
            if not parts:
                return []
        bucket = self.fibers.setdefault(z, [])
        added = []
        for p in parts:
            v = (z, len(bucket))
            bucket.append(p.simplified())
            if origin is not None:
                self.origin[v] = origin
            added.append(v)
        self._graph = None
        self._labels = None
        return added

    def validate(self):
        """Check the complex invariants; raises ``AssertionError`` on violation."""
        for z, cells in self.fibers.items():
            box = box_cell(unit_box(z, self.window))
            for i, c in enumerate(cells):
                assert c.dim == self.dim, "cell dimension"
                assert c.nonempty, f"empty cell at {z}"
                for con in box.constraints:
                    for neg in con.negations():
                        assert not c.with_constraints([neg]).nonempty, f"cell {i} leaves box {z}"
                for j in range(i):
                    assert not c.meet(cells[j]).nonempty, f"cells {j} and {i} overlap in box {z}"

    # -- graph ---------------------------------------------------------------
    def adjacency(self) -> dict[Vertex, list[Vertex]]:
        """Adjacency lists; only boxes whose closures touch are compared."""
        if self._graph is not None:
            return self._graph
        graph: dict[Vertex, list[Vertex]] = {v: [] for v in self.vertices()}

        def link(a: Vertex, b: Vertex):
            graph[a].append(b)
            graph[b].append(a)

        for z, cells in self.fibers.items():
            for i in range(len(cells)):
                for j in range(i):
                    if cells_adjacent(cells[i], cells[j]):
                        link((z, i), (z, j))
        # across boxes the closure of a cell in box z can only meet boxes z + delta, delta in {0,1}^n
        for z, cells in self.fibers.items():
            for i, c in enumerate(cells):
                reach = [k for k in range(self.dim) if _reaches_top(c, k, z[k])]
                closure = c.relaxed()
                for r in range(1, len(reach) + 1):
                    for ks in itertools.combinations(reach, r):
                        z2 = tuple(zk + (1 if k in ks else 0) for k, zk in enumerate(z))
                        for j, c2 in enumerate(self.fibers.get(z2, ())):
                            if _meets(closure, c2):
                                link((z, i), (z2, j))
        self._graph = graph
        return graph

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        g = self.adjacency()
        return sorted({(a, b) if a < b else (b, a) for a, bs in g.items() for b in bs})


def _reaches_top(c: Cell, k: int, zk: int) -> bool:
    iv = c.bounds(k)
    return iv.hi is not None and iv.hi == zk + 1


def _meets(closure: Cell, other: Cell) -> bool:
    b1, b2 = closure.box, other.box
    if b1 is not None and b2 is not None:
        return all(not x.meet(y).is_empty() for x, y in zip(b1, b2))
    return boxes_meet(closure.outer_box, other.outer_box) and closure.meet(other).nonempty


class _UnionFind:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def components(lc: LatticeComplex) -> ComponentLabeling:
    """Connected components of the adjacency graph, numbered by first vertex."""
    if lc._labels is not None:
        return lc._labels
    verts = lc.vertices()
    uf = _UnionFind(verts)
    for a, bs in lc.adjacency().items():
        for b in bs:
            uf.union(a, b)
    ids: dict[Vertex, int] = {}
    labels: dict[Vertex, int] = {}
    for v in verts:
        root = uf.find(v)
        if root not in ids:
            ids[root] = len(ids)
        labels[v] = ids[root]
    lc._labels = ComponentLabeling(labels, len(ids))
    return lc._labels


def component_of_point(lc: LatticeComplex, p: Sequence[Fraction]) -> set[Vertex]:
    v = lc.locate(p)
    if v is None:
        raise NotInSet(f"{format_point(tuple(Fraction(x) for x in p))} is not in the set")
    lab = components(lc)
    k = lab.labels[v]
    return {u for u, c in lab.labels.items() if c == k}


def trace(
    lc: LatticeComplex,
    cells: Iterable[Vertex],
    fixed: Mapping[int, Fraction],
    extra: Sequence[Constraint] = (),
) -> list[Point]:
    """Sorted points of ``union(cells)`` on the subspace ``x_i = fixed[i]``.

    ``extra`` narrows the subspace further (for instance ``x_0 > 0``).  A cell
    that meets the subspace in more than one point raises ``InfiniteTrace``.
    """
    fixed = {int(i): Fraction(v) for i, v in fixed.items()}
    out = set()
    for v in cells:
        c = lc.cell(v).fix(fixed).with_constraints(extra)
        if not c.nonempty:
            continue
        point = []
        for i in range(lc.dim):
            if i in fixed:
                point.append(fixed[i])
                continue
            iv = c.bounds(i)
            if not iv.is_point():
                raise InfiniteTrace(f"cell {v} meets the subspace in more than a point")
            point.append(iv.lo)
        out.add(tuple(point))
    return sorted(out)


# -- paths -----------------------------------------------------------------------

@dataclass(frozen=True)
class Polyline:
    vertices: tuple[Point, ...]
    # the complex vertices whose cells each segment was checked against
    cells: tuple[tuple[Vertex, ...], ...] = ()

    def segments(self) -> list[tuple[Point, Point]]:
        return list(zip(self.vertices, self.vertices[1:]))


def _shortest_chain(lc: LatticeComplex, a: Vertex, b: Vertex) -> Optional[list[Vertex]]:
    graph = lc.adjacency()
    prev = {a: None}
    todo = deque([a])
    while todo:
        v = todo.popleft()
        if v == b:
            chain = [v]
            while prev[chain[-1]] is not None:
                chain.append(prev[chain[-1]])
            return chain[::-1]
        for w in graph[v]:
            if w not in prev:
                prev[w] = v
                todo.append(w)
    return None


def _routing_point(c1: Cell, c2: Cell) -> Point:
    """A point of ``closure(c1) & closure(c2)`` that lies in ``c1`` or ``c2``."""
    one = c1.relaxed().meet(c2)
    if one.nonempty:
        return one.sample()
    two = c1.meet(c2.relaxed())
    if two.nonempty:
        return two.sample()
    raise GeometryError("cells are not adjacent")


def witness_path(lc: LatticeComplex, x: Sequence[Fraction], y: Sequence[Fraction]) -> Polyline:
    """A polyline inside the set from ``x`` to ``y``, every segment checked exactly.

    Along a chain of adjacent cells the path alternates between a sample point
    of each cell and a routing point shared by the closures of consecutive
    cells.  A segment from a point of cell ``c`` to a point of its closure
    stays in ``c`` except possibly at the far end, which is in the next cell.
    """
    x = tuple(Fraction(v) for v in x)
    y = tuple(Fraction(v) for v in y)
    vx, vy = lc.locate(x), lc.locate(y)
    if vx is None or vy is None:
        raise NotInSet("path endpoints must lie in the set")
    if x == y:
        return Polyline((x,), ())
    chain = _shortest_chain(lc, vx, vy)
    if chain is None:
        raise DifferentComponents("points lie in different components")
    # points with a flag telling whether they are optional samples; owners[i] covers pts[i] -> pts[i+1]
    pts: list[tuple[Point, bool]] = [(x, False)]
    owners: list[tuple[Vertex, ...]] = []
    for i, (a, b) in enumerate(zip(chain, chain[1:])):
        ca, cb = lc.cell(a), lc.cell(b)
        if i > 0:
            pts.append((ca.sample(), True))
            owners.append((chain[i - 1], a))
        pts.append((_routing_point(ca, cb), False))
        owners.append((a, b))
    pts.append((y, False))
    owners.append(tuple(chain[-2:]))
    # drop a sample point when the shortcut past it stays in the same cells
    i = 1
    while i < len(pts) - 1:
        if pts[i][1]:
            near = tuple(dict.fromkeys(owners[i - 1] + owners[i]))
            if segment_covered([lc.cell(v) for v in near], pts[i - 1][0], pts[i + 1][0]):
                del pts[i]
                owners[i - 1:i + 1] = [near]
                continue
        i += 1
    verts: list[Point] = [pts[0][0]]
    seg_cells: list[tuple[Vertex, ...]] = []
    for (p, _), own in zip(pts[1:], owners):
        if p == verts[-1]:
            continue
        verts.append(p)
        seg_cells.append(own)
    for (p, q), own in zip(zip(verts, verts[1:]), seg_cells):
        if not segment_covered([lc.cell(v) for v in own], p, q):
            raise AssertionError(f"path segment {format_point(p)} -> {format_point(q)} leaves the set")
    return Polyline(tuple(verts), tuple(seg_cells))


def _cells_near(lc: LatticeComplex, p: Point, q: Point) -> list[Cell]:
    """Cells of every fiber that can hold a point of the segment ``[p, q]``."""
    ranges = []
    for a, b, (lo, hi) in zip(p, q, lc.window):
        first = max(lo, math.floor(min(a, b)))
        last = min(hi, math.floor(max(a, b)))
        if first > last:
            return []
        ranges.append(range(first, last + 1))
    return [c for z in itertools.product(*ranges) for c in lc.fibers.get(z, ())]


def verify_polyline(lc: LatticeComplex, path: Polyline) -> bool:
    """Check that every segment lies in the set, ignoring the cells recorded in ``path``."""
    if len(path.vertices) == 1:
        return lc.contains(path.vertices[0])
    return all(segment_covered(_cells_near(lc, p, q), p, q) for p, q in path.segments())


# -- building complexes ---------------------------------------------------------

def _clip_to_window(cell: Cell, window: Window) -> Cell:
    box = cell.box
    if box is not None:
        return box_cell([a.meet(b) for a, b in zip(box, window_box(window))])
    return cell.meet(_window_cell(window))


@functools.lru_cache(maxsize=64)
def _window_cell(window: Window) -> Cell:
    return box_cell(window_box(window))


def _index_range(iv: Interval, lo: int, hi: int) -> range:
    a = lo if iv.lo is None else max(lo, math.floor(iv.lo))
    if iv.hi is None:
        b = hi
    else:
        b = math.floor(iv.hi)
        if iv.hi_open and iv.hi == b:
            b -= 1
        b = min(hi, b)
    return range(a, b + 1)


def fibers_of(cell: Cell, window: Window) -> Iterable[tuple[tuple[int, ...], Cell]]:
    """The nonempty pieces of ``cell`` in each unit box of the window."""
    cell = _clip_to_window(cell, window)
    if not cell.nonempty:
        return
    box = cell.box
    ranges = []
    for i, (lo, hi) in enumerate(window):
        iv = box[i] if box is not None else cell.outer_box[i]
        ranges.append(_index_range(iv, lo, hi))
    for z in itertools.product(*ranges):
        ub = unit_box(z, window)
        if box is not None:
            ivs = [a.meet(b) for a, b in zip(box, ub)]
            if any(iv.is_empty() for iv in ivs):
                continue
            yield z, box_cell(ivs)
        else:
            piece = cell.meet(box_cell(ub))
            if piece.nonempty:
                yield z, piece


def complex_from_pieces(pieces: Sequence[Cell], window: Window, fiber_cap: int = DEFAULT_FIBER_CAP) -> LatticeComplex:
    """Cut explicit convex pieces into fibers and make each fiber disjoint."""
    window = tuple((int(lo), int(hi)) for lo, hi in window)
    dim = len(window)
    lc = LatticeComplex(dim, window)
    for k, piece in enumerate(pieces):
        if piece.dim != dim:
            raise GeometryError("piece dimension does not match the window")
        for z, part in fibers_of(piece, window):
            lc.add(z, part, origin=k)
            if len(lc.fibers) > fiber_cap:
                raise WindowTooLarge(f"more than {fiber_cap} occupied fibers")
    return lc


# -- formulas to complexes --------------------------------------------------------

def _literal_constraint(lit: Formula, us: Sequence[str], z: Sequence[int]) -> Optional[list[list[Constraint]]]:
    """Constraints in the original coordinates for one literal in the offsets ``us``.

    Returns a list of alternatives (a disequality gives two), ``[]`` for a
    false literal and ``None`` for a true one.
    """
    positive = not isinstance(lit, Not)
    a = lit if positive else lit.arg
    if isinstance(a, BoolConst):
        return None if a.value == positive else []
    if isinstance(a, (IsInt, Cong, Div)):
        if any(v in us for v in free_vars(a)):
            raise GeometryError("integrality condition left after floor splitting")
        return None if evaluate_atom(a, {}) == positive else []
    if not isinstance(a, (Eq, Lt)):
        raise GeometryError(f"unexpected literal {lit}")
    form = a.form
    if form.floor_keys():
        raise GeometryError("floor left after floor splitting")
    coeffs = tuple(form.coeff(u) for u in us)
    # sum c_i u_i + k with u_i = x_i - z_i
    k = form.const - sum((c * zi for c, zi in zip(coeffs, z)), Fraction(0))
    neg = tuple(-c for c in coeffs)
    if isinstance(a, Eq):
        if positive:
            return [[Constraint(coeffs, "=", -k)]]
        return [[Constraint(coeffs, "<", -k)], [Constraint(neg, "<", k)]]
    if positive:
        return [[Constraint(coeffs, "<", -k)]]
    return [[Constraint(neg, "<=", k)]]


def _convex_pieces(f: Formula, dim: int, base: list[Constraint], us, z) -> list[Cell]:
    """DNF of ``f`` as feasible cells, pruning infeasible partial conjunctions."""

    def go(g: Formula, acc: Cell) -> list[Cell]:
        if isinstance(g, And):
            cur = [acc]
            for part in g.args:
                nxt = []
                for c in cur:
                    nxt.extend(go(part, c))
                cur = nxt
                if not cur:
                    break
            return cur
        if isinstance(g, Or):
            out = []
            for part in g.args:
                out.extend(go(part, acc))
            return out
        alts = _literal_constraint(g, us, z)
        if alts is None:
            return [acc]
        out = []
        for cons in alts:
            c = acc.with_constraints(cons)
            if c.nonempty:
                out.append(c)
        return out

    return go(f, Cell(dim, base))


def decompose_window(
    f: Formula,
    window: Sequence[tuple[int, int]],
    coords: Optional[Sequence[str]] = None,
    fiber_cap: int = DEFAULT_FIBER_CAP,
) -> LatticeComplex:
    """The set defined by a quantifier-free ``f`` inside ``window``, as a complex.

    On each unit box the coordinates are written ``x_i = z_i + u_i`` with
    ``0 <= u_i < 1``; floors of the offsets are split into guarded integer
    cases, and what remains is linear in the offsets.
    """
    if not is_quantifier_free(f):
        raise GeometryError("decompose_window needs a quantifier-free formula")
    coords = tuple(coords) if coords is not None else tuple(sorted(free_vars(f)))
    if not free_vars(f) <= set(coords):
        raise GeometryError("formula has variables that are not coordinates")
    window = tuple((int(lo), int(hi)) for lo, hi in window)
    dim = len(coords)
    if len(window) != dim:
        raise GeometryError("window dimension does not match the coordinates")
    total = math.prod(hi - lo + 1 for lo, hi in window)
    if total > fiber_cap:
        raise WindowTooLarge(f"window has {total} fibers, cap is {fiber_cap}")
    taken = set(coords) | free_vars(f)
    us = []
    for i in range(dim):
        name = f"_u{i}"
        while name in taken:
            name += "_"
        us.append(name)
    lc = LatticeComplex(dim, window)
    for z in itertools.product(*(range(lo, hi + 1) for lo, hi in window)):
        mapping = {}
        frac = []
        for x, u, zi, (lo, hi) in zip(coords, us, z, window):
            if zi == hi:
                mapping[x] = Affine.constant(zi)
            else:
                mapping[x] = Affine.var(u).add_const(zi)
                frac.append(u)
        g = substitute_formula(f, mapping)
        g = simplify(case_split_floors(g, frac))
        if g == FALSE:
            continue
        g = nnf(g)
        base = _box_constraints(z, window)
        for piece in _convex_pieces(g, dim, base, us, z):
            lc.add(z, piece)
    return lc


def check_decomposition(f: Formula, lc: LatticeComplex, coords: Sequence[str], step: Fraction = Fraction(1, 8)) -> bool:
    """Membership agreement between ``f`` and ``lc`` on a grid and at cell samples."""
    from .formulas import evaluate

    axes = []
    for lo, hi in lc.window:
        n = int((hi - lo) / step)
        axes.append([lo + step * i for i in range(n + 1)])
    points = set(itertools.product(*axes))
    for v in lc.vertices():
        points.add(lc.cell(v).sample())
    for p in points:
        env = dict(zip(coords, p))
        if evaluate(f, env) != lc.contains(p):
            return False
    return True


# -- set files ----------------------------------------------------------------------

def _parse_rational(text: str) -> Fraction:
    from .parser import parse_rational

    return parse_rational(text)


def write_setfile(lc: LatticeComplex) -> str:
    lines = ["dim %d window %s" % (lc.dim, " ".join(f"{lo} {hi}" for lo, hi in lc.window))]
    for z in sorted(lc.fibers):
        for c in lc.fibers[z]:
            lines.append("cell %s : %s" % (" ".join(str(k) for k in z), format_constraints(c)))
    return "\n".join(lines) + "\n"


class SetFileError(GeometryError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _parse_constraint(text: str, dim: int, lineno: int) -> Constraint:
    for rel in ("<=", "<", "="):
        if rel in text:
            lhs, rhs = text.split(rel, 1)
            break
    else:
        raise SetFileError(f"no relation in {text.strip()!r}", lineno)
    coeffs = [Fraction(0)] * dim
    lhs = lhs.strip()
    if lhs != "0":
        for term in lhs.split("+"):
            parts = term.split()
            if len(parts) != 2 or not parts[1].startswith("x"):
                raise SetFileError(f"bad term {term.strip()!r}", lineno)
            try:
                i = int(parts[1][1:]) - 1
                a = _parse_rational(parts[0])
            except ValueError as e:
                raise SetFileError(str(e), lineno) from None
            if not 0 <= i < dim:
                raise SetFileError(f"coordinate {parts[1]} out of range", lineno)
            coeffs[i] += a
    try:
        b = _parse_rational(rhs)
    except ValueError as e:
        raise SetFileError(str(e), lineno) from None
    return Constraint(tuple(coeffs), rel, b)


def read_setfile(text: str) -> LatticeComplex:
    """Parse the set-file format; cells are re-cut so fibers stay disjoint."""
    lc = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        if lc is None:
            if words[0] != "dim" or len(words) < 3 or words[2] != "window":
                raise SetFileError("expected header 'dim n window lo1 hi1 ...'", lineno)
            try:
                dim = int(words[1])
                bounds = [int(w) for w in words[3:]]
            except ValueError:
                raise SetFileError("bad header numbers", lineno) from None
            if len(bounds) != 2 * dim:
                raise SetFileError("window needs two bounds per coordinate", lineno)
            try:
                lc = LatticeComplex(dim, tuple(zip(bounds[::2], bounds[1::2])))
            except GeometryError as e:
                raise SetFileError(str(e), lineno) from None
            continue
        if words[0] != "cell" or ":" not in line:
            raise SetFileError("expected 'cell z1 ... zn : constraints'", lineno)
        head, body = line.split(":", 1)
        try:
            z = tuple(int(w) for w in head.split()[1:])
        except ValueError:
            raise SetFileError("bad lattice index", lineno) from None
        if len(z) != lc.dim:
            raise SetFileError("lattice index has the wrong length", lineno)
        cons = [_parse_constraint(part, lc.dim, lineno) for part in body.split(";") if part.strip()]
        cell = Cell(lc.dim, cons).meet(box_cell(unit_box(z, lc.window)))
        if any(not (lo <= zi <= hi) for zi, (lo, hi) in zip(z, lc.window)):
            raise SetFileError("lattice index outside the window", lineno)
        if not cell.nonempty:
            raise SetFileError("cell is empty inside its unit box", lineno)
        lc.add(z, cell)
    if lc is None:
        raise SetFileError("missing header", 1)
    return lc


def restrict(lc: LatticeComplex, window: Sequence[tuple[int, int]]) -> LatticeComplex:
    """The complex cut down to a smaller window."""
    window = tuple((int(lo), int(hi)) for lo, hi in window)
    out = LatticeComplex(lc.dim, window)
    for v in lc.vertices():
        for z, part in fibers_of(lc.cell(v), window):
            out.add(z, part, origin=lc.origin.get(v))
    return out


__all__ = [
    "ComponentLabeling",
    "DifferentComponents",
    "GeometryError",
    "InfiniteTrace",
    "LatticeComplex",
    "NotInSet",
    "Polyline",
    "SetFileError",
    "WindowTooLarge",
    "check_decomposition",
    "complex_from_pieces",
    "component_of_point",
    "components",
    "decompose_window",
    "fibers_of",
    "read_setfile",
    "restrict",
    "trace",
    "unit_box",
    "verify_polyline",
    "witness_path",
    "write_setfile",
]
