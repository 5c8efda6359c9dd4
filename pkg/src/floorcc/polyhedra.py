"""Convex rational polyhedra given by strict, weak and equality constraints.

Feasibility and sampling use Gaussian elimination on the equalities and
Fourier-Motzkin elimination with strictness tracking on the rest.  Cells
whose constraints each mention one coordinate are boxes, and most
operations on boxes take a direct interval path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Optional, Sequence

Point = tuple[Fraction, ...]
RELATIONS = ("<", "<=", "=")


@dataclass(frozen=True, eq=False)
class Constraint:
    """``sum(coeffs[i] * x_i) REL rhs``

    Equality and hashing go through the scaled integer row, so positive
    multiples of one constraint compare equal.
    """

    coeffs: tuple[Fraction, ...]
    rel: str
    rhs: Fraction

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"unknown relation {self.rel!r}")
        object.__setattr__(self, "row", _to_row(self))

    def __eq__(self, other):
        return isinstance(other, Constraint) and self.row == other.row and len(self.coeffs) == len(other.coeffs)

    def __hash__(self):
        return hash(self.row)

    def value(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coeffs, point) if c), Fraction(0))

    def holds(self, point: Sequence[Fraction]) -> bool:
        v = self.value(point)
        if self.rel == "<":
            return v < self.rhs
        if self.rel == "<=":
            return v <= self.rhs
        return v == self.rhs

    def is_ground(self) -> bool:
        return not any(self.coeffs)

    def ground_truth(self) -> bool:
        if self.rel == "<":
            return 0 < self.rhs
        if self.rel == "<=":
            return 0 <= self.rhs
        return self.rhs == 0

    def relaxed(self) -> Constraint:
        return Constraint(self.coeffs, "<=", self.rhs) if self.rel == "<" else self

    def negations(self) -> list[Constraint]:
        """Disjoint constraints whose union is the complement."""
        neg = tuple(-c for c in self.coeffs)
        if self.rel == "<":
            return [Constraint(neg, "<=", -self.rhs)]
        if self.rel == "<=":
            return [Constraint(neg, "<", -self.rhs)]
        return [Constraint(self.coeffs, "<", self.rhs), Constraint(neg, "<", -self.rhs)]

    def normalized(self) -> Constraint:
        lead = next((c for c in self.coeffs if c), None)
        if lead is None:
            return self
        scale = 1 / lead if self.rel == "=" else 1 / abs(lead)
        if scale == 1:
            return self
        return Constraint(tuple(c * scale for c in self.coeffs), self.rel, self.rhs * scale)

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coeffs) if c)


@lru_cache(maxsize=None)
def _unit(dim: int, i: int, c=1) -> tuple[Fraction, ...]:
    return tuple(Fraction(c) if j == i else Fraction(0) for j in range(dim))


@lru_cache(maxsize=65536)
def _bound(dim: int, i: int, sign: int, rel: str, v: Fraction) -> Constraint:
    """``sign * x_i REL v``; cached because boxes repeat the same few bounds."""
    return Constraint(_unit(dim, i, sign), rel, v)


@dataclass(frozen=True)
class Interval:
    """Possibly unbounded interval; ``None`` ends are infinite."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]
    lo_open: bool = False
    hi_open: bool = False

    def is_empty(self) -> bool:
        if self.lo is None or self.hi is None:
            return False
        if self.lo > self.hi:
            return True
        return self.lo == self.hi and (self.lo_open or self.hi_open)

    def meet(self, other: Interval) -> Interval:
        lo, lo_open = self.lo, self.lo_open
        if other.lo is not None and (lo is None or other.lo > lo or (other.lo == lo and other.lo_open)):
            lo, lo_open = other.lo, other.lo_open
        hi, hi_open = self.hi, self.hi_open
        if other.hi is not None and (hi is None or other.hi < hi or (other.hi == hi and other.hi_open)):
            hi, hi_open = other.hi, other.hi_open
        return Interval(lo, hi, lo_open, hi_open)

    def closure(self) -> Interval:
        return Interval(self.lo, self.hi, False, False)

    def contains(self, v: Fraction) -> bool:
        if self.lo is not None and (v < self.lo or (v == self.lo and self.lo_open)):
            return False
        if self.hi is not None and (v > self.hi or (v == self.hi and self.hi_open)):
            return False
        return True

    def is_point(self) -> bool:
        return self.lo is not None and self.lo == self.hi and not self.is_empty()

    def sample(self) -> Fraction:
        if self.lo is not None and self.hi is not None:
            return (self.lo + self.hi) / 2
        if self.lo is not None:
            return self.lo + 1
        if self.hi is not None:
            return self.hi - 1
        return Fraction(0)


FULL = Interval(None, None)


class Cell:
    """A convex polyhedron ``{x in R^dim : all constraints hold}``."""

    __slots__ = ("dim", "constraints", "__dict__")

    def __init__(self, dim: int, constraints: Iterable[Constraint] = ()):
        cons = []
        seen = set()
        for c in constraints:
            if len(c.coeffs) != dim:
                raise ValueError("constraint dimension does not match cell dimension")
            if c.row not in seen:
                seen.add(c.row)
                cons.append(c)
        self.dim = dim
        self.constraints = tuple(cons)

    def __eq__(self, other):
        return isinstance(other, Cell) and self.dim == other.dim and set(self.constraints) == set(other.constraints)

    def __hash__(self):
        return hash((self.dim, frozenset(self.constraints)))

    def __repr__(self):
        return f"Cell({self.dim}, {format_constraints(self)})"

    @cached_property
    def box(self) -> Optional[tuple[Interval, ...]]:
        """Per-coordinate intervals when every constraint mentions one coordinate."""
        ivs, exact = self._axis_box
        return ivs if exact else None

    @property
    def outer_box(self) -> tuple[Interval, ...]:
        """A box containing the cell, read off its one-coordinate constraints."""
        return self._axis_box[0]

    @cached_property
    def _axis_box(self) -> tuple[tuple[Interval, ...], bool]:
        ivs = [FULL] * self.dim
        exact = True
        for c in self.constraints:
            row = c.row
            if row is _TRUE_ROW:
                continue
            if row is _FALSE_ROW:
                return tuple(Interval(Fraction(1), Fraction(0)) for _ in range(self.dim)), True
            if len(row[0]) != 1:
                exact = False
                continue
            i, iv = _row_interval(row)
            ivs[i] = iv if ivs[i] is FULL else ivs[i].meet(iv)
        return tuple(ivs), exact

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(c.holds(point) for c in self.constraints)

    def meet(self, other: Cell) -> Cell:
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return Cell(self.dim, self.constraints + other.constraints)

    def with_constraints(self, extra: Iterable[Constraint]) -> Cell:
        return Cell(self.dim, self.constraints + tuple(extra))

    def relaxed(self) -> Cell:
        return Cell(self.dim, (c.relaxed() for c in self.constraints))

    @cached_property
    def nonempty(self) -> bool:
        box = self.box
        if box is not None:
            return not any(iv.is_empty() for iv in box)
        return _solve(self.dim, self.constraints) is not None

    def sample(self) -> Point:
        box = self.box
        if box is not None:
            if any(iv.is_empty() for iv in box):
                raise ValueError("empty cell has no sample point")
            return tuple(iv.sample() for iv in box)
        p = _solve(self.dim, self.constraints)
        if p is None:
            raise ValueError("empty cell has no sample point")
        return p

    def bounds(self, i: int) -> Interval:
        """Exact projection of the cell onto coordinate ``i``."""
        box = self.box
        if box is not None:
            return box[i]
        cache = self.__dict__.setdefault("_bounds", {})
        if i not in cache:
            cache[i] = _project(self.dim, self.constraints, i)
        return cache[i]

    def simplified(self) -> Cell:
        """Same set; a box is rewritten with one bound per side."""
        box = self.box
        if box is None or any(iv.is_empty() for iv in box):
            return self
        return box_cell(box)

    def fix(self, values: dict[int, Fraction]) -> Cell:
        """Intersect with the affine subspace ``x_i = values[i]``."""
        return self.with_constraints(Constraint(_unit(self.dim, i), "=", Fraction(v)) for i, v in values.items())


def cell_nonempty(c: Cell) -> bool:
    return c.nonempty


def cell_closure(c: Cell) -> Cell:
    """Topological closure of a nonempty cell (relax every strict inequality)."""
    if not c.nonempty:
        raise ValueError("closure of an empty cell is not given by relaxation")
    return c.relaxed()


def cells_adjacent(c1: Cell, c2: Cell) -> bool:
    """Whether ``closure(c1)`` meets ``c2`` or ``c1`` meets ``closure(c2)``."""
    if c1.dim != c2.dim:
        raise ValueError("dimension mismatch")
    b1, b2 = c1.box, c2.box
    if b1 is not None and b2 is not None:
        one = all(not x.closure().meet(y).is_empty() for x, y in zip(b1, b2))
        return one or all(not x.meet(y.closure()).is_empty() for x, y in zip(b1, b2))
    if not boxes_meet([iv.closure() for iv in c1.outer_box], [iv.closure() for iv in c2.outer_box]):
        return False
    return c1.relaxed().meet(c2).nonempty or c1.meet(c2.relaxed()).nonempty


@lru_cache(maxsize=65536)
def _row_interval(row: Row) -> tuple[int, Interval]:
    """The coordinate and interval of a one-coordinate row."""
    (i, a), = row[0]
    rel, v = row[1], Fraction(row[2], a)
    if rel == "=":
        return i, Interval(v, v)
    if a > 0:
        return i, Interval(None, v, False, rel == "<")
    return i, Interval(v, None, rel == "<", False)


def boxes_meet(b1: Sequence[Interval], b2: Sequence[Interval]) -> bool:
    return not any(x.meet(y).is_empty() for x, y in zip(b1, b2))


def _unit_row(row) -> bool:
    return isinstance(row, tuple) and len(row[0]) == 1


def cell_difference(c1: Cell, c2: Cell) -> list[Cell]:
    """Pairwise disjoint nonempty cells whose union is ``c1`` minus ``c2``."""
    if not boxes_meet(c1.outer_box, c2.outer_box) or not c1.meet(c2).nonempty:
        return [c1] if c1.nonempty else []
    out = []
    prefix: list[Constraint] = []
    # while c1 and the prefix are boxes, pieces are boxes too
    box = list(c1.box) if c1.box is not None else None
    for con in c2.constraints:
        for neg in con.negations():
            if box is not None and _unit_row(neg.row):
                i, iv = _row_interval(neg.row)
                piece_iv = box[i].meet(iv)
                if not piece_iv.is_empty():
                    out.append(box_cell(box[:i] + [piece_iv] + box[i + 1:]))
                continue
            if _unit_row(neg.row):
                i, iv = _row_interval(neg.row)
                if c1.outer_box[i].meet(iv).is_empty():
                    continue
            piece = c1.with_constraints(prefix + [neg])
            if piece.nonempty:
                out.append(piece)
        prefix.append(con)
        if box is not None and con.row is not _TRUE_ROW:
            if _unit_row(con.row):
                i, iv = _row_interval(con.row)
                box[i] = box[i].meet(iv)
            else:
                box = None
    return out


def segment_interval(c: Cell, p: Sequence[Fraction], q: Sequence[Fraction]) -> Interval:
    """``{t in [0, 1] : p + t (q - p) in c}`` as an interval."""
    iv = Interval(Fraction(0), Fraction(1))
    for con in c.constraints:
        a = con.value(p) - con.rhs
        b = con.value(q) - con.value(p)
        # constraint reads a + b t REL 0
        if b == 0:
            ok = a < 0 if con.rel == "<" else (a <= 0 if con.rel == "<=" else a == 0)
            if not ok:
                return Interval(Fraction(1), Fraction(0))
            continue
        t = -a / b
        if con.rel == "=":
            iv = iv.meet(Interval(t, t))
        elif b > 0:
            iv = iv.meet(Interval(None, t, False, con.rel == "<"))
        else:
            iv = iv.meet(Interval(t, None, con.rel == "<", False))
    return iv


def segment_covered(cells: Sequence[Cell], p: Sequence[Fraction], q: Sequence[Fraction]) -> bool:
    """Exact check that the closed segment ``[p, q]`` lies in the union of ``cells``."""
    ivs = [iv for iv in (segment_interval(c, p, q) for c in cells) if not iv.is_empty()]
    return covers_unit_interval(ivs)


def covers_unit_interval(ivs: list[Interval]) -> bool:
    """Whether the union of ``ivs`` contains ``[0, 1]``."""
    zero, one = Fraction(0), Fraction(1)
    # the covered prefix is [0, reach] when reach_closed, else [0, reach)
    reach, reach_closed = None, False
    for iv in ivs:
        if iv.contains(zero) and _better(iv, reach, reach_closed):
            reach, reach_closed = iv.hi, not iv.hi_open
    if reach is None:
        return False
    progress = True
    while progress and not (reach >= one and reach_closed) and not reach > one:
        progress = False
        for iv in ivs:
            if iv.lo is None:
                continue
            joins = iv.lo < reach or (iv.lo == reach and (reach_closed or not iv.lo_open))
            if joins and _better(iv, reach, reach_closed):
                reach, reach_closed = iv.hi, not iv.hi_open
                progress = True
    return reach > one or (reach == one and reach_closed)


def _better(iv: Interval, reach, reach_closed) -> bool:
    if reach is None:
        return True
    return iv.hi > reach or (iv.hi == reach and not iv.hi_open and not reach_closed)


# -- exact elimination -------------------------------------------------------
#
# Internally a constraint is a row ``(items, rel, rhs)`` with integer
# coefficients: ``items`` is a sorted tuple of ``(index, coeff)`` with nonzero
# coefficients, scaled so their gcd with ``rhs`` is 1 (equalities also get a
# positive leading coefficient).  Integer rows keep Fourier-Motzkin cheap.

Row = tuple[tuple[tuple[int, int], ...], str, int]
_TRUE_ROW = "true"
_FALSE_ROW = "false"


def _make_row(coeffs: dict[int, int], rel: str, rhs: int):
    items = tuple(sorted((i, c) for i, c in coeffs.items() if c))
    if not items:
        ok = 0 < rhs if rel == "<" else (0 <= rhs if rel == "<=" else rhs == 0)
        return _TRUE_ROW if ok else _FALSE_ROW
    g = abs(rhs)
    for _, c in items:
        g = math.gcd(g, c)
    if rel == "=" and items[0][1] < 0:
        g = -g
    if g != 1:
        items = tuple((i, c // g) for i, c in items)
        rhs //= g
    return (items, rel, rhs)


def _to_row(con: Constraint):
    den = con.rhs.denominator
    for c in con.coeffs:
        if c:
            den = den * c.denominator // math.gcd(den, c.denominator)
    coeffs = {i: c.numerator * (den // c.denominator) for i, c in enumerate(con.coeffs) if c}
    return _make_row(coeffs, con.rel, con.rhs.numerator * (den // con.rhs.denominator))


def _coeff(row: Row, j: int) -> int:
    for i, c in row[0]:
        if i == j:
            return c
    return 0


def _combine(r1: Row, f1: int, r2: Row, f2: int, rel: str):
    """``f1 * r1 + f2 * r2`` with relation ``rel``."""
    acc: dict[int, int] = {}
    for i, c in r1[0]:
        acc[i] = f1 * c
    for i, c in r2[0]:
        acc[i] = acc.get(i, 0) + f2 * c
    return _make_row(acc, rel, f1 * r1[2] + f2 * r2[2])


def _tighten_rows(rows) -> Optional[list[Row]]:
    """Drop trivially true and dominated rows; None when a row is false."""
    best: dict[tuple, Row] = {}
    for r in rows:
        if r is _TRUE_ROW:
            continue
        if r is _FALSE_ROW:
            return None
        key = (r[0], r[1] == "=")
        old = best.get(key)
        if old is None:
            best[key] = r
        elif r[1] == "=":
            if old[2] != r[2]:
                return None
        elif r[2] < old[2] or (r[2] == old[2] and r[1] == "<"):
            best[key] = r
    return list(best.values())


def _pivot_eq(rows: list[Row], eq: Row, j: int) -> Optional[list[Row]]:
    """Substitute ``eq`` solved for ``j``; None when a row becomes false.

    Untouched rows pass through, so callers tighten once at the end.
    """
    a = _coeff(eq, j)
    out = []
    for r in rows:
        b = _coeff(r, j)
        if b == 0:
            out.append(r)
            continue
        if r[1] == "=":
            new = _combine(r, a, eq, -b, "=")
        else:
            # keep the inequality's direction: multiply it by |a| only
            s = 1 if a > 0 else -1
            new = _combine(r, abs(a), eq, -b * s, r[1])
        if new is _FALSE_ROW:
            return None
        if new is not _TRUE_ROW:
            out.append(new)
    return out


def _eliminate_eqs(rows: list[Row], keep: Optional[int] = None):
    """Gaussian elimination of equalities; returns (pivots, rows) or None.

    ``pivots`` lists ``(j, eq)`` in elimination order.  With ``keep`` the
    variable ``keep`` is never used as a pivot.
    """
    pivots = []
    while True:
        choice = None
        for r in rows:
            if r[1] != "=":
                continue
            cands = [(abs(c), i) for i, c in r[0] if i != keep]
            if cands:
                w, j = min(cands)
                if choice is None or w < choice[0]:
                    choice = (w, j, r)
                if w == 1:
                    break
        if choice is None:
            rows = _tighten_rows(rows)
            return None if rows is None else (pivots, rows)
        _, j, eq = choice
        rest = [r for r in rows if r is not eq]
        rows = _pivot_eq(rest, eq, j)
        if rows is None:
            return None
        pivots.append((j, eq))


def _fm_rows(rows: list[Row], j: int) -> Optional[list[Row]]:
    pos, neg, out = [], [], []
    for r in rows:
        a = _coeff(r, j)
        if a > 0:
            pos.append((r, a))
        elif a < 0:
            neg.append((r, -a))
        else:
            out.append(r)
    for p, ap in pos:
        for n, an in neg:
            rel = "<" if "<" in (p[1], n[1]) else "<="
            out.append(_combine(p, an, n, ap, rel))
    return _tighten_rows(out)


def _pick_var(rows: list[Row], alive: set[int]) -> int:
    best, best_cost = None, None
    for j in sorted(alive):
        p = n = 0
        for r in rows:
            a = _coeff(r, j)
            if a > 0:
                p += 1
            elif a < 0:
                n += 1
        cost = p * n - p - n
        if best_cost is None or cost < best_cost:
            best, best_cost = j, cost
    return best


def _row_vars(rows: list[Row]) -> set[int]:
    return {i for r in rows for i, _ in r[0]}


def _rows_of(cons: Sequence[Constraint]) -> Optional[list[Row]]:
    return _tighten_rows([c.row for c in cons])


def _solve(dim: int, cons: Sequence[Constraint]) -> Optional[Point]:
    """A rational point satisfying all constraints, or None."""
    rows = _rows_of(cons)
    if rows is None:
        return None
    got = _eliminate_eqs(rows)
    if got is None:
        return None
    pivots, cur = got
    stages: list[tuple[int, list[Row]]] = []
    while True:
        alive = _row_vars(cur)
        if not alive:
            break
        j = _pick_var(cur, alive)
        stages.append((j, [r for r in cur if _coeff(r, j)]))
        cur = _fm_rows(cur, j)
        if cur is None:
            return None
    values = [Fraction(0)] * dim
    for j, stage in reversed(stages):
        iv = FULL
        for items, rel, rhs in stage:
            a = 0
            other = Fraction(0)
            for i, c in items:
                if i == j:
                    a = c
                else:
                    other += c * values[i]
            v = (rhs - other) / a
            if rel == "=":
                iv = iv.meet(Interval(v, v))
            elif a > 0:
                iv = iv.meet(Interval(None, v, False, rel == "<"))
            else:
                iv = iv.meet(Interval(v, None, rel == "<", False))
        if iv.is_empty():
            raise AssertionError("back-substitution met an empty interval")
        values[j] = iv.sample()
    for j, (items, _, rhs) in reversed(pivots):
        a = 0
        other = Fraction(0)
        for i, c in items:
            if i == j:
                a = c
            else:
                other += c * values[i]
        values[j] = (rhs - other) / a
    point = tuple(values)
    if not _rows_hold(rows, point):
        raise AssertionError("sample point violates its cell")
    return point


def _rows_hold(rows: list[Row], point: Point) -> bool:
    """Exact check of integer rows at ``point`` over a common denominator."""
    den = 1
    for x in point:
        den = den * x.denominator // math.gcd(den, x.denominator)
    xs = [x.numerator * (den // x.denominator) for x in point]
    for items, rel, rhs in rows:
        v = sum(c * xs[i] for i, c in items)
        r = rhs * den
        if not (v < r if rel == "<" else (v <= r if rel == "<=" else v == r)):
            return False
    return True


def _project(dim: int, cons: Sequence[Constraint], i: int) -> Interval:
    """Exact projection onto coordinate ``i`` (empty interval if infeasible)."""
    empty = Interval(Fraction(1), Fraction(0))
    rows = _rows_of(cons)
    if rows is None:
        return empty
    got = _eliminate_eqs(rows, keep=i)
    if got is None:
        return empty
    _, cur = got
    while True:
        alive = _row_vars(cur) - {i}
        if not alive:
            break
        cur = _fm_rows(cur, _pick_var(cur, alive))
        if cur is None:
            return empty
    iv = FULL
    for items, rel, rhs in cur:
        a = items[0][1]
        v = Fraction(rhs, a)
        if rel == "=":
            iv = iv.meet(Interval(v, v))
        elif a > 0:
            iv = iv.meet(Interval(None, v, False, rel == "<"))
        else:
            iv = iv.meet(Interval(v, None, rel == "<", False))
    return iv


# -- constructors and printing ---------------------------------------------------

def box_cell(intervals: Sequence[Interval]) -> Cell:
    dim = len(intervals)
    cons = []
    for i, iv in enumerate(intervals):
        if iv.is_point():
            cons.append(_bound(dim, i, 1, "=", iv.lo))
            continue
        if iv.lo is not None:
            cons.append(_bound(dim, i, -1, "<" if iv.lo_open else "<=", -iv.lo))
        if iv.hi is not None:
            cons.append(_bound(dim, i, 1, "<" if iv.hi_open else "<=", iv.hi))
    return Cell(dim, cons)


def closed(lo, hi) -> Interval:
    return Interval(Fraction(lo), Fraction(hi))


def point_iv(v) -> Interval:
    return Interval(Fraction(v), Fraction(v))


def half_open(lo, hi) -> Interval:
    """``(lo, hi]``"""
    return Interval(Fraction(lo), Fraction(hi), True, False)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_constraint(c: Constraint) -> str:
    terms = []
    for i, a in enumerate(c.coeffs):
        if a:
            terms.append(f"{format_rational(a)} x{i + 1}")
    lhs = " + ".join(terms) if terms else "0"
    return f"{lhs} {c.rel} {format_rational(c.rhs)}"


def format_constraints(c: Cell) -> str:
    return " ; ".join(format_constraint(k) for k in c.constraints)


def format_point(p: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(x) for x in p) + ")"
