"""Explicit piecewise-linear sets whose components encode arithmetic.

Every builder returns the generating pieces (closed or half-open segments
and points) together with the window they are cut to.  ``Instance.complex``
cuts the pieces into a lattice complex; the pieces themselves feed the
independent component oracle.

Coordinates are numbered from 0.  Windows are closed integer boxes, and
pieces are clipped to them, so each instance is a truncation of an infinite
set; the predicted traces below are the truncated ones.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .complex import LatticeComplex, Window, complex_from_pieces
from .polyhedra import Cell, Constraint, Interval, Point, box_cell, closed, half_open, point_iv

F = Fraction


class ConstructionError(ValueError):
    pass


# -- piece helpers ------------------------------------------------------------------

def _box(dim: int, spec: Mapping[int, Interval], default=0) -> Cell:
    ivs = [spec.get(i, point_iv(default)) for i in range(dim)]
    return box_cell(ivs)


def segment(p: Sequence, q: Sequence) -> Cell:
    """The closed segment from ``p`` to ``q``."""
    p = [F(x) for x in p]
    q = [F(x) for x in q]
    dim = len(p)
    moving = [i for i in range(dim) if p[i] != q[i]]
    if len(moving) <= 1:
        return box_cell([closed(min(a, b), max(a, b)) for a, b in zip(p, q)])
    # p + t (q - p), 0 <= t <= 1, written without t: pivot on the first moving coordinate
    j = moving[0]
    dj = q[j] - p[j]
    cons = []
    for i in range(dim):
        if i == j:
            continue
        di = q[i] - p[i]
        # x_i - p_i = (di / dj) (x_j - p_j)
        coeffs = [F(0)] * dim
        coeffs[i] = F(1)
        coeffs[j] = -di / dj
        cons.append(Constraint(tuple(coeffs), "=", p[i] - di / dj * p[j]))
    lo, hi = min(p[j], q[j]), max(p[j], q[j])
    unit = [F(0)] * dim
    unit[j] = F(1)
    cons.append(Constraint(tuple(unit), "<=", hi))
    cons.append(Constraint(tuple(-u for u in unit), "<=", -lo))
    return Cell(dim, cons)


def lift(c: Cell, prefix: Sequence = (), suffix: Sequence = ()) -> Cell:
    """``{prefix} x c x {suffix}`` as a cell in the bigger space."""
    pre, suf = len(prefix), len(suffix)
    dim = pre + c.dim + suf
    cons = []
    for k in c.constraints:
        cons.append(Constraint((F(0),) * pre + k.coeffs + (F(0),) * suf, k.rel, k.rhs))
    for i, v in enumerate(tuple(prefix) + (None,) * c.dim + tuple(suffix)):
        if v is not None:
            unit = [F(0)] * dim
            unit[i] = F(1)
            cons.append(Constraint(tuple(unit), "=", F(v)))
    return Cell(dim, cons)


# -- instances ------------------------------------------------------------------------

@dataclass
class Instance:
    """A construction truncated to a window."""

    name: str
    pieces: list[Cell]
    window: Window
    labels: list[str] = field(default_factory=list)
    _complex: Optional[LatticeComplex] = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.window)

    def complex(self) -> LatticeComplex:
        if self._complex is None:
            self._complex = complex_from_pieces(self.pieces, self.window)
        return self._complex


def _cube(n: int, dim: int = 3) -> Window:
    return tuple((0, n) for _ in range(dim))


# -- the octant shells and their ladders ------------------------------------------------

def shell_pieces(a) -> list[tuple[str, Cell]]:
    """Level ``a`` of the octant shell, without the part in the open xz quarter-plane."""
    a = F(a)
    return [
        (f"shell {a} z=0 x=a", _box(3, {0: point_iv(a), 1: closed(0, a)})),
        (f"shell {a} z=0 y=a", _box(3, {0: closed(0, a), 1: point_iv(a)})),
        (f"shell {a} x=0 y=a", _box(3, {1: point_iv(a), 2: closed(0, a)})),
        (f"shell {a} x=0 z=a", _box(3, {1: closed(0, a), 2: point_iv(a)})),
    ]


def _xz_pieces(a, shift) -> list[tuple[str, Cell]]:
    """The xz quarter-plane part of level ``a`` moved right by ``shift``, plus the filler."""
    a, shift = F(a), F(shift)
    out = [
        (f"rung {a} vertical", _box(3, {0: point_iv(a + shift), 2: half_open(0, a)})),
        (f"rung {a} top", _box(3, {0: half_open(shift, a + shift), 2: point_iv(a)})),
    ]
    if shift:
        out.append((f"filler {a}", _box(3, {0: closed(0, shift), 2: point_iv(a)})))
    return out


def _instance(name: str, named: list[tuple[str, Cell]], window: Window) -> Instance:
    from .complex import _clip_to_window

    pieces, labels = [], []
    for label, cell in named:
        clipped = _clip_to_window(cell, window)
        if clipped.nonempty:
            pieces.append(clipped.simplified())
            labels.append(label)
    return Instance(name, pieces, window, labels)


def s0_pieces(N: int) -> list[tuple[str, Cell]]:
    out = []
    for n in range(1, N + 1):
        out += shell_pieces(n) + _xz_pieces(n, 0)
    return out


def build_s0(N: int) -> Instance:
    """Octant-boundary points whose largest coordinate is a positive integer ``n <= N``."""
    if N < 1:
        raise ConstructionError("N must be at least 1")
    return _instance(f"s0 N={N}", s0_pieces(N), _cube(N))


def sd_pieces(d: int, N: int) -> list[tuple[str, Cell]]:
    out = []
    for n in range(1, N + 1):
        out += shell_pieces(n) + _xz_pieces(n, d)
    return out


def build_sd(d: int, N: int, window: Optional[Window] = None) -> Instance:
    """The shell with its xz part shifted by ``d`` and the gaps filled, levels ``1..N``.

    The component of ``(d, 0, 0)`` climbs from level ``kd`` to level ``(k+1)d``,
    so within the default window ``[0, N]^3`` its x-axis trace is
    ``d, 2d, ..., floor(N/d) d``.
    """
    if d < 1:
        raise ConstructionError("d must be at least 1")
    if N < d + 1:
        raise ConstructionError(f"window N={N} cannot hold one full rung for d={d} (need N >= {d + 1})")
    return _instance(f"sd d={d} N={N}", sd_pieces(d, N), window or _cube(N))


# -- ladders over sparse sets ----------------------------------------------------------

@dataclass(frozen=True)
class LadderSpec:
    """A finite increasing set ``A`` with ``min A = 0`` and a map ``f`` on it.

    With ``successor`` omitted, ``f`` sends each point to the next one.  The
    largest point may be left unmapped; its image lies beyond any window
    that contains ``A``.
    """

    points: tuple[Fraction, ...]
    successor: Optional[tuple[tuple[Fraction, Fraction], ...]] = None

    def __post_init__(self):
        pts = tuple(F(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if len(pts) < 3:
            raise ConstructionError("a ladder needs at least 3 points")
        if pts[0] != 0:
            raise ConstructionError("the smallest point must be 0")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise ConstructionError("points must be strictly increasing")
        if self.successor is not None:
            succ = tuple((F(a), F(b)) for a, b in self.successor)
            object.__setattr__(self, "successor", succ)
            fmap = dict(succ)
            members = set(pts)
            for a, b in fmap.items():
                if a not in members:
                    raise ConstructionError(f"f is defined outside A at {a}")
                if b <= a:
                    raise ConstructionError(f"f must dominate the identity, f({a}) = {b}")
                if b not in members and b <= pts[-1]:
                    raise ConstructionError(f"f({a}) = {b} is not in A")
            dom = sorted(fmap)
            if any(fmap[a] >= fmap[b] for a, b in zip(dom, dom[1:])):
                raise ConstructionError("f must be strictly increasing")

    def f(self, a: Fraction) -> Optional[Fraction]:
        if self.successor is not None:
            return dict(self.successor).get(F(a))
        i = self.points.index(F(a))
        return self.points[i + 1] if i + 1 < len(self.points) else None

    def orbit(self, limit: Fraction) -> list[Fraction]:
        """``f(0), f(f(0)), ...`` up to ``limit``."""
        out = []
        a = self.f(F(0))
        while a is not None and a <= limit:
            out.append(a)
            a = self.f(a)
        return out


def ladder_pieces(spec: LadderSpec, top: Fraction) -> list[tuple[str, Cell]]:
    out = []
    for a in spec.points:
        if a == 0:
            continue
        out += shell_pieces(a)
        fa = spec.f(a)
        if fa is None or fa > top:
            # the image is past the window: only the clipped top survives
            out.append((f"rung {a} top", _box(3, {0: closed(0, top), 2: point_iv(a)})))
            continue
        out.append((f"rung {a} vertical", _box(3, {0: point_iv(fa), 2: half_open(0, a)})))
        out.append((f"rung {a} top", _box(3, {0: closed(0, fa), 2: point_iv(a)})))
    return out


def build_ladder(spec: LadderSpec, N: Optional[int] = None) -> Instance:
    """The ladder over ``A``: shells at the points of ``A``, rungs climbing along ``f``."""
    N = N if N is not None else math.ceil(spec.points[-1])
    return _instance(f"ladder |A|={len(spec.points)} N={N}", ladder_pieces(spec, F(N)), _cube(N))


# -- addition in seven dimensions --------------------------------------------------------

_TAG_SAME = (0, 1, 0, 1)
_TAG_MIXED = (0, 1, 1, 0)
_TAG_ODD_EVEN_LITERAL = (1, 0, 0, 1)


def gamma_tag(m: int, n: int, literal: bool = False) -> tuple[int, int, int, int]:
    """The tag block of the path attached to ``(m, n)``.

    Consecutive paths along a diagonal ``(m, n) -> (m+1, n+1)`` must share
    their tag, which forces one tag for both mixed parities.  ``literal``
    keeps a separate tag for odd ``m`` with even ``n``; that variant breaks
    every diagonal that starts at an odd offset and is kept only to show it.
    """
    if m % 2 == n % 2:
        return _TAG_SAME
    if literal and m % 2 == 1:
        return _TAG_ODD_EVEN_LITERAL
    return _TAG_MIXED


def gamma_points(m: int, n: int, literal: bool = False) -> list[tuple[int, ...]]:
    t = gamma_tag(m, n, literal)
    return [(m, n, 0, 0, 0, 0), (m, n) + t, (m + 1, n) + t, (m + 1, n + 1) + t]


def build_gamma(m: int, n: int, literal: bool = False) -> list[Cell]:
    """The three segments joining the four points of the ``(m, n)`` path in R^6."""
    pts = gamma_points(m, n, literal)
    return [segment(p, q) for p, q in zip(pts, pts[1:])]


def x_pieces(N: int, literal: bool = False) -> list[tuple[str, Cell]]:
    out = []
    for k in range(N + 1):
        for m in range(N + 1):
            for n in range(N + 1):
                for i, g in enumerate(build_gamma(m, n, literal)):
                    out.append((f"gamma k={k} m={m} n={n} #{i}", lift(g, prefix=(k,))))
    for d in range(N + 1):
        out.append((f"seed diagonal d={d}", segment((d, 0, d, 0, 0, 0, 0), (d, 0, d, 1, 1, 1, 1))))
    out.append(("seed line", segment((0, 0, 0, 1, 1, 1, 1), (N, 0, N, 1, 1, 1, 1))))
    return out


def build_x(N: int, literal: bool = False) -> Instance:
    """The seven-dimensional set whose origin component traces the graph of addition.

    Within the window ``[0, N]^3 x [0, 1]^4`` the trace on the last four
    coordinates equal to 0 is ``{(a, b, a + b) : a + b <= N}``.
    """
    if N < 1:
        raise ConstructionError("N must be at least 1")
    window = tuple([(0, N)] * 3 + [(0, 1)] * 4)
    return _instance(f"x N={N}" + (" literal" if literal else ""), x_pieces(N, literal), window)


# -- divisibility in four dimensions ------------------------------------------------------

def cprime_width(N: int) -> int:
    """x-extent that holds ``dn + 1`` for all ``d, n <= N``."""
    return N * N + 1


def build_cprime(N: int, width: Optional[int] = None) -> Instance:
    """The shifted shells ``S_d x {d}`` for ``1 <= d <= N`` joined by the line ``x = 1, y = z = 0``.

    The component of ``(1, 0, 0, 1)`` meets the x-axis of slice ``d`` at
    ``1, 1 + d, 1 + 2d, ...``.  ``width`` bounds the first three coordinates.
    """
    if N < 2:
        raise ConstructionError("N must be at least 2")
    W = width if width is not None else cprime_width(N)
    if W < 2:
        raise ConstructionError("width must be at least 2")
    named = []
    for d in range(1, N + 1):
        for label, cell in sd_pieces(d, W):
            named.append((f"d={d} {label}", lift(cell, suffix=(d,))))
    named.append(("line", _box(4, {0: point_iv(1), 3: closed(1, N)})))
    window = ((0, W), (0, W), (0, W), (1, N))
    return _instance(f"cprime N={N} W={W}", named, window)


# -- predictions ------------------------------------------------------------------------------

def positive_x_axis(dim: int = 3) -> tuple[dict[int, Fraction], list[Constraint]]:
    fixed = {i: F(0) for i in range(1, dim)}
    unit = [F(0)] * dim
    unit[0] = F(-1)
    return fixed, [Constraint(tuple(unit), "<", F(0))]


def predict_multiples(d: int, N: int) -> list[Point]:
    return [(F(d * k), F(0), F(0)) for k in range(1, N // d + 1)]


def predict_addition(N: int) -> list[Point]:
    return sorted((F(a), F(b), F(a + b), F(0), F(0), F(0), F(0)) for a in range(N + 1) for b in range(N + 1 - a))


def predict_divisibility(N: int, width: Optional[int] = None) -> list[Point]:
    W = width if width is not None else cprime_width(N)
    return sorted((F(d * n + 1), F(0), F(0), F(d)) for d in range(1, N + 1) for n in range(0, (W - 1) // d + 1))


def predict_orbit(spec: LadderSpec, N: int) -> list[Point]:
    return [(a, F(0), F(0)) for a in spec.orbit(F(N))]


def squares_spec(k: int = 5) -> LadderSpec:
    return LadderSpec(tuple(F(i * i) for i in range(k + 1)))


def powers_of_two_spec(k: int = 5) -> LadderSpec:
    return LadderSpec((F(0),) + tuple(F(2**i) for i in range(k + 1)))


def parse_ladder_spec(text: str) -> LadderSpec:
    """``"0,1,4,9"`` (f = next point) or ``"0,1,3,7;0:1,1:3,3:7"`` (explicit f)."""
    from .parser import parse_rational

    def rational(t: str) -> Fraction:
        try:
            return parse_rational(t)
        except ValueError as e:
            raise ConstructionError(f"bad ladder spec {text!r}: {e}") from None

    pts_text, _, map_text = text.partition(";")
    pts = tuple(rational(p) for p in pts_text.split(",") if p.strip())
    succ = None
    if map_text.strip():
        pairs = []
        for item in map_text.split(","):
            a, sep, b = item.partition(":")
            if not sep:
                raise ConstructionError(f"expected a:b in {item!r}")
            pairs.append((rational(a), rational(b)))
        succ = tuple(pairs)
    return LadderSpec(pts, succ)


__all__ = [
    "ConstructionError",
    "Instance",
    "LadderSpec",
    "build_cprime",
    "build_gamma",
    "build_ladder",
    "build_s0",
    "build_sd",
    "build_x",
    "cprime_width",
    "gamma_points",
    "gamma_tag",
    "lift",
    "parse_ladder_spec",
    "positive_x_axis",
    "powers_of_two_spec",
    "predict_addition",
    "predict_divisibility",
    "predict_multiples",
    "predict_orbit",
    "segment",
    "squares_spec",
]
