"""Independent component oracle and the trace-law verification targets."""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .complex import (
    LatticeComplex,
    Window,
    component_of_point,
    components,
    trace,
)
from .constructions import (
    Instance,
    LadderSpec,
    build_cprime,
    build_ladder,
    build_sd,
    build_x,
    cprime_width,
    positive_x_axis,
    predict_divisibility,
    predict_multiples,
    predict_orbit,
)
from .polyhedra import Cell, Constraint, Point, format_point

F = Fraction


class VerifyError(ValueError):
    pass


# -- oracle ------------------------------------------------------------------------

def _closure_keys(c: Cell) -> list[tuple[int, ...]]:
    """Integer grid squares met by the bounding box of the closure."""
    ranges = []
    for i in range(c.dim):
        iv = c.bounds(i)
        if iv.lo is None or iv.hi is None:
            raise VerifyError("oracle pieces must be bounded")
        ranges.append(range(math.floor(iv.lo), math.floor(iv.hi) + 1))
    return list(itertools.product(*ranges))


def _touch(p: Cell, q: Cell) -> bool:
    cl = p.relaxed().meet(q.relaxed())
    return cl.meet(p).nonempty or cl.meet(q).nonempty


def oracle_components(pieces: Sequence[Cell]) -> list[list[int]]:
    """Classes of piece indices, joining pieces whose closures meet inside their union.

    Works on the generating pieces directly (no lattice decomposition) and
    only compares pieces whose closure bounding boxes share a unit square.
    """
    parent = list(range(len(pieces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    live = [k for k, p in enumerate(pieces) if p.nonempty]
    buckets: dict[tuple[int, ...], list[int]] = {}
    for k in live:
        for key in _closure_keys(pieces[k]):
            buckets.setdefault(key, []).append(k)
    tested = set()
    for members in buckets.values():
        for a, b in itertools.combinations(members, 2):
            if (a, b) in tested:
                continue
            tested.add((a, b))
            ra, rb = find(a), find(b)
            if ra != rb and _touch(pieces[a], pieces[b]):
                parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[int]] = {}
    for k in live:
        classes.setdefault(find(k), []).append(k)
    return sorted(classes.values())


def oracle_trace(
    pieces: Sequence[Cell], members: Sequence[int], fixed: dict[int, Fraction], extra: Sequence[Constraint] = ()
) -> list[Point]:
    out = set()
    for k in members:
        c = pieces[k].fix(fixed).with_constraints(extra)
        if not c.nonempty:
            continue
        ivs = [c.bounds(i) for i in range(c.dim)]
        if not all(iv.is_point() for iv in ivs):
            raise VerifyError(f"piece {k} meets the subspace in more than a point")
        out.add(tuple(iv.lo for iv in ivs))
    return sorted(out)


def oracle_class_of_point(pieces: Sequence[Cell], classes: list[list[int]], p: Point) -> list[int]:
    for cls in classes:
        if any(pieces[k].contains(p) for k in cls):
            return cls
    raise VerifyError(f"{format_point(p)} is in no piece")


@dataclass
class Agreement:
    ok: bool
    oracle_classes: int
    complex_components: int
    problems: list[str] = field(default_factory=list)


def compare_with_oracle(pieces: Sequence[Cell], lc: LatticeComplex) -> Agreement:
    """Check that lattice components and oracle classes induce the same partition of pieces."""
    lab = components(lc)
    classes = oracle_components(pieces)
    problems = []
    label_of: dict[int, int] = {}
    for k, p in enumerate(pieces):
        if not p.nonempty:
            continue
        v = lc.locate(p.sample())
        if v is None:
            problems.append(f"piece {k} sample is missing from the complex")
            continue
        label_of[k] = lab.labels[v]
    for v, k in lc.origin.items():
        if k in label_of and lab.labels[v] != label_of[k]:
            problems.append(f"cells of piece {k} fall in different components")
    seen_labels: dict[int, int] = {}
    for i, cls in enumerate(classes):
        labels = {label_of[k] for k in cls if k in label_of}
        if len(labels) > 1:
            problems.append(f"oracle class {i} spans {len(labels)} components")
        for lab_id in labels:
            if lab_id in seen_labels and seen_labels[lab_id] != i:
                problems.append(f"component {lab_id} spans oracle classes {seen_labels[lab_id]} and {i}")
            seen_labels[lab_id] = i
    if len(seen_labels) != lab.count:
        problems.append(f"{lab.count - len(seen_labels)} components hold no piece sample")
    return Agreement(not problems, len(classes), lab.count, problems)


# -- reports -------------------------------------------------------------------------

@dataclass
class VerifyReport:
    name: str
    window: Window
    expected: list[Point]
    computed: list[Point]
    oracle: list[Point]
    runtime: float = 0.0
    warnings: list[str] = field(default_factory=list)
    # the construction the traces were read from
    instance: Optional[Instance] = field(default=None, repr=False, compare=False)

    @property
    def match(self) -> bool:
        return self.expected == self.computed == self.oracle

    def lines(self, machine: bool = False) -> list[str]:
        if machine:
            out = [f"name\t{self.name}", "window\t" + " ".join(f"{lo} {hi}" for lo, hi in self.window)]
            out += ["expected\t" + format_point(p) for p in self.expected]
            out += ["computed\t" + format_point(p) for p in self.computed]
            out += ["oracle\t" + format_point(p) for p in self.oracle]
            out += ["warning\t" + w for w in self.warnings]
            out.append(f"match\t{'true' if self.match else 'false'}")
            return out
        out = [f"{self.name}: {'match' if self.match else 'MISMATCH'}"]
        out.append("  window " + " x ".join(f"[{lo},{hi}]" for lo, hi in self.window))
        out.append(f"  {len(self.computed)} trace points; expected {len(self.expected)}; oracle {len(self.oracle)}")
        for label, pts in (("missing", sorted(set(self.expected) - set(self.computed))),
                           ("unexpected", sorted(set(self.computed) - set(self.expected))),
                           ("oracle disagrees", sorted(set(self.oracle) ^ set(self.computed)))):
            for p in pts:
                out.append(f"  {label} {format_point(p)}")
        for w in self.warnings:
            out.append(f"  warning: {w}")
        return out


def _traces(inst: Instance, seed: Point, subspaces) -> tuple[list[Point], list[Point]]:
    lc = inst.complex()
    comp = component_of_point(lc, seed)
    computed = set()
    for fixed, extra in subspaces:
        computed.update(trace(lc, comp, fixed, extra))
    classes = oracle_components(inst.pieces)
    cls = oracle_class_of_point(inst.pieces, classes, seed)
    oracle = set()
    for fixed, extra in subspaces:
        oracle.update(oracle_trace(inst.pieces, cls, fixed, extra))
    return sorted(computed), sorted(oracle)


def verify_multiples(d: int, count: int, window: Optional[int] = None) -> VerifyReport:
    """The x-axis trace of the component of ``(d, 0, 0)`` recovers ``d, 2d, ..., count d``."""
    start = time.perf_counter()
    bound = count * d
    N = window if window is not None else bound
    warnings = []
    if N < bound:
        warnings.append(f"window {N} is below {bound}, the bound that keeps {count} trace points stable")
    inst = build_sd(d, N)
    fixed, extra = positive_x_axis(3)
    computed, oracle = _traces(inst, (F(d), F(0), F(0)), [(fixed, extra)])
    expected = predict_multiples(d, N)
    return VerifyReport(f"multiples d={d}", inst.window, expected, computed, oracle, time.perf_counter() - start, warnings, inst)


def verify_addition(count: int, window: Optional[int] = None) -> VerifyReport:
    """The origin-component trace on the last four coordinates equal to 0 is the graph of ``+``.

    Reported for summands up to ``count``; the window ``2 count`` holds every sum.
    """
    start = time.perf_counter()
    bound = 2 * count
    N = window if window is not None else bound
    warnings = []
    if N < bound:
        warnings.append(f"window {N} is below {bound}, the bound that holds every sum of summands up to {count}")
    inst = build_x(N)
    fixed = {i: F(0) for i in range(3, 7)}
    computed, oracle = _traces(inst, (F(0),) * 7, [(fixed, ())])

    def keep(pts):
        return [p for p in pts if p[0] <= count and p[1] <= count]

    expected = sorted((F(a), F(b), F(a + b)) + (F(0),) * 4 for a in range(count + 1) for b in range(count + 1) if a + b <= N)
    return VerifyReport(f"addition max={count}", inst.window, expected, keep(computed), keep(oracle), time.perf_counter() - start, warnings, inst)


def verify_divisibility(count: int, width: Optional[int] = None) -> VerifyReport:
    """Slices ``d = 1..count`` of the component of ``(1, 0, 0, 1)`` meet the x-axis at ``1 + dn``."""
    start = time.perf_counter()
    bound = cprime_width(count)
    W = width if width is not None else bound
    warnings = []
    if W < bound:
        warnings.append(f"width {W} is below {bound}, the bound that holds dn + 1 for d, n <= {count}")
    inst = build_cprime(count, W)
    subspaces = [({1: F(0), 2: F(0), 3: F(d)}, ()) for d in range(1, count + 1)]
    computed, oracle = _traces(inst, (F(1), F(0), F(0), F(1)), subspaces)
    expected = predict_divisibility(count, W)
    return VerifyReport(f"divisibility max={count}", inst.window, expected, computed, oracle, time.perf_counter() - start, warnings, inst)


def verify_ladder(spec: LadderSpec, window: Optional[int] = None) -> VerifyReport:
    """The component of ``(f(0), 0, 0)`` meets the positive x-axis in the orbit of ``f(0)``."""
    start = time.perf_counter()
    N = window if window is not None else math.ceil(spec.points[-1])
    warnings = []
    if N < spec.points[-1]:
        warnings.append(f"window {N} cuts off points of A above it")
    inst = build_ladder(spec, N)
    first = spec.f(F(0))
    if first is None or first > N:
        raise VerifyError("f(0) lies outside the window")
    fixed, extra = positive_x_axis(3)
    computed, oracle = _traces(inst, (first, F(0), F(0)), [(fixed, extra)])
    expected = predict_orbit(spec, N)
    return VerifyReport(f"ladder A={','.join(str(a) for a in spec.points)}", inst.window, expected, computed, oracle, time.perf_counter() - start, warnings, inst)


__all__ = [
    "Agreement",
    "VerifyError",
    "VerifyReport",
    "compare_with_oracle",
    "oracle_class_of_point",
    "oracle_components",
    "oracle_trace",
    "verify_addition",
    "verify_divisibility",
    "verify_ladder",
    "verify_multiples",
]
