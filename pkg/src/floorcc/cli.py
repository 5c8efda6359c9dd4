"""Command-line front end: ``floorcc <command> ...``.

Exit codes: 0 success or true, 1 false or trace mismatch, 2 usage or input
error, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Optional, Sequence, TextIO

from .complex import (
    GeometryError,
    LatticeComplex,
    component_of_point,
    components,
    decompose_window,
    read_setfile,
    restrict,
    trace,
    witness_path,
    write_setfile,
)
from .constructions import (
    ConstructionError,
    Instance,
    build_cprime,
    build_ladder,
    build_s0,
    build_sd,
    build_x,
    parse_ladder_spec,
    predict_addition,
    predict_divisibility,
    predict_multiples,
    predict_orbit,
)
from .formulas import format_formula, free_vars
from .parser import ParseError, parse_formula, parse_rational
from .polyhedra import Constraint, format_point
from .qe import QEError, decide_sentence, qe
from .verify import VerifyError, verify_addition, verify_divisibility, verify_ladder, verify_multiples

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument helpers -------------------------------------------------------------------

def parse_point(text: str) -> tuple[Fraction, ...]:
    body = text.strip().removeprefix("(").removesuffix(")")
    try:
        return tuple(parse_rational(p) for p in body.split(","))
    except ValueError as e:
        raise UsageError(f"bad point {text!r}: {e}") from None


def parse_window(text: str, dim: Optional[int] = None) -> tuple[tuple[int, int], ...]:
    """``lo:hi`` for every coordinate, or ``lo:hi,lo:hi,...`` per coordinate."""
    try:
        parts = [tuple(int(x) for x in p.split(":")) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"bad window {text!r}") from None
    if any(len(p) != 2 for p in parts):
        raise UsageError(f"bad window {text!r}; use lo:hi")
    if len(parts) == 1 and dim is not None:
        parts = parts * dim
    if dim is not None and len(parts) != dim:
        raise UsageError(f"window has {len(parts)} ranges but the set has dimension {dim}")
    return tuple(parts)


def parse_fix(items: Sequence[str]) -> dict[int, Fraction]:
    """``i=v`` with 1-based coordinate ``i``."""
    out = {}
    for item in items:
        k, sep, v = item.partition("=")
        if not sep:
            raise UsageError(f"bad --fix {item!r}; use i=value")
        try:
            out[int(k.lstrip("x")) - 1] = parse_rational(v)
        except ValueError:
            raise UsageError(f"bad --fix {item!r}") from None
    return out


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(str(e)) from None


def _load(path: str, window: Optional[str]) -> LatticeComplex:
    lc = read_setfile(_read_text(path))
    if window:
        lc = restrict(lc, parse_window(window, lc.dim))
    return lc


def _point_line(p, machine: bool) -> str:
    if machine:
        return " ".join(str(x) for x in p)
    return format_point(p)


# -- commands ---------------------------------------------------------------------------

def _trace_sink(path: Optional[str]):
    if path is None:
        return None, None
    fh = sys.stderr if path == "-" else open(path, "w")

    def emit(line: str):
        fh.write(line + "\n")

    return emit, fh


def cmd_qe(args, out: TextIO) -> int:
    f = parse_formula(args.formula)
    emit, fh = _trace_sink(args.trace_log)
    try:
        result = qe(f, trace=emit)
    finally:
        if fh is not None and fh is not sys.stderr:
            fh.close()
    out.write(format_formula(result) + "\n")
    return EXIT_OK


def cmd_decide(args, out: TextIO) -> int:
    f = parse_formula(args.formula)
    if free_vars(f):
        raise UsageError("decide needs a sentence; free variables: " + ", ".join(sorted(free_vars(f))))
    emit, fh = _trace_sink(args.trace_log)
    try:
        value = decide_sentence(f, trace=emit)
    finally:
        if fh is not None and fh is not sys.stderr:
            fh.close()
    out.write(("true" if value else "false") + "\n")
    return EXIT_OK if value else EXIT_FALSE


def cmd_components(args, out: TextIO) -> int:
    lc = _load(args.setfile, args.window)
    lab = components(lc)
    groups = lab.groups()
    if args.format == "machine":
        out.write(f"components {lab.count}\n")
    else:
        box = " x ".join(f"[{lo},{hi}]" for lo, hi in lc.window)
        out.write(f"{lab.count} components within window {box}\n")
    for k, members in enumerate(groups):
        cells = " ".join("(%s, %d)" % (" ".join(str(z) for z in v[0]), v[1]) for v in members)
        if args.format == "machine":
            out.write(f"component {k}: {cells}\n")
        else:
            out.write(f"component {k}: {len(members)} cells: {cells}\n")
    return EXIT_OK


def cmd_trace(args, out: TextIO) -> int:
    lc = _load(args.setfile, args.window)
    fixed = parse_fix(args.fix)
    extra = []
    for i in args.positive or ():
        unit = [Fraction(0)] * lc.dim
        unit[i - 1] = Fraction(-1)
        extra.append(Constraint(tuple(unit), "<", Fraction(0)))
    if args.point:
        cells = component_of_point(lc, parse_point(args.point))
    else:
        cells = lc.vertices()
    for p in trace(lc, cells, fixed, extra):
        out.write(_point_line(p, args.format == "machine") + "\n")
    return EXIT_OK


def cmd_path(args, out: TextIO) -> int:
    lc = _load(args.setfile, args.window)
    path = witness_path(lc, parse_point(args.source), parse_point(args.target))
    for p in path.vertices:
        out.write(_point_line(p, args.format == "machine") + "\n")
    return EXIT_OK


def _build_instance(args) -> tuple[Instance, list]:
    name, params = args.name, args.params
    n = args.max

    def need(k: int, usage: str):
        if len(params) != k:
            raise UsageError(f"usage: build {usage}")

    try:
        if name == "s0":
            need(0, "s0 --max N")
            return build_s0(n or 4), []
        if name == "sd":
            need(1, "sd D --max N")
            d = int(params[0])
            N = n or 8 * d
            return build_sd(d, N), predict_multiples(d, N)
        if name == "x":
            need(0, "x --max N")
            N = n or 4
            return build_x(N), predict_addition(N)
        if name == "cprime":
            need(0, "cprime --max N")
            N = n or 3
            return build_cprime(N), predict_divisibility(N)
        if name == "ladder":
            need(1, "ladder SPEC [--max N]")
            spec = parse_ladder_spec(params[0])
            inst = build_ladder(spec, n)
            return inst, predict_orbit(spec, inst.window[0][1])
    except ValueError as e:
        raise UsageError(str(e)) from None
    raise UsageError(f"unknown construction {name!r}")


def cmd_build(args, out: TextIO) -> int:
    if args.name == "formula":
        if len(args.params) != 1 or not args.window:
            raise UsageError("usage: build formula TEXT --window lo:hi[,lo:hi...]")
        f = parse_formula(args.params[0])
        coords = sorted(free_vars(f))
        lc = decompose_window(f, parse_window(args.window, len(coords)), coords)
        predictions = []
    else:
        inst, predictions = _build_instance(args)
        lc = inst.complex()
    out.write(write_setfile(lc))
    if args.predictions:
        with open(args.predictions, "w") as fh:
            for p in predictions:
                fh.write(_point_line(p, True) + "\n")
    return EXIT_OK


def cmd_verify(args, out: TextIO) -> int:
    name, params, m = args.name, args.params, args.max
    try:
        if name == "multiples":
            if len(params) != 1:
                raise UsageError("usage: verify multiples D --max M")
            report = verify_multiples(int(params[0]), m or 8, args.window_size)
        elif name == "addition":
            report = verify_addition(m or 4, args.window_size)
        elif name == "divisibility":
            report = verify_divisibility(m or 5, args.window_size)
        elif name == "ladder":
            if len(params) != 1:
                raise UsageError("usage: verify ladder SPEC [--max N]")
            report = verify_ladder(parse_ladder_spec(params[0]), m)
        else:
            raise UsageError(f"unknown verification target {name!r}")
    except (ConstructionError, VerifyError) as e:
        raise UsageError(str(e)) from None
    for line in report.lines(machine=args.format == "machine"):
        out.write(line + "\n")
    if args.timing:
        sys.stderr.write(f"runtime {report.runtime:.2f}s\n")
    return EXIT_OK if report.match else EXIT_FALSE


# -- parser -----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="floorcc", description="Quantifier elimination with floor, and components of lattice-fibered semilinear sets.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, window=True):
        sp.add_argument("--format", choices=("text", "machine"), default="text")
        if window:
            sp.add_argument("--window", help="lo:hi for every coordinate, or lo:hi,lo:hi,... per coordinate")

    sp = sub.add_parser("qe", help="eliminate quantifiers from a formula")
    sp.add_argument("formula")
    sp.add_argument("--trace-log", help="write one line per elimination pass to this file ('-' for stderr)")
    common(sp, window=False)
    sp.set_defaults(run=cmd_qe)

    sp = sub.add_parser("decide", help="decide a sentence (exit 0 true, 1 false)")
    sp.add_argument("formula")
    sp.add_argument("--trace-log")
    common(sp, window=False)
    sp.set_defaults(run=cmd_decide)

    sp = sub.add_parser("components", help="list the components of a set file")
    sp.add_argument("setfile")
    common(sp)
    sp.set_defaults(run=cmd_components)

    sp = sub.add_parser("trace", help="points of a set (or of one component) on an affine subspace")
    sp.add_argument("setfile")
    sp.add_argument("--point", help="restrict to the component of this point, e.g. 2,0,0")
    sp.add_argument("--fix", action="append", default=[], help="fix coordinate i (1-based) to a value: i=v")
    sp.add_argument("--positive", action="append", type=int, help="require coordinate i (1-based) to be positive")
    common(sp)
    sp.set_defaults(run=cmd_trace)

    sp = sub.add_parser("path", help="a checked polyline between two points of one component")
    sp.add_argument("setfile")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    common(sp)
    sp.set_defaults(run=cmd_path)

    sp = sub.add_parser("build", help="emit a construction as a set file (s0, sd, x, cprime, ladder, formula)")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--max", type=int, help="size parameter N")
    sp.add_argument("--predictions", help="also write the predicted trace to this file")
    common(sp)
    sp.set_defaults(run=cmd_build)

    sp = sub.add_parser("verify", help="check a trace law (multiples, addition, divisibility, ladder)")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*")
    sp.add_argument("--max", type=int, help="number of trace points or summand bound")
    sp.add_argument("--window", dest="window_size", type=int, help="override the window size")
    sp.add_argument("--timing", action="store_true", help="print the runtime on stderr")
    sp.add_argument("--format", choices=("text", "machine"), default="text")
    sp.set_defaults(run=cmd_verify)
    return p


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.run(args, out)
    except (UsageError, ParseError, QEError, GeometryError, ConstructionError, VerifyError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except AssertionError as e:
        sys.stderr.write(f"internal invariant violated: {e}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
