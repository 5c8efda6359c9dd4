"""Quantifier elimination for ordered rational vector spaces with floor, and
lattice-fiber component computation for bounded semilinear sets."""
from .complex import (
    DifferentComponents,
    GeometryError,
    InfiniteTrace,
    LatticeComplex,
    NotInSet,
    Polyline,
    complex_from_pieces,
    component_of_point,
    components,
    decompose_window,
    read_setfile,
    trace,
    verify_polyline,
    witness_path,
    write_setfile,
)
from .constructions import (
    LadderSpec,
    build_cprime,
    build_ladder,
    build_s0,
    build_sd,
    build_x,
)
from .formulas import Formula, evaluate, format_formula, simplify
from .parser import ParseError, parse_formula, parse_term
from .polyhedra import (
    Cell,
    Constraint,
    cell_closure,
    cell_difference,
    cell_nonempty,
    cells_adjacent,
)
from .qe import QEError, decide_sentence, eliminate_int_var, eliminate_real_var, floor_residue, qe
from .terms import Affine, Term, collapse_floors, evaluate_term, format_term, linear_normalize
from .verify import (
    compare_with_oracle,
    oracle_components,
    verify_addition,
    verify_divisibility,
    verify_ladder,
    verify_multiples,
)

__all__ = [
    "Affine",
    "Cell",
    "Constraint",
    "DifferentComponents",
    "Formula",
    "GeometryError",
    "InfiniteTrace",
    "LadderSpec",
    "LatticeComplex",
    "NotInSet",
    "ParseError",
    "Polyline",
    "QEError",
    "Term",
    "build_cprime",
    "build_ladder",
    "build_s0",
    "build_sd",
    "build_x",
    "cell_closure",
    "cell_difference",
    "cell_nonempty",
    "cells_adjacent",
    "collapse_floors",
    "compare_with_oracle",
    "complex_from_pieces",
    "component_of_point",
    "components",
    "decide_sentence",
    "decompose_window",
    "eliminate_int_var",
    "eliminate_real_var",
    "evaluate",
    "evaluate_term",
    "floor_residue",
    "format_formula",
    "format_term",
    "linear_normalize",
    "oracle_components",
    "parse_formula",
    "parse_term",
    "qe",
    "read_setfile",
    "simplify",
    "trace",
    "verify_addition",
    "verify_divisibility",
    "verify_ladder",
    "verify_multiples",
    "verify_polyline",
    "witness_path",
    "write_setfile",
]
