"""Quantifier elimination for the ordered reals with rational scaling and floor.

A quantified variable ``x`` is split as ``x = k + u`` with ``k`` an integer
and ``0 <= u < 1``.  Floors that mention ``u`` are then constant on finitely
many guarded pieces of the unit interval, so ``u`` can be removed by virtual
substitution over a dense order.  What remains is linear in the integer
``k``, possibly under floors with rational coefficients, and ``k`` is
removed by a Cooper-style elimination with congruences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoolConst,
    Cong,
    Div,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    IsInt,
    Lt,
    Not,
    Or,
    all_vars,
    atoms,
    conj,
    count_atoms,
    disj,
    evaluate,
    free_vars,
    map_atoms,
    nnf,
    rename_bound,
    simplify,
    substitute_atom,
    substitute_formula,
)
from .terms import ONE, ZERO, Affine, Floor, floor_of

Trace = Optional[Callable[[str], None]]


class QEError(ValueError):
    pass


class UnsupportedFormula(QEError):
    """Input outside the decidable fragment (divisibility under a quantifier)."""


class NonAffine(QEError):
    """The variable being eliminated occurs in a position the pass cannot handle."""


@dataclass(frozen=True)
class IntFracSplit:
    original: str
    int_part: str
    frac_part: str


@dataclass(frozen=True)
class FloorCaseSplit:
    floor_subterm: Floor
    integer_values: range
    base: Affine


def floor_residue(b: int, m: int) -> int:
    """The unique ``i`` in ``[0, m)`` with ``m | b + i``."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    return (-b) % m


# -- helpers -----------------------------------------------------------------

def _floors_with(form: Affine, vs: Iterable[str]) -> list[Floor]:
    vs = set(vs)
    return [fl for fl in form.floor_keys() if fl.arg.free_vars() & vs]


def _fresh(base: str, taken: set[str]) -> str:
    name = base
    i = 1
    while name in taken:
        name = f"{base}{i}"
        i += 1
    taken.add(name)
    return name


def _literals(f: Formula):
    """Atoms of an NNF formula with their polarity."""
    if isinstance(f, Atom):
        yield f, True
    elif isinstance(f, Not):
        yield f.arg, False
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from _literals(a)


def _le0(form: Affine) -> Formula:
    return Not(Lt(form.times(-1)))


def _between(form: Affine, lo: Fraction, hi: Fraction) -> Formula:
    """``lo <= form < hi``"""
    return And((Not(Lt(form.add_const(-lo))), Lt(form.add_const(-hi))))


def _conjuncts(f: Formula) -> tuple[Formula, ...]:
    return f.args if isinstance(f, And) else (f,)


def _disjuncts(f: Formula) -> tuple[Formula, ...]:
    return f.args if isinstance(f, Or) else (f,)


DNF_LIMIT = 64


def _dnf(f: Formula, limit: int = DNF_LIMIT) -> Optional[list[list[Formula]]]:
    """Disjunctive normal form of an NNF formula, or None past ``limit`` disjuncts."""
    if isinstance(f, Or):
        out = []
        for a in f.args:
            got = _dnf(a, limit)
            if got is None:
                return None
            out.extend(got)
            if len(out) > limit:
                return None
        return out
    if isinstance(f, And):
        out = [[]]
        for a in f.args:
            got = _dnf(a, limit)
            if got is None or len(out) * len(got) > limit:
                return None
            out = [x + y for x in out for y in got]
        return out
    return [[f]]


def _split_disjuncts(f: Formula) -> list[Formula]:
    """Disjuncts to eliminate separately: full DNF when small, else the top level."""
    parts = _dnf(f)
    if parts is None:
        return list(_disjuncts(f))
    out = []
    seen = set()
    for lits in parts:
        d = simplify(conj(*lits))
        if d != FALSE and d not in seen:
            seen.add(d)
            out.append(d)
    return out


# -- splitting x = k + u -------------------------------------------------------

def split_variable(f: Formula, x: str, taken: set[str] | None = None) -> tuple[Formula, IntFracSplit]:
    """Replace ``x`` by ``k + u``; the integer and range constraints are not added."""
    taken = set(all_vars(f)) if taken is None else taken
    taken.add(x)
    k = _fresh(f"{x}_int", taken)
    u = _fresh(f"{x}_frac", taken)
    image = Affine.make({k: ONE, u: ONE})
    g = substitute_formula(f, {x: image}, frozenset((k,)))
    return g, IntFracSplit(x, k, u)


def split_int_frac(f: Formula, x: str) -> Formula:
    """``f`` with ``x := k + u`` and the conjuncts ``Z(k)``, ``0 <= u``, ``u < 1``."""
    g, s = split_variable(f, x)
    k, u = Affine.var(s.int_part), Affine.var(s.frac_part)
    return conj(g, IsInt(k), _le0(u.times(-1)), Lt(u.add_const(-1)))


# -- removing floors of fractional variables ----------------------------------

def _floor_range(arg: Affine, frac_vars: set[str], int_vars) -> tuple[Affine, int, int]:
    """Split ``floor(arg)`` as ``floor(s) + e`` and bound ``e`` on the unit box."""
    lin = {k: c for k, c in arg.terms if k in frac_vars}
    for k, _ in arg.terms:
        if k not in frac_vars and not isinstance(k, str) and k.arg.free_vars() & frac_vars:
            raise NonAffine("fractional variable under an unresolved inner floor")
    rest = arg
    for k in lin:
        rest = rest.without(k)
    pos = sum((c for c in lin.values() if c > 0), ZERO)
    neg = sum((c for c in lin.values() if c < 0), ZERO)
    if rest.is_constant():
        c = rest.const
        lo = math.floor(neg + c)
        hi = math.ceil(pos + c) - 1 if pos > 0 else math.floor(c)
        return Affine.constant(0), lo, hi
    base = floor_of(rest, int_vars)
    return base, math.floor(neg), math.ceil(pos)


def _int_conditions_to_eq(f: Formula, frac_vars: set[str], int_vars) -> Formula:
    def conv(a: Atom) -> Formula:
        if isinstance(a, IsInt) and a.term.free_vars() & frac_vars:
            return Eq(a.term.minus(floor_of(a.term, int_vars)))
        if isinstance(a, Cong) and a.form.free_vars() & frac_vars:
            q = a.form.add_const(-a.residue).times(Fraction(1, a.modulus))
            return Eq(q.minus(floor_of(q, int_vars)))
        if isinstance(a, Div) and atom_mentions(a, frac_vars):
            raise UnsupportedFormula("div applied to a quantified variable")
        return a

    return map_atoms(f, conv)


def atom_mentions(a: Atom, vs) -> bool:
    from .formulas import atom_vars

    return bool(atom_vars(a) & set(vs))


def case_split_floors(f: Formula, frac_vars: list[str], int_vars: frozenset[str] = frozenset()) -> Formula:
    """Remove every floor whose argument mentions a variable ranging over ``[0, 1)``.

    ``floor(sum q_i u_i + s) = floor(s) + e`` where ``e`` ranges over a finite
    integer interval; each value comes with the guard
    ``e <= sum q_i u_i + s - floor(s) < e + 1``.  The caller is responsible for
    the box constraints on ``frac_vars``.
    """
    fv = set(frac_vars)
    f = nnf(_int_conditions_to_eq(f, fv, int_vars))

    def split(lit: Formula, positive: bool) -> Formula:
        a = lit
        fl = None
        if isinstance(a, (Eq, Lt)):
            found = _floors_with(a.form, fv)
            fl = found[0] if found else None
        if fl is None:
            return a if positive else Not(a)
        base, lo, hi = _floor_range(fl.arg, fv, int_vars)
        inner = fl.arg.minus(base)
        branches = []
        for e in range(lo, hi + 1):
            body = split(substitute_atom(a, {fl: base.add_const(e)}, int_vars), positive)
            if lo == hi:
                return body
            # the guards partition the unit box, so negation can stay inside each branch
            branches.append(conj(_between(inner, Fraction(e), Fraction(e + 1)), body))
        return disj(*branches)

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return split(g, True)
        if isinstance(g, Not):
            return split(g.arg, False)
        if isinstance(g, And):
            return And(tuple(go(a) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a) for a in g.args))
        return g

    return go(f)


# -- real variables: virtual substitution ---------------------------------------

_MINUS_INF = ("-inf", None)


def _check_real_affine(f: Formula, u: str):
    for a in atoms(f):
        if isinstance(a, (Eq, Lt)):
            if any(u in fl.arg.free_vars() for fl in a.form.floor_keys()):
                raise NonAffine(f"{u} occurs under a floor")
        elif isinstance(a, (IsInt, Cong, Div)) and atom_mentions(a, (u,)):
            raise NonAffine(f"{u} occurs in an integrality condition")


def _vs_atom(a: Atom, u: str, point) -> Formula:
    """Virtual substitution of ``point`` for ``u`` in one atom."""
    if not isinstance(a, (Eq, Lt)):
        return a
    c = a.form.coeff(u)
    if c == 0:
        return a
    kind, t = point
    if kind == "-inf":
        if isinstance(a, Eq):
            return FALSE
        return TRUE if c > 0 else FALSE
    val = a.form.without(u).plus(t.times(c))
    if kind == "pt":
        return type(a)(val)
    # t + eps
    if isinstance(a, Eq):
        return FALSE
    if c > 0:
        return Lt(val)
    return Or((Lt(val), Eq(val)))


def _real_points(f: Formula, u: str) -> list:
    points = [_MINUS_INF]
    seen = set()
    for a, positive in _literals(f):
        if not isinstance(a, (Eq, Lt)):
            continue
        c = a.form.coeff(u)
        if c == 0:
            continue
        root = a.form.without(u).times(-1 / c)
        if isinstance(a, Eq):
            p = ("pt", root) if positive else ("eps", root)
        elif positive:
            if c > 0:
                continue
            p = ("eps", root)
        else:
            if c < 0:
                continue
            p = ("pt", root)
        if p not in seen:
            seen.add(p)
            points.append(p)
    return points


def _mirror(f: Formula, v: str) -> Formula:
    return substitute_formula(f, {v: Affine.var(v).times(-1)})


def _lower_count(f: Formula, v: str) -> tuple[int, int]:
    lower = upper = 0
    for a, positive in _literals(f):
        if isinstance(a, (Eq, Lt)):
            c = a.form.coeff(v)
            if c == 0:
                continue
            if isinstance(a, Eq):
                lower += 1
                upper += 1
            elif (c < 0) == positive:
                lower += 1
            else:
                upper += 1
    return lower, upper


def _solved_equation(f: Formula, v: str) -> Optional[Affine]:
    for part in _conjuncts(f):
        if isinstance(part, Eq):
            c = part.form.coeff(v)
            if c != 0 and not any(v in fl.arg.free_vars() for fl in part.form.floor_keys()):
                return part.form.without(v).times(-1 / c)
    return None


def eliminate_real_var(f: Formula, u: str) -> Formula:
    """Quantifier-free equivalent of ``E u. f`` over the reals.

    ``f`` must be quantifier-free with ``u`` occurring only linearly outside
    floors and integrality conditions.
    """
    if u not in free_vars(f):
        return f
    f = simplify(f)
    _check_real_affine(f, u)
    out = []
    for d in _split_disjuncts(f):
        out.append(_eliminate_real_conj(d, u))
    return simplify(disj(*out))


def _eliminate_real_conj(f: Formula, u: str) -> Formula:
    keep = [p for p in _conjuncts(f) if u not in free_vars(p)]
    body = conj(*[p for p in _conjuncts(f) if u in free_vars(p)])
    if body == TRUE:
        return conj(*keep)
    t = _solved_equation(body, u)
    if t is not None:
        result = map_atoms(body, lambda a: _vs_atom(a, u, ("pt", t)))
        return simplify(conj(*keep, result))
    lower, upper = _lower_count(body, u)
    if upper < lower:
        body = simplify(_mirror(body, u))
    branches = [map_atoms(body, lambda a, p=p: _vs_atom(a, u, p)) for p in _real_points(body, u)]
    return simplify(conj(*keep, disj(*[simplify(b) for b in branches])))


# -- integer variables: Cooper-style elimination -------------------------------

def _residue_branches(f: Formula, k: str, int_vars) -> list[Formula]:
    """Make ``k`` floor-free by writing it as ``q*k + i`` for each residue ``i``.

    ``q`` is the least common denominator of the coefficients of ``k``
    under floors, so every such floor splits off an integer multiple of the
    new ``k``.  Nested floors may need another round.
    """
    todo = [f]
    done = []
    kk = Affine.var(k)
    while todo:
        g = todo.pop()
        q = 1
        for a in atoms(g):
            for form in _atom_forms(a):
                for fl in _floors_with(form, (k,)):
                    c = fl.arg.coeff(k)
                    if c != 0:
                        q = math.lcm(q, c.denominator)
        if q == 1:
            if any(_floors_with(form, (k,)) for a in atoms(g) for form in _atom_forms(a)):
                raise NonAffine(f"{k} occurs only under nested floors")
            done.append(g)
            continue
        for i in range(q):
            todo.append(simplify(substitute_formula(g, {k: kk.times(q).add_const(i)}, int_vars)))
    done.reverse()
    return done


def _atom_forms(a: Atom) -> tuple[Affine, ...]:
    if isinstance(a, (Eq, Lt, Cong)):
        return (a.form,)
    if isinstance(a, IsInt):
        return (a.term,)
    return (a.left, a.right)


def _period(a: Cong | IsInt, k: str) -> int:
    """Least ``p > 0`` such that shifting integer ``k`` by ``p`` preserves ``a``."""
    form, modulus = (a.term, 1) if isinstance(a, IsInt) else (a.form, a.modulus)
    c = form.coeff(k)
    if c == 0:
        return 1
    qm = c.denominator * modulus
    return qm // math.gcd(abs(c.numerator), qm)


def _ceil_of(t: Affine, int_vars) -> Affine:
    return floor_of(t.times(-1), int_vars).times(-1)


def _int_points(f: Formula, k: str, int_vars) -> list[Affine]:
    out: list[Affine] = []
    seen = set()
    for a, positive in _literals(f):
        if not isinstance(a, (Eq, Lt)):
            continue
        c = a.form.coeff(k)
        if c == 0:
            continue
        root = a.form.without(k).times(-1 / c)
        if isinstance(a, Eq):
            b = _ceil_of(root, int_vars) if positive else floor_of(root, int_vars).add_const(1)
        elif positive:
            if c > 0:
                continue
            b = floor_of(root, int_vars).add_const(1)
        else:
            if c < 0:
                continue
            b = _ceil_of(root, int_vars)
        if b not in seen:
            seen.add(b)
            out.append(b)
    return out


def _int_minus_inf(a: Atom, k: str) -> Formula:
    if not isinstance(a, (Eq, Lt)):
        return a
    c = a.form.coeff(k)
    if c == 0:
        return a
    if isinstance(a, Eq):
        return FALSE
    return TRUE if c > 0 else FALSE


def eliminate_int_var(f: Formula, k: str, int_vars: frozenset[str] = frozenset()) -> Formula:
    """Quantifier-free equivalent of ``E k. (Z(k) & f)``.

    ``k`` may occur linearly, inside ``Z`` and ``cong`` atoms, and under
    floors with rational coefficients.
    """
    if k not in free_vars(f):
        return f
    iv = frozenset(int_vars) | {k}
    f = simplify(substitute_formula(f, {}, iv))
    for a in atoms(f):
        if isinstance(a, Div) and atom_mentions(a, (k,)):
            raise UnsupportedFormula("div applied to a quantified variable")
    out = []
    for branch in _residue_branches(f, k, iv):
        for d in _split_disjuncts(branch):
            out.append(_eliminate_int_conj(d, k, iv))
    return simplify(disj(*out))


def _eliminate_int_conj(f: Formula, k: str, iv) -> Formula:
    keep = [p for p in _conjuncts(f) if k not in free_vars(p)]
    body = conj(*[p for p in _conjuncts(f) if k in free_vars(p)])
    if body == TRUE:
        return conj(*keep)
    t = _solved_equation(body, k)
    if t is not None:
        inst = substitute_formula(body, {k: t}, iv - {k})
        return simplify(conj(*keep, IsInt(t), inst))
    lower, upper = _lower_count(body, k)
    if upper < lower:
        body = simplify(_mirror(body, k))
    delta = 1
    for a in atoms(body):
        if isinstance(a, (Cong, IsInt)):
            delta = math.lcm(delta, _period(a, k))
    rest = iv - {k}
    branches = []
    at_inf = map_atoms(body, lambda a: _int_minus_inf(a, k))
    for j in range(1, delta + 1):
        branches.append(simplify(substitute_formula(at_inf, {k: Affine.constant(j)}, rest)))
    for b in _int_points(body, k, iv):
        for j in range(delta):
            branches.append(simplify(substitute_formula(body, {k: b.add_const(j)}, rest)))
    return simplify(conj(*keep, disj(*branches)))


# -- driver ---------------------------------------------------------------------

def _check_no_div_under_quantifier(f: Formula, inside: bool = False):
    if isinstance(f, Div):
        if inside:
            raise UnsupportedFormula("div is not allowed under a quantifier")
    elif isinstance(f, Not):
        _check_no_div_under_quantifier(f.arg, inside)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            _check_no_div_under_quantifier(a, inside)
    elif isinstance(f, Implies):
        _check_no_div_under_quantifier(f.left, inside)
        _check_no_div_under_quantifier(f.right, inside)
    elif isinstance(f, (Exists, Forall)):
        _check_no_div_under_quantifier(f.body, True)


class _Eliminator:
    def __init__(self, taken: set[str], trace: Trace):
        self.taken = taken
        self.trace = trace

    def log(self, var: str, step: str, f: Formula):
        if self.trace is not None:
            self.trace(f"{var}\t{step}\tatoms={count_atoms(f)}")

    def run(self, f: Formula) -> Formula:
        if isinstance(f, (Atom, BoolConst)):
            return simplify(f)
        if isinstance(f, Not):
            return simplify(Not(self.run(f.arg)))
        if isinstance(f, And):
            return simplify(And(tuple(self.run(a) for a in f.args)))
        if isinstance(f, Or):
            return simplify(Or(tuple(self.run(a) for a in f.args)))
        if isinstance(f, Implies):
            return simplify(Or((Not(self.run(f.left)), self.run(f.right))))
        if isinstance(f, Exists):
            return self.exists(f.var, self.run(f.body))
        if isinstance(f, Forall):
            return simplify(Not(self.exists(f.var, simplify(Not(self.run(f.body))))))
        raise TypeError(f)

    def exists(self, x: str, body: Formula) -> Formula:
        body = simplify(body)
        if x not in free_vars(body):
            return body
        out = []
        for d in _split_disjuncts(body):
            keep = [p for p in _conjuncts(d) if x not in free_vars(p)]
            rest = conj(*[p for p in _conjuncts(d) if x in free_vars(p)])
            out.append(conj(*keep, self.exists_conj(x, rest)))
        return simplify(disj(*out))

    def exists_conj(self, x: str, body: Formula) -> Formula:
        self.log(x, "input", body)
        g, s = split_variable(body, x, self.taken)
        k, u = s.int_part, s.frac_part
        iv = frozenset((k,))
        g = simplify(g)
        self.log(x, "split_int_frac", g)
        # Writing k by its residues first turns every floor of k into k plus a
        # floor of u alone, so the floor case split stays small.
        branches = _residue_branches(g, k, iv)
        self.log(x, "residues", disj(*branches))
        uu = Affine.var(u)
        box = (_le0(uu.times(-1)), Lt(uu.add_const(-1)))
        branches = [simplify(conj(*box, case_split_floors(b, [u], iv))) for b in branches]
        self.log(x, "case_split_floors", disj(*branches))
        branches = [eliminate_real_var(b, u) for b in branches]
        self.log(x, "eliminate_real_var", disj(*branches))
        g = simplify(disj(*(eliminate_int_var(b, k) for b in branches)))
        self.log(x, "eliminate_int_var", g)
        return g


def qe(f: Formula, trace: Trace = None) -> Formula:
    """A quantifier-free formula equivalent to ``f`` over the reals."""
    _check_no_div_under_quantifier(f)
    f = rename_bound(f)
    taken = set(all_vars(f))
    return _Eliminator(taken, trace).run(f)


def decide_sentence(f: Formula, trace: Trace = None) -> bool:
    fv = free_vars(f)
    if fv:
        raise QEError(f"not a sentence; free variables: {', '.join(sorted(fv))}")
    return evaluate(qe(f, trace), {})


__all__ = [
    "FloorCaseSplit", "IntFracSplit", "NonAffine", "QEError", "UnsupportedFormula",
    "case_split_floors", "decide_sentence", "eliminate_int_var", "eliminate_real_var",
    "floor_residue", "qe", "split_int_frac", "split_variable",
]
