"""First-order formulas over the mixed language and their exact evaluation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterator, Mapping

from .terms import (
    Affine,
    Floor,
    Term,
    ZERO,
    as_rational,
    format_affine,
    normalize,
)


class EvaluationError(ValueError):
    pass


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return format_formula(self)

    def __and__(self, other: Formula) -> Formula:
        return And((self, other))

    def __or__(self, other: Formula) -> Formula:
        return Or((self, other))

    def __invert__(self) -> Formula:
        return Not(self)


class Atom(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class BoolConst(Formula):
    value: bool


TRUE = BoolConst(True)
FALSE = BoolConst(False)


@dataclass(frozen=True)
class Eq(Atom):
    """``form = 0``"""

    form: Affine


@dataclass(frozen=True)
class Lt(Atom):
    """``form < 0``"""

    form: Affine


@dataclass(frozen=True)
class IsInt(Atom):
    term: Affine


@dataclass(frozen=True)
class Cong(Atom):
    """``form`` is an integer congruent to ``residue`` modulo ``modulus``."""

    form: Affine
    modulus: int
    residue: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("congruence modulus must be positive")
        if not 0 <= self.residue < self.modulus:
            raise ValueError("congruence residue must lie in [0, modulus)")


@dataclass(frozen=True)
class Div(Atom):
    """``left`` divides ``right`` on the natural numbers (ground only)."""

    left: Affine
    right: Affine


def _memo_hash(node, key) -> int:
    # compound formulas are hashed often as set members; hash each node once
    h = node.__dict__.get("_hash")
    if h is None:
        h = node.__dict__["_hash"] = hash(key)
    return h


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def __hash__(self):
        return _memo_hash(self, (Not, self.arg))


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __hash__(self):
        return _memo_hash(self, (And, self.args))


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __hash__(self):
        return _memo_hash(self, (Or, self.args))


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


Assignment = Mapping[str, Fraction]


# -- constructors used throughout the engine -------------------------------

def eq(lhs: Term, rhs: Term = Affine()) -> Eq:
    return Eq(normalize(lhs).minus(normalize(rhs)))


def lt(lhs: Term, rhs: Term = Affine()) -> Lt:
    return Lt(normalize(lhs).minus(normalize(rhs)))


def le(lhs: Term, rhs: Term) -> Formula:
    return Not(Lt(normalize(rhs).minus(normalize(lhs))))


def is_int(t: Term) -> IsInt:
    return IsInt(normalize(t))


def cong(t: Term, modulus: int, residue: int) -> Cong:
    return Cong(normalize(t), modulus, residue % modulus)


def conj(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, And):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args: Formula) -> Formula:
    flat: list[Formula] = []
    for a in args:
        if isinstance(a, Or):
            flat.extend(a.args)
        else:
            flat.append(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


# -- traversal -------------------------------------------------------------

def atom_terms(a: Atom) -> tuple[Affine, ...]:
    if isinstance(a, (Eq, Lt, Cong)):
        return (a.form,)
    if isinstance(a, IsInt):
        return (a.term,)
    if isinstance(a, Div):
        return (a.left, a.right)
    raise TypeError(a)


def atom_vars(a: Atom) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for t in atom_terms(a):
        out |= t.free_vars()
    return out


def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return atom_vars(f)
    if isinstance(f, BoolConst):
        return frozenset()
    if isinstance(f, Not):
        return free_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= free_vars(a)
        return out
    if isinstance(f, Implies):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - {f.var}
    raise TypeError(f)


def all_vars(f: Formula) -> frozenset[str]:
    """Free and bound variable names."""
    if isinstance(f, (Exists, Forall)):
        return all_vars(f.body) | {f.var}
    if isinstance(f, Not):
        return all_vars(f.arg)
    if isinstance(f, (And, Or)):
        out: frozenset[str] = frozenset()
        for a in f.args:
            out |= all_vars(a)
        return out
    if isinstance(f, Implies):
        return all_vars(f.left) | all_vars(f.right)
    return free_vars(f)


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from atoms(f.arg)
    elif isinstance(f, (And, Or)):
        for a in f.args:
            yield from atoms(a)
    elif isinstance(f, Implies):
        yield from atoms(f.left)
        yield from atoms(f.right)
    elif isinstance(f, (Exists, Forall)):
        yield from atoms(f.body)


def count_atoms(f: Formula) -> int:
    return sum(1 for _ in atoms(f))


def is_quantifier_free(f: Formula) -> bool:
    if isinstance(f, (Exists, Forall)):
        return False
    if isinstance(f, Not):
        return is_quantifier_free(f.arg)
    if isinstance(f, (And, Or)):
        return all(is_quantifier_free(a) for a in f.args)
    if isinstance(f, Implies):
        return is_quantifier_free(f.left) and is_quantifier_free(f.right)
    return True


def map_atoms(f: Formula, fn: Callable[[Atom], Formula]) -> Formula:
    if isinstance(f, Atom):
        return fn(f)
    if isinstance(f, BoolConst):
        return f
    if isinstance(f, Not):
        return Not(map_atoms(f.arg, fn))
    if isinstance(f, And):
        return And(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Or):
        return Or(tuple(map_atoms(a, fn) for a in f.args))
    if isinstance(f, Implies):
        return Implies(map_atoms(f.left, fn), map_atoms(f.right, fn))
    if isinstance(f, Exists):
        return Exists(f.var, map_atoms(f.body, fn))
    if isinstance(f, Forall):
        return Forall(f.var, map_atoms(f.body, fn))
    raise TypeError(f)


def substitute_atom(a: Atom, mapping, int_vars=frozenset()) -> Atom:
    from .terms import substitute

    if isinstance(a, Eq):
        return Eq(substitute(a.form, mapping, int_vars))
    if isinstance(a, Lt):
        return Lt(substitute(a.form, mapping, int_vars))
    if isinstance(a, IsInt):
        return IsInt(substitute(a.term, mapping, int_vars))
    if isinstance(a, Cong):
        return Cong(substitute(a.form, mapping, int_vars), a.modulus, a.residue)
    if isinstance(a, Div):
        return Div(substitute(a.left, mapping, int_vars), substitute(a.right, mapping, int_vars))
    raise TypeError(a)


def substitute_formula(f: Formula, mapping, int_vars=frozenset()) -> Formula:
    """Substitute in a quantifier-free formula."""
    return map_atoms(f, lambda a: substitute_atom(a, mapping, int_vars))


# -- evaluation ------------------------------------------------------------

def _integral(q: Fraction) -> bool:
    return q.denominator == 1


def evaluate_atom(a: Atom, env: Assignment) -> bool:
    try:
        if isinstance(a, Eq):
            return a.form.evaluate(env) == 0
        if isinstance(a, Lt):
            return a.form.evaluate(env) < 0
        if isinstance(a, IsInt):
            return _integral(a.term.evaluate(env))
        if isinstance(a, Cong):
            return _integral((a.form.evaluate(env) - a.residue) / a.modulus)
        if isinstance(a, Div):
            return _divides(a.left.evaluate(env), a.right.evaluate(env))
    except KeyError as exc:
        raise EvaluationError(f"unassigned variable {exc.args[0]!r}") from None
    raise TypeError(a)


def _divides(d: Fraction, n: Fraction) -> bool:
    if not (_integral(d) and _integral(n)):
        raise EvaluationError("div is only defined on integers")
    if d < 0 or n < 0:
        raise EvaluationError("div is only defined on the natural numbers")
    if d == 0:
        return n == 0
    return n.numerator % d.numerator == 0


def evaluate(f: Formula, env: Assignment | None = None) -> bool:
    """Truth of a quantifier-free formula under exact real semantics."""
    env = {k: as_rational(v) for k, v in (env or {}).items()}
    return _eval(f, env)


def _eval(f: Formula, env) -> bool:
    if isinstance(f, Atom):
        return evaluate_atom(f, env)
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, Not):
        return not _eval(f.arg, env)
    if isinstance(f, And):
        return all(_eval(a, env) for a in f.args)
    if isinstance(f, Or):
        return any(_eval(a, env) for a in f.args)
    if isinstance(f, Implies):
        return (not _eval(f.left, env)) or _eval(f.right, env)
    if isinstance(f, (Exists, Forall)):
        raise EvaluationError("evaluate() takes quantifier-free formulas only")
    raise TypeError(f)


# -- normal forms and simplification ---------------------------------------

def nnf(f: Formula, negate: bool = False) -> Formula:
    """Negation normal form: ``Not`` only on atoms, no ``Implies``."""
    if isinstance(f, Atom):
        return Not(f) if negate else f
    if isinstance(f, BoolConst):
        return BoolConst(f.value != negate)
    if isinstance(f, Not):
        return nnf(f.arg, not negate)
    if isinstance(f, And):
        parts = tuple(nnf(a, negate) for a in f.args)
        return Or(parts) if negate else And(parts)
    if isinstance(f, Or):
        parts = tuple(nnf(a, negate) for a in f.args)
        return And(parts) if negate else Or(parts)
    if isinstance(f, Implies):
        return nnf(Or((Not(f.left), f.right)), negate)
    if isinstance(f, Exists):
        body = nnf(f.body, negate)
        return Forall(f.var, body) if negate else Exists(f.var, body)
    if isinstance(f, Forall):
        body = nnf(f.body, negate)
        return Exists(f.var, body) if negate else Forall(f.var, body)
    raise TypeError(f)


def _scaled(form: Affine, positive_only: bool) -> Affine:
    lead = form.terms[0][1]
    if positive_only:
        lead = abs(lead)
    return form if lead == 1 else form.times(1 / lead)


def _reduce_int_part(form: Affine, modulus: int, int_vars=frozenset()) -> Affine:
    """Drop integer-valued parts that are multiples of ``modulus``; reduce the rest."""
    acc = {}
    for k, c in form.terms:
        integral = isinstance(k, Floor) or k in int_vars
        if integral and c.denominator == 1:
            c = Fraction(c.numerator % modulus)
        acc[k] = c
    const = form.const
    if const.denominator == 1:
        const = Fraction(const.numerator % modulus)
    return Affine.make(acc, const)


def normalize_atom(a: Atom, int_vars=frozenset()) -> Atom:
    """Collapse floors in every term of ``a`` (see :func:`terms.normalize`)."""
    if isinstance(a, Eq):
        return Eq(normalize(a.form, int_vars))
    if isinstance(a, Lt):
        return Lt(normalize(a.form, int_vars))
    if isinstance(a, IsInt):
        return IsInt(normalize(a.term, int_vars))
    if isinstance(a, Cong):
        return Cong(normalize(a.form, int_vars), a.modulus, a.residue)
    if isinstance(a, Div):
        return Div(normalize(a.left, int_vars), normalize(a.right, int_vars))
    raise TypeError(a)


def _fractional_part_atom(a: Eq | Lt) -> Formula | None:
    """Decide atoms of the shape ``c*(A - floor(A)) + d`` using ``0 <= A - floor(A) < 1``."""
    form = a.form
    for key, m in form.terms:
        if not isinstance(key, Floor):
            continue
        rest = form.without(key).plus(key.arg.times(m))
        if not rest.is_constant():
            continue
        c, d = -m, rest.const
        if isinstance(a, Eq):
            root = -d / c
            if not 0 <= root < 1:
                return FALSE
            if root == 0:
                return IsInt(key.arg)
            return None
        lo, hi = (d, c + d) if c > 0 else (c + d, d)
        # c*f + d ranges over [lo, hi) or (lo, hi] as f ranges over [0, 1)
        if (c > 0 and hi <= 0) or (c < 0 and hi < 0):
            return TRUE
        if (c > 0 and lo >= 0) or (c < 0 and lo >= 0):
            return FALSE
        return None
    return None


def _rational_gcd(values) -> Fraction:
    num = 0
    den = 1
    for v in values:
        num = math.gcd(num, v.numerator)
        den = den * v.denominator // math.gcd(den, v.denominator)
    return Fraction(num, den)


def _integral_atom(a: Eq | Lt) -> Formula:
    """Canonical form of a comparison between integer-valued floor terms.

    The coefficients are scaled to coprime integers and the constant is
    rounded onto the integer grid; a lone floor in an order atom is
    replaced by a comparison of its argument.
    """
    form = a.form
    g = _rational_gcd(c for _, c in form.terms)
    if isinstance(a, Eq) and form.terms[0][1] < 0:
        g = -g
    form = form.times(1 / g)
    c = form.const
    body = Affine(form.terms, ZERO)
    if isinstance(a, Eq):
        if c.denominator != 1:
            return FALSE
        return Eq(form)
    c = Fraction(math.floor(c))
    if len(body.terms) == 1:
        key, coeff = body.terms[0]
        # floor(A) < -c  iff  A < -c;  -floor(A) + c < 0  iff  A >= c + 1
        if coeff == 1:
            return canonical_atom(Lt(key.arg.add_const(c)))
        return _negated(canonical_atom(Lt(key.arg.add_const(-c - 1))))
    return Lt(body.add_const(c))


def _negated(f: Formula) -> Formula:
    if isinstance(f, BoolConst):
        return BoolConst(not f.value)
    if isinstance(f, Not):
        return f.arg
    return Not(f)


@lru_cache(maxsize=1 << 17)
def canonical_atom(a: Atom) -> Formula:
    """Fold ground atoms and put the rest in a scale-invariant form."""
    a = normalize_atom(a)
    if isinstance(a, (Eq, Lt)):
        decided = _fractional_part_atom(a)
        if decided is not None:
            return decided
    if isinstance(a, (Eq, Lt)) and a.form.terms and all(isinstance(k, Floor) for k, _ in a.form.terms):
        return _integral_atom(a)
    if isinstance(a, Eq):
        if a.form.is_constant():
            return BoolConst(a.form.const == 0)
        return Eq(_scaled(a.form, False))
    if isinstance(a, Lt):
        if a.form.is_constant():
            return BoolConst(a.form.const < 0)
        return Lt(_scaled(a.form, True))
    if isinstance(a, IsInt):
        t = _reduce_int_part(a.term, 1)
        if t.is_constant():
            return BoolConst(_integral(t.const))
        return IsInt(t)
    if isinstance(a, Cong):
        shifted = a.form.add_const(-a.residue)
        if a.modulus == 1:
            return canonical_atom(IsInt(shifted))
        t = _reduce_int_part(shifted, a.modulus)
        if t.is_constant():
            return BoolConst(_integral(t.const / a.modulus))
        const = t.const
        residue = 0
        if const.denominator == 1 and const != 0:
            residue = (-const.numerator) % a.modulus
            t = t.add_const(-const)
        return Cong(t, a.modulus, residue)
    if isinstance(a, Div):
        if a.left.is_constant() and a.right.is_constant():
            return BoolConst(_divides(a.left.const, a.right.const))
        return a
    raise TypeError(a)


def simplify(f: Formula) -> Formula:
    """Best-effort boolean simplification of a quantifier-free formula.

    The result is in negation normal form.  Constant folding, flattening,
    duplicate removal and complementary-literal detection only; no
    canonical form is attempted.
    """
    return _simp(nnf(f))


def _simp(f: Formula) -> Formula:
    if isinstance(f, Atom):
        return canonical_atom(f)
    if isinstance(f, BoolConst):
        return f
    if isinstance(f, Not):
        inner = canonical_atom(f.arg) if isinstance(f.arg, Atom) else _simp(f.arg)
        if isinstance(inner, BoolConst):
            return BoolConst(not inner.value)
        if isinstance(inner, Not):
            return inner.arg
        return Not(inner)
    if isinstance(f, (And, Or)):
        is_and = isinstance(f, And)
        absorbing, neutral = (FALSE, TRUE) if is_and else (TRUE, FALSE)
        cls = And if is_and else Or
        out: list[Formula] = []
        seen: set[Formula] = set()
        for a in f.args:
            s = _simp(a)
            parts = s.args if isinstance(s, cls) else (s,)
            for p in parts:
                if p == absorbing:
                    return absorbing
                if p == neutral or p in seen:
                    continue
                comp = p.arg if isinstance(p, Not) else Not(p)
                if comp in seen:
                    return absorbing
                seen.add(p)
                out.append(p)
        merged = _merge_bounds(out, is_and)
        if merged is None:
            return absorbing
        out = merged
        if not out:
            return neutral
        if len(out) == 1:
            return out[0]
        return cls(tuple(out))
    if isinstance(f, Exists):
        return Exists(f.var, _simp(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, _simp(f.body))
    raise TypeError(f)


_NEGATED = {"<": ">=", ">=": "<", ">": "<=", "<=": ">", "=": "!=", "!=": "="}


@lru_cache(maxsize=1 << 17)
def _as_bound(p: Formula):
    """``(L, rel, v)`` meaning ``L rel v`` with ``L`` monic, or None."""
    negated = isinstance(p, Not)
    a = p.arg if negated else p
    if not isinstance(a, (Eq, Lt)) or a.form.is_constant():
        return None
    lead = a.form.terms[0][1]
    lin = Affine(a.form.terms, ZERO).times(1 / lead)
    v = -a.form.const / lead
    if isinstance(a, Eq):
        rel = "="
    else:
        rel = "<" if lead > 0 else ">"
    if negated:
        rel = _NEGATED[rel]
    return lin, rel, v


def _bound_literal(lin: Affine, rel: str, v: Fraction) -> Formula:
    if rel == "<":
        return Lt(lin.add_const(-v))
    if rel == ">":
        return Lt(lin.times(-1).add_const(v))
    if rel == "<=":
        return Not(Lt(lin.times(-1).add_const(v)))
    if rel == ">=":
        return Not(Lt(lin.add_const(-v)))
    if rel == "=":
        return Eq(lin.add_const(-v))
    return Not(Eq(lin.add_const(-v)))


def _conjoin_bounds(rels: list[tuple[str, Fraction]]):
    """Tightest equivalent of a conjunction of bounds on one linear form; None if empty."""
    lo = hi = None  # (value, strict)
    eqs: set[Fraction] = set()
    neqs: set[Fraction] = set()
    for rel, v in rels:
        if rel in (">", ">="):
            cand = (v, rel == ">")
            if lo is None or v > lo[0] or (v == lo[0] and cand[1]):
                lo = cand
        elif rel in ("<", "<="):
            cand = (v, rel == "<")
            if hi is None or v < hi[0] or (v == hi[0] and cand[1]):
                hi = cand
        elif rel == "=":
            eqs.add(v)
        else:
            neqs.add(v)

    def inside(v):
        if lo is not None and (v < lo[0] or (v == lo[0] and lo[1])):
            return False
        if hi is not None and (v > hi[0] or (v == hi[0] and hi[1])):
            return False
        return True

    if eqs:
        if len(eqs) > 1:
            return None
        (e,) = eqs
        if not inside(e) or e in neqs:
            return None
        return [("=", e)]
    if lo is not None and hi is not None:
        if lo[0] > hi[0] or (lo[0] == hi[0] and (lo[1] or hi[1])):
            return None
        if lo[0] == hi[0]:
            return None if lo[0] in neqs else [("=", lo[0])]
    out = []
    for v in sorted(neqs):
        if not inside(v):
            continue
        if lo is not None and v == lo[0]:
            lo = (v, True)
        elif hi is not None and v == hi[0]:
            hi = (v, True)
        else:
            out.append(("!=", v))
    if lo is not None:
        out.insert(0, (">" if lo[1] else ">=", lo[0]))
    if hi is not None:
        out.insert(1 if lo is not None else 0, ("<" if hi[1] else "<=", hi[0]))
    return out


def _merge_bounds(lits: list[Formula], is_and: bool):
    """Merge literals bounding the same linear form.  None means the absorbing value."""
    groups: dict[Affine, list[tuple[str, Fraction]]] = {}
    for p in lits:
        b = _as_bound(p)
        if b is not None:
            rel = b[1] if is_and else _NEGATED[b[1]]
            groups.setdefault(b[0], []).append((rel, b[2]))
    if all(len(g) < 2 for g in groups.values()):
        return lits
    out: list[Formula] = []
    done: set[Affine] = set()
    for p in lits:
        b = _as_bound(p)
        if b is None or len(groups[b[0]]) < 2:
            out.append(p)
            continue
        if b[0] in done:
            continue
        done.add(b[0])
        merged = _conjoin_bounds(groups[b[0]])
        if merged is None:
            return None
        for rel, v in merged:
            if not is_and:
                rel = _NEGATED[rel]
            out.append(_bound_literal(b[0], rel, v))
    return out


def rename_bound(f: Formula, avoid: frozenset[str] | None = None) -> Formula:
    """Rename bound variables apart from each other and from free ones."""
    used = set(free_vars(f) if avoid is None else avoid) | set(free_vars(f))

    def fresh(name: str) -> str:
        if name not in used:
            used.add(name)
            return name
        i = 1
        while f"{name}{i}" in used:
            i += 1
        used.add(f"{name}{i}")
        return f"{name}{i}"

    def go(g: Formula, ren: dict[str, str]) -> Formula:
        if isinstance(g, Atom):
            if not ren:
                return g
            mapping = {old: Affine.var(new) for old, new in ren.items() if old != new}
            return substitute_atom(g, mapping) if mapping else g
        if isinstance(g, BoolConst):
            return g
        if isinstance(g, Not):
            return Not(go(g.arg, ren))
        if isinstance(g, And):
            return And(tuple(go(a, ren) for a in g.args))
        if isinstance(g, Or):
            return Or(tuple(go(a, ren) for a in g.args))
        if isinstance(g, Implies):
            return Implies(go(g.left, ren), go(g.right, ren))
        if isinstance(g, (Exists, Forall)):
            new = fresh(g.var)
            inner = dict(ren)
            inner[g.var] = new
            return type(g)(new, go(g.body, inner))
        raise TypeError(g)

    return go(f, {})


# -- printing --------------------------------------------------------------

def _split_sides(form: Affine) -> tuple[str, str]:
    pos = Affine(tuple((k, c) for k, c in form.terms if c > 0), ZERO)
    neg = Affine(tuple((k, -c) for k, c in form.terms if c < 0), ZERO)
    const = form.const
    if const > 0:
        pos = pos.add_const(const)
    elif const < 0:
        neg = neg.add_const(-const)
    return format_affine(pos), format_affine(neg)


def format_atom(a: Atom) -> str:
    if isinstance(a, Eq):
        lhs, rhs = _split_sides(a.form)
        return f"{lhs} = {rhs}"
    if isinstance(a, Lt):
        lhs, rhs = _split_sides(a.form)
        return f"{lhs} < {rhs}"
    if isinstance(a, IsInt):
        return f"Z({format_affine(a.term)})"
    if isinstance(a, Cong):
        return f"cong({format_affine(a.form)}, {a.modulus}, {a.residue})"
    if isinstance(a, Div):
        return f"div({format_affine(a.left)}, {format_affine(a.right)})"
    raise TypeError(a)


_PREC = {"quant": 0, "imp": 1, "or": 2, "and": 3, "not": 4, "atom": 5}


def _prec(f: Formula) -> int:
    if isinstance(f, (Exists, Forall)):
        return _PREC["quant"]
    if isinstance(f, Implies):
        return _PREC["imp"]
    if isinstance(f, Or):
        return _PREC["or"]
    if isinstance(f, And):
        return _PREC["and"]
    if isinstance(f, Not):
        return _PREC["not"]
    return _PREC["atom"]


def format_formula(f: Formula) -> str:
    if isinstance(f, Atom):
        return format_atom(f)
    if isinstance(f, BoolConst):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        if isinstance(f.arg, Lt):
            lhs, rhs = _split_sides(f.arg.form)
            return f"{rhs} <= {lhs}"
        if isinstance(f.arg, Eq):
            lhs, rhs = _split_sides(f.arg.form)
            return f"{lhs} != {rhs}"
        inner = format_formula(f.arg)
        if _prec(f.arg) < _PREC["not"]:
            inner = f"({inner})"
        return f"~{inner}"
    if isinstance(f, (And, Or)):
        op = " & " if isinstance(f, And) else " | "
        own = _prec(f)
        parts = []
        for a in f.args:
            s = format_formula(a)
            # same-operator children keep their parentheses so nesting round-trips
            if _prec(a) <= own:
                s = f"({s})"
            parts.append(s)
        return op.join(parts)
    if isinstance(f, Implies):
        left = format_formula(f.left)
        if _prec(f.left) <= _PREC["imp"]:
            left = f"({left})"
        right = format_formula(f.right)
        if _prec(f.right) < _PREC["imp"]:
            right = f"({right})"
        return f"{left} -> {right}"
    if isinstance(f, Exists):
        return f"E {f.var}. {format_formula(f.body)}"
    if isinstance(f, Forall):
        return f"A {f.var}. {format_formula(f.body)}"
    raise TypeError(f)


__all__ = [
    "And", "Assignment", "Atom", "BoolConst", "Cong", "Div", "Eq", "EvaluationError",
    "Exists", "FALSE", "Forall", "Formula", "Implies", "IsInt", "Lt", "Not", "Or", "TRUE",
    "all_vars", "atoms", "canonical_atom", "cong", "conj", "count_atoms", "disj", "eq", "evaluate",
    "format_formula", "free_vars", "is_int", "is_quantifier_free", "le", "lt", "map_atoms", "nnf", "normalize_atom",
    "rename_bound", "simplify", "substitute_atom", "substitute_formula",
]
