"""Exact truth of quantified formulas by finite expansion, and a random corpus.

For ``E x. body`` at a concrete assignment, ``body`` is a one-variable
function of ``x`` built from linear pieces and floors.  Its truth value is
constant between consecutive breakpoints (floor jumps and atom zeros), and
outside a computable window it repeats with a computable period.  Checking
every breakpoint and every midpoint inside one period past the window is
therefore exhaustive.  Inner quantifiers are evaluated recursively on the
original formula; the elimination procedure is only consulted to list the
atoms whose breakpoints matter.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction

from floorcc.formulas import (
    FALSE,
    TRUE,
    And,
    Atom,
    BoolConst,
    Cong,
    Eq,
    Exists,
    Forall,
    Formula,
    Implies,
    IsInt,
    Lt,
    Not,
    Or,
    atoms,
    evaluate_atom,
    free_vars,
    is_quantifier_free,
)
from floorcc.qe import qe
from floorcc.terms import Affine, Floor

GRID = [Fraction(i, 16) for i in range(-64, 65)]


def _forms(a: Atom) -> list[tuple[Affine, int, str]]:
    if isinstance(a, Eq):
        return [(a.form, 1, "zero")]
    if isinstance(a, Lt):
        return [(a.form, 1, "zero")]
    if isinstance(a, IsInt):
        return [(a.term, 1, "int")]
    if isinstance(a, Cong):
        return [(a.form.add_const(-a.residue), a.modulus, "int")]
    return []


def _slope(form: Affine, x: str) -> Fraction:
    """Slope of ``form`` in ``x`` after replacing every floor by its argument."""
    s = Fraction(0)
    for k, c in form.terms:
        if k == x:
            s += c
        elif isinstance(k, Floor):
            s += c * _slope(k.arg, x)
    return s


def _lin_value(form: Affine, env) -> Fraction:
    v = form.const
    for k, c in form.terms:
        v += c * (env[k] if isinstance(k, str) else _lin_value(k.arg, env))
    return v


def _deviation(form: Affine) -> Fraction:
    d = Fraction(0)
    for k, c in form.terms:
        if isinstance(k, Floor):
            d += abs(c) * (_deviation(k.arg) + 1)
    return d


def _direct(form: Affine, x: str) -> Fraction:
    return form.coeff(x)


def _window_and_period(qf: Formula, x: str, env) -> tuple[Fraction, int]:
    period = 1
    radius = Fraction(0)
    env0 = dict(env)
    env0[x] = Fraction(0)
    for a in atoms(qf):
        for form, modulus, kind in _forms(a):
            for fl in form.floor_keys():
                s = _slope(fl.arg, x)
                period = math.lcm(period, s.denominator)
            s = _slope(form, x)
            if kind == "int":
                if s != 0:
                    dm = s.denominator * modulus
                    period = math.lcm(period, dm // math.gcd(abs(s.numerator), dm))
            elif s != 0:
                bound = (abs(_lin_value(form, env0)) + _deviation(form)) / abs(s) + 1
                radius = max(radius, bound)
    return radius, period


def candidates(qf: Formula, x: str, env) -> list[Fraction]:
    """Points where ``qf`` (quantifier-free, one free variable ``x`` given ``env``) can change truth."""
    radius, period = _window_and_period(qf, x, env)
    lo = -radius - period
    hi = radius + period
    pts = {lo, hi}
    fl_keys: list[Floor] = []
    seen = set()
    for a in atoms(qf):
        for form, _, _ in _forms(a):
            for fl in form.floor_keys():
                if fl not in seen and x in fl.arg.free_vars():
                    seen.add(fl)
                    fl_keys.append(fl)

    def value(form: Affine, at: Fraction) -> Fraction:
        e = dict(env)
        e[x] = at
        return form.evaluate(e)

    def crossings(form: Affine, modulus: int, pts_sorted, integral: bool):
        out = []
        a = _direct(form, x)
        if a == 0:
            return out
        for p, q in zip(pts_sorted, pts_sorted[1:]):
            mid = (p + q) / 2
            vm = value(form, mid) / modulus
            slope = a / modulus
            vp = vm + slope * (p - mid)
            vq = vm + slope * (q - mid)
            if not integral:
                root = mid - vm / slope
                if p < root < q:
                    out.append(root)
                continue
            lo_v, hi_v = min(vp, vq), max(vp, vq)
            n = math.floor(lo_v) + 1
            while n < hi_v:
                out.append(mid + (n - vm) / slope)
                n += 1
        return out

    # floors innermost first; inner breakpoints make outer arguments linear per piece
    for fl in fl_keys:
        ordered = sorted(pts)
        pts.update(crossings(fl.arg, 1, ordered, True))
    ordered = sorted(pts)
    extra = []
    for a in atoms(qf):
        for form, modulus, kind in _forms(a):
            if x in form.free_vars():
                extra.extend(crossings(form, modulus, ordered, kind == "int"))
    pts.update(extra)
    ordered = sorted(pts)
    mids = [(p + q) / 2 for p, q in zip(ordered, ordered[1:])]
    return ordered + mids


_QE_CACHE: dict[Formula, Formula] = {}


def _qf_view(body: Formula) -> Formula:
    if is_quantifier_free(body):
        return body
    got = _QE_CACHE.get(body)
    if got is None:
        got = qe(body)
        _QE_CACHE[body] = got
    return got


def _with(env, x, v):
    e = dict(env)
    e[x] = v
    return e


def truth(f: Formula, env, grid: bool = False) -> bool:
    """Exact truth of ``f`` at ``env``.

    With ``grid`` the outermost quantifier also tries every point of the
    step-1/16 grid on [-4, 4], and a witness found only on the grid raises
    ``AssertionError`` (the breakpoint expansion must find one as well).
    """
    if isinstance(f, Atom):
        return evaluate_atom(f, env)
    if isinstance(f, BoolConst):
        return f.value
    if isinstance(f, Not):
        return not truth(f.arg, env, grid)
    if isinstance(f, And):
        return all(truth(a, env, grid) for a in f.args)
    if isinstance(f, Or):
        return any(truth(a, env, grid) for a in f.args)
    if isinstance(f, Implies):
        return (not truth(f.left, env, grid)) or truth(f.right, env, grid)
    if isinstance(f, (Exists, Forall)):
        key = (f, tuple(sorted((v, env[v]) for v in free_vars(f))))
        got = _TRUTH_CACHE.get(key)
        if got is None or grid:
            got = _quantified_truth(f, env, grid)
            _TRUTH_CACHE[key] = got
        return got
    raise TypeError(f)


def _quantified_truth(f, env, grid: bool) -> bool:
    want = isinstance(f, Exists)
    pts = candidates(_qf_view(f.body), f.var, env)
    found = any(truth(f.body, _with(env, f.var, p)) == want for p in pts)
    if grid:
        on_grid = any(truth(f.body, _with(env, f.var, p)) == want for p in GRID)
        if on_grid and not found:
            raise AssertionError(f"grid finds a witness the expansion misses: {f}")
    return found if want else not found


# truth of a quantified subformula depends only on its free variables
_TRUTH_CACHE: dict = {}


def clear_caches():
    _TRUTH_CACHE.clear()
    _QE_CACHE.clear()


# -- random corpus ---------------------------------------------------------------

COEFFS = [Fraction(c) for c in (1, -1, 2, -2)] + [Fraction(1, 2), Fraction(-1, 2), Fraction(1, 3), Fraction(-1, 3), Fraction(3, 2)]
VARS = ("x", "y", "z")


def random_term(rng: random.Random, names, depth: int) -> Affine:
    coeffs = {}
    for v in rng.sample(list(names), rng.randint(1, min(2, len(names)))):
        coeffs[v] = rng.choice(COEFFS)
    if depth > 0 and rng.random() < 0.45:
        inner = random_term(rng, names, depth - 1)
        coeffs[Floor(inner)] = rng.choice(COEFFS[:4])
    const = Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2, 3)))
    return Affine.make(coeffs, const)


def random_atom(rng: random.Random, names, floor_depth: int = 1) -> Formula:
    t = random_term(rng, names, floor_depth)
    r = rng.random()
    if r < 0.35:
        return Lt(t)
    if r < 0.55:
        return Not(Lt(t))
    if r < 0.7:
        return Eq(t)
    if r < 0.85:
        return IsInt(t)
    m = rng.choice((2, 3))
    return Cong(t, m, rng.randrange(m))


def random_formula(rng: random.Random, depth: int = 4, bound=(), free=VARS, floor_depth: int = 1) -> Formula:
    names = tuple(dict.fromkeys(tuple(free) + tuple(bound)))
    if depth <= 0 or rng.random() < 0.2:
        return random_atom(rng, names, floor_depth)
    r = rng.random()
    if r < 0.35:
        var = rng.choice(VARS)
        body = random_formula(rng, depth - 1, bound + (var,), free, floor_depth)
        return Exists(var, body) if rng.random() < 0.6 else Forall(var, body)
    if r < 0.6:
        return And((random_formula(rng, depth - 1, bound, free, floor_depth), random_formula(rng, depth - 1, bound, free, floor_depth)))
    if r < 0.85:
        return Or((random_formula(rng, depth - 1, bound, free, floor_depth), random_formula(rng, depth - 1, bound, free, floor_depth)))
    if r < 0.93:
        return Not(random_formula(rng, depth - 1, bound, free, floor_depth))
    return Implies(random_formula(rng, depth - 1, bound, free, floor_depth), random_formula(rng, depth - 1, bound, free, floor_depth))


def quantified_formula(rng: random.Random, depth: int = 4, floor_depth: int = 1) -> Formula:
    """A random formula with at least one quantifier."""
    while True:
        f = random_formula(rng, depth, floor_depth=floor_depth)
        if not is_quantifier_free(f):
            return f


def random_rational(rng: random.Random, span: int = 5) -> Fraction:
    den = rng.choice((1, 1, 2, 3, 4, 6, 8))
    return Fraction(rng.randint(-span * den, span * den), den)


def random_assignment(rng: random.Random, names=VARS) -> dict[str, Fraction]:
    return {v: random_rational(rng) for v in names}


__all__ = ["TRUE", "FALSE", "candidates", "clear_caches", "quantified_formula", "random_assignment", "random_formula", "truth"]
