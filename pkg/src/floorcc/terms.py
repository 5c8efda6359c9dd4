"""Terms of the language {0, 1, +, q*, floor} and their affine normal form.

Raw terms (``Const``, ``Var``, ``Scale``, ``Sum``, ``Floor``) are what the
parser produces.  ``Affine`` is the normal form: a rational combination of
generators plus a constant, where a generator is either a variable name or
a ``Floor`` whose argument is itself an ``Affine``.  Normal forms are
canonical, so structural equality of two ``Affine`` values means the terms
agree on every assignment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

Rational = Fraction
Key = Union[str, "Floor"]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def floor_q(value: Fraction) -> Fraction:
    return Fraction(math.floor(value))


class Term:
    """Base class of all terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return format_term(self)

    # arithmetic sugar so tests and builders can write ``x + 2 * y``
    def __add__(self, other) -> Term:
        return Sum(self, _coerce(other))

    def __radd__(self, other) -> Term:
        return Sum(_coerce(other), self)

    def __sub__(self, other) -> Term:
        return Sum(self, Scale(Fraction(-1), _coerce(other)))

    def __rsub__(self, other) -> Term:
        return Sum(_coerce(other), Scale(Fraction(-1), self))

    def __neg__(self) -> Term:
        return Scale(Fraction(-1), self)

    def __rmul__(self, other) -> Term:
        return Scale(as_rational(other), self)

    def __mul__(self, other) -> Term:
        return Scale(as_rational(other), self)


def _coerce(value) -> Term:
    if isinstance(value, Term):
        return value
    return Const(as_rational(value))


@dataclass(frozen=True, eq=True)
class Const(Term):
    value: Fraction


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be nonempty")


@dataclass(frozen=True, eq=True)
class Scale(Term):
    coeff: Fraction
    term: Term


@dataclass(frozen=True, eq=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True, eq=False)
class Floor(Term):
    """``floor(arg)``.  Inside normal forms the argument is an ``Affine``."""

    arg: Term

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Floor) and hash(self) == hash(other) and self.arg == other.arg

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash(("floor", self.arg))
            object.__setattr__(self, "_h", h)
        return h

    @cached_property
    def text(self) -> str:
        return f"floor({format_term(self.arg)})"


def _key_order(key: Key):
    if isinstance(key, str):
        return (0, key)
    return (1, key.text)


class Affine(Term):
    """Canonical ``sum(c_i * g_i) + const`` with nonzero ``c_i``.

    Instances are immutable; build them with :meth:`make` or the arithmetic
    helpers so the term list stays sorted and free of zero coefficients.
    """

    __slots__ = ("terms", "const", "_hash", "_vars", "__weakref__")

    def __init__(self, terms: tuple[tuple[Key, Fraction], ...] = (), const: Fraction = ZERO):
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "_hash", None)
        object.__setattr__(self, "_vars", None)

    def __setattr__(self, name, value):
        raise AttributeError("Affine is immutable")

    @staticmethod
    def make(coeffs: Mapping[Key, Fraction], const=ZERO) -> Affine:
        items = [(k, as_rational(c)) for k, c in coeffs.items() if c != 0]
        items.sort(key=lambda kc: _key_order(kc[0]))
        return Affine(tuple(items), as_rational(const))

    @staticmethod
    def constant(value) -> Affine:
        return Affine((), as_rational(value))

    @staticmethod
    def var(name: str) -> Affine:
        return Affine(((name, ONE),), ZERO)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Affine):
            return NotImplemented
        return hash(self) == hash(other) and self.const == other.const and self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.terms, self.const))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Affine({format_term(self)!r})"

    @property
    def coeffs(self) -> dict[Key, Fraction]:
        return dict(self.terms)

    def coeff(self, key: Key) -> Fraction:
        for k, c in self.terms:
            if k == key:
                return c
        return ZERO

    def is_constant(self) -> bool:
        return not self.terms

    def keys(self) -> list[Key]:
        return [k for k, _ in self.terms]

    def free_vars(self) -> frozenset[str]:
        fv = self._vars
        if fv is None:
            acc = set()
            for k, _ in self.terms:
                if isinstance(k, str):
                    acc.add(k)
                else:
                    acc |= k.arg.free_vars()
            fv = frozenset(acc)
            object.__setattr__(self, "_vars", fv)
        return fv

    def floor_keys(self) -> list[Floor]:
        """All floor generators, nested ones included, innermost first."""
        out: list[Floor] = []
        seen = set()

        def walk(a: Affine):
            for k, _ in a.terms:
                if isinstance(k, Floor) and k not in seen:
                    walk(k.arg)
                    seen.add(k)
                    out.append(k)

        walk(self)
        return out

    # -- arithmetic on normal forms ------------------------------------
    def plus(self, other: Affine) -> Affine:
        if not other.terms:
            if other.const == 0:
                return self
            return Affine(self.terms, self.const + other.const)
        acc = dict(self.terms)
        for k, c in other.terms:
            acc[k] = acc.get(k, ZERO) + c
        return Affine.make(acc, self.const + other.const)

    def minus(self, other: Affine) -> Affine:
        return self.plus(other.times(-1))

    def times(self, q) -> Affine:
        q = as_rational(q)
        if q == 0:
            return Affine()
        if q == 1:
            return self
        return Affine(tuple((k, c * q) for k, c in self.terms), self.const * q)

    def add_const(self, c) -> Affine:
        c = as_rational(c)
        if c == 0:
            return self
        return Affine(self.terms, self.const + c)

    def without(self, key: Key) -> Affine:
        return Affine(tuple((k, c) for k, c in self.terms if k != key), self.const)

    def evaluate(self, env: Mapping[str, Fraction]) -> Fraction:
        total = self.const
        for k, c in self.terms:
            if isinstance(k, str):
                try:
                    v = env[k]
                except KeyError:
                    raise KeyError(k) from None
            else:
                v = floor_q(k.arg.evaluate(env))
            total += c * v
        return total


# -- normalization ---------------------------------------------------------

def floor_of(arg: Affine, int_vars: frozenset[str] = frozenset()) -> Affine:
    """Normal form of ``floor(arg)``.

    Integer multiples of integer-valued generators (floor terms, and the
    variables listed in ``int_vars``) and the integer part of the constant
    are moved outside the floor.
    """
    outside: dict[Key, Fraction] = {}
    inside: dict[Key, Fraction] = {}
    for k, c in arg.terms:
        integral = isinstance(k, Floor) or k in int_vars
        if integral and c.denominator == 1:
            outside[k] = c
        else:
            inside[k] = c
    whole = floor_q(arg.const)
    frac = arg.const - whole
    if not inside:
        return Affine.make(outside, whole)
    key = Floor(Affine.make(inside, frac))
    outside[key] = outside.get(key, ZERO) + ONE
    return Affine.make(outside, whole)


def normalize(t: Term, int_vars: frozenset[str] = frozenset()) -> Affine:
    """Affine normal form of ``t`` with floor generators collapsed."""
    if isinstance(t, Affine):
        if int_vars or _needs_renormalizing(t):
            return substitute(t, {}, int_vars)
        return t
    if isinstance(t, Const):
        return Affine.constant(t.value)
    if isinstance(t, Var):
        return Affine.var(t.name)
    if isinstance(t, Scale):
        return normalize(t.term, int_vars).times(t.coeff)
    if isinstance(t, Sum):
        return normalize(t.left, int_vars).plus(normalize(t.right, int_vars))
    if isinstance(t, Floor):
        return floor_of(normalize(t.arg, int_vars), int_vars)
    raise TypeError(f"not a term: {t!r}")


def _needs_renormalizing(a: Affine) -> bool:
    for k, _ in a.terms:
        if isinstance(k, Floor):
            arg = k.arg
            if not isinstance(arg, Affine) or not arg.terms:
                return True
            if not (0 <= arg.const < 1):
                return True
            if any(isinstance(kk, Floor) and cc.denominator == 1 for kk, cc in arg.terms):
                return True
            if _needs_renormalizing(arg):
                return True
    return False


def substitute(a: Affine, mapping: Mapping[Key, Affine], int_vars: frozenset[str] = frozenset()) -> Affine:
    """Replace generators of ``a`` (variables or floor terms, at any depth)."""
    memo: dict[Key, Affine] = {}

    def image(key: Key) -> Affine:
        got = memo.get(key)
        if got is not None:
            return got
        if key in mapping:
            got = mapping[key]
        elif isinstance(key, str):
            got = Affine.var(key)
        else:
            arg = key.arg if isinstance(key.arg, Affine) else normalize(key.arg, int_vars)
            got = floor_of(rebuild(arg), int_vars)
        memo[key] = got
        return got

    def rebuild(b: Affine) -> Affine:
        acc: dict[Key, Fraction] = {}
        const = b.const
        for k, c in b.terms:
            img = image(k)
            const += c * img.const
            for kk, cc in img.terms:
                acc[kk] = acc.get(kk, ZERO) + c * cc
        return Affine.make(acc, const)

    return rebuild(a)


def collapse_floors(t: Term) -> Term:
    """Rewrite every floor node so no floor sits directly on integer parts.

    ``floor(floor(x) + y)`` becomes ``floor(x) + floor(y)``, ``floor(n)``
    becomes ``n`` for integer constants, and ``floor(x + 3)`` becomes
    ``floor(x) + 3``.  The shape of the term outside floor nodes is kept.
    """
    if isinstance(t, (Const, Var)):
        return t
    if isinstance(t, Scale):
        return Scale(t.coeff, collapse_floors(t.term))
    if isinstance(t, Sum):
        return Sum(collapse_floors(t.left), collapse_floors(t.right))
    if isinstance(t, Floor):
        return floor_of(normalize(collapse_floors(t.arg)))
    if isinstance(t, Affine):
        return normalize(t)
    raise TypeError(f"not a term: {t!r}")


def linear_normalize(t: Term) -> Affine:
    """``sum(q_i * g_i) + q_0`` with floor subterms as opaque generators.

    Floor arguments are brought to affine form recursively but nothing is
    moved across a floor; use :func:`normalize` for that.
    """
    if isinstance(t, Affine):
        return t
    if isinstance(t, Const):
        return Affine.constant(t.value)
    if isinstance(t, Var):
        return Affine.var(t.name)
    if isinstance(t, Scale):
        return linear_normalize(t.term).times(t.coeff)
    if isinstance(t, Sum):
        return linear_normalize(t.left).plus(linear_normalize(t.right))
    if isinstance(t, Floor):
        return Affine(((Floor(linear_normalize(t.arg)), ONE),), ZERO)
    raise TypeError(f"not a term: {t!r}")


def evaluate_term(t: Term, env: Mapping[str, Fraction]) -> Fraction:
    if isinstance(t, Affine):
        return t.evaluate(env)
    if isinstance(t, Const):
        return t.value
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Scale):
        return t.coeff * evaluate_term(t.term, env)
    if isinstance(t, Sum):
        return evaluate_term(t.left, env) + evaluate_term(t.right, env)
    if isinstance(t, Floor):
        return floor_q(evaluate_term(t.arg, env))
    raise TypeError(f"not a term: {t!r}")


def term_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Affine):
        return t.free_vars()
    if isinstance(t, Const):
        return frozenset()
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Scale):
        return term_vars(t.term)
    if isinstance(t, Sum):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, Floor):
        return term_vars(t.arg)
    raise TypeError(f"not a term: {t!r}")


# -- printing --------------------------------------------------------------

def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _format_key(k: Key) -> str:
    return k if isinstance(k, str) else k.text


def _format_monomial(c: Fraction, k: Key) -> str:
    body = _format_key(k)
    if c == 1:
        return body
    if c == -1:
        return f"-{body}"
    return f"{format_rational(c)}*{body}"


def format_affine(a: Affine) -> str:
    parts: list[str] = []
    for k, c in a.terms:
        if not parts:
            parts.append(_format_monomial(c, k))
        elif c < 0:
            parts.append(f"- {_format_monomial(-c, k)}")
        else:
            parts.append(f"+ {_format_monomial(c, k)}")
    if a.const != 0 or not parts:
        if not parts:
            parts.append(format_rational(a.const))
        elif a.const < 0:
            parts.append(f"- {format_rational(-a.const)}")
        else:
            parts.append(f"+ {format_rational(a.const)}")
    return " ".join(parts)


def format_term(t: Term) -> str:
    if isinstance(t, Affine):
        return format_affine(t)
    if isinstance(t, Const):
        return format_rational(t.value)
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Scale):
        inner = format_term(t.term)
        if isinstance(t.term, (Sum, Affine)) and not (isinstance(t.term, Affine) and len(t.term.terms) == 1 and t.term.const == 0):
            inner = f"({inner})"
        if t.coeff == -1:
            return f"-{inner}" if not inner.startswith("-") else f"-({inner})"
        return f"{format_rational(t.coeff)}*{inner}"
    if isinstance(t, Sum):
        right = format_term(t.right)
        if isinstance(t.right, (Sum, Affine)):
            right = f"({right})"
        return f"{format_term(t.left)} + {right}"
    if isinstance(t, Floor):
        return f"floor({format_term(t.arg)})"
    raise TypeError(f"not a term: {t!r}")


def affine_of(coeffs: Iterable[tuple[Key, object]], const=0) -> Affine:
    return Affine.make({k: as_rational(c) for k, c in coeffs}, as_rational(const))
