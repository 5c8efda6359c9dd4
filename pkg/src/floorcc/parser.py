"""Recursive-descent parser for the textual formula and term syntax.

    formula := ("E" | "A") var+ "." formula | iff
    iff     := imp ("<->" imp)?
    imp     := disj ("->" imp)?
    disj    := conj ("|" conj)*
    conj    := lit ("&" lit)*
    lit     := "~" lit | quantifier | "(" formula ")" | atom | "true" | "false"
    atom    := term REL term | "Z(" term ")" | "div(" term "," term ")"
             | "cong(" term "," int "," int ")"
    term    := product (("+" | "-") product)*
    product := "-" product | factor ("*" factor | "/" posint)*
    factor  := rational | var | "floor(" term ")" | "(" term ")"

REL is one of ``= != < <= > >=``.  A product must have at most one
non-constant factor.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .formulas import (
    FALSE,
    TRUE,
    And,
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
)
from .terms import Const, Floor, Scale, Sum, Term, Var, linear_normalize


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op><->|->|<=|>=|!=|[=<>()+\-*/.,&|~])
    """,
    re.VERBOSE,
)

FUNCTIONS = {"floor"}
PREDICATES = {"Z", "div", "cong"}
RESERVED = FUNCTIONS | PREDICATES | {"E", "A", "true", "false"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        chunk = m.group()
        if kind != "ws":
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        for i, ch in enumerate(chunk):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Backtrack(Exception):
    pass


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers ---------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        t = self.tok
        self.pos += 1
        return t

    def fail(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.column)

    # -- formulas ----------------------------------------------------------
    def formula(self) -> Formula:
        if self.at("E") or self.at("A"):
            return self.quantifier()
        return self.iff()

    def quantifier(self) -> Formula:
        kind = Exists if self.tok.text == "E" else Forall
        self.pos += 1
        names = []
        while self.tok.kind == "ident":
            names.append(self.variable_name())
        if not names:
            self.fail("expected a bound variable")
        self.expect(".")
        body = self.formula()
        for name in reversed(names):
            body = kind(name, body)
        return body

    def iff(self) -> Formula:
        left = self.imp()
        if self.accept("<->"):
            right = self.imp()
            return And((Implies(left, right), Implies(right, left)))
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp_rhs())
        return left

    def imp_rhs(self) -> Formula:
        if self.at("E") or self.at("A"):
            return self.quantifier()
        return self.imp()

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.accept("|"):
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self) -> Formula:
        parts = [self.lit()]
        while self.accept("&"):
            parts.append(self.lit())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def lit(self) -> Formula:
        if self.accept("~"):
            return Not(self.lit())
        if self.at("E") or self.at("A"):
            return self.quantifier()
        if self.accept("true"):
            return TRUE
        if self.accept("false"):
            return FALSE
        if self.at("("):
            # "(" opens either a parenthesized term or a parenthesized formula
            start = self.pos
            try:
                return self.atom(strict=True)
            except (_Backtrack, ParseError):
                self.pos = start
            self.expect("(")
            inner = self.formula()
            self.expect(")")
            return inner
        return self.atom()

    def atom(self, strict: bool = False) -> Formula:
        t = self.tok
        if t.kind == "ident" and t.text in PREDICATES and self.peek().text == "(":
            return self.predicate()
        left = self.term()
        rel = self.tok
        if rel.text not in ("=", "!=", "<", "<=", ">", ">="):
            if strict:
                raise _Backtrack
            self.fail("expected a relation")
        self.pos += 1
        right = self.term()
        a, b = linear_normalize(left), linear_normalize(right)
        if rel.text == "=":
            return Eq(a.minus(b))
        if rel.text == "!=":
            return Not(Eq(a.minus(b)))
        if rel.text == "<":
            return Lt(a.minus(b))
        if rel.text == ">":
            return Lt(b.minus(a))
        if rel.text == "<=":
            return Not(Lt(b.minus(a)))
        return Not(Lt(a.minus(b)))

    def predicate(self) -> Formula:
        name = self.tok.text
        self.pos += 1
        self.expect("(")
        if name == "Z":
            t = self.term()
            self.expect(")")
            return IsInt(linear_normalize(t))
        if name == "div":
            s = self.term()
            self.expect(",")
            t = self.term()
            self.expect(")")
            return Div(linear_normalize(s), linear_normalize(t))
        t = self.term()
        self.expect(",")
        mod_tok = self.tok
        modulus = self.integer()
        if modulus < 1:
            self.fail("congruence modulus must be positive", mod_tok)
        self.expect(",")
        residue = self.integer()
        self.expect(")")
        return Cong(linear_normalize(t), modulus, residue % modulus)

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        if self.tok.kind != "num":
            self.fail("expected an integer")
        value = int(self.tok.text)
        self.pos += 1
        return sign * value

    # -- terms ---------------------------------------------------------------
    def term(self) -> Term:
        t = self.product()
        while True:
            if self.accept("+"):
                t = Sum(t, self.product())
            elif self.accept("-"):
                t = Sum(t, Scale(Fraction(-1), self.product()))
            else:
                return t

    def product(self) -> Term:
        if self.accept("-"):
            return Scale(Fraction(-1), self.product())
        t = self.factor()
        while True:
            if self.accept("*"):
                rhs_tok = self.tok
                rhs = self.factor()
                if isinstance(t, Const):
                    t = Scale(t.value, rhs) if not isinstance(rhs, Const) else Const(t.value * rhs.value)
                elif isinstance(rhs, Const):
                    t = Scale(rhs.value, t)
                else:
                    self.fail("nonlinear product", rhs_tok)
            elif self.at("/") and self.peek().kind == "num":
                self.pos += 1
                d = int(self.tok.text)
                if d == 0:
                    self.fail("division by zero")
                self.pos += 1
                t = Const(t.value / d) if isinstance(t, Const) else Scale(Fraction(1, d), t)
            else:
                break
        return t

    def factor(self) -> Term:
        t = self.tok
        if t.kind == "num":
            self.pos += 1
            return Const(Fraction(int(t.text)))
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        if t.kind == "ident":
            if t.text == "floor" and self.peek().text == "(":
                self.pos += 2
                inner = self.term()
                self.expect(")")
                return Floor(inner)
            if self.peek().text == "(":
                self.fail(f"unknown identifier {t.text!r}")
            return Var(self.variable_name())
        self.fail("expected a term")

    def variable_name(self) -> str:
        t = self.tok
        if t.kind != "ident":
            self.fail("expected a variable")
        if t.text in RESERVED:
            self.fail(f"reserved word {t.text!r} cannot be a variable")
        self.pos += 1
        return t.text

    def finish(self):
        if self.tok.kind != "eof":
            self.fail("unexpected trailing input")


def parse_formula(text: str) -> Formula:
    p = Parser(text)
    f = p.formula()
    p.finish()
    return f


def parse_term(text: str) -> Term:
    p = Parser(text)
    t = p.term()
    p.finish()
    return t


def parse_rational(text: str) -> Fraction:
    """``p`` or ``p/q`` with an optional sign."""
    m = re.fullmatch(r"\s*([+-]?\d+)(?:/(\d+))?\s*", text)
    if m is None or m.group(2) == "0":
        raise ValueError(f"not a rational: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


__all__ = ["ParseError", "parse_formula", "parse_rational", "parse_term", "tokenize"]
