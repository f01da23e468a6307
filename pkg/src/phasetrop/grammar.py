"""Text grammar for scalars, polynomials, ideals and matrices.

    file   := line*
    line   := "vars:" IDENT+
            | "poly" IDENT "=" EXPR
            | "ideal" IDENT "=" "{" EXPR ("," EXPR)* "}"
            | "mat" IDENT "=" "[[" E "," E "],[" E "," E "]]"
    EXPR   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*       divisor must be a scalar
    factor := ("+"|"-") factor | atom ["^" exponent]
    atom   := NAT | "i" | "t" | IDENT | "(" EXPR ")"

Exponents on t may be any rational: t^2, t^-1, t^(1/2), t^(-3/2); on
variables and parenthesized expressions they must be natural numbers.
Juxtaposition is not multiplication; write the "*".  The printers in
hahn.py and polys.py emit exactly this language, so printing and parsing
round-trip on normal forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ParseError
from .hahn import GR_I, GR_ONE, HahnScalar, ONE, ZERO, gaussian, t_power
from .polys import ComplexPoly, GaussianRational, ValuedPoly
from .sl2 import HahnMat2

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

_RESERVED = {"t", "i", "vars", "poly", "ideal", "mat"}


@dataclass
class _Tokens:
    text: str
    line: int = 1
    pos: int = 0
    toks: list[tuple[str, str, int]] = field(default_factory=list)
    k: int = 0

    def __post_init__(self):
        pos = 0
        while pos < len(self.text):
            m = _TOKEN.match(self.text, pos)
            if not m or m.end() == m.start():
                break
            if m.group(1):
                self.toks.append(("num", m.group(1), m.start(1)))
            elif m.group(2):
                self.toks.append(("name", m.group(2), m.start(2)))
            else:
                ch = m.group(3)
                if not ch.isspace():
                    self.toks.append(("sym", ch, m.start(3)))
            pos = m.end()

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("eof", "", len(self.text))

    def next(self):
        tok = self.peek()
        self.k += 1
        return tok

    def expect(self, kind: str, value: str | None = None):
        tok = self.next()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise self.error(f"expected {want!r}, found {tok[1]!r}", tok[2])
        return tok

    def error(self, msg: str, at: int | None = None) -> ParseError:
        col = (self.peek()[2] if at is None else at) + 1
        return ParseError(msg, self.line, col)


class _ExprParser:
    """Recursive-descent parser building ValuedPoly over the declared names."""

    def __init__(self, toks: _Tokens, varnames: list[str]):
        self.toks = toks
        self.names = {name: i for i, name in enumerate(varnames)}
        self.nvars = len(varnames)

    def parse(self) -> ValuedPoly:
        e = self.expr()
        tok = self.toks.peek()
        if tok[0] != "eof":
            raise self.toks.error(f"unexpected trailing {tok[1]!r}", tok[2])
        return e

    def expr(self) -> ValuedPoly:
        out = self.term()
        while True:
            tok = self.toks.peek()
            if tok[:2] == ("sym", "+"):
                self.toks.next()
                out = out + self.term()
            elif tok[:2] == ("sym", "-"):
                self.toks.next()
                out = out - self.term()
            else:
                return out

    def term(self) -> ValuedPoly:
        out = self.factor()
        while True:
            tok = self.toks.peek()
            if tok[:2] == ("sym", "*"):
                self.toks.next()
                out = out * self.factor()
            elif tok[:2] == ("sym", "/"):
                self.toks.next()
                at = self.toks.peek()[2]
                rhs = self.factor()
                c = _as_constant(rhs)
                if c is None:
                    raise self.toks.error("division requires a scalar denominator", at)
                if c.is_zero():
                    raise self.toks.error("division by zero", at)
                out = out.scale(ONE / c)
            else:
                return out

    def factor(self) -> ValuedPoly:
        tok = self.toks.peek()
        if tok[:2] == ("sym", "-"):
            self.toks.next()
            return -self.factor()
        if tok[:2] == ("sym", "+"):
            self.toks.next()
            return self.factor()
        base, is_t = self.atom()
        tok = self.toks.peek()
        if tok[:2] == ("sym", "^"):
            self.toks.next()
            if is_t:
                return ValuedPoly.constant(t_power(self.t_exponent()), self.nvars)
            at = self.toks.peek()[2]
            e = self.nat_exponent()
            return base ** e
        if is_t:
            return ValuedPoly.constant(t_power(1), self.nvars)
        return base

    def t_exponent(self) -> Fraction:
        tok = self.toks.peek()
        if tok[:2] == ("sym", "("):
            self.toks.next()
            at = self.toks.peek()[2]
            inner = self.expr()
            self.toks.expect("sym", ")")
            c = _as_constant(inner)
            r = _as_rational(c) if c is not None else None
            if r is None:
                raise self.toks.error("exponent of t must be rational", at)
            return r
        sign = 1
        if tok[:2] == ("sym", "-"):
            self.toks.next()
            sign = -1
            tok = self.toks.peek()
        if tok[0] != "num":
            raise self.toks.error("expected an integer exponent after '^'", tok[2])
        self.toks.next()
        return Fraction(sign * int(tok[1]))

    def nat_exponent(self) -> int:
        tok = self.toks.peek()
        if tok[:2] == ("sym", "("):
            self.toks.next()
            at = self.toks.peek()[2]
            inner = self.expr()
            self.toks.expect("sym", ")")
            c = _as_constant(inner)
            r = _as_rational(c) if c is not None else None
            if r is None or r.denominator != 1 or r < 0:
                raise self.toks.error("exponent must be a natural number", at)
            return int(r)
        if tok[0] != "num":
            raise self.toks.error(
                "exponent must be a natural number (negative powers are only for t)",
                tok[2])
        self.toks.next()
        return int(tok[1])

    def atom(self) -> tuple[ValuedPoly, bool]:
        tok = self.toks.next()
        if tok[0] == "num":
            return ValuedPoly.constant(HahnScalar.rational(int(tok[1])), self.nvars), False
        if tok[0] == "name":
            name = tok[1]
            if name == "t":
                return ValuedPoly.constant(t_power(1), self.nvars), True
            if name == "i":
                return ValuedPoly.constant(HahnScalar.from_coeff(GR_I), self.nvars), False
            if name in self.names:
                return ValuedPoly.variable(self.names[name], self.nvars), False
            raise self.toks.error(f"unknown identifier {name!r}", tok[2])
        if tok[:2] == ("sym", "("):
            inner = self.expr()
            self.toks.expect("sym", ")")
            return inner, False
        raise self.toks.error(f"unexpected token {tok[1]!r}", tok[2])


def _as_constant(p: ValuedPoly) -> HahnScalar | None:
    if p.is_zero():
        return ZERO
    if len(p.terms) == 1 and sum(p.terms[0][0]) == 0:
        return p.terms[0][1]
    return None


def _as_rational(c: HahnScalar) -> Fraction | None:
    if c.is_zero():
        return Fraction(0)
    if not c.is_term():
        return None
    g, coeff = c.num.leading()
    if g != 0 or coeff.im != 0:
        return None
    return coeff.re


def parse_poly(text: str, varnames: list[str], line: int = 1) -> ValuedPoly:
    toks = _Tokens(text, line=line)
    for name in varnames:
        if name in _RESERVED:
            raise ParseError(f"variable name {name!r} is reserved", line, 1)
    return _ExprParser(toks, varnames).parse()


def parse_scalar(text: str, line: int = 1) -> HahnScalar:
    p = parse_poly(text, [], line=line)
    c = _as_constant(p)
    assert c is not None
    return c


def parse_complex_poly(text: str, varnames: list[str]) -> ComplexPoly:
    """Parse a polynomial whose coefficients must be plain Gaussian rationals."""
    p = parse_poly(text, varnames)
    acc: dict[tuple[int, ...], GaussianRational] = {}
    for u, c in p.terms:
        if not c.is_term():
            raise ParseError("coefficients must be constants (no t)", 1, 1)
        g, coeff = c.num.leading()
        if g != 0:
            raise ParseError("coefficients must be constants (no t)", 1, 1)
        acc[u] = coeff
    return ComplexPoly.from_dict(len(varnames), acc)


@dataclass
class Session:
    """Named objects declared by a session file."""

    varnames: list[str] = field(default_factory=list)
    polys: dict[str, ValuedPoly] = field(default_factory=dict)
    ideals: dict[str, list[ValuedPoly]] = field(default_factory=dict)
    mats: dict[str, HahnMat2] = field(default_factory=dict)

    def used_names(self) -> set[str]:
        return set(self.polys) | set(self.ideals) | set(self.mats) | set(self.varnames)


def _split_top_level(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_session(text: str) -> Session:
    sess = Session()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("vars:"):
            names = line[len("vars:"):].split()
            if not names:
                raise ParseError("vars: needs at least one name", lineno, 1)
            for n in names:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", n):
                    raise ParseError(f"bad variable name {n!r}", lineno, 1)
                if n in _RESERVED:
                    raise ParseError(f"variable name {n!r} is reserved", lineno, 1)
            if len(set(names)) != len(names):
                raise ParseError("duplicate variable names", lineno, 1)
            sess.varnames = names
            continue
        m = re.match(r"(poly|ideal|mat)\s+([A-Za-z_][A-Za-z_0-9]*)\s*=\s*(.*)$", line)
        if not m:
            raise ParseError(f"cannot parse line {raw.strip()!r}", lineno, 1)
        kind, name, rhs = m.groups()
        if name in _RESERVED or name in sess.used_names():
            raise ParseError(f"name {name!r} is reserved or already used", lineno, 1)
        if kind == "poly":
            sess.polys[name] = parse_poly(rhs, sess.varnames, line=lineno)
        elif kind == "ideal":
            rhs = rhs.strip()
            if not (rhs.startswith("{") and rhs.endswith("}")):
                raise ParseError("ideal body must be braced: { f, g, ... }", lineno, 1)
            gens = []
            for part in _split_top_level(rhs[1:-1], ","):
                if part.strip():
                    gens.append(parse_poly(part, sess.varnames, line=lineno))
            if not gens:
                raise ParseError("ideal needs at least one generator", lineno, 1)
            sess.ideals[name] = gens
        else:
            rhs = rhs.strip()
            m2 = re.fullmatch(r"\[\s*\[(.*)\]\s*,\s*\[(.*)\]\s*\]", rhs)
            if not m2:
                raise ParseError("matrix body must look like [[a, b],[c, d]]", lineno, 1)
            entries = []
            for row in m2.groups():
                cells = _split_top_level(row, ",")
                if len(cells) != 2:
                    raise ParseError("matrix rows need exactly two entries", lineno, 1)
                for cell in cells:
                    entries.append(parse_scalar(cell, line=lineno))
            sess.mats[name] = HahnMat2(tuple(entries))
    return sess
