"""Expression parsing for the CLI: polynomials and algebra elements.

Accepts the library's own canonical renderings (round-trip contract), e.g.

    2*l^3 + 1/2*d*l
    (d + 2*l)*L + 3*e
    -L

Grammar (recursive descent):

    expr   := ['-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := atom ['^' INT]
    atom   := RATIONAL | NAME | '(' expr ')'

Rational literals are INT or INT/INT.  A NAME is a generator of the ambient
algebra when one is supplied and matches, otherwise a polynomial variable.
Products of two generators are rejected: elements are C[d]-combinations of
generators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly

_TOKEN = re.compile(
    r"\s*(?:(?P<num>[0-9]+)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^()]))"
)


class ParseError(ValueError):
    pass


def tokenize(s: str):
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            if s[pos:].strip():
                raise ParseError(f"unexpected character {s[pos]!r} at {pos}")
            break
        if m.group("num"):
            out.append(("num", int(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    return out


@dataclass
class Combination:
    """scalar polynomial plus a generator-name combination."""

    scalar: Poly = field(default_factory=Poly.zero)
    gens: dict = field(default_factory=dict)

    def add(self, other: "Combination") -> "Combination":
        gens = dict(self.gens)
        for g, p in other.gens.items():
            q = gens.get(g, Poly.zero()) + p
            if q:
                gens[g] = q
            elif g in gens:
                del gens[g]
        return Combination(self.scalar + other.scalar, gens)

    def neg(self) -> "Combination":
        return Combination(-self.scalar, {g: -p for g, p in self.gens.items()})

    def mul(self, other: "Combination") -> "Combination":
        if self.gens and other.gens:
            raise ParseError("product of two generator terms is not an element")
        if other.gens:
            return other.mul(self)
        scalar = self.scalar * other.scalar
        gens = {g: p * other.scalar for g, p in self.gens.items()}
        gens = {g: p for g, p in gens.items() if p}
        return Combination(scalar, gens)

    def power(self, k: int) -> "Combination":
        if self.gens:
            if k == 1:
                return self
            raise ParseError("cannot raise a generator term to a power")
        return Combination(self.scalar**k, {})


class _Parser:
    def __init__(self, tokens, gen_names):
        self.toks = tokens
        self.i = 0
        self.gen_names = gen_names

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expect_op(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}")

    def parse(self) -> Combination:
        out = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input at token {self.i}")
        return out

    def expr(self) -> Combination:
        negate = False
        kind, val = self.peek()
        if kind == "op" and val == "-":
            self.take()
            negate = True
        acc = self.term()
        if negate:
            acc = acc.neg()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                acc = acc.add(nxt.neg() if val == "-" else nxt)
            else:
                return acc

    def term(self) -> Combination:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc.mul(self.factor())
            else:
                return acc

    def factor(self) -> Combination:
        atom = self.atom()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            k, v = self.take()
            if k != "num":
                raise ParseError("exponent must be a nonnegative integer")
            return atom.power(v)
        return atom

    def atom(self) -> Combination:
        kind, val = self.take()
        if kind == "num":
            k2, v2 = self.peek()
            if k2 == "op" and v2 == "/":
                self.take()
                k3, v3 = self.take()
                if k3 != "num" or v3 == 0:
                    raise ParseError("malformed rational literal")
                return Combination(Poly.const(Fraction(val, v3)), {})
            return Combination(Poly.const(val), {})
        if kind == "name":
            if val in self.gen_names:
                return Combination(Poly.zero(), {val: Poly.const(1)})
            return Combination(Poly.var(val), {})
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {val!r}")


def parse_combination(s: str, gen_names=()) -> Combination:
    return _Parser(tokenize(s), frozenset(gen_names)).parse()


def parse_poly(s: str) -> Poly:
    comb = parse_combination(s)
    if comb.gens:
        raise ParseError("expected a polynomial, found generator names")
    return comb.scalar


def parse_element(s: str, algebra, bound=None) -> dict:
    """Parse an element expression against an algebra's generator names."""
    names = {algebra.gen_name(g): g for g in algebra.generators(bound)}
    comb = parse_combination(s, names)
    if comb.scalar:
        raise ParseError("scalar term without a generator in element expression")
    out = {}
    for name, p in comb.gens.items():
        out[names[name]] = p
    return out
