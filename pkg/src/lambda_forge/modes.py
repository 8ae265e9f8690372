"""Mode algebras: the bridge from lambda-products to formal distributions.

Modes a_n are formal symbols indexed by (generator, integer); modes of
d-multiples normalise away through (d a)_n = -n a_{n-1}.  The product is the
untwisted reconstruction formula

    a_m b_n = sum_j  C(m, j)  (a_(j) b)_{m+n-j}

with generalised binomials (m may be negative), which is exact: no window is
involved at this level.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .conformal import ConformalAlgebra, gen_sort_key
from .poly import Poly


def falling(m: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= m - i
    return out


def comb_general(m: int, j: int) -> Fraction:
    return Fraction(falling(m, j), factorial(j))


class ModeElt:
    """Finite rational combination of modes; dict {(gen, n): Fraction}."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        for key, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                t[key] = c
        self.terms = t

    @staticmethod
    def mode(gen, n: int) -> "ModeElt":
        return ModeElt({(gen, n): 1})

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int) and other == 0:
            return not self.terms
        return isinstance(other, ModeElt) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, int) and other == 0:
            return self
        acc = dict(self.terms)
        for k, c in other.terms.items():
            s = acc.get(k, Fraction(0)) + c
            if s:
                acc[k] = s
            elif k in acc:
                del acc[k]
        return ModeElt(acc)

    __radd__ = __add__

    def __neg__(self):
        return ModeElt({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return ModeElt({k: c * scalar for k, c in self.terms.items()})

    __rmul__ = __mul__

    def render(self, gen_name=None) -> str:
        if not self.terms:
            return "0"
        name = gen_name or str
        parts = []
        for (g, n), c in sorted(
            self.terms.items(), key=lambda it: (gen_sort_key(it[0][0]), it[0][1])
        ):
            parts.append(f"{c}*{name(g)}[{n}]")
        return " + ".join(parts)

    def __repr__(self):
        return f"ModeElt({self.render()})"


def modes_of_elt(elt: dict, n: int) -> ModeElt:
    """n-th mode of an element with C[d] coefficients: (d^k x)_n
    = (-1)^k n(n-1)...(n-k+1) x_{n-k}."""
    out = ModeElt()
    for g, p in elt.items():
        for mono, c in p.terms.items():
            k = 0
            for v, e in mono:
                if v == "d":
                    k = e
                else:
                    raise ValueError("mode expansion needs parameter-free coefficients")
            sign = -1 if k % 2 else 1
            coeff = c * sign * falling(n, k)
            if coeff:
                out = out + ModeElt({(g, n - k): coeff})
    return out


def _j_products(A: ConformalAlgebra, a, b) -> dict:
    entry = A.entry(a, b)
    out = {}
    for g, p in entry.items():
        for j, q in p.by_powers("l").items():
            tgt = out.setdefault(j, {})
            prev = tgt.get(g)
            add = q * factorial(j)
            tgt[g] = add if prev is None else prev + add
    return out


def mode_product(A: ConformalAlgebra, a, m: int, b, n: int) -> ModeElt:
    """a_m b_n as an exact finite combination of modes."""
    out = ModeElt()
    for j, jprod in _j_products(A, a, b).items():
        coeff = comb_general(m, j)
        if not coeff:
            continue
        out = out + modes_of_elt(jprod, m + n - j) * coeff
    return out


def mode_product_elts(A: ConformalAlgebra, x: ModeElt, y: ModeElt) -> ModeElt:
    """Bilinear extension of the mode product to mode combinations."""
    out = ModeElt()
    for (a, m), ca in x.terms.items():
        for (b, n), cb in y.terms.items():
            out = out + mode_product(A, a, m, b, n) * (ca * cb)
    return out


@dataclass
class ModeReport:
    algebra: str
    window: int
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self):
        out = [
            f"mode axioms for {self.algebra} on window [-{self.window}, {self.window}]: "
            f"{self.checked} identities"
        ]
        out.append("all passed" if self.ok else f"{len(self.failures)} FAILURES")
        for law, where, resid in self.failures[:50]:
            out.append(f"FAIL {law} at {where}: {resid}")
        return out


def verify_mode_axioms(A: ConformalAlgebra, window: int, gens=None, bound=None) -> ModeReport:
    """Antisymmetry + Jacobi (Lie) or associativity (associative) of the mode
    product on all generator/index tuples in the window."""
    gens = list(gens) if gens is not None else A.generators(bound)
    rng = range(-window, window + 1)
    rep = ModeReport(algebra=A.name, window=window)
    names = {g: A.gen_name(g) for g in gens}
    if A.kind == "lie":
        for a, b in itertools.product(gens, repeat=2):
            sign = A.sign(a, b)
            for m, n in itertools.product(rng, repeat=2):
                lhs = mode_product(A, a, m, b, n)
                rhs = mode_product(A, b, n, a, m) * sign
                rep.checked += 1
                if lhs + rhs:
                    rep.failures.append(
                        ("antisym", (names[a], m, names[b], n), (lhs + rhs).render())
                    )
        for a, b, c in itertools.product(gens, repeat=3):
            sign = A.sign(a, b)
            for m, n, p in itertools.product(rng, repeat=3):
                bc = mode_product(A, b, n, c, p)
                lhs = mode_product_elts(A, ModeElt.mode(a, m), bc)
                ab = mode_product(A, a, m, b, n)
                r1 = mode_product_elts(A, ab, ModeElt.mode(c, p))
                ac = mode_product(A, a, m, c, p)
                r2 = mode_product_elts(A, ModeElt.mode(b, n), ac) * sign
                resid = lhs - r1 - r2
                rep.checked += 1
                if resid:
                    rep.failures.append(
                        ("jacobi", (names[a], m, names[b], n, names[c], p), resid.render())
                    )
    else:
        for a, b, c in itertools.product(gens, repeat=3):
            for m, n, p in itertools.product(rng, repeat=3):
                bc = mode_product(A, b, n, c, p)
                lhs = mode_product_elts(A, ModeElt.mode(a, m), bc)
                ab = mode_product(A, a, m, b, n)
                rhs = mode_product_elts(A, ab, ModeElt.mode(c, p))
                resid = lhs - rhs
                rep.checked += 1
                if resid:
                    rep.failures.append(
                        ("assoc", (names[a], m, names[b], n, names[c], p), resid.render())
                    )
    return rep


def mode_rows(A: ConformalAlgebra, window: int, gens=None, bound=None):
    """CSV-style rows (gen_a, m, gen_b, n, term_gen, term_index, num, den)."""
    gens = list(gens) if gens is not None else A.generators(bound)
    rows = []
    for a, b in itertools.product(gens, repeat=2):
        for m in range(-window, window + 1):
            for n in range(-window, window + 1):
                prod = mode_product(A, a, m, b, n)
                for (g, k), c in sorted(
                    prod.terms.items(), key=lambda it: (gen_sort_key(it[0][0]), it[0][1])
                ):
                    rows.append(
                        (
                            A.gen_name(a),
                            m,
                            A.gen_name(b),
                            n,
                            A.gen_name(g),
                            k,
                            c.numerator,
                            c.denominator,
                        )
                    )
    return rows
