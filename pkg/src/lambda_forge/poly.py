"""Sparse multivariate polynomials with exact rational coefficients.

Every symbolic object in lambda-forge reduces to these: coefficients of
algebra elements (polynomials in the derivation symbol ``d``), lambda-products
(variables ``l``, ``mu``), multi-slot cochain values (``l1``, ``l2``, ...) and
symbolic parameters such as ``Delta`` or ``alpha``.

Representation: a mapping from monomials to ``fractions.Fraction``.  A monomial
is a tuple of ``(variable, exponent)`` pairs sorted by the fixed variable
order, all exponents >= 1.  The zero polynomial is the empty mapping, so
structural equality doubles as the "is this identity zero?" test and no
canonicalisation pass is ever needed after the constructors.

Variable order: ``d`` < ``l`` < ``mu`` < ``l1`` < ``l2`` < ... < parameters
(alphabetically).  Rendering is graded-lexicographic over that order, e.g.
``2*l^3 + 1/2*d*l``; :mod:`lambda_forge.exprs` parses this format back.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache

Rat = Fraction

_LAMBDA_SLOT = re.compile(r"^l([0-9]+)$")


@lru_cache(maxsize=None)
def var_key(name: str):
    """Sort key realising the fixed variable order."""
    if name == "d":
        return (0, 0, "")
    if name == "l":
        return (1, 0, "")
    if name == "mu":
        return (2, 0, "")
    m = _LAMBDA_SLOT.match(name)
    if m:
        return (3, int(m.group(1)), "")
    return (4, 0, name)


def _mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    acc = dict(m1)
    for v, e in m2:
        acc[v] = acc.get(v, 0) + e
    return tuple(sorted(acc.items(), key=lambda it: var_key(it[0])))


class Poly:
    """Immutable sparse polynomial over Q."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        t = {}
        if terms:
            for mono, c in terms.items():
                c = Fraction(c)
                if c:
                    t[mono] = c
        self.terms = t

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(c) -> "Poly":
        c = Fraction(c)
        return Poly({(): c}) if c else Poly()

    @staticmethod
    def var(name: str, exp: int = 1) -> "Poly":
        if exp < 0:
            raise ValueError("negative exponent")
        if exp == 0:
            return Poly.const(1)
        return Poly({((name, exp),): Fraction(1)})

    @staticmethod
    def _lift(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return Poly.const(x)

    # -- ring structure ------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        other = Poly._lift(other)
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            s = acc.get(mono, 0) + c
            if s:
                acc[mono] = s
            elif mono in acc:
                del acc[mono]
        out = Poly.__new__(Poly)
        out.terms = acc
        return out

    __radd__ = __add__

    def __neg__(self):
        out = Poly.__new__(Poly)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-Poly._lift(other))

    def __rsub__(self, other):
        return Poly._lift(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return Poly()
            out = Poly.__new__(Poly)
            out.terms = {m: c * q for m, c in self.terms.items()}
            return out
        if not isinstance(other, Poly):
            return NotImplemented
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = acc.get(m, 0) + c1 * c2
                if s:
                    acc[m] = s
                elif m in acc:
                    del acc[m]
        out = Poly.__new__(Poly)
        out.terms = acc
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    # -- structure queries ----------------------------------------------

    def variables(self):
        vs = set()
        for mono in self.terms:
            for v, _ in mono:
                vs.add(v)
        return vs

    def degree(self, name: str) -> int:
        d = 0
        for mono in self.terms:
            for v, e in mono:
                if v == name and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        d = 0
        for mono in self.terms:
            s = sum(e for _, e in mono)
            if s > d:
                d = s
        return d

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def by_powers(self, name: str) -> dict:
        """Split into {exponent of name: cofactor polynomial}."""
        out = {}
        for mono, c in self.terms.items():
            k = 0
            rest = []
            for v, e in mono:
                if v == name:
                    k = e
                else:
                    rest.append((v, e))
            bucket = out.setdefault(k, {})
            rest = tuple(rest)
            bucket[rest] = bucket.get(rest, 0) + c
        return {k: Poly(b) for k, b in out.items() if any(b.values())}

    def coeff(self, name: str, k: int) -> "Poly":
        """Coefficient of name**k (a polynomial in the remaining variables)."""
        acc = {}
        for mono, c in self.terms.items():
            kk = 0
            rest = []
            for v, e in mono:
                if v == name:
                    kk = e
                else:
                    rest.append((v, e))
            if kk == k:
                acc[tuple(rest)] = acc.get(tuple(rest), 0) + c
        return Poly(acc)

    # -- substitution ----------------------------------------------------

    def subst(self, mapping: dict) -> "Poly":
        """Simultaneously replace variables by polynomials (one pass).

        Well-defined even when images mention substituted variables, since
        cofactors are extracted before images are multiplied in.
        """
        images = {v: Poly._lift(img) for v, img in mapping.items()}
        touched = set(images)
        pows = {v: [Poly.const(1), images[v]] for v in images}

        def power(v, e):
            ps = pows[v]
            while len(ps) <= e:
                ps.append(ps[-1] * ps[1])
            return ps[e]

        out = Poly()
        for mono, c in self.terms.items():
            if not any(v in touched for v, _ in mono):
                out = out + Poly({mono: c})
                continue
            piece = Poly.const(c)
            rest = []
            for v, e in mono:
                if v in touched:
                    piece = piece * power(v, e)
                else:
                    rest.append((v, e))
            if rest:
                piece = piece * Poly({tuple(rest): Fraction(1)})
            out = out + piece
        return out

    def rename(self, old: str, new: str) -> "Poly":
        return self.subst({old: Poly.var(new)})

    # -- rendering ---------------------------------------------------------

    def render(self) -> str:
        if not self.terms:
            return "0"
        keyed = []
        for mono, c in self.terms.items():
            deg = sum(e for _, e in mono)
            lex = tuple((var_key(v), -e) for v, e in mono)
            keyed.append(((-deg, lex), mono, c))
        keyed.sort(key=lambda it: it[0])
        parts = []
        for i, (_, mono, c) in enumerate(keyed):
            neg = c < 0
            c = abs(c)
            factors = []
            if c != 1 or not mono:
                factors.append(str(c))
            for v, e in mono:
                factors.append(v if e == 1 else f"{v}^{e}")
            body = "*".join(factors)
            if i == 0:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"Poly({self.render()})"


def subst_affine(p: Poly, v: str, image) -> Poly:
    """Replace v by image; image must not mention v (spec contract)."""
    image = Poly._lift(image)
    if v in image.variables():
        raise ValueError(f"substitution image for {v!r} contains {v!r}")
    return p.subst({v: image})


# ---------------------------------------------------------------------------
# Univariate helpers (used by the extension-condition sweep)
# ---------------------------------------------------------------------------


def univ_coeffs(p: Poly, name: str) -> list:
    """Coefficient list [c0, c1, ...]; p must be univariate in name."""
    extra = p.variables() - {name}
    if extra:
        raise ValueError(f"not univariate: extra variables {sorted(extra)}")
    n = p.degree(name)
    out = [Fraction(0)] * (n + 1)
    for mono, c in p.terms.items():
        k = mono[0][1] if mono else 0
        out[k] = c
    return out


def from_univ_coeffs(coeffs, name: str) -> Poly:
    acc = {}
    for k, c in enumerate(coeffs):
        c = Fraction(c)
        if not c:
            continue
        acc[() if k == 0 else ((name, k),)] = c
    return Poly(acc)


def _univ_divmod(a: list, b: list):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    b = list(b)
    while b and not b[-1]:
        b.pop()
    if not b:
        raise ZeroDivisionError("univariate division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = list(a)
    while len(r) >= len(b) and any(r):
        if not r[-1]:
            r.pop()
            continue
        shift = len(r) - len(b)
        f = r[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            r[shift + i] -= f * bc
        while r and not r[-1]:
            r.pop()
    return q, r


def univ_gcd(a: list, b: list) -> list:
    a = [Fraction(c) for c in a]
    b = [Fraction(c) for c in b]
    while any(b):
        _, r = _univ_divmod(a, b)
        a, b = b, r
    while a and not a[-1]:
        a.pop()
    if a:
        lead = a[-1]
        a = [c / lead for c in a]
    return a


def univ_derivative(a: list) -> list:
    return [a[k] * k for k in range(1, len(a))]


def squarefree_part(a: list) -> list:
    if not any(a):
        return []
    g = univ_gcd(a, univ_derivative(a))
    if len(g) <= 1:
        out = list(a)
    else:
        out, r = _univ_divmod(a, g)
        assert not any(r)
    while out and not out[-1]:
        out.pop()
    lead = out[-1]
    return [c / lead for c in out]


def rational_roots(a: list) -> list:
    """All rational roots of the univariate coefficient list (with the
    rational-root theorem on the integer-cleared polynomial)."""
    coeffs = list(a)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial has every root")
    mult = 1
    for c in coeffs:
        mult = mult * c.denominator // _gcd(mult, c.denominator)
    ints = [int(c * mult) for c in coeffs]
    k = 0
    while not ints[k]:
        k += 1
    roots = set()
    if k:
        roots.add(Fraction(0))
    ints = ints[k:]
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                val = Fraction(0)
                for c in reversed(ints):
                    val = val * cand + c
                if val == 0:
                    roots.add(cand)
    return sorted(roots)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i != n // i:
                out.append(n // i)
        i += 1
    return sorted(out)


def interpolate(points, name: str) -> Poly:
    """Lagrange interpolation through (x, y) pairs, exact over Q."""
    xs = [Fraction(x) for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    x = Poly.var(name)
    out = Poly()
    for i, (xi, yi) in enumerate(points):
        yi = Fraction(yi)
        if not yi:
            continue
        num = Poly.const(1)
        den = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            num = num * (x - Fraction(xj))
            den *= Fraction(xi) - Fraction(xj)
        out = out + num * (yi / den)
    return out
