"""The superconformal families W_N, S_N (as a certified span) and K_N.

Generators are Grassmann monomial labels: ("x", mask) for xi_I and
("xd", mask, i) for xi_I d_i, with parity |I| mod 2 resp. |I|+1 mod 2.
Table entries are computed from the lambda-bracket formulas by Grassmann
arithmetic:

    [a_l b] = [a, b]                     a, b derivations
    [a_l f] = a(f) - p(a,f) l f a        a derivation, f function
    [f_l g] = -(d + 2l) f g              f, g functions

and for K_N on functions only

    [f_l g] = (|f|/2 - 1) d (fg) + 1/2 (-1)^{|f|} sum_i (d_i f)(d_i g)
              + l (|f|/2 + |g|/2 - 2) fg

(|f| is the Z-degree).  The reversed derivation/function entry is the skew
completion.  Weights make every entry homogeneous: w(xi_I) = 2 - |I|/2,
w(xi_I d_i) = 3/2 - |I|/2.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .conformal import ConformalAlgebra, add_term, elt_scale, elt_sub
from .grassmann import Grassmann, mask_name, popcount
from .poly import Poly

D = Poly.var("d")
L = Poly.var("l")

MAX_N = 4

_NAME_XD = re.compile(r"^x([0-9]*)d([0-9]+)$")
_NAME_X = re.compile(r"^x([0-9]*)$")


def _mask_of(digits: str) -> int:
    mask = 0
    for ch in digits:
        mask |= 1 << (int(ch) - 1)
    return mask


def _gen_name(g) -> str:
    if g[0] == "x":
        return mask_name(g[1])
    return f"{mask_name(g[1])}d{g[2]}"


def _gen_by_name(n: int):
    def lookup(s: str):
        m = _NAME_XD.match(s)
        if m:
            g = ("xd", _mask_of(m.group(1)), int(m.group(2)))
            if g[1] < (1 << n) and 1 <= g[2] <= n:
                return g
            raise KeyError(f"generator {s!r} out of range for N={n}")
        m = _NAME_X.match(s)
        if m:
            mask = _mask_of(m.group(1))
            if mask < (1 << n):
                return ("x", mask)
        raise KeyError(f"unknown generator {s!r}")

    return lookup


def _decompose_function(f: Grassmann) -> dict:
    out = {}
    for mask, c in f.terms.items():
        add_term(out, ("x", mask), c)
    return out


def _decompose_derivation(i: int, p: Grassmann) -> dict:
    out = {}
    for mask, c in p.terms.items():
        add_term(out, ("xd", mask, i), c)
    return out


def _parity(g) -> int:
    k = popcount(g[1])
    return k % 2 if g[0] == "x" else (k + 1) % 2


def _weight(g):
    base = Fraction(2) if g[0] == "x" else Fraction(3, 2)
    return base - Fraction(popcount(g[1]), 2)


def _w_entry(n: int, a, b) -> dict:
    koszul = -1 if _parity(a) * _parity(b) % 2 else 1
    if a[0] == "xd" and b[0] == "xd":
        _, imask, i = a
        _, jmask, j = b
        P = Grassmann.monomial(n, imask)
        Q = Grassmann.monomial(n, jmask)
        t1 = P * Q.deriv(i)
        t2 = Q * P.deriv(j)
        out = _decompose_derivation(j, t1)
        for g, c in _decompose_derivation(i, t2).items():
            add_term(out, g, c * (-koszul))
        return out
    if a[0] == "xd" and b[0] == "x":
        _, imask, i = a
        P = Grassmann.monomial(n, imask)
        F = Grassmann.monomial(n, b[1])
        out = _decompose_function(P * F.deriv(i))
        fa = F * P
        for g, c in _decompose_derivation(i, fa).items():
            add_term(out, g, c * (-koszul) * L)
        return out
    if a[0] == "x" and b[0] == "xd":
        # skew completion: -p(a,b) a(...)| with mu := -l-d expanded
        _, jmask, j = b
        P = Grassmann.monomial(n, jmask)
        F = Grassmann.monomial(n, a[1])
        out = {}
        for g, c in _decompose_function(P * F.deriv(j)).items():
            add_term(out, g, c * (-koszul))
        fa = F * P
        for g, c in _decompose_derivation(j, fa).items():
            add_term(out, g, c * (-(L + D)))
        return out
    F = Grassmann.monomial(n, a[1])
    G = Grassmann.monomial(n, b[1])
    return {g: c * (-(D + 2 * L)) for g, c in _decompose_function(F * G).items()}


def build_w(n: int) -> ConformalAlgebra:
    """The Lie conformal superalgebra W_N, rank (N+1) 2^N over C[d]."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"W_N supported for 0 <= N <= {MAX_N}")
    gens = [("x", mask) for mask in range(1 << n)]
    gens += [("xd", mask, i) for mask in range(1 << n) for i in range(1, n + 1)]

    return ConformalAlgebra(
        "lie",
        lambda a, b: _w_entry(n, a, b),
        gens=gens,
        parity=_parity,
        weight=_weight,
        super_=True,
        name=f"w:{n}",
        gen_name=_gen_name,
        gen_by_name=_gen_by_name(n),
    )


def _k_entry(n: int, a, b) -> dict:
    fmask, gmask = a[1], b[1]
    kf, kg = popcount(fmask), popcount(gmask)
    F = Grassmann.monomial(n, fmask)
    G = Grassmann.monomial(n, gmask)
    fg = F * G
    out = {}
    for g, c in _decompose_function(fg).items():
        coeff = c * ((Fraction(kf, 2) - 1) * D + (Fraction(kf, 2) + Fraction(kg, 2) - 2) * L)
        add_term(out, g, coeff)
    half = Fraction(1, 2) if kf % 2 == 0 else Fraction(-1, 2)
    for i in range(1, n + 1):
        for g, c in _decompose_function(F.deriv(i) * G.deriv(i)).items():
            add_term(out, g, c * half)
    return out


def build_k(n: int) -> ConformalAlgebra:
    """The Lie conformal superalgebra K_N, rank 2^N over C[d] (K_0 = Virasoro
    with L = -1)."""
    if not 0 <= n <= MAX_N:
        raise ValueError(f"K_N supported for 0 <= N <= {MAX_N}")
    gens = [("x", mask) for mask in range(1 << n)]
    return ConformalAlgebra(
        "lie",
        lambda a, b: _k_entry(n, a, b),
        gens=gens,
        parity=_parity,
        weight=_weight,
        super_=True,
        name=f"k:{n}",
        gen_name=_gen_name,
        gen_by_name=_gen_by_name(n),
    )


# ---------------------------------------------------------------------------
# Divergence and the S_N span
# ---------------------------------------------------------------------------


def divergence(n: int, element: dict, weight: Grassmann | None = None) -> Grassmann:
    """div(sum P_i d_i + f) = sum_i (-1)^{p(P_i)} d_i P_i - d f.

    element: dict over W_N generators with Poly coefficients (d and passive
    lambda variables allowed).  weight: optional left multiplier (1 for S_N,
    1 + xi_1..xi_N for the deformed variant).
    """
    parts = {i: Grassmann(n) for i in range(1, n + 1)}
    func = Grassmann(n)
    for g, c in element.items():
        if g[0] == "xd":
            parts[g[2]] = parts[g[2]] + Grassmann.monomial(n, g[1], c)
        elif g[0] == "x":
            func = func + Grassmann.monomial(n, g[1], c)
        else:
            raise ValueError(f"not a W_N generator: {g!r}")
    if weight is not None:
        parts = {i: weight * p for i, p in parts.items()}
        func = weight * func
    out = Grassmann(n)
    for i, p in parts.items():
        for k, hom in p.homogeneous_parts().items():
            sign = -1 if k % 2 else 1
            out = out + hom.deriv(i).scale(sign)
    out = out - func.scale(D)
    return out


def s_weight(n: int) -> Grassmann:
    """The S~_N multiplier 1 + xi_1 ... xi_N."""
    return Grassmann(n, {0: Poly.const(1), (1 << n) - 1: Poly.const(1)})


def build_s_span(n: int):
    """Spanning set of the divergence-zero subspace of W_N over C[d].

    Three families (possibly redundant as a generating set, which is fine for
    a span): pure terms xi_I d_i with i not in I; d-corrected terms
    d (xi_I d_i) + eps xi_{I\\i} with i in I; and a nullspace basis of
    d-free combinations of the remaining xi_I d_i (i in I) whose divergences
    cancel among themselves (e.g. xi_1 d_1 - xi_2 d_2).  Every element is
    checked to have divergence zero.
    """
    from fractions import Fraction

    from . import linalg

    W = build_w(n)
    span = {}
    inner = []  # (mask, i) with i in I, the d-free kernel variables
    for mask in range(1 << n):
        for i in range(1, n + 1):
            bit = 1 << (i - 1)
            if not mask & bit:
                span[("p", mask, i)] = {("xd", mask, i): Poly.const(1)}
            else:
                sign = -1 if popcount(mask & (bit - 1)) % 2 else 1
                eps = sign * (-1 if popcount(mask) % 2 else 1)
                span[("e", mask, i)] = {
                    ("xd", mask, i): D,
                    ("x", mask ^ bit): Poly.const(eps),
                }
                inner.append((mask, i))
    # divergence of sum c_{I,i} xi_I d_i (i in I) lands on the xi_{I\i};
    # rows: one constraint per target subset
    targets = sorted({mask ^ (1 << (i - 1)) for mask, i in inner})
    tidx = {t: r for r, t in enumerate(targets)}
    rows = [[Fraction(0)] * len(inner) for _ in targets]
    for col, (mask, i) in enumerate(inner):
        bit = 1 << (i - 1)
        sign = -1 if popcount(mask & (bit - 1)) % 2 else 1
        coef = sign * (-1 if popcount(mask) % 2 else 1)
        rows[tidx[mask ^ bit]][col] = Fraction(coef)
    for j, vec in enumerate(linalg.nullspace(rows)):
        elt = {}
        for col, c in enumerate(vec):
            if c:
                mask, i = inner[col]
                elt[("xd", mask, i)] = Poly.const(c)
        span[("k", j)] = elt
    for key, s in span.items():
        if divergence(n, s):
            raise AssertionError(f"span element {key} is not divergence-free")
    return W, span


class NotInSpan(Exception):
    pass


def express_in_span(n: int, span: dict, target: dict) -> list:
    """Rewrite target as sum q_k(l, d) * span_k; raises NotInSpan otherwise.

    Membership over C[l, d] acting by coefficient multiplication, solved as
    an exact linear system (degree bounds read off the target).
    """
    from fractions import Fraction

    from . import linalg

    if not target:
        return []
    dl = max(p.degree("l") for p in target.values())
    dd = max(p.degree("d") for p in target.values())
    qmonos = [
        Poly.var("l", a) * Poly.var("d", b)
        for a in range(dl + 1)
        for b in range(dd + 2)
    ]
    keys = sorted(span)
    cols = []
    for key in keys:
        for q in qmonos:
            cols.append((key, q, elt_scale(span[key], q)))
    monos = {}
    for _, _, prod in cols:
        for g, p in prod.items():
            monos.setdefault(g, set()).update(p.terms)
    for g, p in target.items():
        monos.setdefault(g, set()).update(p.terms)
    coords = sorted(
        ((g, m) for g, ms in monos.items() for m in ms),
        key=lambda gm: (str(gm[0]), gm[1]),
    )
    cidx = {gm: r for r, gm in enumerate(coords)}
    matrix = [[Fraction(0)] * len(cols) for _ in coords]
    for ci, (_, _, prod) in enumerate(cols):
        for g, p in prod.items():
            for m, c in p.terms.items():
                matrix[cidx[(g, m)]][ci] = c
    rhs = [Fraction(0)] * len(coords)
    for g, p in target.items():
        for m, c in p.terms.items():
            rhs[cidx[(g, m)]] = c
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise NotInSpan("bracket is not a C[l,d]-combination of the span")
    combo = {}
    for x, (key, q, _) in zip(sol, cols):
        if x:
            combo[key] = combo.get(key, Poly.zero()) + q * x
    return sorted(combo.items())


def closure_certificate(n: int):
    """Brackets of span elements re-expressed in the span.

    Returns dict (key1, key2) -> list of (key, coefficient Poly).  Raises
    NotInSpan if any bracket escapes, which would falsify closure.
    """
    from .conformal import lambda_product

    W, span = build_s_span(n)
    cert = {}
    for k1, s1 in span.items():
        for k2, s2 in span.items():
            bracket = lambda_product(W, s1, s2, "l")
            cert[(k1, k2)] = express_in_span(n, span, bracket)
    return cert
