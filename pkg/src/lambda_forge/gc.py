"""Cend_N and gc_N: conformal endomorphisms of the free module C[d]^N.

Generators J_A^m are indexed by matrix units A = E_{ab} and m >= 0; the
family is infinite over C[d] but every product lands in finitely many
generators, so the algebra is rule-generated with a bounded enumeration API.

Associative product:  J_A^m l J_B^n = sum_{j<=m} C(m,j) (l+d)^j J_{AB}^{m+n-j}
(zero unless the matrix units compose).  The Lie flavor is the Eq.-(16)-style
commutator bracket of that table.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import comb

from .conformal import ConformalAlgebra, add_term, lie_from_associative
from .poly import Poly

_NAME = re.compile(r"^J([0-9])([0-9])m([0-9]+)$")


def _gen_name(g) -> str:
    _, a, b, m = g
    return f"J{a}{b}m{m}"


def _gen_by_name(n: int):
    def lookup(s: str):
        m = _NAME.match(s)
        if not m:
            raise KeyError(f"unknown generator {s!r}")
        a, b, mm = int(m.group(1)), int(m.group(2)), int(m.group(3))
        if not (1 <= a <= n and 1 <= b <= n):
            raise KeyError(f"matrix unit out of range in {s!r}")
        return ("J", a, b, mm)

    return lookup


def _cend_entry(a, b) -> dict:
    _, r, s, m = a
    _, t, u, n = b
    if s != t:
        return {}
    lam_d = Poly.var("l") + Poly.var("d")
    out = {}
    for j in range(m + 1):
        add_term(out, ("J", r, u, m + n - j), comb(m, j) * lam_d**j)
    return out


def _gens_up_to(n: int):
    def rule(bound: int):
        return [
            ("J", a, b, m)
            for m in range(bound + 1)
            for a in range(1, n + 1)
            for b in range(1, n + 1)
        ]

    return rule


def build_cend(n: int) -> ConformalAlgebra:
    """Associative conformal algebra Cend_N (rule-generated)."""
    if n < 1 or n > 9:
        raise ValueError("Cend_N supported for 1 <= N <= 9")
    return ConformalAlgebra(
        "associative",
        _cend_entry,
        gen_rule=_gens_up_to(n),
        weight=lambda g: Fraction(g[3] + 1),
        name=f"cend:{n}",
        gen_name=_gen_name,
        gen_by_name=_gen_by_name(n),
    )


def build_gc(n: int) -> ConformalAlgebra:
    """Lie conformal algebra gc_N: commutator bracket of Cend_N."""
    A = lie_from_associative(build_cend(n))
    A.name = f"gc:{n}"
    return A


def cend_module_action(n: int, alpha=0):
    """The standard action on C[d]^N: J_A^m l v = (d + l + alpha)^m (A v).

    Returns an action function (gen, basis_label) -> element dict over basis
    labels ("v1".."vN"), for use with modules.ConfModule.
    """
    alpha = Fraction(alpha)
    base = Poly.var("d") + Poly.var("l") + alpha

    def action(g, v):
        _, r, s, m = g
        c = int(v[1:])
        if s != c:
            return {}
        return {f"v{r}": base**m}

    return action
