"""Builders for the basic conformal algebras: Virasoro, currents, semidirect.

Current algebras are built from structure constants c^k_{ij} over a named
basis; the table entries are lambda-free.  The semidirect product adjoins the
Virasoro generator acting by L_lambda a = (d + lambda) a, with the reverse
entry completed by skew-symmetry.
"""

from __future__ import annotations

from fractions import Fraction

from .conformal import ConformalAlgebra, add_term
from .poly import Poly

D = Poly.var("d")
L = Poly.var("l")


def build_virasoro() -> ConformalAlgebra:
    """C[d]L with [L_l L] = (d + 2l) L; weight(L) = 2."""

    def table(a, b):
        return {"L": D + 2 * L}

    return ConformalAlgebra(
        "lie",
        table,
        gens=["L"],
        weight=lambda g: Fraction(2),
        name="virasoro",
    )


def _check_constants(basis, constants, kind, parity):
    idx = {g: i for i, g in enumerate(basis)}
    for (i, j), row in constants.items():
        if i not in idx or j not in idx:
            raise ValueError(f"structure constants mention unknown basis element {(i, j)}")
        for k in row:
            if k not in idx:
                raise ValueError(f"structure constants target unknown basis element {k!r}")
    if kind == "lie" and not any(parity(g) for g in basis):
        for i in basis:
            for j in basis:
                rij = constants.get((i, j), {})
                rji = constants.get((j, i), {})
                for k in set(rij) | set(rji):
                    if Fraction(rij.get(k, 0)) != -Fraction(rji.get(k, 0)):
                        raise ValueError(f"constants not antisymmetric at ({i},{j})->{k}")


def build_current(basis, constants, kind="lie", parity=None, super_=False, name="cur") -> ConformalAlgebra:
    """Current conformal algebra of the algebra with the given constants.

    constants: {(a, b): {c: coeff}} meaning a*b = sum coeff * c.  Table
    entries are the products themselves (no lambda, no d); weight 1 each.
    """
    parity = parity or (lambda g: 0)
    _check_constants(basis, constants, kind, parity)

    def table(a, b):
        out = {}
        for k, c in constants.get((a, b), {}).items():
            add_term(out, k, Poly.const(c))
        return out

    return ConformalAlgebra(
        kind,
        table,
        gens=list(basis),
        parity=parity,
        weight=lambda g: Fraction(1),
        super_=super_,
        name=name,
    )


def build_semidirect(basis, constants, name="semidirect") -> ConformalAlgebra:
    """Virasoro acting on a current Lie algebra: L_l a = (d + l) a."""
    _check_constants(basis, constants, "lie", lambda g: 0)
    gens = ["L"] + [g for g in basis]
    if "L" in basis:
        raise ValueError("basis name 'L' collides with the Virasoro generator")

    def table(a, b):
        if a == "L" and b == "L":
            return {"L": D + 2 * L}
        if a == "L":
            return {b: D + L}
        if b == "L":
            # skew completion of (d + l) a
            return {a: L}
        out = {}
        for k, c in constants.get((a, b), {}).items():
            add_term(out, k, Poly.const(c))
        return out

    def weight(g):
        return Fraction(2) if g == "L" else Fraction(1)

    return ConformalAlgebra("lie", table, gens=gens, weight=weight, name=name)


# -- stock structure constants ------------------------------------------------


def sl2_constants():
    """Basis (e, h, f): [e,f]=h, [h,e]=2e, [h,f]=-2f."""
    basis = ["e", "h", "f"]
    c = {
        ("e", "f"): {"h": Fraction(1)},
        ("f", "e"): {"h": Fraction(-1)},
        ("h", "e"): {"e": Fraction(2)},
        ("e", "h"): {"e": Fraction(-2)},
        ("h", "f"): {"f": Fraction(-2)},
        ("f", "h"): {"f": Fraction(2)},
    }
    return basis, c


def mat_constants(n):
    """Matrix units of Mat_n as an associative algebra: Eab*Ecd = delta_bc Ead."""
    basis = [f"E{a}{b}" for a in range(1, n + 1) for b in range(1, n + 1)]
    c = {}
    for a in range(1, n + 1):
        for b in range(1, n + 1):
            for cc in range(1, n + 1):
                for dd in range(1, n + 1):
                    if b == cc:
                        c[(f"E{a}{b}", f"E{cc}{dd}")] = {f"E{a}{dd}": Fraction(1)}
    return basis, c


def abelian_constants(names):
    return list(names), {}


def build_cur_sl2() -> ConformalAlgebra:
    basis, c = sl2_constants()
    return build_current(basis, c, kind="lie", name="cur:sl2")


def build_cur_mat2() -> ConformalAlgebra:
    basis, c = mat_constants(2)
    return build_current(basis, c, kind="associative", name="cur:mat2")


def build_semidirect_sl2() -> ConformalAlgebra:
    basis, c = sl2_constants()
    return build_semidirect(basis, c, name="semidirect:sl2")
