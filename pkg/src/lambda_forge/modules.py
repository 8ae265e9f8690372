"""Modules over conformal algebras: lambda-actions and the stock examples.

A ConfModule is a free C[d]-module with a finite basis and an action rule
(algebra generator, basis label) -> element over the basis, extended
sesquilinearly exactly like the algebra product.  The trivial module (C with
d acting as zero) is a flagged special case used by cohomology and Chom.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .builders import build_cur_sl2, build_virasoro
from .conformal import (
    AxiomReport,
    ConformalAlgebra,
    Failure,
    add_term,
    elt_scale,
    elt_sub,
    lambda_product,
    render_elt,
    sesquilinear_apply,
    single,
)
from .poly import Poly

D = Poly.var("d")
L = Poly.var("l")


class ConfModule:
    def __init__(
        self,
        algebra: ConformalAlgebra,
        basis,
        action,
        parity=None,
        weight=None,
        params=(),
        trivial: bool = False,
        name: str = "",
    ):
        self.algebra = algebra
        self.basis = list(basis)
        self._action = action
        self._parity = parity or (lambda b: 0)
        self._weight = weight
        self.params = tuple(params)
        self.trivial = trivial
        self.name = name

    def action(self, gen, b) -> dict:
        out = {}
        for lbl, p in self._action(gen, b).items():
            if lbl not in self.basis:
                raise KeyError(f"action value outside module basis: {lbl!r}")
            add_term(out, lbl, p)
        return out

    def parity(self, b) -> int:
        return self._parity(b)

    def weight(self, b):
        return self._weight(b) if self._weight else None

    def render(self, x: dict) -> str:
        return render_elt(x)


def lambda_action(M: ConfModule, x: dict, v: dict, var="l") -> dict:
    """x_lambda v for an algebra element x and module element v."""
    vp = var if isinstance(var, Poly) else Poly.var(var)

    def entry(g, b):
        e = M.action(g, b)
        if vp == L:
            return e
        return {lbl: p.subst({"l": vp}) for lbl, p in e.items()}

    return sesquilinear_apply(entry, x, v, vp)


def check_module(M: ConfModule, gens=None, bound=None, labels=None) -> AxiomReport:
    """Verify the module compatibility identity on (gen, gen, basis) triples.

    Lie algebra:  a_l (b_mu v) - p(a,b) b_mu (a_l v) = [a_l b]_{l+mu} v.
    Associative:  a_l (b_mu v) = (a_l b)_{l+mu} v.
    """
    A = M.algebra
    gens = list(gens) if gens is not None else A.generators(bound)
    labels = list(labels) if labels is not None else list(M.basis)
    rep = AxiomReport(algebra=M.name or f"module over {A.name}", kind=A.kind)
    for a, b, m in itertools.product(gens, gens, labels):
        inner = lambda_action(M, single(b), single(m), "mu")
        lhs = lambda_action(M, single(a), inner, "l")
        ab = lambda_product(A, single(a), single(b), "l")
        rhs = lambda_action(M, ab, single(m), L + Poly.var("mu"))
        if A.kind == "lie":
            swapped = lambda_action(M, single(b), lambda_action(M, single(a), single(m), "l"), "mu")
            lhs = elt_sub(lhs, elt_scale(swapped, A.sign(a, b)))
        resid = elt_sub(lhs, rhs)
        rep.triples_checked += 1
        if resid:
            rep.failures.append(
                Failure("module", (A.gen_name(a), A.gen_name(b), str(m)), render_elt(resid))
            )
    rep.failures.sort(key=lambda f: (f.law, f.where))
    return rep


# ---------------------------------------------------------------------------
# Stock modules
# ---------------------------------------------------------------------------


def trivial_module(A: ConformalAlgebra) -> ConfModule:
    """The one-dimensional module C with zero action and d = 0."""
    return ConfModule(
        A,
        ["1"],
        lambda g, b: {},
        weight=lambda b: Fraction(0),
        trivial=True,
        name="trivial",
    )


def build_m_delta_alpha(delta=None, alpha=None, algebra=None) -> ConfModule:
    """The rank-1 Virasoro module: L_l m = (d + alpha + Delta l) m.

    None leaves the parameter symbolic (variables Delta / alpha).
    """
    A = algebra or build_virasoro()
    dval = Poly.var("Delta") if delta is None else Poly.const(Fraction(delta))
    aval = Poly.var("alpha") if alpha is None else Poly.const(Fraction(alpha))
    params = tuple(
        p for p, v in (("Delta", delta), ("alpha", alpha)) if v is None
    )

    def action(g, b):
        return {"m": D + aval + dval * L}

    weight = None
    if delta is not None and alpha is not None and Fraction(alpha) == 0:
        weight = lambda b: Fraction(delta)
    return ConfModule(
        A, ["m"], action, weight=weight, params=params,
        name=f"M({dval},{aval})",
    )


def build_m_u(algebra: ConformalAlgebra, matrices: dict, basis) -> ConfModule:
    """M(U) = C[d] tensor U over a current algebra: a_l u = a(u).

    matrices: {generator: {(i_label, j_label): coeff}} giving a(u_j) =
    sum_i coeff * u_i; entries are lambda- and d-free.
    """
    basis = list(basis)

    def action(g, b):
        out = {}
        for (i, j), c in matrices.get(g, {}).items():
            if j == b and c:
                add_term(out, i, Poly.const(Fraction(c)))
        return out

    return ConfModule(algebra, basis, action, weight=lambda b: Fraction(1), name="M(U)")


def sl2_standard_module() -> ConfModule:
    """Standard 2-dim sl2 module: e u2 = u1, f u1 = u2, h u_i = +/- u_i."""
    A = build_cur_sl2()
    mats = {
        "e": {("u1", "u2"): 1},
        "f": {("u2", "u1"): 1},
        "h": {("u1", "u1"): 1, ("u2", "u2"): -1},
    }
    return build_m_u(A, mats, ["u1", "u2"])


def sl2_adjoint_module() -> ConfModule:
    """Adjoint sl2 module on (e, h, f) basis labels ue, uh, uf."""
    A = build_cur_sl2()
    mats = {
        "e": {("uh", "uf"): 1, ("ue", "uh"): -2},
        "h": {("ue", "ue"): 2, ("uf", "uf"): -2},
        "f": {("uh", "ue"): -1, ("uf", "uh"): 2},
    }
    return build_m_u(A, mats, ["ue", "uh", "uf"])


def extension_module(delta, delta_sub, alpha, alpha_sub, cocycle: Poly) -> ConfModule:
    """E = C[d] m' + C[d] m with L_l m = (d+alpha+Delta l) m + f(l,d) m'."""
    A = build_virasoro()
    dq, da = Fraction(delta), Fraction(alpha)
    sq, sa = Fraction(delta_sub), Fraction(alpha_sub)

    def action(g, b):
        if b == "msub":
            return {"msub": D + sa + sq * L}
        out = {"m": D + da + dq * L}
        if cocycle:
            out["msub"] = cocycle
        return out

    return ConfModule(A, ["msub", "m"], action, name="E(ext)")
