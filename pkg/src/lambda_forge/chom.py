"""Conformal linear maps Chom(U, V) and the module structure on them.

A map phi is stored by its values on U's free basis: phi_nu(u_j) is a dict
{v_label: Poly} in the evaluation-slot variable ``nu`` (plus d and params).
Values on d-multiples follow from conformal linearity, phi_nu(d u) =
(d + nu) phi_nu(u), so data on a free basis is automatically a conformal
linear map; validation is only well-formedness.

The action of the algebra is  (a_l phi)_nu u = a_l(phi_{nu-l} u)
- phi_{nu-l}(a_l u);  the contragredient of a finite free module and the
degree-0 intertwiner search are derived from it.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .conformal import add_term, elt_sub
from .modules import ConfModule, lambda_action, trivial_module
from .poly import Poly

NU = "nu"
D = Poly.var("d")


class ChomMap:
    """Conformal linear map U -> V given on U's basis."""

    def __init__(self, U: ConfModule, V: ConfModule, values: dict):
        self.U = U
        self.V = V
        vals = {}
        for u in U.basis:
            row = {}
            for v_lbl, p in values.get(u, {}).items():
                if v_lbl not in V.basis:
                    raise KeyError(f"Chom value outside target basis: {v_lbl!r}")
                p = Poly._lift(p)
                if V.trivial and "d" in p.variables():
                    raise ValueError("values into the trivial module cannot involve d")
                if p:
                    row[v_lbl] = p
            vals[u] = row
        self.values = vals

    @staticmethod
    def identity(M: ConfModule) -> "ChomMap":
        return ChomMap(M, M, {b: {b: Poly.const(1)} for b in M.basis})

    def is_zero(self) -> bool:
        return all(not row for row in self.values.values())

    def __eq__(self, other):
        return (
            isinstance(other, ChomMap)
            and self.U is other.U
            and self.V is other.V
            and all(
                elt_sub(self.values[u], other.values[u]) == {} for u in self.U.basis
            )
        )

    def sub(self, other: "ChomMap") -> "ChomMap":
        return ChomMap(
            self.U,
            self.V,
            {u: elt_sub(self.values[u], other.values[u]) for u in self.U.basis},
        )

    def apply(self, v_elt: dict, slot=None) -> dict:
        """phi_slot applied to a U-element; slot defaults to the nu variable."""
        slot_p = Poly.var(NU) if slot is None else (slot if isinstance(slot, Poly) else Poly.var(slot))
        out = {}
        for u_lbl, coeff in v_elt.items():
            if "d" in coeff.variables():
                if self.V.trivial:
                    coeff = coeff.subst({"d": slot_p})
                else:
                    coeff = coeff.subst({"d": slot_p + D})
            row = self.values[u_lbl]
            for v_lbl, p in row.items():
                q = p if slot is None else p.subst({NU: slot_p})
                add_term(out, v_lbl, q * coeff)
        return out

    def conformal_linearity_residual(self, u_lbl: str) -> dict:
        """phi_nu(d u) - (d + nu)phi_nu(u); identically zero by construction.

        Kept as an executable statement of the contract (used by tests).
        """
        lhs = self.apply({u_lbl: D})
        shift = Poly.var(NU) if self.V.trivial else D + Poly.var(NU)
        rhs = {v: p * shift for v, p in self.values[u_lbl].items()}
        return elt_sub(lhs, rhs)


def chom_action(a_elt: dict, phi: ChomMap, var="l") -> ChomMap:
    """(a_var phi) as a new ChomMap whose values also involve var."""
    vp = var if isinstance(var, Poly) else Poly.var(var)
    nu = Poly.var(NU)
    out = {}
    for u in phi.U.basis:
        # a_l (phi_{nu-l} u)
        shifted = {v: p.subst({NU: nu - vp}) for v, p in phi.values[u].items()}
        t1 = lambda_action(phi.V, a_elt, shifted, vp) if not phi.V.trivial else {}
        # phi_{nu-l}(a_l u)
        au = lambda_action(phi.U, a_elt, {u: Poly.const(1)}, vp) if not phi.U.trivial else {}
        t2 = phi.apply(au, slot=nu - vp)
        out[u] = elt_sub(t1, t2)
    return ChomMap(phi.U, phi.V, out)


def contragredient(M: ConfModule) -> ConfModule:
    """U* = Chom(U, trivial C) as a finite free module on dual labels.

    A Chom-to-C value P(nu) corresponds to P(-d) on the dual basis, matching
    (d phi)_nu = -nu phi_nu.
    """
    A = M.algebra
    dual = [b + "*" for b in M.basis]
    rows = {}
    triv = trivial_module(A)
    for b in M.basis:
        phi = ChomMap(M, triv, {b: {"1": Poly.const(1)}})
        for g in A.generators():
            acted = chom_action({g: Poly.const(1)}, phi, "l")
            row = rows.setdefault((g, b + "*"), {})
            for u_lbl, val in acted.values.items():
                p = val.get("1")
                if p:
                    add_term(row, u_lbl + "*", p.subst({NU: -D}))
    wfun = None
    if M._weight is not None:
        wfun = lambda b: 1 - M.weight(b[:-1])

    def action(g, b):
        return dict(rows.get((g, b), {}))

    return ConfModule(A, dual, action, weight=wfun, name=f"{M.name}*")


def find_intertwiners_deg0(M1: ConfModule, M2: ConfModule) -> list:
    """Basis of constant-coefficient module maps M1 -> M2.

    Unknowns c[(u, w)] in phi(u) = sum_w c[(u, w)] w; the commutation
    condition phi(a_l u) = a_l phi(u) is linear in c and solved exactly.
    Returns a list of {(u, w): Fraction} dictionaries (possibly empty).
    """
    A = M1.algebra
    unknowns = [(u, w) for u in M1.basis for w in M2.basis]
    uidx = {p: k for k, p in enumerate(unknowns)}
    rows = []

    def emit(per_unknown: dict):
        monos = sorted({m for p in per_unknown.values() for m in p.terms})
        for m in monos:
            row = [Fraction(0)] * len(unknowns)
            for unk, p in per_unknown.items():
                c = p.terms.get(m)
                if c:
                    row[uidx[unk]] = c
            rows.append(row)

    for a in A.generators():
        for u in M1.basis:
            au = lambda_action(M1, {a: Poly.const(1)}, {u: Poly.const(1)}, "l")
            acted = {
                wj: lambda_action(M2, {a: Poly.const(1)}, {wj: Poly.const(1)}, "l")
                for wj in M2.basis
            }
            for wk in M2.basis:
                per = {}
                for ui, S in au.items():
                    per[(ui, wk)] = per.get((ui, wk), Poly.zero()) + S
                for wj in M2.basis:
                    T = acted[wj].get(wk)
                    if T:
                        per[(u, wj)] = per.get((u, wj), Poly.zero()) - T
                per = {k: p for k, p in per.items() if p}
                if per:
                    emit(per)
    if rows:
        basis = linalg.nullspace(rows)
    else:
        # no constraints at all: every coefficient choice intertwines
        basis = []
        for k in range(len(unknowns)):
            vec = [Fraction(0)] * len(unknowns)
            vec[k] = Fraction(1)
            basis.append(vec)
    out = []
    for vec in basis:
        out.append({unknowns[k]: v for k, v in enumerate(vec) if v})
    return out
