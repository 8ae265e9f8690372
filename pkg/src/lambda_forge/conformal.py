"""Conformal algebras as lambda-product tables over free C[d]-modules.

An *element* is a dict {generator: Poly}, the Poly in ``d`` (and declared
parameters); a *lambda element* additionally involves one or more lambda
variables.  The empty dict is zero.  Generators are strings or tuples (the
structured labels of the Grassmann and gc families).

The sesquilinear extension implements the two derivation rules: a coefficient
P(d) on the left contributes P(-lambda), a coefficient Q(d) on the right
contributes Q(lambda+d) multiplying the table value.  Nested products
substitute the first slot's d by minus the outer variable, which is the same
first rule applied with the outer variable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly

D = "d"
LAM = "l"
MU = "mu"
# internal variable for the conjugation detour; never appears in inputs
_CONJ = "cnj"


def _comp_key(x):
    return (0, x, "") if isinstance(x, int) else (1, 0, str(x))


def gen_sort_key(g):
    if isinstance(g, str):
        return (0, (_comp_key(g),))
    return (1, tuple(_comp_key(c) for c in g))


# ---------------------------------------------------------------------------
# Element helpers (plain dicts {gen: Poly})
# ---------------------------------------------------------------------------


def elt(*pairs) -> dict:
    """Build an element from (gen, coeff) pairs."""
    out = {}
    for g, c in pairs:
        add_term(out, g, Poly._lift(c))
    return out


def single(g) -> dict:
    return {g: Poly.const(1)}


def add_term(acc: dict, g, p: Poly):
    s = acc.get(g, Poly.zero()) + p
    if s:
        acc[g] = s
    elif g in acc:
        del acc[g]


def elt_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for g, p in b.items():
        add_term(out, g, p)
    return out


def elt_sub(a: dict, b: dict) -> dict:
    out = dict(a)
    for g, p in b.items():
        add_term(out, g, -p)
    return out


def elt_scale(a: dict, c) -> dict:
    c = Poly._lift(c)
    out = {}
    if c:
        for g, p in a.items():
            q = p * c
            if q:
                out[g] = q
    return out


def elt_subst(a: dict, mapping: dict) -> dict:
    out = {}
    for g, p in a.items():
        add_term(out, g, p.subst(mapping))
    return out


def elt_eq(a: dict, b: dict) -> bool:
    return elt_sub(a, b) == {}


def render_elt(a: dict, gen_name=None) -> str:
    if not a:
        return "0"
    name = gen_name or (lambda g: str(g))
    parts = []
    for g in sorted(a, key=gen_sort_key):
        p = a[g]
        if p == Poly.const(1):
            parts.append(name(g))
        else:
            parts.append(f"({p.render()})*{name(g)}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# The algebra object
# ---------------------------------------------------------------------------


class ConformalAlgebra:
    """A lambda-product table plus parity/weight data.

    kind is "lie" or "associative".  For finite algebras ``gens`` lists the
    generators; rule-generated families (gc_N) instead supply ``gen_rule``,
    a callable bound -> generator list.  ``table(a, b)`` returns the
    lambda-product of two generators as a dict {gen: Poly in (l, d, params)}.

    ``torsion_gens`` marks central generators with d-action zero (used only
    by the central-extension re-check): canonicalisation drops d-multiples
    of their coefficients, realising the C[d]/(d) summand exactly.
    """

    def __init__(
        self,
        kind: str,
        table,
        gens=None,
        gen_rule=None,
        parity=None,
        weight=None,
        super_: bool = False,
        name: str = "",
        gen_name=None,
        gen_by_name=None,
        params=(),
        torsion_gens=frozenset(),
    ):
        if kind not in ("lie", "associative"):
            raise ValueError(f"unknown kind {kind!r}")
        if gens is None and gen_rule is None:
            raise ValueError("either gens or gen_rule is required")
        self.kind = kind
        self.super_ = super_
        self._gens = list(gens) if gens is not None else None
        self._gen_rule = gen_rule
        self._table = table
        self._parity = parity or (lambda g: 0)
        self._weight = weight
        self.name = name
        self._gen_name = gen_name or (lambda g: str(g))
        self._gen_by_name = gen_by_name
        self.params = tuple(params)
        self.torsion_gens = frozenset(torsion_gens)

    @property
    def finite(self) -> bool:
        return self._gens is not None

    def generators(self, bound=None) -> list:
        if self._gens is not None:
            return list(self._gens)
        if bound is None:
            raise ValueError(f"{self.name or 'algebra'} is rule-generated; a bound is required")
        return list(self._gen_rule(bound))

    def parity(self, g) -> int:
        return self._parity(g)

    def weight(self, g):
        return self._weight(g) if self._weight else None

    def gen_name(self, g) -> str:
        return self._gen_name(g)

    def gen_by_name(self, s: str):
        if self._gen_by_name is not None:
            return self._gen_by_name(s)
        for g in self.generators():
            if self._gen_name(g) == s:
                return g
        raise KeyError(f"unknown generator {s!r}")

    def sign(self, a, b) -> int:
        """Koszul sign p(a,b) = (-1)^{p(a)p(b)} for generators."""
        return -1 if self.parity(a) and self.parity(b) else 1

    def entry(self, a, b) -> dict:
        val = self._table(a, b)
        return self.canon(val)

    def canon(self, x: dict) -> dict:
        out = {}
        for g, p in x.items():
            if g in self.torsion_gens:
                p = Poly({m: c for m, c in p.terms.items() if all(v != D for v, _ in m)})
            if p:
                out[g] = p
        return out

    def render(self, x: dict) -> str:
        return render_elt(x, self.gen_name)


# ---------------------------------------------------------------------------
# Sesquilinear extension and derived products
# ---------------------------------------------------------------------------


def _as_varpoly(var) -> Poly:
    return var if isinstance(var, Poly) else Poly.var(var)


def sesquilinear_apply(entry_fn, x: dict, y: dict, var, canon=None) -> dict:
    """Extend a generator table to elements.

    x, y: dicts {gen: Poly}; coefficients may carry passive variables.  The
    d in x's coefficients becomes -var ("first slot"), the d in y's
    coefficients becomes var + d acting on the table value by multiplication.
    var may itself be a polynomial (e.g. l + mu for outer slots).
    """
    vp = _as_varpoly(var)
    out = {}
    for gx, px in x.items():
        pl = px.subst({D: -vp}) if D in px.variables() else px
        if not pl:
            continue
        for gy, py in y.items():
            pr = py.subst({D: Poly.var(D) + vp}) if D in py.variables() else py
            if not pr:
                continue
            factor = pl * pr
            for gz, pz in entry_fn(gx, gy).items():
                add_term(out, gz, pz * factor)
    if canon:
        out = canon(out)
    return out


def lambda_product(A: ConformalAlgebra, x: dict, y: dict, var=LAM) -> dict:
    """x_lambda y in C[lambda] tensor R, with lambda named by var."""
    vp = _as_varpoly(var)

    def entry(a, b):
        e = A.entry(a, b)
        if vp == Poly.var(LAM):
            return e
        return {g: p.subst({LAM: vp}) for g, p in e.items()}

    return sesquilinear_apply(entry, x, y, vp, canon=A.canon)


def nth_product(A: ConformalAlgebra, x: dict, y: dict, n: int) -> dict:
    """n-th product: n! times the lambda^n coefficient of x_lambda y."""
    if n < 0:
        raise ValueError("n-th product needs n >= 0")
    prod = lambda_product(A, x, y, LAM)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    out = {}
    for g, p in prod.items():
        c = p.coeff(LAM, n)
        if c:
            out[g] = c * fact
    return out


def conjugate(A: ConformalAlgebra, x: dict, y: dict, var=LAM) -> dict:
    """y_{-lambda-d} x (the substituted product used by skew checks)."""
    for e in (x, y):
        for p in e.values():
            if _CONJ in p.variables():
                raise ValueError("reserved variable 'cnj' in input")
    vp = _as_varpoly(var)
    t = lambda_product(A, y, x, _CONJ)
    return A.canon(elt_subst(t, {_CONJ: -vp - Poly.var(D)}))


def lie_from_associative(A: ConformalAlgebra) -> ConformalAlgebra:
    """Lie (super)algebra with [a_l b] = a_l b - p(a,b) b_{-l-d} a."""
    if A.kind != "associative":
        raise ValueError("commutator bracket needs an associative table")

    def table(a, b):
        ab = A.entry(a, b)
        ba = conjugate(A, single(a), single(b), LAM)
        return elt_sub(ab, elt_scale(ba, A.sign(a, b)))

    return ConformalAlgebra(
        "lie",
        table,
        gens=A._gens,
        gen_rule=A._gen_rule,
        parity=A._parity,
        weight=A._weight,
        super_=A.super_,
        name=f"lie({A.name})" if A.name else "",
        gen_name=A._gen_name,
        gen_by_name=A._gen_by_name,
        params=A.params,
        torsion_gens=A.torsion_gens,
    )


# ---------------------------------------------------------------------------
# Axiom checker
# ---------------------------------------------------------------------------


@dataclass
class Failure:
    law: str
    where: tuple
    residual: str


@dataclass
class AxiomReport:
    algebra: str
    kind: str
    pairs_checked: int = 0
    triples_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def lines(self):
        out = [
            f"algebra {self.algebra or '<unnamed>'} ({self.kind}): "
            f"{self.pairs_checked} pairs, {self.triples_checked} triples"
        ]
        if self.ok:
            out.append("all axiom checks passed")
        for f in self.failures:
            out.append(f"FAIL {f.law} at {f.where}: residual {f.residual}")
        return out


def check_axioms(A: ConformalAlgebra, gens=None, bound=None) -> AxiomReport:
    """Verify the defining identities on all generator pairs/triples.

    Lie kind: skew-symmetry and the Jacobi identity (with Koszul signs for
    super algebras).  Associative kind: the associativity identity.  Failures
    are reported with the offending tuple and nonzero residual; they are data,
    not errors.
    """
    gens = list(gens) if gens is not None else A.generators(bound)
    rep = AxiomReport(algebra=A.name, kind="lie" if A.kind == "lie" else "associative")
    names = {g: A.gen_name(g) for g in gens}

    if A.kind == "lie":
        for a, b in itertools.product(gens, repeat=2):
            lhs = A.entry(a, b)
            rhs = conjugate(A, single(a), single(b), LAM)
            resid = elt_add(lhs, elt_scale(rhs, A.sign(a, b)))
            resid = A.canon(resid)
            rep.pairs_checked += 1
            if resid:
                rep.failures.append(Failure("skew", (names[a], names[b]), A.render(resid)))
        for a, b, c in itertools.product(gens, repeat=3):
            inner_bc = lambda_product(A, single(b), single(c), MU)
            lhs = lambda_product(A, single(a), inner_bc, LAM)
            ab = lambda_product(A, single(a), single(b), LAM)
            outer = lambda_product(A, ab, single(c), Poly.var(LAM) + Poly.var(MU))
            inner_ac = lambda_product(A, single(a), single(c), LAM)
            right = lambda_product(A, single(b), inner_ac, MU)
            resid = elt_sub(elt_sub(lhs, outer), elt_scale(right, A.sign(a, b)))
            resid = A.canon(resid)
            rep.triples_checked += 1
            if resid:
                rep.failures.append(
                    Failure("jacobi", (names[a], names[b], names[c]), A.render(resid))
                )
    else:
        for a, b, c in itertools.product(gens, repeat=3):
            inner_bc = lambda_product(A, single(b), single(c), MU)
            lhs = lambda_product(A, single(a), inner_bc, LAM)
            ab = lambda_product(A, single(a), single(b), LAM)
            rhs = lambda_product(A, ab, single(c), Poly.var(LAM) + Poly.var(MU))
            resid = A.canon(elt_sub(lhs, rhs))
            rep.triples_checked += 1
            if resid:
                rep.failures.append(
                    Failure("assoc", (names[a], names[b], names[c]), A.render(resid))
                )
    rep.failures.sort(key=lambda f: (f.law, f.where))
    return rep


def check_parity_coherence(A: ConformalAlgebra, gens=None, bound=None) -> list:
    """Table entries must satisfy p(a_l b) = p(a) + p(b) mod 2."""
    gens = list(gens) if gens is not None else A.generators(bound)
    bad = []
    for a, b in itertools.product(gens, repeat=2):
        want = (A.parity(a) + A.parity(b)) % 2
        for g in A.entry(a, b):
            if A.parity(g) != want:
                bad.append((A.gen_name(a), A.gen_name(b), A.gen_name(g)))
    return bad


def check_weight_homogeneity(A: ConformalAlgebra, gens=None, bound=None) -> list:
    """Every table monomial must satisfy k + deg_d + w(gen) = w(a)+w(b)-1."""
    gens = list(gens) if gens is not None else A.generators(bound)
    bad = []
    for a, b in itertools.product(gens, repeat=2):
        wa, wb = A.weight(a), A.weight(b)
        if wa is None or wb is None:
            continue
        target = wa + wb - 1
        for g, p in A.entry(a, b).items():
            wg = A.weight(g)
            if wg is None:
                continue
            for mono in p.terms:
                deg = sum(e for v, e in mono if v in (LAM, D))
                if deg + wg != target:
                    bad.append((A.gen_name(a), A.gen_name(b), A.gen_name(g), mono))
    return bad
