"""Cochain complexes and cohomology of Lie conformal algebras.

An n-cochain maps generator n-tuples to polynomials in l1..ln (and d, for
free coefficient modules) over the module basis, skew-symmetric under
simultaneous permutation of generators and lambda slots; values on d-multiples
of generators follow from antilinearity.  Values are stored on non-decreasing
tuples only.

The weight grading  wt = lambda-degree + d-degree + w(basis) + n - sum w(gen)
is preserved by the differential, so each (n, w) component is a
finite-dimensional exact linear-algebra problem.  The reduced complex divides
each component by the image of the d-action (d + l1 + ... + ln).

Scope: even (non-super) Lie conformal algebras, coefficients in the trivial
module or a finite free module with weights.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .conformal import ConformalAlgebra, add_term, gen_sort_key
from .modules import ConfModule, lambda_action
from .poly import Poly

D = "d"


class ComponentTooLarge(Exception):
    pass


def _slot(i: int) -> str:
    return f"l{i}"


def _perm_sign(perm) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


class Cochain:
    """Degree-n cochain stored on sorted generator tuples."""

    def __init__(self, algebra: ConformalAlgebra, module: ConfModule, n: int, values=None):
        self.algebra = algebra
        self.module = module
        self.n = n
        vals = {}
        for T, by_b in (values or {}).items():
            T = tuple(T)
            if len(T) != n:
                raise ValueError(f"tuple {T} has wrong length for degree {n}")
            if list(T) != sorted(T, key=gen_sort_key):
                raise ValueError(f"values must be stored on sorted tuples: {T}")
            row = {}
            for b, p in by_b.items():
                p = Poly._lift(p)
                if module.trivial and D in p.variables():
                    raise ValueError("trivial-module values cannot involve d")
                if p:
                    row[b] = p
            if row:
                vals[T] = row
        self.values = vals

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other):
        if not isinstance(other, Cochain) or self.n != other.n:
            return NotImplemented
        keys = set(self.values) | set(other.values)
        for T in keys:
            a = self.values.get(T, {})
            b = other.values.get(T, {})
            for lbl in set(a) | set(b):
                if a.get(lbl, Poly.zero()) != b.get(lbl, Poly.zero()):
                    return False
        return True

    def scale(self, c) -> "Cochain":
        out = {}
        for T, row in self.values.items():
            out[T] = {b: p * c for b, p in row.items()}
        return Cochain(self.algebra, self.module, self.n, out)

    def add(self, other: "Cochain") -> "Cochain":
        out = {T: dict(row) for T, row in self.values.items()}
        for T, row in other.values.items():
            tgt = out.setdefault(T, {})
            for b, p in row.items():
                s = tgt.get(b, Poly.zero()) + p
                if s:
                    tgt[b] = s
                elif b in tgt:
                    del tgt[b]
        return Cochain(self.algebra, self.module, self.n, out)

    def eval_on(self, gens, lam_polys) -> dict:
        """Value on an arbitrarily-ordered generator tuple with given slot
        polynomials, using skew-symmetry."""
        assert len(gens) == self.n and len(lam_polys) == self.n
        order = sorted(range(self.n), key=lambda k: gen_sort_key(gens[k]))
        T = tuple(gens[k] for k in order)
        stored = self.values.get(T)
        if not stored:
            return {}
        sign = _perm_sign(order)
        mapping = {_slot(k + 1): lam_polys[order[k]] for k in range(self.n)}
        out = {}
        for b, p in stored.items():
            q = p.subst(mapping) if mapping else p
            if sign < 0:
                q = -q
            if q:
                out[b] = q
        return out

    def check_block_antisymmetry(self) -> bool:
        """Swapping slots of equal adjacent generators must negate the value."""
        for T, row in self.values.items():
            for i in range(self.n - 1):
                if T[i] != T[i + 1]:
                    continue
                swap = {_slot(i + 1): Poly.var(_slot(i + 2)), _slot(i + 2): Poly.var(_slot(i + 1))}
                for b, p in row.items():
                    if p.subst(swap) != -p:
                        return False
        return True

    def render(self) -> str:
        if not self.values:
            return "0"
        A = self.algebra
        parts = []
        for T in sorted(self.values, key=lambda t: tuple(gen_sort_key(g) for g in t)):
            names = ",".join(A.gen_name(g) for g in T)
            for b in sorted(self.values[T], key=str):
                parts.append(f"({names}) -> ({self.values[T][b].render()})*{b}")
        return "; ".join(parts)


def differential(gamma: Cochain) -> Cochain:
    """The cochain differential (both sums, exact)."""
    A, M, n = gamma.algebra, gamma.module, gamma.n
    gens = A.generators()
    out = {}
    for T in itertools.combinations_with_replacement(
        sorted(gens, key=gen_sort_key), n + 1
    ):
        slots = [Poly.var(_slot(k)) for k in range(1, n + 2)]
        acc = {}
        if not M.trivial:
            for i in range(1, n + 2):
                rest = T[: i - 1] + T[i:]
                rest_slots = slots[: i - 1] + slots[i:]
                val = gamma.eval_on(rest, rest_slots)
                if not val:
                    continue
                acted = lambda_action(M, {T[i - 1]: Poly.const(1)}, val, slots[i - 1])
                sign = 1 if (i + 1) % 2 == 0 else -1
                for b, p in acted.items():
                    add_term(acc, b, p * sign)
        for i in range(1, n + 2):
            for j in range(i + 1, n + 2):
                bracket = A.entry(T[i - 1], T[j - 1])
                if not bracket:
                    continue
                sign = 1 if (i + j) % 2 == 0 else -1
                first = slots[i - 1] + slots[j - 1]
                rest = tuple(T[k - 1] for k in range(1, n + 2) if k not in (i, j))
                rest_slots = [slots[k - 1] for k in range(1, n + 2) if k not in (i, j)]
                for e_r, c in bracket.items():
                    coeff = c.subst({"l": slots[i - 1], D: -first})
                    if not coeff:
                        continue
                    val = gamma.eval_on((e_r,) + rest, [first] + rest_slots)
                    for b, p in val.items():
                        add_term(acc, b, p * coeff * sign)
        if acc:
            out[T] = acc
    return Cochain(A, M, n + 1, out)


def partial_action(gamma: Cochain) -> Cochain:
    """(d + l1 + ... + ln) gamma; the d-module structure on cochains."""
    shift = Poly.zero()
    for k in range(1, gamma.n + 1):
        shift = shift + Poly.var(_slot(k))
    if not gamma.module.trivial:
        shift = shift + Poly.var(D)
    out = {}
    for T, row in gamma.values.items():
        new = {b: p * shift for b, p in row.items()}
        new = {b: p for b, p in new.items() if p}
        if new:
            out[T] = new
    return Cochain(gamma.algebra, gamma.module, gamma.n, out)


# ---------------------------------------------------------------------------
# Graded components
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BasisCochain:
    tuple_: tuple
    exps: tuple  # lambda exponents per position
    dpow: int
    blabel: str


def _blocks(T):
    out = []
    start = 0
    for i in range(1, len(T) + 1):
        if i == len(T) or T[i] != T[start]:
            out.append((start, i))
            start = i
    return out


def _strict_tuples(size: int, total: int):
    """Strictly decreasing tuples of `size` distinct non-negatives summing to
    total."""
    if size == 0:
        if total == 0:
            yield ()
        return
    if size == 1:
        yield (total,)
        return
    for top in range(total, size - 2, -1):
        for tail in _strict_tuples(size - 1, total - top):
            if tail[0] < top:
                yield (top,) + tail


def _block_exponent_vectors(block_sizes, total):
    """All concatenations of strictly-decreasing per-block tuples summing to
    total."""
    if not block_sizes:
        if total == 0:
            yield ()
        return
    s = block_sizes[0]
    min_head = s * (s - 1) // 2
    for head_total in range(min_head, total + 1):
        for head in _strict_tuples(s, head_total):
            for rest in _block_exponent_vectors(block_sizes[1:], total - head_total):
                yield head + rest


def enumerate_component(
    A: ConformalAlgebra,
    M: ConfModule,
    n: int,
    w,
    shuffle_seed=None,
    max_size: int = 6000,
):
    """Monomial basis descriptors of the (n, w) cochain component."""
    w = Fraction(w)
    gens = sorted(A.generators(), key=gen_sort_key)
    for g in gens:
        if A.weight(g) is None:
            raise ValueError("cohomology needs a weight-graded algebra")
    out = []
    for T in itertools.combinations_with_replacement(gens, n):
        gw = sum((A.weight(g) for g in T), Fraction(0))
        block_sizes = [b - a for a, b in _blocks(T)]
        for b in M.basis:
            bw = M.weight(b)
            if bw is None:
                raise ValueError("cohomology needs a weighted module basis")
            rem = w - n + gw - bw
            if rem < 0 or rem.denominator != 1:
                continue
            rem = int(rem)
            dmax = 0 if M.trivial else rem
            for k in range(dmax + 1):
                for e in _block_exponent_vectors(block_sizes, rem - k):
                    out.append(BasisCochain(T, e, k, b))
                    if len(out) > max_size:
                        raise ComponentTooLarge(
                            f"component (n={n}, w={w}) exceeds {max_size} monomials"
                        )
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(out)
    return out


def cochain_of(A, M, desc: BasisCochain) -> Cochain:
    """Materialise a basis descriptor: antisymmetrised monomial cochain."""
    n = len(desc.tuple_)
    blocks = _blocks(desc.tuple_)
    perms_per_block = [
        list(itertools.permutations(range(a, b))) for a, b in blocks
    ]
    value = Poly.zero()
    for combo in itertools.product(*perms_per_block):
        perm = []
        for piece in combo:
            perm.extend(piece)
        sign = _perm_sign(perm)
        mono = Poly.const(sign)
        for pos, e in zip(perm, desc.exps):
            if e:
                mono = mono * Poly.var(_slot(pos + 1), e)
        value = value + mono
    if desc.dpow:
        value = value * Poly.var(D, desc.dpow)
    return Cochain(A, M, n, {desc.tuple_: {desc.blabel: value}})


def coordinates(gamma: Cochain, basis_index: dict) -> list:
    """Coordinates of a cochain in an enumerated component basis.

    Reads off canonical monomials (strictly decreasing within equal-generator
    blocks); raises KeyError if the cochain leaves the component.
    """
    vec = [Fraction(0)] * len(basis_index)
    for T, row in gamma.values.items():
        blocks = _blocks(T)
        for b, p in row.items():
            for mono, c in p.terms.items():
                exps = [0] * len(T)
                dpow = 0
                for v, e in mono:
                    if v == D:
                        dpow = e
                    else:
                        assert v.startswith("l")
                        exps[int(v[1:]) - 1] = e
                canonical = all(
                    all(exps[i] > exps[i + 1] for i in range(a, bnd - 1))
                    for a, bnd in blocks
                )
                if not canonical:
                    continue
                key = BasisCochain(T, tuple(exps), dpow, b)
                vec[basis_index[key]] += c
    return vec


def component_matrix(A, M, descs_in, descs_out, op) -> list:
    """Columns: op applied to each input descriptor, in output coordinates."""
    out_index = {d: i for i, d in enumerate(descs_out)}
    cols = []
    for dsc in descs_in:
        img = op(cochain_of(A, M, dsc))
        cols.append(coordinates(img, out_index))
    return cols


# ---------------------------------------------------------------------------
# Dimension tables
# ---------------------------------------------------------------------------


@dataclass
class CohomRow:
    n: int
    weight: Fraction
    dim_c: int
    rank_in: int
    rank_out: int
    dim_h: int


@dataclass
class CohomReport:
    algebra: str
    module: str
    complex: str
    n_max: int
    weight_max: Fraction
    rows: list = field(default_factory=list)

    def dim_total(self, n: int) -> int:
        return sum(r.dim_h for r in self.rows if r.n == n)

    def lines(self):
        out = [
            f"cohomology of {self.algebra} with coefficients in {self.module} "
            f"({self.complex} complex, n <= {self.n_max}, weight <= {self.weight_max})",
            f"{'n':>3} {'weight':>7} {'dim C':>6} {'rank d_in':>10} {'rank d_out':>11} {'dim H':>6}",
        ]
        for r in self.rows:
            out.append(
                f"{r.n:>3} {str(r.weight):>7} {r.dim_c:>6} {r.rank_in:>10} "
                f"{r.rank_out:>11} {r.dim_h:>6}"
            )
        for n in range(self.n_max + 1):
            out.append(f"total dim H^{n} = {self.dim_total(n)}")
        return out


def _weight_range(A, M, n, weight_max):
    """All weights <= weight_max at which the (n, w) component is nonzero."""
    gens = sorted(A.generators(), key=gen_sort_key)
    weights = set()
    for T in itertools.combinations_with_replacement(gens, n):
        gw = sum((A.weight(g) for g in T), Fraction(0))
        minlam = sum(
            (b - a) * (b - a - 1) // 2 for a, b in _blocks(T)
        )
        for b in M.basis:
            bw = M.weight(b)
            w0 = minlam + bw + n - gw
            w = w0
            while w <= Fraction(weight_max):
                weights.add(w)
                w += 1
    return sorted(weights)


def cohomology_dims(
    A: ConformalAlgebra,
    M: ConfModule,
    n_max: int,
    weight_max,
    complex: str = "basic",
    shuffle_seed=None,
    max_size: int = 6000,
) -> CohomReport:
    """Exact dimensions of H^n per weight, for n <= n_max, weight <= weight_max.

    Per component the matrix of the differential is assembled exactly over Q
    and ranks computed by exact elimination; the reduced complex first divides
    by the image of the d-action.
    """
    if complex not in ("basic", "reduced"):
        raise ValueError("complex must be 'basic' or 'reduced'")
    rep = CohomReport(
        algebra=A.name or "<algebra>",
        module=M.name or "<module>",
        complex=complex,
        n_max=n_max,
        weight_max=Fraction(weight_max),
    )
    descs = {}

    def get_descs(n, w):
        key = (n, w)
        if key not in descs:
            descs[key] = (
                enumerate_component(A, M, n, w, shuffle_seed=shuffle_seed, max_size=max_size)
                if n >= 0
                else []
            )
        return descs[key]

    def dmatrix_cols(n, w):
        ins = get_descs(n, w)
        outs = get_descs(n + 1, w)
        if not ins:
            return []
        return component_matrix(A, M, ins, outs, differential)

    def partial_cols(n, w):
        ins = get_descs(n, w - 1)
        outs = get_descs(n, w)
        if not ins or not outs:
            return []
        return component_matrix(A, M, ins, outs, partial_action)

    for n in range(n_max + 1):
        for w in _weight_range(A, M, n, weight_max):
            dim_c = len(get_descs(n, w))
            if dim_c == 0:
                continue
            d_out = dmatrix_cols(n, w)
            d_in = dmatrix_cols(n - 1, w) if n >= 1 else []
            if complex == "basic":
                rank_out = linalg.rank(d_out) if d_out else 0
                rank_in = linalg.rank(d_in) if d_in else 0
                dim_h = dim_c - rank_out - rank_in
                rep.rows.append(CohomRow(n, Fraction(w), dim_c, rank_in, rank_out, dim_h))
            else:
                p_here = partial_cols(n, w)
                p_out = partial_cols(n + 1, w)
                rk_p_here = linalg.rank(p_here) if p_here else 0
                rk_p_out = linalg.rank(p_out) if p_out else 0
                dim_cbar = dim_c - rk_p_here
                rank_out = (linalg.rank(d_out + p_out) if (d_out or p_out) else 0) - rk_p_out
                rank_in = (linalg.rank(d_in + p_here) if (d_in or p_here) else 0) - rk_p_here
                dim_h = dim_cbar - rank_out - rank_in
                rep.rows.append(CohomRow(n, Fraction(w), dim_cbar, rank_in, rank_out, dim_h))
    return rep


def cocycle_representatives(
    A: ConformalAlgebra,
    M: ConfModule,
    n: int,
    w,
    complex: str = "basic",
    max_size: int = 6000,
):
    """Explicit basis of H^(n, w) as cochains (coset representatives)."""
    descs_n = enumerate_component(A, M, n, w, max_size=max_size)
    if not descs_n:
        return []
    descs_up = enumerate_component(A, M, n + 1, w, max_size=max_size)
    d_out_cols = component_matrix(A, M, descs_n, descs_up, differential)
    descs_dn = enumerate_component(A, M, n - 1, w, max_size=max_size) if n >= 1 else []
    d_in_cols = (
        component_matrix(A, M, descs_dn, descs_n, differential) if descs_dn else []
    )
    if complex == "basic":
        matrix = [list(row) for row in zip(*d_out_cols)] if descs_up else []
        kernel = linalg.nullspace(matrix) if matrix else [
            [Fraction(i == j) for j in range(len(descs_n))] for i in range(len(descs_n))
        ]
        base = d_in_cols
    else:
        descs_n_low = enumerate_component(A, M, n, Fraction(w) - 1, max_size=max_size)
        p_here = (
            component_matrix(A, M, descs_n_low, descs_n, partial_action)
            if descs_n_low
            else []
        )
        descs_up_low = enumerate_component(A, M, n + 1, Fraction(w) - 1, max_size=max_size)
        p_up = (
            component_matrix(A, M, descs_up_low, descs_up, partial_action)
            if descs_up_low
            else []
        )
        # kernel of the induced map: d x must land in the image of partial
        ncols = len(descs_n)
        aug_cols = d_out_cols + p_up
        matrix = [list(row) for row in zip(*aug_cols)] if descs_up else []
        if matrix:
            kernel_aug = linalg.nullspace(matrix)
            kernel = [v[:ncols] for v in kernel_aug]
            kernel = [v for v in kernel if any(v)]
            seen = []
            dedup = []
            for v in kernel:
                if linalg.rank(seen + [v]) > len(dedup):
                    seen.append(v)
                    dedup.append(v)
            kernel = seen
        else:
            kernel = [
                [Fraction(i == j) for j in range(ncols)] for i in range(ncols)
            ]
        base = d_in_cols + p_here
    picked = linalg.extend_independent(base, kernel)
    reps = []
    for k in picked:
        gamma = None
        for c, dsc in zip(kernel[k], descs_n):
            if not c:
                continue
            piece = cochain_of(A, M, dsc).scale(c)
            gamma = piece if gamma is None else gamma.add(piece)
        reps.append(gamma)
    return reps


def install_central_extension(A: ConformalAlgebra, gamma: Cochain) -> ConformalAlgebra:
    """Adjoin a central generator C with the 2-cocycle as the extension term.

    The cocycle value (a 2-slot polynomial over the trivial module) turns into
    the bracket entry coefficient via l1 -> l, l2 -> -l (the d-action on the
    central line is zero, realised by marking C torsion).
    """
    if gamma.n != 2 or not gamma.module.trivial:
        raise ValueError("central extension needs a 2-cocycle over the trivial module")
    gens = A.generators() + ["C"]
    lam = Poly.var("l")

    def table(a, b):
        if a == "C" or b == "C":
            return {}
        out = dict(A.entry(a, b))
        phi = gamma.eval_on((a, b), [lam, -lam]).get("1")
        if phi:
            add_term(out, "C", phi)
        return out

    def weight(g):
        return Fraction(0) if g == "C" else A.weight(g)

    def parity(g):
        return 0 if g == "C" else A.parity(g)

    return ConformalAlgebra(
        "lie",
        table,
        gens=gens,
        parity=parity,
        weight=weight,
        name=f"{A.name}+center",
        torsion_gens=frozenset({"C"}),
    )
