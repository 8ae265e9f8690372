"""Extensions 0 -> M(D', a') -> E -> M(D, a) -> 0 of Virasoro modules.

E = C[d]m' + C[d]m with L_l m' = (d + a' + D'l)m' and
L_l m = (d + a + Dl)m + f(l, d)m'.  The compatibility identity on (L, L, m)
is linear in the unknown cocycle f, so nontrivial extensions are the kernel
of an exact linear system modulo the coboundaries induced by basis changes
m -> m + g(d)m'.

extension_condition sweeps a symbolic weight D (with D' = D - s, a = a' = 0)
and returns the squarefree polynomial condition on D for a nontrivial
extension to exist, computed by exact interpolation of pivot-minor
determinants plus exact verification of the rational roots.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .conformal import elt_scale, elt_sub, lambda_product, single
from .modules import ConfModule, build_virasoro, lambda_action
from .poly import (
    Poly,
    from_univ_coeffs,
    interpolate,
    rational_roots,
    squarefree_part,
    univ_coeffs,
    univ_gcd,
    _univ_divmod,
)

D = Poly.var("d")
L = Poly.var("l")
MU = Poly.var("mu")


def _coerce(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(Fraction(x))


def extension_module(delta, delta_sub, alpha, alpha_sub, cocycle: Poly) -> ConfModule:
    """The would-be extension E for a candidate cocycle f(l, d)."""
    A = build_virasoro()
    dq, da = _coerce(delta), _coerce(alpha)
    sq, sa = _coerce(delta_sub), _coerce(alpha_sub)

    def action(g, b):
        if b == "msub":
            return {"msub": D + sa + sq * L}
        out = {"m": D + da + dq * L}
        if cocycle:
            out["msub"] = cocycle
        return out

    params = sorted(
        set().union(*(p.variables() for p in (dq, da, sq, sa))) - {"d", "l"}
    )
    return ConfModule(A, ["msub", "m"], action, params=params, name="E(ext)")


def cocycle_residual(delta, delta_sub, alpha, alpha_sub, cocycle: Poly) -> Poly:
    """msub-coefficient of the Lie compatibility residual on (L, L, m).

    Linear in the cocycle; identically zero iff E is a module.
    """
    M = extension_module(delta, delta_sub, alpha, alpha_sub, cocycle)
    A = M.algebra
    a = single("L")
    inner = lambda_action(M, a, single("m"), "mu")
    lhs = lambda_action(M, a, inner, "l")
    swapped = lambda_action(M, a, lambda_action(M, a, single("m"), "l"), "mu")
    ab = lambda_product(A, a, a, "l")
    rhs = lambda_action(M, ab, single("m"), L + MU)
    resid = elt_sub(elt_sub(lhs, swapped), rhs)
    assert "m" not in resid, "residual must be supported on msub"
    return resid.get("msub", Poly.zero())


def coboundary(delta, delta_sub, alpha, alpha_sub, g: Poly) -> Poly:
    """Cocycle change induced by the basis change m -> m + g(d) msub."""
    dq, da = _coerce(delta), _coerce(alpha)
    sq, sa = _coerce(delta_sub), _coerce(alpha_sub)
    return g.subst({"d": D + L}) * (D + sa + sq * L) - (D + da + dq * L) * g


def _f_monomials(bound: int, total_degree=None):
    out = []
    for i in range(bound + 1):
        for j in range(bound + 1):
            if total_degree is not None and i + j != total_degree:
                continue
            out.append(Poly.var("d", i) * Poly.var("l", j))
    return out


def _vectorize(polys):
    monos = sorted({m for p in polys for m in p.terms})
    midx = {m: i for i, m in enumerate(monos)}
    vecs = []
    for p in polys:
        v = [Fraction(0)] * len(monos)
        for m, c in p.terms.items():
            v[midx[m]] = c
        vecs.append(v)
    return vecs


def default_bound(delta, delta_sub) -> int:
    s = Fraction(delta) - Fraction(delta_sub)
    return max(int(s), 0) + 3 if s.denominator == 1 else 3


def extension_dim(delta, delta_sub, alpha, alpha_sub, bound=None):
    """(dimension of nontrivial extensions, representative cocycles).

    Cocycles are solved within the degree box deg_d, deg_l <= bound
    (default shift+3) and quotiented by the coboundaries of g(d) with
    deg g < bound.  Fast paths: alpha != alpha' or a non-integer weight
    shift give dimension zero.
    """
    if Fraction(alpha) != Fraction(alpha_sub):
        return 0, []
    shift = Fraction(delta) - Fraction(delta_sub)
    if shift.denominator != 1:
        return 0, []
    if bound is None:
        bound = default_bound(delta, delta_sub)
    monos = _f_monomials(bound)
    resids = [
        cocycle_residual(delta, delta_sub, alpha, alpha_sub, f) for f in monos
    ]
    vecs = _vectorize(resids)
    matrix = [list(col) for col in zip(*vecs)] if vecs and vecs[0] else []
    kernel = linalg.nullspace(matrix) if matrix else [
        [Fraction(i == j) for j in range(len(monos))] for i in range(len(monos))
    ]
    midx = {}
    for k, f in enumerate(monos):
        (mono,) = f.terms
        midx[mono] = k
    cobs = _coboundaries_in_box(delta, delta_sub, alpha, alpha_sub, bound, midx)
    rank_b = linalg.rank(cobs) if cobs else 0
    dim = len(kernel) - rank_b
    reps = []
    picked = linalg.extend_independent(cobs, kernel)
    for k in picked:
        reps.append(_vec_to_poly(kernel[k], monos))
    return dim, reps


def _coboundaries_in_box(delta, delta_sub, alpha, alpha_sub, bound, midx, extra=3):
    """Basis of (span of all coboundaries) intersected with the degree box.

    delta g can stick out of the box for deg g near the bound while a
    combination of such still lands inside (d^{i+1} leading terms cancel, and
    for Delta' = 0 whole high-degree coboundaries fit), so the intersection is
    computed exactly: combinations whose outside-the-box coordinates vanish.
    """
    cobs = []
    for i in range(bound + extra + 1):
        g = Poly.var("d", i) if i else Poly.const(1)
        cobs.append(coboundary(delta, delta_sub, alpha, alpha_sub, g))
    outside = sorted(
        {m for cb in cobs for m in cb.terms if m not in midx}
    )
    oidx = {m: r for r, m in enumerate(outside)}
    if outside:
        matrix = [[Fraction(0)] * len(cobs) for _ in outside]
        for ci, cb in enumerate(cobs):
            for m, c in cb.terms.items():
                if m in oidx:
                    matrix[oidx[m]][ci] = c
        combos = linalg.nullspace(matrix)
    else:
        combos = [
            [Fraction(i == j) for j in range(len(cobs))] for i in range(len(cobs))
        ]
    vecs = []
    for x in combos:
        vec = [Fraction(0)] * len(midx)
        for ci, xi in enumerate(x):
            if not xi:
                continue
            for m, c in cobs[ci].terms.items():
                vec[midx[m]] += xi * c
        if any(vec):
            vecs.append(vec)
    return vecs


def _mono_to_poly(mono):
    return Poly({mono: Fraction(1)})


def _vec_to_poly(vec, monos) -> Poly:
    out = Poly.zero()
    for c, mono in zip(vec, monos):
        if c:
            out = out + mono * c
    return out


# ---------------------------------------------------------------------------
# Symbolic sweep over the quotient weight (alpha = alpha' = 0)
# ---------------------------------------------------------------------------


_SAMPLES = [Fraction(89), Fraction(97)]


def _graded_system(s: int, t: int, bound: int):
    """Columns (degree-t f-monomials) of the residual map, entries in Q[Delta]."""
    delta = Poly.var("Delta")
    delta_sub = delta - s
    monos = _f_monomials(bound, total_degree=t)
    cols = [cocycle_residual(delta, delta_sub, 0, 0, f) for f in monos]
    cob = None
    if 1 <= t <= bound:
        g = Poly.var("d", t - 1) if t > 1 else Poly.const(1)
        cob = coboundary(delta, delta_sub, 0, 0, g)
    return monos, cols, cob


def _entries_matrix(cols):
    """Rows over the joint (l, mu, d) monomial support; entries Poly in Delta."""
    monos = sorted({m_out for p in cols for m_out in _delta_split(p)})
    rows = []
    for m_out in monos:
        rows.append([_delta_split(p).get(m_out, Poly.zero()) for p in cols])
    return rows


def _delta_split(p: Poly) -> dict:
    """Regroup a Poly as {(l,mu,d)-monomial: Poly in Delta}."""
    out = {}
    for mono, c in p.terms.items():
        dd = tuple((v, e) for v, e in mono if v == "Delta")
        rest = tuple((v, e) for v, e in mono if v != "Delta")
        out.setdefault(rest, Poly.zero())
        out[rest] = out[rest] + Poly({dd: c})
    return out


def _eval_matrix(rows, x: Fraction):
    return [[p.subst({"Delta": x}).constant() for p in row] for row in rows]


def _interp_minor(rows, rsel, csel, npts: int) -> list:
    """Determinant of the selected submatrix, interpolated in Delta."""
    pts = []
    for k in range(npts):
        x = Fraction(211 + 13 * k)
        sub = [[rows[r][c].subst({"Delta": x}).constant() for c in csel] for r in rsel]
        pts.append((x, linalg.det(sub)))
    p = interpolate(pts, "Delta")
    return univ_coeffs(p, "Delta") if p else []


def _pivot_minor_poly(rows, sample: Fraction, seed: int) -> list:
    """A generically-nonsingular maximal minor (coefficient list in Delta)."""
    num = _eval_matrix(rows, sample)
    order = list(range(len(num)))
    random.Random(seed).shuffle(order)
    shuffled = [num[r] for r in order]
    ech_rows, pivots = linalg.echelon(shuffled)
    r = len(pivots)
    if r == 0:
        return [Fraction(1)]
    # re-identify pivot rows of the original matrix by greedy rank growth
    rsel = []
    cur = []
    for rr in order:
        if len(rsel) == r:
            break
        trial = cur + [[num[rr][c] for c in pivots]]
        if linalg.rank(trial) > len(cur):
            cur = trial
            rsel.append(rr)
    coeffs = _interp_minor(rows, rsel, pivots, r + 3)
    return coeffs or [Fraction(0)]


def extension_condition(s: int, bound=None) -> Poly:
    """Squarefree polynomial in Delta vanishing where (with alpha = alpha' = 0
    and D' = D - s) a nontrivial extension exists; identically zero when every
    weight admits one.

    Rational roots of the interpolated minor products are verified against the
    exact rank-jump test and spurious ones removed; irrational factors are
    kept (the s = 6 factor 2*Delta^2 - 14*Delta + 15 has roots (7 +/- sqrt 19)/2).
    """
    if s < 0:
        raise ValueError("shift must be nonnegative")
    if bound is None:
        bound = s + 3
    product = [Fraction(1)]
    for t in range(0, bound + 1):
        monos, cols, cob = _graded_system(s, t, bound)
        if not monos:
            continue
        rows = _entries_matrix(cols)
        ncols = len(monos)
        ranks = []
        for x in _SAMPLES:
            m_num = _eval_matrix(rows, x)
            rank_m = linalg.rank(m_num) if rows else 0
            rank_b = 0
            if cob is not None:
                cvec = [p.subst({"Delta": x}) for p in _delta_split(cob).values()]
                rank_b = 1 if any(v.constant() for v in cvec) else 0
            ranks.append((rank_m, rank_b))
        if ranks[0] != ranks[1]:
            raise RuntimeError("generic samples disagree; enlarge sample set")
        rank_m, rank_b = ranks[0]
        if ncols - rank_m - rank_b >= 1:
            return Poly.zero()  # nontrivial for every weight
        # factor from the cocycle matrix rank dropping
        if rows and rank_m > 0:
            d1 = _pivot_minor_poly(rows, _SAMPLES[0], seed=1)
            d2 = _pivot_minor_poly(rows, _SAMPLES[1], seed=2)
            g = univ_gcd(d1, d2)
            if len(g) > 1:
                product = _univ_mul(product, g)
        # factor from the coboundary vector degenerating
        if cob is not None and rank_b == 1:
            entries = [univ_coeffs(p, "Delta") for p in _delta_split(cob).values()]
            g = entries[0]
            for e in entries[1:]:
                g = univ_gcd(g, e)
            if len(g) > 1:
                product = _univ_mul(product, g)
    product = squarefree_part(product)
    if len(product) <= 1:
        return Poly.const(1) if product else Poly.zero()
    # exact verification of rational roots; drop spurious linear factors
    verified = []
    residual = product
    for r in rational_roots(product):
        while True:
            q, rem = _univ_divmod(residual, [-r, Fraction(1)])
            if any(rem):
                break
            residual = q
        dim, _ = extension_dim(r, r - s, 0, 0, bound=bound)
        if dim > 0:
            verified.append(r)
    final = residual
    for r in verified:
        final = _univ_mul(final, [-r, Fraction(1)])
    final = squarefree_part(final)
    return from_univ_coeffs(final, "Delta")


def _univ_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out
