"""Exact linear algebra over Q (lists of Fraction rows).

All ranks, kernels and determinants in lambda-forge go through these
routines; there is no floating point anywhere.  Elimination keeps entries as
Fractions (auto-reduced) and picks pivots with the smallest numerator
magnitude to limit coefficient growth.
"""

from __future__ import annotations

from fractions import Fraction


def _pivot_row(rows, start, col):
    best = -1
    best_key = None
    for r in range(start, len(rows)):
        v = rows[r][col]
        if not v:
            continue
        key = (abs(v.numerator), v.denominator)
        if best < 0 or key < best_key:
            best, best_key = r, key
    return best


def echelon(matrix):
    """Row echelon form (copy); returns (rows, pivot_cols)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= len(rows):
            break
        p = _pivot_row(rows, r, c)
        if p < 0:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        for rr in range(r + 1, len(rows)):
            f = rows[rr][c]
            if not f:
                continue
            ratio = f / pv
            row = rows[rr]
            prow = rows[r]
            for cc in range(c, ncols):
                row[cc] -= ratio * prow[cc]
        pivots.append(c)
        r += 1
    return rows, pivots


def rank(matrix) -> int:
    return len(echelon(matrix)[1])


def nullspace(matrix):
    """Basis of the right kernel (solutions of M x = 0), free vars set to 1."""
    if not matrix:
        return []
    ncols = len(matrix[0])
    rows, pivots = echelon(matrix)
    rows = rows[: len(pivots)]
    # back-substitute to reduced form
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        pv = rows[i][c]
        rows[i] = [x / pv for x in rows[i]]
        for j in range(i):
            f = rows[j][c]
            if f:
                rows[j] = [a - f * b for a, b in zip(rows[j], rows[i])]
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][free]
        basis.append(vec)
    return basis


def det(matrix) -> Fraction:
    rows = [[Fraction(x) for x in row] for row in matrix]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    out = Fraction(1)
    for c in range(n):
        p = _pivot_row(rows, c, c)
        if p < 0:
            return Fraction(0)
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            sign = -sign
        pv = rows[c][c]
        out *= pv
        for r in range(c + 1, n):
            f = rows[r][c]
            if not f:
                continue
            ratio = f / pv
            for cc in range(c, n):
                rows[r][cc] -= ratio * rows[c][cc]
    return out * sign


def solve(matrix, rhs):
    """One particular solution of M x = rhs, or None if inconsistent."""
    if not matrix:
        return None if any(rhs) else []
    ncols = len(matrix[0])
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(matrix, rhs)]
    rows, pivots = echelon(aug)
    if ncols in pivots:
        return None
    sol = [Fraction(0)] * ncols
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        acc = rows[i][ncols]
        for cc in range(c + 1, ncols):
            if rows[i][cc]:
                acc -= rows[i][cc] * sol[cc]
        sol[c] = acc / rows[i][c]
    return sol


def rank_of_union(*groups) -> int:
    """Rank of the row span of all vectors in the given groups."""
    rows = [list(v) for g in groups for v in g]
    return rank(rows) if rows else 0


def extend_independent(base, candidates):
    """Greedily pick candidates that grow the row span of base.

    Returns the list of picked candidate indices.
    """
    rows = [list(v) for v in base]
    current = rank(rows) if rows else 0
    picked = []
    for i, cand in enumerate(candidates):
        trial = rows + [list(cand)]
        r = rank(trial)
        if r > current:
            rows = trial
            current = r
            picked.append(i)
    return picked
