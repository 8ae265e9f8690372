"""Truncated formal-distribution calculus on finite Laurent windows.

A TruncatedDist stores modes a_{e1..ek} (k = 1, 2 or 3 variables) on the box
|e_i| <= K.  Values live in any exact coefficient domain with +, unary -,
scalar *, == and truth-testing: Fraction, ModeElt, or Poly.

Truncation is the only finite model of z-expansions, so every operation
declares which boundary modes it invalidates: validity is the box intersected
with affine band constraints lo <= sum c_i e_i <= hi, and every equality or
zero assertion quantifies only over the valid ("interior") index set.  An
empty valid set raises WindowExhausted rather than claiming anything.

Variable order by position: a 2-variable distribution is a(z, w), a
3-variable one a(z, w, x); mode convention a_n = Res_z z^n a(z).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .modes import ModeElt, comb_general, mode_product
from .poly import Poly


class WindowExhausted(Exception):
    pass


class Inconclusive(Exception):
    pass


def _is_zero(v) -> bool:
    return not v


@dataclass(frozen=True)
class Band:
    coeffs: tuple  # one int per variable
    lo: int
    hi: int

    def ok(self, idx) -> bool:
        s = sum(c * e for c, e in zip(self.coeffs, idx))
        return self.lo <= s <= self.hi


class TruncatedDist:
    def __init__(self, nvars: int, K: int, data=None, bands=()):
        if nvars not in (1, 2, 3):
            raise ValueError("1, 2 or 3 variables supported")
        self.nvars = nvars
        self.K = K
        merged = {}
        for b in bands:
            lo, hi = merged.get(b.coeffs, (-(10 ** 9), 10 ** 9))
            merged[b.coeffs] = (max(lo, b.lo), min(hi, b.hi))
        self.bands = tuple(Band(c, lo, hi) for c, (lo, hi) in sorted(merged.items()))
        d = {}
        for idx, v in (data or {}).items():
            idx = tuple(idx)
            if len(idx) != nvars:
                raise ValueError(f"index {idx} has wrong arity")
            if max(abs(e) for e in idx) <= K and not _is_zero(v):
                d[idx] = v
        self.data = d

    # -- validity ------------------------------------------------------

    def valid(self, idx) -> bool:
        return all(abs(e) <= self.K for e in idx) and all(b.ok(idx) for b in self.bands)

    def interior(self):
        rng = range(-self.K, self.K + 1)
        for idx in itertools.product(rng, repeat=self.nvars):
            if self.valid(idx):
                yield idx

    def has_interior(self) -> bool:
        return next(iter(self.interior()), None) is not None

    def at(self, idx):
        return self.data.get(tuple(idx), 0)

    # -- linear structure ------------------------------------------------

    def add(self, other: "TruncatedDist") -> "TruncatedDist":
        if (self.nvars, self.K) != (other.nvars, other.K):
            raise ValueError("mixed windows")
        data = dict(self.data)
        for idx, v in other.data.items():
            s = data.get(idx, 0) + v
            if _is_zero(s):
                data.pop(idx, None)
            else:
                data[idx] = s
        return TruncatedDist(self.nvars, self.K, data, self.bands + other.bands)

    def neg(self) -> "TruncatedDist":
        return TruncatedDist(
            self.nvars, self.K, {i: -v for i, v in self.data.items()}, self.bands
        )

    def sub(self, other: "TruncatedDist") -> "TruncatedDist":
        return self.add(other.neg())

    def scale(self, c) -> "TruncatedDist":
        return TruncatedDist(
            self.nvars, self.K, {i: v * c for i, v in self.data.items()}, self.bands
        )

    # -- calculus ---------------------------------------------------------

    def shift(self, var: int, s: int) -> "TruncatedDist":
        """Multiply by z_var^s: new entry at e reads the old one at e + s
        (z^s z^{-m-1} = z^{-(m-s)-1})."""
        data = {}
        for idx, v in self.data.items():
            new = list(idx)
            new[var] -= s
            if abs(new[var]) <= self.K:
                data[tuple(new)] = v
        bands = [
            Band(b.coeffs, b.lo - b.coeffs[var] * s, b.hi - b.coeffs[var] * s)
            for b in self.bands
        ]
        unit = tuple(1 if i == var else 0 for i in range(self.nvars))
        bands.append(Band(unit, -self.K - s, self.K - s))
        return TruncatedDist(self.nvars, self.K, data, bands)

    def mul_poly(self, terms: dict) -> "TruncatedDist":
        """Multiply by a Laurent polynomial {exponent tuple: coefficient}."""
        out = None
        for expo, c in terms.items():
            piece = self
            for var, s in enumerate(expo):
                if s:
                    piece = piece.shift(var, s)
            if not isinstance(c, (Poly, ModeElt)):
                c = Fraction(c)
            piece = piece.scale(c)
            out = piece if out is None else out.add(piece)
        if out is None:
            raise ValueError("empty polynomial")
        return out

    def mul_diff(self, va: int, vb: int) -> "TruncatedDist":
        """Multiply by (z_va - z_vb) in one pass."""
        data = {}
        for idx, v in self.data.items():
            for var, sgn in ((va, 1), (vb, -1)):
                new = list(idx)
                new[var] -= 1
                new = tuple(new)
                if abs(new[var]) > self.K:
                    continue
                s = data.get(new, 0) + (v if sgn > 0 else -v)
                if _is_zero(s):
                    data.pop(new, None)
                else:
                    data[new] = s
        bands = [
            Band(b.coeffs, b.lo - b.coeffs[va], b.hi - b.coeffs[va])
            for b in self.bands
        ] + [
            Band(b.coeffs, b.lo - b.coeffs[vb], b.hi - b.coeffs[vb])
            for b in self.bands
        ]
        for var in (va, vb):
            unit = tuple(1 if i == var else 0 for i in range(self.nvars))
            bands.append(Band(unit, -self.K - 1, self.K - 1))
        return TruncatedDist(self.nvars, self.K, data, bands)

    def deriv(self, var: int) -> "TruncatedDist":
        """d/dz_var on modes: new(e) = -e_var * old(e - 1_var)."""
        data = {}
        for idx, v in self.data.items():
            new = list(idx)
            new[var] += 1
            if abs(new[var]) <= self.K:
                coeff = -new[var]
                if coeff:
                    data[tuple(new)] = v * Fraction(coeff)
        bands = [
            Band(b.coeffs, b.lo + b.coeffs[var], b.hi + b.coeffs[var])
            for b in self.bands
        ]
        unit = tuple(1 if i == var else 0 for i in range(self.nvars))
        bands.append(Band(unit, -self.K + 1, self.K + 1))
        return TruncatedDist(self.nvars, self.K, data, bands)

    def deriv_divided(self, var: int, j: int) -> "TruncatedDist":
        out = self
        for _ in range(j):
            out = out.deriv(var)
        return out.scale(Fraction(1, factorial(j)))

    def swap(self, i: int, jj: int) -> "TruncatedDist":
        perm = list(range(self.nvars))
        perm[i], perm[jj] = perm[jj], perm[i]
        data = {tuple(idx[p] for p in perm): v for idx, v in self.data.items()}
        bands = [
            Band(tuple(b.coeffs[p] for p in perm), b.lo, b.hi) for b in self.bands
        ]
        return TruncatedDist(self.nvars, self.K, data, bands)

    def residue(self, var: int, k: int = 0) -> "TruncatedDist":
        """Res_{z_var} z_var^k (.): slice e_var = k, dropping that variable."""
        if abs(k) > self.K:
            raise WindowExhausted(f"residue power {k} outside the window")
        data = {}
        for idx, v in self.data.items():
            if idx[var] == k:
                data[idx[:var] + idx[var + 1 :]] = v
        bands = []
        for b in self.bands:
            rest = b.coeffs[:var] + b.coeffs[var + 1 :]
            off = b.coeffs[var] * k
            if any(rest):
                bands.append(Band(rest, b.lo - off, b.hi - off))
            elif not (b.lo <= off <= b.hi):
                raise WindowExhausted("residue slice leaves the valid set")
        return TruncatedDist(self.nvars - 1, self.K, data, bands)

    # -- predicates --------------------------------------------------------

    def is_zero_on_interior(self) -> bool:
        found_valid = False
        for idx, v in self.data.items():
            if self.valid(idx):
                found_valid = True
                if not _is_zero(v):
                    return False
        if not found_valid and not self.has_interior():
            raise WindowExhausted("empty interior: nothing can be asserted")
        return True

    def eq_on_interior(self, other: "TruncatedDist") -> bool:
        return self.sub(other).is_zero_on_interior()

    def render_summary(self) -> str:
        nz = sum(1 for idx in self.interior() if not _is_zero(self.data.get(idx, 0)))
        return (
            f"dist(nvars={self.nvars}, K={self.K}, bands={len(self.bands)}, "
            f"nonzero interior entries={nz})"
        )


# ---------------------------------------------------------------------------
# Stock distributions
# ---------------------------------------------------------------------------


def delta(K: int) -> TruncatedDist:
    """The formal delta: modes delta_{m,n} = [m + n = -1], exact on the box."""
    data = {}
    for m in range(-K, K + 1):
        n = -1 - m
        if abs(n) <= K:
            data[(m, n)] = Fraction(1)
    return TruncatedDist(2, K, data)


def delta_derivative(K: int, j: int, divided: bool = True) -> TruncatedDist:
    """d_w^(j) delta(z - w) (closed form: binom(m, j) on m + n = j - 1)."""
    data = {}
    for m in range(-K, K + 1):
        n = j - 1 - m
        if abs(n) <= K:
            c = comb_general(m, j)
            if c:
                data[(m, n)] = c if divided else c * factorial(j)
    return TruncatedDist(2, K, data)


def random_series(K: int, rng, lo=-4, hi=4) -> TruncatedDist:
    data = {}
    for n in range(-K, K + 1):
        c = rng.randint(lo, hi)
        if c:
            data[(n,)] = Fraction(c)
    return TruncatedDist(1, K, data)


def from_ope(coeffs: dict, K: int) -> TruncatedDist:
    """Assemble sum_j c_j(w) d_w^(j) delta(z-w) from 1-variable coefficients.

    Entry (m, n) = sum_j binom(m, j) c_j[m + n - j]; valid where every needed
    c_j index is inside that coefficient's valid range.
    """
    data = {}
    bands = []
    for j, cj in coeffs.items():
        if cj.nvars != 1 or cj.K != K:
            raise ValueError("coefficients must be 1-variable on the same window")
        lo, hi = _valid_range_1var(cj)
        bands.append(Band((1, 1), lo + j, hi + j))
        for m in range(-K, K + 1):
            bc = comb_general(m, j)
            if not bc:
                continue
            for n in range(-K, K + 1):
                q = m + n - j
                if abs(q) > K:
                    continue
                v = cj.data.get((q,))
                if v is None:
                    continue
                idx = (m, n)
                s = data.get(idx, 0) + v * bc
                if _is_zero(s):
                    data.pop(idx, None)
                else:
                    data[idx] = s
    return TruncatedDist(2, K, data, bands)


def _valid_range_1var(c: TruncatedDist):
    """The valid index interval [lo, hi] of a 1-variable distribution."""
    lo, hi = -c.K, c.K
    for b in c.bands:
        (c1,) = b.coeffs
        if c1 == 0:
            if not (b.lo <= 0 <= b.hi):
                raise WindowExhausted("contradictory constant band")
            continue
        if c1 > 0:
            blo = -(-b.lo // c1)  # ceil
            bhi = b.hi // c1
        else:
            blo = -(-b.hi // c1)
            bhi = b.lo // c1
        lo, hi = max(lo, blo), min(hi, bhi)
    return lo, hi


def random_local_dist(K: int, rng, max_order: int = 3):
    """A random local distribution with its OPE data: (dist, {j: c_j})."""
    order = rng.randint(1, max_order)
    coeffs = {}
    for j in range(order):
        if j == order - 1 or rng.random() < 0.8:
            coeffs[j] = random_series(K, rng)
    if (order - 1) not in coeffs:
        coeffs[order - 1] = random_series(K, rng)
    return from_ope(coeffs, K), coeffs


# ---------------------------------------------------------------------------
# Locality, OPE extraction, Fourier transform
# ---------------------------------------------------------------------------


def locality_order(a: TruncatedDist, zvar: int = 0, wvar: int = 1, nmax=None):
    """Smallest N with (z-w)^N a = 0 on the interior; Inconclusive if the
    window cannot certify any N <= nmax."""
    if a.nvars < 2:
        raise ValueError("locality needs two variables")
    if nmax is None:
        nmax = a.K // 2
    cur = a
    for n in range(0, nmax + 1):
        try:
            if cur.is_zero_on_interior():
                return n
        except WindowExhausted:
            raise Inconclusive(f"window exhausted before N = {n}")
        cur = cur.mul_diff(zvar, wvar)
    raise Inconclusive(f"not local within the window (tried N <= {nmax})")


def ope_coefficients(a: TruncatedDist, zvar: int = 0, wvar: int = 1, nmax=None):
    """[(j, c^j)] with c^j = Res_z (z-w)^j a; guard grows by the locality
    order.  Locality is certified in the same pass (Inconclusive otherwise)."""
    if nmax is None:
        nmax = a.K // 2
    out = []
    cur = a
    for j in range(0, nmax + 1):
        try:
            if cur.is_zero_on_interior():
                return out
        except WindowExhausted:
            raise Inconclusive(f"window exhausted at OPE order {j}")
        out.append((j, cur.residue(zvar, 0)))
        cur = cur.mul_diff(zvar, wvar)
    raise Inconclusive(f"not local within the window (tried N <= {nmax})")


def fourier(a: TruncatedDist, zvar: int = 0, wvar: int = 1) -> dict:
    """Formal Fourier transform as {lambda power: 1-variable coefficient}.

    Phi = sum_j lambda^(j) c^j, so the power-j entry is c^j / j!.
    """
    out = {}
    for j, cj in ope_coefficients(a, zvar, wvar):
        out[j] = cj.scale(Fraction(1, factorial(j)))
    return out


def fourier_conjugate(phi: dict, K: int) -> dict:
    """lambda -> -lambda - d_w applied to a Fourier map (identity (5) RHS)."""
    out = {}
    maxj = max(phi) if phi else -1
    for k in range(0, maxj + 1):
        acc = None
        for j in range(k, maxj + 1):
            if j not in phi:
                continue
            piece = phi[j]
            for _ in range(j - k):
                piece = piece.deriv(0)
            sign = -1 if j % 2 else 1
            piece = piece.scale(Fraction(sign * falling_comb(j, k)))
            acc = piece if acc is None else acc.add(piece)
        if acc is not None:
            out[k] = acc
    return out


def falling_comb(j: int, k: int) -> int:
    from math import comb

    return comb(j, k)


def phi_maps_equal(a: dict, b: dict) -> bool:
    powers = set(a) | set(b)
    for p in powers:
        if p in a and p in b:
            if not a[p].eq_on_interior(b[p]):
                return False
        elif p in a:
            if not a[p].is_zero_on_interior():
                return False
        else:
            if not b[p].is_zero_on_interior():
                return False
    return True


# ---------------------------------------------------------------------------
# Distributions from algebras (the mode oracle bridge)
# ---------------------------------------------------------------------------


def pair_distribution(A, a, b, K: int) -> TruncatedDist:
    """a(z)b(w) (the bracket distribution for a Lie table): entries are the
    exact mode products, ModeElt-valued, no truncation error."""
    data = {}
    for m in range(-K, K + 1):
        for n in range(-K, K + 1):
            v = mode_product(A, a, m, b, n)
            if v:
                data[(m, n)] = v
    return TruncatedDist(2, K, data)


def elt_distribution(elt: dict, K: int) -> TruncatedDist:
    """The 1-variable distribution of an element with C[d] coefficients."""
    from .modes import modes_of_elt

    data = {}
    for n in range(-K, K + 1):
        v = modes_of_elt(elt, n)
        if v:
            data[(n,)] = v
    return TruncatedDist(1, K, data)


# ---------------------------------------------------------------------------
# Three-variable kernels for the composition identity (6)
# ---------------------------------------------------------------------------


def three_var_from_kernels(terms, K: int) -> TruncatedDist:
    """sum of c(w) d_w^(i) delta(z-w) d_w^(j) delta(x-w) pieces.

    terms: list of (i, j, c) with c a 1-variable TruncatedDist.  Variables are
    ordered (z, w, x); entry (m, n, p) = binom(m,i) binom(p,j) c[m+n+p-i-j].
    """
    data = {}
    bands = []
    for (i, j, c) in terms:
        bands.append(Band((1, 1, 1), -c.K + i + j, c.K + i + j))
        for m in range(-K, K + 1):
            bi = comb_general(m, i)
            if not bi:
                continue
            for p in range(-K, K + 1):
                bj = comb_general(p, j)
                if not bj:
                    continue
                for n in range(-K, K + 1):
                    q = m + n + p - i - j
                    if abs(q) > c.K:
                        continue
                    v = c.data.get((q,))
                    if v is None:
                        continue
                    idx = (m, n, p)
                    s = data.get(idx, 0) + v * bi * bj
                    if _is_zero(s):
                        data.pop(idx, None)
                    else:
                        data[idx] = s
    return TruncatedDist(3, K, data, bands)


def fourier_pair(a3: TruncatedDist, zvar: int, wvar: int) -> dict:
    """Phi^lambda_{z_zvar, z_wvar} of a 3-variable distribution: a map
    {power: 2-variable dist} (remaining variables keep their relative order)."""
    out = {}
    for j, cj in ope_coefficients(a3, zvar, wvar):
        out[j] = cj.scale(Fraction(1, factorial(j)))
    return out


# ---------------------------------------------------------------------------
# The Fourier-transform identities as checked properties
# ---------------------------------------------------------------------------


def check_identity4(a: TruncatedDist) -> bool:
    """Phi(d_z a) = -l Phi(a)  and  d_w(Phi a) - Phi(d_w a) = -l Phi(a)."""
    phi = fourier(a)
    lhs_z = fourier(a.deriv(0))
    rhs = {k + 1: phi[k].neg() for k in phi}
    if not phi_maps_equal(lhs_z, rhs):
        return False
    phi_dw = fourier(a.deriv(1))
    commutator = {}
    powers = set(phi) | set(phi_dw)
    for k in powers:
        acc = None
        if k in phi:
            acc = phi[k].deriv(0)
        if k in phi_dw:
            acc = phi_dw[k].neg() if acc is None else acc.sub(phi_dw[k])
        if acc is not None:
            commutator[k] = acc
    return phi_maps_equal(commutator, rhs)


def check_identity5(a: TruncatedDist) -> bool:
    """Phi^l(a(w,z)) = Phi^{-l-d_w}(a(z,w)) for local a."""
    lhs = fourier(a.swap(0, 1))
    rhs = fourier_conjugate(fourier(a), a.K)
    return phi_maps_equal(lhs, rhs)


def check_identity6(a3: TruncatedDist) -> bool:
    """Phi^l_{z,w} Phi^mu_{x,w} = Phi^{l+mu}_{x,w} Phi^l_{z,x} on (z,w,x)."""
    from math import comb

    lhs = {}
    for j, two in fourier_pair(a3, 2, 1).items():  # mu on (x, w); two has (z, w)
        for k, one in fourier(two, 0, 1).items():
            lhs[(k, j)] = one
    rhs = {}
    for i, two in fourier_pair(a3, 0, 2).items():  # l on (z, x); two has (w, x)
        for m, one in fourier(two, 1, 0).items():  # (l+mu) on (x, w)
            for k in range(m + 1):
                key = (i + k, m - k)
                piece = one.scale(Fraction(comb(m, k)))
                rhs[key] = piece if key not in rhs else rhs[key].add(piece)
    keys = set(lhs) | set(rhs)
    for key in keys:
        if key in lhs and key in rhs:
            if not lhs[key].eq_on_interior(rhs[key]):
                return False
        elif key in lhs:
            if not lhs[key].is_zero_on_interior():
                return False
        else:
            if not rhs[key].is_zero_on_interior():
                return False
    return True


def check_remark1_laws(a: TruncatedDist) -> bool:
    """The three OPE-coefficient transformation laws for d_z a, d_w a, a(w,z)."""
    cs = dict(ope_coefficients(a))
    n_ord = len(cs)
    # c_z^n = -n c^{n-1}
    cz = dict(ope_coefficients(a.deriv(0)))
    for n in range(n_ord + 1):
        want = cs[n - 1].scale(Fraction(-n)) if 1 <= n <= n_ord else None
        got = cz.get(n)
        if got is None and want is None:
            continue
        if got is None:
            if not want.is_zero_on_interior():
                return False
        elif want is None:
            if not got.is_zero_on_interior():
                return False
        elif not got.eq_on_interior(want):
            return False
    # c_w^n = d_w c^n + n c^{n-1}
    cw = dict(ope_coefficients(a.deriv(1)))
    for n in range(n_ord + 1):
        want = None
        if n in cs:
            want = cs[n].deriv(0)
        if 1 <= n <= n_ord and (n - 1) in cs:
            extra = cs[n - 1].scale(Fraction(n))
            want = extra if want is None else want.add(extra)
        got = cw.get(n)
        if got is None and want is None:
            continue
        if got is None:
            if not want.is_zero_on_interior():
                return False
        elif want is None:
            if not got.is_zero_on_interior():
                return False
        elif not got.eq_on_interior(want):
            return False
    # c~^n = sum_j (-1)^{j+n} d_w^(j) c^{n+j}
    ct = dict(ope_coefficients(a.swap(0, 1)))
    for n in range(max(n_ord, len(ct)) + 1):
        want = None
        for j in range(0, n_ord - n + 1):
            if (n + j) not in cs:
                continue
            sign = -1 if (j + n) % 2 else 1
            piece = cs[n + j].deriv_divided(0, j).scale(Fraction(sign))
            want = piece if want is None else want.add(piece)
        got = ct.get(n)
        if got is None and want is None:
            continue
        if got is None:
            if not want.is_zero_on_interior():
                return False
        elif want is None:
            if not got.is_zero_on_interior():
                return False
        elif not got.eq_on_interior(want):
            return False
    return True


def random_three_var(K: int, rng, max_order: int = 2) -> TruncatedDist:
    """Random 3-variable distribution local in the tested pairs, built from
    delta-derivative kernel products with windowed coefficients."""
    terms = []
    for _ in range(rng.randint(1, 3)):
        i = rng.randint(0, max_order)
        j = rng.randint(0, max_order)
        terms.append((i, j, random_series(K, rng, -3, 3)))
    return three_var_from_kernels(terms, K)
