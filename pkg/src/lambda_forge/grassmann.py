"""Grassmann algebra in N anticommuting generators xi_1..xi_N.

Elements are sparse maps from index subsets (bitmasks, bit i-1 <-> xi_i,
factors in increasing index order) to Poly coefficients.  The parity of a
monomial xi_I is |I| mod 2; signs come only from merging index sets and from
the odd left derivative.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Poly


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _merge_sign(a: int, b: int) -> int:
    """Sign of xi_a * xi_b for disjoint masks: (-1)^#inversions."""
    inv = 0
    rest = a
    while rest:
        low = rest & -rest
        inv += popcount(b & (low - 1))
        rest ^= low
    return -1 if inv & 1 else 1


class Grassmann:
    """Element of Lambda(N) with Poly coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms=None):
        self.n = n
        t = {}
        if terms:
            for mask, c in terms.items():
                c = c if isinstance(c, Poly) else Poly.const(c)
                if c:
                    t[mask] = c
        self.terms = t

    @staticmethod
    def unit(n: int) -> "Grassmann":
        return Grassmann(n, {0: Poly.const(1)})

    @staticmethod
    def gen(n: int, i: int) -> "Grassmann":
        if not 1 <= i <= n:
            raise IndexError(f"xi_{i} out of range for N={n}")
        return Grassmann(n, {1 << (i - 1): Poly.const(1)})

    @staticmethod
    def monomial(n: int, mask: int, coeff=1) -> "Grassmann":
        return Grassmann(n, {mask: Poly._lift(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, Grassmann)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __add__(self, other):
        if self.n != other.n:
            raise ValueError("mixed Grassmann ranks")
        acc = dict(self.terms)
        for mask, c in other.terms.items():
            s = acc.get(mask, Poly.zero()) + c
            if s:
                acc[mask] = s
            elif mask in acc:
                del acc[mask]
        out = Grassmann(self.n)
        out.terms = acc
        return out

    def __neg__(self):
        out = Grassmann(self.n)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Grassmann":
        c = Poly._lift(c)
        out = Grassmann(self.n)
        if c:
            out.terms = {m: v * c for m, v in self.terms.items()}
        return out

    def __mul__(self, other):
        """Anticommutative product; zero on overlapping index sets."""
        if isinstance(other, (int, Fraction, Poly)):
            return self.scale(other)
        if self.n != other.n:
            raise ValueError("mixed Grassmann ranks")
        acc = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if m1 & m2:
                    continue
                sign = _merge_sign(m1, m2)
                m = m1 | m2
                s = acc.get(m, Poly.zero()) + c1 * c2 * sign
                if s:
                    acc[m] = s
                elif m in acc:
                    del acc[m]
        out = Grassmann(self.n)
        out.terms = acc
        return out

    __rmul__ = scale

    def deriv(self, i: int) -> "Grassmann":
        """Odd left derivative by xi_i."""
        if not 1 <= i <= self.n:
            raise IndexError(f"xi_{i} out of range for N={self.n}")
        bit = 1 << (i - 1)
        acc = {}
        for mask, c in self.terms.items():
            if not mask & bit:
                continue
            sign = -1 if popcount(mask & (bit - 1)) & 1 else 1
            acc[mask ^ bit] = c * sign
        out = Grassmann(self.n)
        out.terms = acc
        return out

    def homogeneous_parts(self) -> dict:
        """Split by Z-degree |I| (number of xi factors)."""
        out = {}
        for mask, c in self.terms.items():
            k = popcount(mask)
            part = out.setdefault(k, Grassmann(self.n))
            part.terms[mask] = c
        return out

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mask in sorted(self.terms):
            c = self.terms[mask]
            name = mask_name(mask)
            parts.append(f"({c.render()})*{name}" if mask else f"({c.render()})")
        return " + ".join(parts)

    def __repr__(self):
        return f"Grassmann({self.n}, {self.render()})"


def mask_name(mask: int) -> str:
    """Canonical generator name for xi_I: 'x' + ascending indices, 'x' for I=0."""
    digits = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "x" + "".join(digits)


def mask_indices(mask: int):
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]
