"""Exact arithmetic in GF(q) and dense matrix algebra over it.

Fields of order q = p^m (2 <= q <= 256) are backed by full multiplication
and inverse lookup tables. Extension fields are built from the monic
irreducible polynomial of degree m over F_p with the smallest integer code
(coefficients read as base-p digits), so element indices, and therefore
every canonical form downstream, are identical across runs and platforms.

Element indices encode polynomial coefficients in base p: the element
sum(c_i * x^i) has index sum(c_i * p^i). Index 0 is the additive identity
and index 1 the multiplicative identity.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    DimensionMismatch,
    NotPrimePower,
    Unsupported,
    ZeroInverse,
)

MAX_ORDER = 256


def _prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, m) with q = p^m, p prime."""
    if q < 2:
        raise NotPrimePower(f"field order must be >= 2, got {q}")
    p = 2
    while p * p <= q:
        if q % p == 0:
            break
        p += 1
    else:
        return q, 1
    n, m = q, 0
    while n % p == 0:
        n //= p
        m += 1
    if n != 1:
        raise NotPrimePower(f"{q} is not a prime power")
    return p, m


def _poly_mul_mod(a: list[int], b: list[int], modulus: list[int], p: int) -> list[int]:
    """(a*b) mod modulus over F_p; little-endian coefficient lists."""
    deg_m = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: modulus is monic
    for i in range(len(prod) - 1, deg_m - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg_m):
                prod[i - deg_m + j] = (prod[i - deg_m + j] - c * modulus[j]) % p
    out = prod[:deg_m]
    while len(out) < deg_m:
        out.append(0)
    return out


def _poly_divisible(f: list[int], g: list[int], p: int) -> bool:
    """True if monic-leading g divides f over F_p."""
    rem = list(f)
    dg = len(g) - 1
    lead_inv = pow(g[-1], -1, p)
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i]
        if c:
            factor = (c * lead_inv) % p
            for j in range(dg + 1):
                rem[i - dg + j] = (rem[i - dg + j] - factor * g[j]) % p
    return not any(rem[:dg])


def _irreducible_poly(p: int, m: int) -> tuple[int, ...]:
    """Monic irreducible of degree m over F_p with smallest code, little-endian."""
    if m == 1:
        return (0, 1)
    # divisors to test: all monic polynomials of degree 1..m//2
    small: list[list[int]] = []
    for d in range(1, m // 2 + 1):
        for code in range(p**d):
            coeffs = [(code // p**i) % p for i in range(d)] + [1]
            small.append(coeffs)
    for code in range(p**m):
        f = [(code // p**i) % p for i in range(m)] + [1]
        if all(not _poly_divisible(f, g, p) for g in small):
            return tuple(f)
    raise AssertionError(f"no irreducible polynomial of degree {m} over F_{p}")


class FieldSpec:
    """Arithmetic tables for GF(q). Immutable; construct via make_field()."""

    __slots__ = ("q", "p", "m", "modulus", "_mul", "_inv", "_neg")

    def __init__(self, q: int, p: int, m: int, modulus: tuple[int, ...]):
        self.q = q
        self.p = p
        self.m = m
        self.modulus = modulus
        if m == 1:
            mul = [(a * b) % p for a in range(q) for b in range(q)]
            neg = [(-a) % p for a in range(q)]
        else:
            mod_list = list(modulus)
            digits = [[(e // p**i) % p for i in range(m)] for e in range(q)]
            codes = {}
            mul = [0] * (q * q)
            for a in range(q):
                for b in range(a, q):
                    c = _poly_mul_mod(digits[a], digits[b], mod_list, p)
                    key = tuple(c)
                    idx = codes.get(key)
                    if idx is None:
                        idx = sum(ci * p**i for i, ci in enumerate(c))
                        codes[key] = idx
                    mul[a * q + b] = idx
                    mul[b * q + a] = idx
            neg = [sum(((-d) % p) * p**i for i, d in enumerate(digits[a])) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            row = mul[a * q : a * q + q]
            inv[a] = row.index(1)
        self._mul = tuple(mul)
        self._inv = tuple(inv)
        self._neg = tuple(neg)

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        # digit-wise addition in base p
        p, m = self.p, self.m
        out = 0
        mult = 1
        for _ in range(m):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def neg(self, a: int) -> int:
        return self._neg[a]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return self._inv[a]

    def elements(self) -> range:
        return range(self.q)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self) -> int:
        return hash(("FieldSpec", self.q))

    def __repr__(self) -> str:
        return f"FieldSpec(q={self.q})"


@lru_cache(maxsize=None)
def make_field(q: int) -> FieldSpec:
    """Build (or fetch the cached) GF(q) for 2 <= q <= 256."""
    if q > MAX_ORDER:
        raise Unsupported(f"field orders above {MAX_ORDER} are not supported, got {q}")
    p, m = _prime_power(q)
    return FieldSpec(q, p, m, _irreducible_poly(p, m))


def f_add(f: FieldSpec, a: int, b: int) -> int:
    return f.add(a, b)


def f_mul(f: FieldSpec, a: int, b: int) -> int:
    return f.mul(a, b)


def f_inv(f: FieldSpec, a: int) -> int:
    return f.inv(a)


class FqMatrix:
    """Dense matrix over GF(q), entries row-major in one tuple. Immutable."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries: Iterable[int]):
        ent = tuple(entries)
        if len(ent) != rows * cols:
            raise DimensionMismatch(
                f"need {rows * cols} entries for a {rows}x{cols} matrix, got {len(ent)}"
            )
        q = field.q
        for e in ent:
            if not 0 <= e < q:
                raise DimensionMismatch(f"entry {e} out of range for GF({q})")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = ent

    @classmethod
    def from_rows(cls, field: FieldSpec, rows: Sequence[Sequence[int]], cols: int | None = None) -> "FqMatrix":
        rows = [tuple(r) for r in rows]
        if cols is None:
            if not rows:
                raise DimensionMismatch("cannot infer column count from an empty row list")
            cols = len(rows[0])
        for r in rows:
            if len(r) != cols:
                raise DimensionMismatch(f"ragged rows: expected length {cols}, got {len(r)}")
        flat = [e for r in rows for e in r]
        return cls(field, len(rows), cols, flat)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.row(i) for i in range(self.rows))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FqMatrix)
            and other.field == self.field
            and other.rows == self.rows
            and other.cols == self.cols
            and other.entries == self.entries
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"FqMatrix(q={self.field.q}, {self.rows}x{self.cols})"


def _rref_rows(field: FieldSpec, rows: list[list[int]], cols: int) -> tuple[list[list[int]], list[int]]:
    """In-place Gauss-Jordan; returns (nonzero rows, pivot columns)."""
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(cols):
        if r == nrows:
            break
        pr = None
        for i in range(r, nrows):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        head = rows[r][c]
        if head != 1:
            inv = field.inv(head)
            rows[r] = [field.mul(inv, e) for e in rows[r]]
        rr = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                coef = rows[i][c]
                ri = rows[i]
                for j in range(c, cols):
                    if rr[j]:
                        ri[j] = field.sub(ri[j], field.mul(coef, rr[j]))
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def rref(mat: FqMatrix) -> tuple[FqMatrix, int, tuple[int, ...]]:
    """Unique reduced row echelon form with zero rows dropped.

    Returns (rref matrix, rank, pivot columns).
    """
    rows = [list(mat.row(i)) for i in range(mat.rows)]
    kept, pivots = _rref_rows(mat.field, rows, mat.cols)
    flat = [e for r in kept for e in r]
    return FqMatrix(mat.field, len(kept), mat.cols, flat), len(kept), tuple(pivots)


def kernel_basis(mat: FqMatrix) -> FqMatrix:
    """Basis (in rref) of the right kernel {x : mat @ x = 0}."""
    field = mat.field
    reduced, rank, pivots = rref(mat)
    cols = mat.cols
    pivot_set = set(pivots)
    free_cols = [c for c in range(cols) if c not in pivot_set]
    rows: list[list[int]] = []
    for fc in free_cols:
        vec = [0] * cols
        vec[fc] = 1
        for i, pc in enumerate(pivots):
            coef = reduced.row(i)[fc]
            if coef:
                vec[pc] = field.neg(coef)
        rows.append(vec)
    kept, _ = _rref_rows(field, rows, cols)
    flat = [e for r in kept for e in r]
    return FqMatrix(field, len(kept), cols, flat)


def mat_mul(a: FqMatrix, b: FqMatrix) -> FqMatrix:
    """Matrix product over the shared field."""
    if a.field != b.field or a.cols != b.rows:
        raise DimensionMismatch("incompatible shapes or fields for matrix product")
    f = a.field
    out: list[int] = []
    brows = b.to_rows()
    for i in range(a.rows):
        arow = a.row(i)
        acc = [0] * b.cols
        for t, coef in enumerate(arow):
            if coef:
                brow = brows[t]
                for j in range(b.cols):
                    if brow[j]:
                        acc[j] = f.add(acc[j], f.mul(coef, brow[j]))
        out.extend(acc)
    return FqMatrix(f, a.rows, b.cols, out)
