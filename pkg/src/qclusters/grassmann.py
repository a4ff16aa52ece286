"""Canonical subspace values and exact enumeration of Grassmannians.

A Subspace is identified by the unique reduced-row-echelon basis of its row
space; the canonical byte key (q, n, then the rref entries row-major) makes
equality, hashing and ordering exact and cheap. Enumeration walks rref
pivot profiles directly, so each subspace is produced exactly once in a
fixed order.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Sequence

from . import qarith
from .errors import AmbientMismatch, BadDimension, DimensionMismatch
from .gfq import FieldSpec, FqMatrix, _rref_rows, mat_mul, rref


class Subspace:
    """A k-dimensional subspace of GF(q)^n in canonical rref form."""

    __slots__ = ("field", "n", "k", "basis", "key", "_hash")

    def __init__(self, field: FieldSpec, n: int, basis: FqMatrix):
        # trusted constructor: basis must already be in rref with no zero rows
        self.field = field
        self.n = n
        self.k = basis.rows
        self.basis = basis
        self.key = (
            field.q.to_bytes(2, "big") + n.to_bytes(2, "big") + bytes(basis.entries)
        )
        self._hash = hash(self.key)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Subspace) and other.key == self.key

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Subspace") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        rows = ",".join("".join(str(e) for e in r) for r in self.basis.to_rows())
        return f"Subspace(q={self.field.q}, n={self.n}, k={self.k}, [{rows}])"

    # -- lattice operations ------------------------------------------------

    def _check_ambient(self, other: "Subspace") -> None:
        if self.field != other.field or self.n != other.n:
            raise AmbientMismatch(
                f"operands live in GF({self.field.q})^{self.n} and "
                f"GF({other.field.q})^{other.n}"
            )

    def sum(self, other: "Subspace") -> "Subspace":
        """Smallest subspace containing both operands."""
        self._check_ambient(other)
        rows = [list(r) for r in self.basis.to_rows()] + [
            list(r) for r in other.basis.to_rows()
        ]
        kept, _ = _rref_rows(self.field, rows, self.n)
        return _from_rref_rows(self.field, self.n, kept)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection, via the Zassenhaus double-block elimination."""
        self._check_ambient(other)
        n = self.n
        rows = [list(r) + list(r) for r in self.basis.to_rows()]
        rows += [list(r) + [0] * n for r in other.basis.to_rows()]
        kept, _ = _rref_rows(self.field, rows, 2 * n)
        inter = [r[n:] for r in kept if not any(r[:n])]
        return _from_rref_rows(self.field, n, inter)

    def is_skew(self, other: "Subspace") -> bool:
        """True when the two subspaces meet only in the zero vector."""
        self._check_ambient(other)
        rows = [list(r) for r in self.basis.to_rows()] + [
            list(r) for r in other.basis.to_rows()
        ]
        kept, _ = _rref_rows(self.field, rows, self.n)
        return len(kept) == self.k + other.k

    def contains(self, other: "Subspace") -> bool:
        """True when other is a subspace of self."""
        self._check_ambient(other)
        rows = [list(r) for r in self.basis.to_rows()] + [
            list(r) for r in other.basis.to_rows()
        ]
        kept, _ = _rref_rows(self.field, rows, self.n)
        return len(kept) == self.k

    def sum_dim(self, other: "Subspace") -> int:
        """dim(self + other) without building the sum."""
        self._check_ambient(other)
        rows = [list(r) for r in self.basis.to_rows()] + [
            list(r) for r in other.basis.to_rows()
        ]
        kept, _ = _rref_rows(self.field, rows, self.n)
        return len(kept)

    def intersection_dim(self, other: "Subspace") -> int:
        """dim(self ∩ other) from the modular law."""
        return self.k + other.k - self.sum_dim(other)

    def vectors(self) -> Iterator[tuple[int, ...]]:
        """All q^k vectors of the subspace (the zero vector included)."""
        f = self.field
        rows = self.basis.to_rows()
        for coeffs in itertools.product(f.elements(), repeat=self.k):
            vec = [0] * self.n
            for c, row in zip(coeffs, rows):
                if c:
                    for j, e in enumerate(row):
                        if e:
                            vec[j] = f.add(vec[j], f.mul(c, e))
            yield tuple(vec)


def _from_rref_rows(field: FieldSpec, n: int, rows: Sequence[Sequence[int]]) -> Subspace:
    flat = [e for r in rows for e in r]
    return Subspace(field, n, FqMatrix(field, len(rows), n, flat))


def subspace_from_vectors(
    field: FieldSpec, n: int, vectors: Sequence[Sequence[int]]
) -> Subspace:
    """Canonical subspace spanned by the given coordinate vectors."""
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch(f"vector {tuple(v)} does not have length {n}")
    mat = FqMatrix.from_rows(field, vectors, cols=n)
    reduced, _, _ = rref(mat)
    return Subspace(field, n, reduced)


def zero_subspace(field: FieldSpec, n: int) -> Subspace:
    """The subspace {0}."""
    return Subspace(field, n, FqMatrix(field, 0, n, ()))


def full_space(field: FieldSpec, n: int) -> Subspace:
    rows = [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    return _from_rref_rows(field, n, rows)


def enum_grassmannian(field: FieldSpec, n: int, k: int) -> Iterator[Subspace]:
    """Every k-dimensional subspace of GF(q)^n, exactly once.

    Ordered by rref pivot profile: pivot column sets in lexicographic order,
    then base-q counting over the free entries (row-major, last entry moving
    fastest).
    """
    if not 0 <= k <= n:
        raise BadDimension(f"need 0 <= k <= n, got n={n}, k={k}")
    q = field.q
    if k == 0:
        yield zero_subspace(field, n)
        return
    for pivots in itertools.combinations(range(n), k):
        pivot_set = set(pivots)
        free = [
            (r, c)
            for r in range(k)
            for c in range(pivots[r] + 1, n)
            if c not in pivot_set
        ]
        base = [[0] * n for _ in range(k)]
        for r, c in enumerate(pivots):
            base[r][c] = 1
        if not free:
            yield _from_rref_rows(field, n, [row[:] for row in base])
            continue
        digits = [0] * len(free)
        while True:
            rows = [row[:] for row in base]
            for (r, c), d in zip(free, digits):
                rows[r][c] = d
            yield _from_rref_rows(field, n, rows)
            # base-q odometer, last position moving fastest
            pos = len(digits) - 1
            while pos >= 0:
                digits[pos] += 1
                if digits[pos] < q:
                    break
                digits[pos] = 0
                pos -= 1
            if pos < 0:
                break


def enum_skew_to(w: Subspace, i: int) -> Iterator[Subspace]:
    """All i-dimensional subspaces skew to w, by filtered enumeration.

    The emitted count is asserted against q^(m*i) * [n-m, i]_q on exhaustion.
    """
    n, m = w.n, w.k
    if i < 0 or i + m > n:
        raise BadDimension(f"need 0 <= i <= n - dim(w), got i={i}, dim(w)={m}, n={n}")
    count = 0
    for u in enum_grassmannian(w.field, n, i):
        if u.is_skew(w):
            count += 1
            yield u
    expected = w.field.q ** (m * i) * qarith.gauss_binom(n - m, i, w.field.q)
    assert count == expected, (
        f"skew enumeration produced {count} subspaces, formula gives {expected}"
    )


def subspaces_of(s: Subspace, i: int) -> Iterator[Subspace]:
    """All i-dimensional subspaces of s, via coefficient-space enumeration."""
    if i < 0 or i > s.k:
        raise BadDimension(f"need 0 <= i <= dim(s), got i={i}, dim(s)={s.k}")
    if i == 0:
        yield zero_subspace(s.field, s.n)
        return
    for coeff in enum_grassmannian(s.field, s.k, i):
        ambient = mat_mul(coeff.basis, s.basis)
        reduced, _, _ = rref(ambient)
        yield Subspace(s.field, s.n, reduced)
