"""Canonical subspaces and Grassmannian enumeration."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qclusters.errors import AmbientMismatch, BadDimension, DimensionMismatch
from qclusters.gfq import make_field
from qclusters.grassmann import (
    Subspace,
    enum_grassmannian,
    enum_skew_to,
    subspace_from_vectors,
    subspaces_of,
    zero_subspace,
)
from qclusters.qarith import gauss_binom

F2 = make_field(2)


def sp(n, *vectors):
    return subspace_from_vectors(F2, n, vectors)


def e(n, i):
    v = [0] * n
    v[i] = 1
    return tuple(v)


def test_span_canonicalization():
    s = sp(4, (1, 1, 0, 0), (0, 1, 1, 0))
    assert s.k == 2
    assert s.basis.to_rows() == ((1, 0, 1, 0), (0, 1, 1, 0))


def test_duplicate_rows_collapse():
    s = sp(4, (1, 0, 0, 0), (1, 0, 0, 0))
    assert s.k == 1 and s.basis.to_rows() == ((1, 0, 0, 0),)


def test_empty_span_is_zero_subspace():
    s = subspace_from_vectors(F2, 4, [])
    assert s.k == 0 and s == zero_subspace(F2, 4)


def test_ragged_input_rejected():
    with pytest.raises(DimensionMismatch):
        subspace_from_vectors(F2, 4, [(1, 0, 0, 0), (1, 0)])


def test_sum_and_intersect_examples():
    u = sp(4, e(4, 0), e(4, 1))
    w = sp(4, e(4, 2), e(4, 3))
    w2 = sp(4, e(4, 0), e(4, 2))
    assert u.sum(u) == u
    assert u.sum(w).k == 4
    assert u.sum(w2).k == 3
    assert u.intersect(u) == u
    assert u.intersect(w).k == 0
    assert u.intersect(w2).basis.to_rows() == ((1, 0, 0, 0),)


def test_skew_and_contains():
    u = sp(4, e(4, 0), e(4, 1))
    assert u.is_skew(sp(4, e(4, 2), e(4, 3)))
    assert not u.is_skew(sp(4, e(4, 0), e(4, 2)))
    assert u.is_skew(sp(4, (1, 0, 1, 0), (0, 1, 0, 1)))
    assert u.contains(u)
    assert u.contains(sp(4, e(4, 0)))
    assert not u.contains(sp(4, e(4, 2)))


def test_ambient_mismatch():
    u = sp(4, e(4, 0))
    w = sp(3, e(3, 0))
    with pytest.raises(AmbientMismatch):
        u.sum(w)
    f3 = make_field(3)
    w3 = subspace_from_vectors(f3, 4, [e(4, 0)])
    with pytest.raises(AmbientMismatch):
        u.intersect(w3)


@st.composite
def vector_list(draw):
    q = draw(st.sampled_from([2, 3, 4, 5]))
    n = draw(st.integers(1, 5))
    count = draw(st.integers(1, 4))
    vecs = [
        tuple(draw(st.integers(0, q - 1)) for _ in range(n)) for _ in range(count)
    ]
    return make_field(q), n, vecs


@given(vector_list(), st.randoms(use_true_random=False))
@settings(max_examples=120, deadline=None)
def test_canonical_key_invariant_under_recombination(data, rng):
    field, n, vecs = data
    s = subspace_from_vectors(field, n, vecs)
    # shuffle and replace rows by random nonzero combinations of themselves
    rows = [list(v) for v in vecs]
    rng.shuffle(rows)
    mixed = []
    for row in rows:
        other = rows[rng.randrange(len(rows))]
        coef = rng.randrange(1, field.q)
        mixed.append(
            tuple(field.add(field.mul(coef, a), b) for a, b in zip(row, other))
        )
    mixed.extend(tuple(r) for r in rows)
    t = subspace_from_vectors(field, n, mixed)
    assert t.key == s.key and t == s


def test_modularity_exhaustive_f2_4_2():
    planes = list(enum_grassmannian(F2, 4, 2))
    assert len(planes) == 35
    for u, w in itertools.combinations(planes, 2):
        assert u.intersect(w).k + u.sum(w).k == u.k + w.k


@given(st.sampled_from([3, 4, 5]), st.data())
@settings(max_examples=60, deadline=None)
def test_modularity_random_pairs(q, data):
    field = make_field(q)
    n = 4
    draw_vec = st.tuples(*[st.integers(0, q - 1)] * n)
    u = subspace_from_vectors(field, n, [data.draw(draw_vec) for _ in range(2)])
    w = subspace_from_vectors(field, n, [data.draw(draw_vec) for _ in range(2)])
    assert u.intersect(w).k + u.sum(w).k == u.k + w.k
    assert u.intersection_dim(w) == u.intersect(w).k
    assert u.sum_dim(w) == u.sum(w).k


@pytest.mark.parametrize("q,n", [(2, 5), (3, 4), (4, 3)])
def test_enumeration_counts(q, n):
    field = make_field(q)
    for k in range(n + 1):
        count = sum(1 for _ in enum_grassmannian(field, n, k))
        assert count == gauss_binom(n, k, q)


def test_enumeration_unique_and_deterministic():
    first = [s.key for s in enum_grassmannian(F2, 4, 2)]
    second = [s.key for s in enum_grassmannian(F2, 4, 2)]
    assert first == second
    assert len(set(first)) == len(first) == 35


def test_enumeration_bad_dimension():
    with pytest.raises(BadDimension):
        list(enum_grassmannian(F2, 3, 4))


def test_skew_enumeration_counts():
    w = sp(4, e(4, 0), e(4, 1))
    complements = list(enum_skew_to(w, 2))
    assert len(complements) == 16
    line = sp(4, e(4, 0))
    assert sum(1 for _ in enum_skew_to(line, 1)) == 14
    full = sp(3, e(3, 0), e(3, 1), e(3, 2))
    with pytest.raises(BadDimension):
        list(enum_skew_to(full, 1))


def test_skew_to_zero_subspace_is_whole_grassmannian():
    z = zero_subspace(F2, 4)
    assert sum(1 for _ in enum_skew_to(z, 2)) == 35


def test_subspaces_of_counts():
    u = sp(4, e(4, 0), e(4, 1))
    lines = list(subspaces_of(u, 1))
    assert len(lines) == 3 == gauss_binom(2, 1, 2)
    assert all(u.contains(d) and d.k == 1 for d in lines)
    f3 = make_field(3)
    w = subspace_from_vectors(f3, 4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0)])
    assert sum(1 for _ in subspaces_of(w, 2)) == gauss_binom(3, 2, 3)
    assert next(subspaces_of(w, 0)).k == 0


def test_vectors_cover_subspace():
    u = sp(4, e(4, 0), e(4, 1))
    vecs = set(u.vectors())
    assert len(vecs) == 4
    assert (0, 0, 0, 0) in vecs and (1, 1, 0, 0) in vecs
