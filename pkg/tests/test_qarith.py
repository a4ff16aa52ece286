"""Gaussian binomial arithmetic, numeric and polynomial."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qclusters.errors import BadArgs
from qclusters.gfq import FqMatrix, make_field, rref
from qclusters.qarith import (
    QPoly,
    gauss_binom,
    gauss_binom_poly,
    star_layer_size,
    verify_pascal,
    verify_star_identity,
)


def count_row_spaces(q, n, k):
    """Brute-force oracle: distinct row spaces of all k x n matrices over GF(q).

    Independent of both the product formula and the pivot-profile
    enumerator; only the rref canonical form is shared.
    """
    field = make_field(q)
    seen = set()
    for entries in itertools.product(range(q), repeat=n * k):
        reduced, rank, _ = rref(FqMatrix(field, k, n, entries))
        if rank == k:
            seen.add(reduced.entries)
    return len(seen)


def test_gauss_binom_against_row_space_oracle():
    assert gauss_binom(4, 2, 2) == count_row_spaces(2, 4, 2) == 35
    assert gauss_binom(3, 2, 3) == count_row_spaces(3, 3, 2) == 13
    assert gauss_binom(4, 1, 2) == count_row_spaces(2, 4, 1) == 15


def test_gauss_binom_edges_and_symmetry():
    assert gauss_binom(7, 0, 3) == 1
    assert gauss_binom(7, 7, 3) == 1
    assert gauss_binom(4, 1, 2) == 15 == gauss_binom(4, 3, 2)
    assert gauss_binom(4, 2, 3) == 130


def test_gauss_binom_bad_args():
    with pytest.raises(BadArgs):
        gauss_binom(3, 4, 2)
    with pytest.raises(BadArgs):
        gauss_binom(3, -1, 2)
    with pytest.raises(BadArgs):
        gauss_binom(3, 1, 1)


def test_poly_examples():
    assert gauss_binom_poly(2, 1).coeffs == (1, 1)
    assert gauss_binom_poly(4, 2).coeffs == (1, 1, 2, 1, 1)
    assert gauss_binom_poly(5, 5).coeffs == (1,)
    assert gauss_binom_poly(6, 2).degree == 2 * (6 - 2)


def test_qpoly_algebra():
    p = QPoly((1, 1))
    assert (p * p).coeffs == (1, 2, 1)
    assert (p + QPoly((0, 0, 3))).coeffs == (1, 1, 3)
    assert p.shift(2).coeffs == (0, 0, 1, 1)
    assert QPoly((0, 0)).coeffs == ()
    assert p(5) == 6


@given(
    st.integers(0, 16).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))),
    st.sampled_from([2, 3, 4, 5, 7, 8, 9]),
)
@settings(max_examples=200, deadline=None)
def test_poly_evaluation_matches_numeric(nk, q):
    n, k = nk
    assert gauss_binom_poly(n, k)(q) == gauss_binom(n, k, q)


def test_pascal_symbolic_full_range():
    for n in range(2, 21):
        for k in range(1, n):
            assert verify_pascal(n, k)


def test_star_layer_examples():
    assert star_layer_size(4, 2, 1, 2) == 6
    assert star_layer_size(4, 2, 2, 2) == 1
    for n, k, q in ((6, 3, 2), (8, 4, 3), (5, 2, 7)):
        assert star_layer_size(n, k, k, q) == 1


def test_star_identity_examples():
    holds, layer_sum, star = verify_star_identity(4, 2, 2)
    assert holds and layer_sum == star == 7
    holds, layer_sum, star = verify_star_identity(5, 2, 2)
    assert holds and layer_sum == star == 15
    holds, layer_sum, star = verify_star_identity(2, 1, 5)
    assert holds and star == 1


def test_star_identity_sweep():
    for q in (2, 3, 4, 5, 7, 8, 9):
        for n in range(4, 25):
            for k in range(2, n // 2 + 1):
                assert verify_star_identity(n, k, q).holds


def test_star_identity_rejects_large_k():
    with pytest.raises(BadArgs):
        verify_star_identity(4, 3, 2)
