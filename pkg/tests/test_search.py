"""Branch-and-bound search, matchings, and their oracles."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qclusters.errors import BadLayer
from qclusters.gfq import make_field
from qclusters.grassmann import enum_grassmannian, subspace_from_vectors
from qclusters.families import (
    COVERING_TRIPLE,
    D_CLUSTER,
    THREE_CLUSTER,
    find_forbidden,
    star_centers,
    star_family,
)
from qclusters.search import (
    BipartiteGraph,
    GroundSet,
    brute_force_max,
    build_inclusion_graph,
    enumerate_maxima,
    one_to_m_matching,
    partition_y,
    search_max,
)

F2 = make_field(2)


def sp(n, *vectors):
    return subspace_from_vectors(F2, n, vectors)


# -- ground set internals agree with the reference subspace operations -------


def test_ground_meet_dims_match_reference():
    ground = GroundSet.full_grassmannian(F2, 4, 2)
    elems = ground.elements
    for i, j in itertools.combinations(range(len(elems)), 2):
        assert ground.meet_dim(i, j) == elems[i].intersection_dim(elems[j])


def test_ground_join_dims_match_reference():
    ground = GroundSet.full_grassmannian(F2, 4, 2)
    elems = ground.elements
    for i, j, l in itertools.combinations(range(10), 3):
        expected = elems[i].sum(elems[j]).sum_dim(elems[l])
        assert ground.join_dim((i, j, l)) == expected


def test_ground_meet_dims_match_reference_q3():
    f3 = make_field(3)
    ground = GroundSet.full_grassmannian(f3, 3, 1)
    elems = ground.elements
    for i, j in itertools.combinations(range(len(elems)), 2):
        assert ground.meet_dim(i, j) == elems[i].intersection_dim(elems[j])


# -- searches on small instances ----------------------------------------------


def test_search_f2_3_2_all_predicates():
    for predicate, d in ((COVERING_TRIPLE, None), (THREE_CLUSTER, None), (D_CLUSTER, 3)):
        report = search_max(F2, 3, 2, predicate, d=d)
        assert report.optimum == 3 == report.star_bound
        assert report.optimality_proved
        assert len(report.witness) == 3
        assert find_forbidden(report.witness, predicate, d) is None


def test_search_f2_4_2_covering_triple():
    report = search_max(F2, 4, 2, COVERING_TRIPLE)
    assert report.optimum == 7 == report.star_bound
    assert report.optimality_proved


def test_search_brute_force_agreement_small():
    planes32 = list(enum_grassmannian(F2, 3, 2))
    for predicate, d in ((COVERING_TRIPLE, None), (THREE_CLUSTER, None), (D_CLUSTER, 4)):
        oracle, fam = brute_force_max(planes32, predicate, d=d)
        report = search_max(F2, 3, 2, predicate, d=d)
        assert report.optimum == oracle
        assert find_forbidden(fam, predicate, d) is None


def test_search_brute_force_agreement_star_ground():
    """Restricted ground set: the 15 members of a (5,2) star."""
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    for predicate, d in ((COVERING_TRIPLE, None), (THREE_CLUSTER, None), (D_CLUSTER, 4)):
        oracle, fam = brute_force_max(list(star.members), predicate, d=d)
        assert oracle == 15  # a star never contains a forbidden configuration
        assert len(fam) == 15


def test_search_fix_first_equivalence():
    for n in (3, 4):
        plain = search_max(F2, n, 2, COVERING_TRIPLE)
        fixed = search_max(F2, n, 2, COVERING_TRIPLE, fix_first=True)
        assert plain.optimum == fixed.optimum
        assert [s.key for s in plain.witness.members] == [
            s.key for s in fixed.witness.members
        ]


def test_search_parallel_equivalence():
    plain = search_max(F2, 4, 2, COVERING_TRIPLE, fix_first=True)
    par = search_max(F2, 4, 2, COVERING_TRIPLE, fix_first=True, parallel=True)
    assert plain.optimum == par.optimum
    assert [s.key for s in plain.witness.members] == [
        s.key for s in par.witness.members
    ]


def test_search_monotonicity_3cluster_vs_covering():
    for n, k in ((3, 2), (4, 2)):
        ct = search_max(F2, n, k, COVERING_TRIPLE)
        cl = search_max(F2, n, k, THREE_CLUSTER)
        assert cl.optimum <= ct.optimum


def test_search_timeout_zero():
    report = search_max(F2, 4, 2, COVERING_TRIPLE, time_limit=0.0)
    assert not report.optimality_proved
    assert report.optimum == report.star_bound == 7
    assert len(report.witness) == 7
    assert star_centers(report.witness)


def test_search_d2_is_intersecting_maximum():
    """2-cluster-free means intersecting; the maximum is the star bound."""
    from qclusters.grassmann import enum_grassmannian

    report = search_max(F2, 4, 2, D_CLUSTER, d=2)
    oracle, _ = brute_force_max(list(enum_grassmannian(F2, 4, 2)), D_CLUSTER, 2)
    assert report.optimum == oracle == 7
    assert report.optimality_proved


def test_search_d4_exploratory():
    report = search_max(F2, 4, 2, D_CLUSTER, d=4)
    assert report.optimum == 7
    assert report.optimality_proved
    assert find_forbidden(report.witness, D_CLUSTER, 4) is None


def test_enumerate_maxima_4_2():
    results = list(enumerate_maxima(F2, 4, 2, COVERING_TRIPLE, 7))
    assert len(results) == 15
    assert all(is_star for _, is_star in results)
    keys = {tuple(s.key for s in fam.members) for fam, _ in results}
    assert len(keys) == 15


def test_enumerate_maxima_singleton_ground():
    results = list(enumerate_maxima(F2, 1, 1, COVERING_TRIPLE, 1))
    assert len(results) == 1
    fam, is_star = results[0]
    assert len(fam) == 1 and is_star


def test_enumeration_matches_brute_force_on_restricted_ground():
    """Every optimum-sized family, exhaustively, against a combinations scan."""
    from qclusters.families import is_covering_triple
    from qclusters.search import GroundSet, _TripleEnumerate, _pair_compat_masks

    ground_elems = list(enum_grassmannian(F2, 4, 2))[:20]
    opt, _, _ = __import__("qclusters.search", fromlist=["max_family_over"]).max_family_over(
        ground_elems, COVERING_TRIPLE
    )
    ground = GroundSet(ground_elems)
    compat = _pair_compat_masks(ground, COVERING_TRIPLE, None)
    enum = _TripleEnumerate(compat, opt, None)
    enum.extend([], ground.full_mask, [])
    got = sorted(enum.found)

    elems = ground.elements
    expected = []
    for combo in itertools.combinations(range(len(elems)), opt):
        fine = True
        for t in itertools.combinations(combo, 3):
            if is_covering_triple(elems[t[0]], elems[t[1]], elems[t[2]]):
                fine = False
                break
        if fine:
            expected.append(tuple(combo))
    assert got == sorted(expected) and len(got) > 0


def test_witness_is_lex_min():
    report = search_max(F2, 4, 2, COVERING_TRIPLE)
    maxima = [fam for fam, _ in enumerate_maxima(F2, 4, 2, COVERING_TRIPLE, 7)]
    keys = sorted(tuple(s.key for s in fam.members) for fam in maxima)
    assert tuple(s.key for s in report.witness.members) == keys[0]


# -- inclusion graphs and matchings -------------------------------------------


def test_inclusion_graph_4_2():
    pivot = sp(4, (1, 0, 0, 0), (0, 1, 0, 0))
    g = build_inclusion_graph(F2, 4, 2, 1, pivot)
    assert len(g.x_vertices) == 12 and len(g.y_vertices) == 12
    # i = k/2: perfect pairing, each X vertex adjacent to itself on the Y side
    assert all(len(nbrs) == 1 for nbrs in g.adjacency)
    res = one_to_m_matching(g, 1)
    assert res.assignment is not None
    parts = partition_y(g, res.assignment)
    covered = sorted(y for ys in parts.values() for y in ys)
    assert covered == list(range(12))
    assert all(len(ys) >= 1 for ys in parts.values())


def test_inclusion_graph_rejects_bad_layer():
    pivot = sp(4, (1, 0, 0, 0), (0, 1, 0, 0))
    with pytest.raises(BadLayer):
        build_inclusion_graph(F2, 4, 2, 2, pivot)
    with pytest.raises(BadLayer):
        build_inclusion_graph(F2, 3, 2, 1, sp(3, (1, 0, 0), (0, 1, 0)))


def test_one_to_m_trivial_cases():
    g = BipartiteGraph(("x",), ("y1", "y2", "y3"), ((0, 1, 2),))
    res = one_to_m_matching(g, 3)
    assert res.assignment == ((0, 1, 2),)
    bad = BipartiteGraph(("x1", "x2"), ("y1", "y2"), ((0, 1), (0, 1)))
    res2 = one_to_m_matching(bad, 2)
    assert res2.assignment is None
    assert res2.deficient == (0, 1)


@st.composite
def random_bipartite(draw):
    nx = draw(st.integers(1, 6))
    ny = draw(st.integers(1, 8))
    adjacency = []
    for _ in range(nx):
        nbrs = draw(
            st.lists(st.integers(0, ny - 1), min_size=0, max_size=ny, unique=True)
        )
        adjacency.append(tuple(sorted(nbrs)))
    m = draw(st.integers(1, 3))
    return BipartiteGraph(tuple(range(nx)), tuple(range(ny)), tuple(adjacency)), m


@given(random_bipartite())
@settings(max_examples=200, deadline=None)
def test_one_to_m_valid_or_verifiable_deficiency(data):
    g, m = data
    res = one_to_m_matching(g, m)
    assert (res.assignment is None) != (res.deficient is None)
    if res.assignment is not None:
        used = set()
        for x, ys in enumerate(res.assignment):
            assert len(ys) == m and len(set(ys)) == m
            for y in ys:
                assert y in g.adjacency[x] and y not in used
                used.add(y)
    else:
        s = res.deficient
        neigh = set()
        for x in s:
            neigh.update(g.adjacency[x])
        assert len(neigh) < m * len(s)


def test_partition_y_assigns_leftovers_to_first_superset():
    # x0 matched to y0; y1 unmatched and adjacent to x0 and x1: goes to x0
    g = BipartiteGraph((0, 1), (0, 1), ((0, 1), (1,)))
    res = one_to_m_matching(g, 1)
    assert res.assignment is not None
    parts = partition_y(g, res.assignment)
    assert sorted(y for ys in parts.values() for y in ys) == [0, 1]


def test_partition_y_single_x_takes_everything():
    g = BipartiteGraph(("x",), ("y1", "y2", "y3"), ((0, 1, 2),))
    res = one_to_m_matching(g, 1)
    parts = partition_y(g, res.assignment)
    assert parts == {0: (0, 1, 2)}
