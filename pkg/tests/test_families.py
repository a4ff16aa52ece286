"""Family predicates and the claiming machinery."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from qclusters.errors import (
    BadArity,
    BadLayer,
    EmptyFamily,
    HypothesisViolated,
    MixedAmbient,
    MixedDimension,
    NotCoveringTripleFree,
    NotDistinct,
    PivotNotMember,
)
from qclusters.gfq import make_field
from qclusters.grassmann import enum_grassmannian, enum_skew_to, subspace_from_vectors
from qclusters.families import (
    COVERING_TRIPLE,
    D_CLUSTER,
    THREE_CLUSTER,
    Family,
    check_common_form,
    check_layer_inequality,
    check_phi_lemma,
    cross_intersecting_bound,
    family_new,
    find_forbidden,
    is_3_cluster,
    is_covering_triple,
    is_d_cluster,
    is_intersecting,
    layer_partition,
    phi_context,
    phi_inverse,
    star_centers,
    star_family,
)
from qclusters.qarith import gauss_binom

F2 = make_field(2)


def sp(*vectors, n=4):
    return subspace_from_vectors(F2, n, vectors)


E1, E2, E3, E4 = (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
A = sp(E1, E2)
B13 = sp(E1, E3)
C23 = sp(E2, E3)
B34 = sp(E3, E4)
CX = sp(E4, (0, 1, 1, 0))  # <e4, e2+e3>, skew to both A and B13


# -- family construction ------------------------------------------------------


def test_family_dedup_and_order():
    other_basis = sp((1, 1, 0, 0), (0, 1, 0, 0))  # same plane as A
    fam = family_new(F2, 4, 2, [A, other_basis, B13])
    assert len(fam) == 2
    assert list(fam.members) == sorted(fam.members)
    assert A in fam and B34 not in fam


def test_family_validation():
    with pytest.raises(MixedDimension):
        Family(F2, 4, 2, [sp(E1)])
    f3 = make_field(3)
    alien = subspace_from_vectors(f3, 4, [E1, E2])
    with pytest.raises(MixedAmbient):
        Family(F2, 4, 2, [alien])
    assert len(Family(F2, 4, 2, [])) == 0


def test_star_family_sizes():
    assert len(star_family(F2, 4, 2, E1)) == 7
    assert len(star_family(F2, 5, 2, (1, 0, 0, 0, 0))) == 15
    single = star_family(F2, 4, 1, (0, 1, 1, 0))
    assert len(single) == 1 and single.members[0] == sp((0, 1, 1, 0))


def test_star_family_all_contain_center():
    center = (1, 1, 0, 1, 0)
    star = star_family(F2, 5, 2, center)
    c = subspace_from_vectors(F2, 5, [center])
    assert all(m.contains(c) for m in star.members)
    assert len(star) == gauss_binom(4, 1, 2)


# -- predicates ---------------------------------------------------------------


def test_intersecting():
    assert is_intersecting(star_family(F2, 4, 2, E1))
    assert not is_intersecting(Family(F2, 4, 2, [A, B34]))
    assert not is_intersecting(Family(F2, 4, 2, list(enum_grassmannian(F2, 4, 2))))


def test_star_centers():
    star5 = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    centers = star_centers(star5)
    assert centers == {subspace_from_vectors(F2, 5, [(1, 0, 0, 0, 0)])}
    assert len(star_centers(Family(F2, 4, 2, [A]))) == 3
    assert star_centers(Family(F2, 4, 2, [A, B34])) == frozenset()
    with pytest.raises(EmptyFamily):
        star_centers(Family(F2, 4, 2, []))


def test_covering_triple_examples():
    assert is_covering_triple(A, B13, C23)
    assert is_covering_triple(A, B13, C23, ordered=True)
    # pivot must be the one that splits: <e1,e3> = <e1> + <e3>
    assert is_covering_triple(B13, A, B34, ordered=True)
    assert not is_covering_triple(A, B34, B13, ordered=True)
    assert is_covering_triple(A, B34, B13)
    assert not is_covering_triple(A, B13, CX)


def test_three_cluster_examples():
    assert is_3_cluster(A, B13, C23)
    assert not is_3_cluster(A, B13, sp(E1, E4))  # common line <e1>
    assert is_3_cluster(A, B13, CX)  # cluster but not a covering triple
    assert not is_covering_triple(A, B13, CX)


def test_predicate_argument_validation():
    with pytest.raises(NotDistinct):
        is_covering_triple(A, A, B13)
    with pytest.raises(NotDistinct):
        is_3_cluster(A, B13, B13)
    f3 = make_field(3)
    alien = subspace_from_vectors(f3, 4, [E1, E2])
    with pytest.raises(MixedAmbient):
        is_covering_triple(A, B13, alien)
    with pytest.raises(BadArity):
        is_d_cluster([A])


def test_d_cluster_matches_skew_and_triples():
    assert is_d_cluster([A, B34])  # skew pair
    assert not is_d_cluster([A, B13])
    planes = list(enum_grassmannian(F2, 4, 2))
    for triple in itertools.combinations(planes[:12], 3):
        assert is_d_cluster(triple) == is_3_cluster(*triple)


def test_d_cluster_four_planes_through_a_line():
    through = [m for m in star_family(F2, 4, 2, E1).members][:4]
    assert not is_d_cluster(through)


def test_covering_triples_are_3_clusters_spot():
    planes = list(enum_grassmannian(F2, 4, 2))
    hits = 0
    for triple in itertools.combinations(planes[:15], 3):
        if is_covering_triple(*triple):
            hits += 1
            assert is_3_cluster(*triple)
    assert hits > 0


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_predicates_invariant_under_basis_change(seed):
    """Random invertible coordinate change preserves both triple predicates."""
    import random

    rng = random.Random(seed)
    planes = list(enum_grassmannian(F2, 4, 2))
    tri = rng.sample(planes, 3)
    # random invertible 4x4 over GF(2)
    while True:
        g = [[rng.randrange(2) for _ in range(4)] for _ in range(4)]
        gm = subspace_from_vectors(F2, 4, g)
        if gm.k == 4:
            break

    def apply(s):
        rows = []
        for row in s.basis.to_rows():
            out = [0] * 4
            for c, grow in zip(row, g):
                if c:
                    out = [F2.add(o, x) for o, x in zip(out, grow)]
            rows.append(out)
        return subspace_from_vectors(F2, 4, rows)

    mapped = [apply(s) for s in tri]
    assert is_covering_triple(*tri) == is_covering_triple(*mapped)
    assert is_3_cluster(*tri) == is_3_cluster(*mapped)


def test_find_forbidden():
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    assert find_forbidden(star, THREE_CLUSTER) is None
    assert find_forbidden(star, COVERING_TRIPLE) is None
    bad = Family(F2, 4, 2, [A, B34, B13])
    witness = find_forbidden(bad, COVERING_TRIPLE)
    assert witness is not None and is_covering_triple(*witness)
    assert find_forbidden(Family(F2, 4, 2, [A, B34]), COVERING_TRIPLE) is None
    with pytest.raises(BadArity):
        find_forbidden(bad, D_CLUSTER)


def test_find_forbidden_returns_lex_first():
    planes = list(enum_grassmannian(F2, 4, 2))
    fam = Family(F2, 4, 2, planes)
    witness = find_forbidden(fam, COVERING_TRIPLE)
    members = fam.members
    expect = next(
        t for t in itertools.combinations(members, 3) if is_covering_triple(*t)
    )
    assert witness == expect


def test_find_forbidden_agrees_with_reference_on_random_families():
    planes = list(enum_grassmannian(F2, 4, 2))
    import random

    rng = random.Random(7)
    for _ in range(25):
        fam = Family(F2, 4, 2, rng.sample(planes, 6))
        got = find_forbidden(fam, COVERING_TRIPLE)
        ref = next(
            (
                t
                for t in itertools.combinations(fam.members, 3)
                if is_covering_triple(*t)
            ),
            None,
        )
        assert got == ref
        got3 = find_forbidden(fam, THREE_CLUSTER)
        ref3 = next(
            (t for t in itertools.combinations(fam.members, 3) if is_3_cluster(*t)),
            None,
        )
        assert got3 == ref3


# -- claiming machinery -------------------------------------------------------


def test_phi_context_star():
    star = star_family(F2, 4, 2, E1)
    ctx = phi_context(star, A)
    assert not ctx.f_star
    assert ctx.i_of(A) == 2
    for b in star.members:
        if b == A:
            continue
        assert ctx.i_of(b) == 1
        assert ctx.witnesses_of(b) == (A,)
        assert len(ctx.claims_of(b)) == 2  # q^(i(k-i))
        for d in ctx.claims_of(b):
            assert d.k == 1 and d.intersection_dim(A) == 0 and b.contains(d)


def test_phi_context_pivot_must_be_member():
    star = star_family(F2, 4, 2, E1)
    with pytest.raises(PivotNotMember):
        phi_context(star, B34)


def test_phi_context_mixed_family():
    fam = Family(F2, 4, 2, [A, B34, B13])
    ctx = phi_context(fam, A)
    assert ctx.i_of(B34) == 1
    assert ctx.witnesses_of(B34) == (B13,)
    claimed = {d.basis.to_rows() for d in ctx.claims_of(B34)}
    assert claimed == {((0, 0, 0, 1),), ((0, 0, 1, 1),)}


def test_phi_context_isolated():
    fam = Family(F2, 4, 2, [A])
    ctx = phi_context(fam, A)
    assert A in ctx.f_star
    assert len(ctx.claims_of(A, dim=1)) == 3 == gauss_binom(2, 1, 2)
    assert len(ctx.claims_of(A, dim=2)) == 1


def test_phi_inverse():
    star = star_family(F2, 4, 2, E1)
    ctx = phi_context(star, A)
    d = sp(E3)
    inv = phi_inverse(ctx, d)
    assert inv == (sp(E1, E3),)
    assert all(b.contains(d) for b in inv)
    # a subspace meeting the pivot is claimed by nobody
    assert phi_inverse(ctx, sp(E1)) == ()
    assert phi_inverse(ctx, sp((0, 0, 1, 1))) != ()


def test_phi_inverse_roundtrip_small():
    fam = Family(F2, 4, 2, [A, B34, B13])
    ctx = phi_context(fam, A)
    for b in fam.members:
        for d in ctx.claims_of(b):
            assert b in phi_inverse(ctx, d)


def test_layer_partition_star():
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    pivot = star.members[0]
    layers = layer_partition(phi_context(star, pivot))
    assert len(layers[1]) == 14
    assert layers[2] == (pivot,)


def test_layer_partition_isolated_in_every_layer():
    fam = Family(F2, 4, 2, [A, B34])
    ctx = phi_context(fam, A)
    layers = layer_partition(ctx)
    assert A in layers[1] and A in layers[2]
    assert B34 in layers[1] and B34 in layers[2]


def test_check_phi_lemma_on_contexts():
    star = star_family(F2, 4, 2, E1)
    assert check_phi_lemma(phi_context(star, A)).all_ok
    mixed = Family(F2, 4, 2, [A, B34, B13])
    assert check_phi_lemma(phi_context(mixed, A)).all_ok
    single = Family(F2, 4, 2, [A])
    assert check_phi_lemma(phi_context(single, A)).all_ok
    star5 = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    assert check_phi_lemma(phi_context(star5, star5.members[3])).all_ok


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_phi_index_range_random_families(seed):
    import random

    rng = random.Random(seed)
    planes = list(enum_grassmannian(F2, 4, 2))
    fam = Family(F2, 4, 2, rng.sample(planes, rng.randrange(2, 8)))
    pivot = fam.members[rng.randrange(len(fam))]
    ctx = phi_context(fam, pivot)
    assert pivot in ctx.f_star or ctx.i_of(pivot) == 2
    for b in fam.members:
        if b in ctx.f_star or b == pivot:
            continue
        assert 1 <= ctx.i_of(b) <= fam.k - 1


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_phi_claim_structure_on_arbitrary_families(seed):
    """The claiming-map facts are definitional: they hold with or without
    forbidden configurations present."""
    import random

    rng = random.Random(seed)
    planes = list(enum_grassmannian(F2, 4, 2))
    fam = Family(F2, 4, 2, rng.sample(planes, rng.randrange(2, 9)))
    pivot = fam.members[rng.randrange(len(fam))]
    rep = check_phi_lemma(phi_context(fam, pivot))
    assert rep.all_ok, rep.failures[:3]


def test_phi_lemma_on_search_witness():
    from qclusters.search import search_max

    report = search_max(F2, 4, 2, COVERING_TRIPLE)
    ctx = phi_context(report.witness, report.witness.members[0])
    assert check_phi_lemma(ctx).all_ok


def test_check_common_form_star():
    star = star_family(F2, 4, 2, E1)
    ctx = phi_context(star, A)
    e = sp(E3)
    c = check_common_form(ctx, e, e)
    assert c == A


def test_check_common_form_nested_k3():
    """k = 3 exercises the D strictly inside E branch."""
    star = star_family(F2, 6, 3, (1, 0, 0, 0, 0, 0))
    pivot = star.members[0]
    ctx = phi_context(star, pivot)
    e = None
    from qclusters.grassmann import enum_skew_to, subspaces_of

    for cand in enum_skew_to(pivot, 2):
        if phi_inverse(ctx, cand):
            e = cand
            break
    assert e is not None
    c = check_common_form(ctx, e, e)
    assert c is not None
    for d in subspaces_of(e, 1):
        c2 = check_common_form(ctx, e, d)
        assert c2 is not None
        for b in phi_inverse(ctx, d):
            meet = b.intersect(c2)
            assert d.intersection_dim(meet) == 0
            assert d.sum(meet) == b


def test_check_common_form_hypotheses():
    star = star_family(F2, 4, 2, E1)
    ctx = phi_context(star, A)
    with pytest.raises(HypothesisViolated):
        check_common_form(ctx, sp(E1), sp(E1))  # not skew to pivot
    two = Family(F2, 4, 2, [A, B34])
    ctx2 = phi_context(two, A)
    with pytest.raises(HypothesisViolated):
        check_common_form(ctx2, sp(E3), sp(E3))  # isolated claimant
    with pytest.raises(HypothesisViolated):
        check_common_form(ctx2, sp((1, 0, 1, 0)), sp((1, 0, 1, 0)))  # no claimant
    bad = Family(F2, 4, 2, [A, B34, B13])
    with pytest.raises(HypothesisViolated):
        check_common_form(phi_context(bad, A), sp(E3), sp(E3))  # covering triple


def test_check_layer_inequality_star_equality():
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    ctx = phi_context(star, star.members[0])
    lhs, rhs, holds = check_layer_inequality(ctx, 1)
    assert (lhs, rhs, holds) == (28, 28, True)


def test_check_layer_inequality_subfamily_strict():
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    sub = Family(F2, 5, 2, star.members[:3])
    lhs, rhs, holds = check_layer_inequality(phi_context(sub, sub.members[0]), 1)
    assert holds and lhs == 4 and rhs == 28


def test_check_layer_inequality_guards():
    star = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    ctx = phi_context(star, star.members[0])
    with pytest.raises(BadLayer):
        check_layer_inequality(ctx, 2)
    bad = Family(F2, 4, 2, [A, B34, B13])
    with pytest.raises(NotCoveringTripleFree):
        check_layer_inequality(phi_context(bad, A), 1)


def test_cross_intersecting_bound_cases():
    star_k = star_family(F2, 5, 2, (1, 0, 0, 0, 0))
    star_nk = star_family(F2, 5, 3, (1, 0, 0, 0, 0))
    cb = cross_intersecting_bound(star_k, star_nk)
    assert cb.alpha == 8 and cb.lhs == cb.rhs == 155
    assert cb.holds and cb.is_equality and cb.equality_floor_ok
    pruned = Family(F2, 5, 2, star_k.members[:-2])
    cb2 = cross_intersecting_bound(pruned, star_nk)
    assert cb2.holds and not cb2.is_equality
    crossing = Family(F2, 5, 3, [subspace_from_vectors(F2, 5, [E1 + (0,), E2 + (0,), E3 + (0,)])])
    not_meeting = Family(
        F2, 5, 2, [subspace_from_vectors(F2, 5, [(0, 0, 0, 1, 0), (0, 0, 0, 0, 1)])]
    )
    with pytest.raises(HypothesisViolated):
        cross_intersecting_bound(not_meeting, crossing)
    with pytest.raises(HypothesisViolated):
        cross_intersecting_bound(star_k, star_nk, alpha=2)


def test_half_dimension_cross_bound_uses_alpha_one():
    star_k = star_family(F2, 4, 2, E1)
    cb = cross_intersecting_bound(star_k, star_k)
    assert cb.alpha == 1
    assert cb.lhs == 14 and cb.rhs == 14 and cb.equality_floor_ok
