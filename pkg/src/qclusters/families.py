"""Families of equal-dimension subspaces and their forbidden configurations.

A covering triple is an ordered triple (A, B, C) of distinct k-spaces with
A = (A ∩ B) ⊕ (A ∩ C); the unordered predicate accepts any of the three
pivot choices. A 3-cluster is a triple with trivial common intersection
whose join has dimension at most 2k; d-clusters generalize to d members.

PhiContext carries the claiming machinery attached to a family and a pivot
member A: the isolated members F* (skew to everything else), the layer
index i_A, the witness sets I_A, and the claimed-subspace map phi_A, along
with checkers for the structural facts the rest of the toolkit relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, NamedTuple, Optional, Sequence

from .errors import (
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
from .gfq import FieldSpec
from .grassmann import (
    Subspace,
    enum_grassmannian,
    subspace_from_vectors,
    subspaces_of,
)
from .qarith import gauss_binom

COVERING_TRIPLE = "covering-triple"
THREE_CLUSTER = "3-cluster"
D_CLUSTER = "d-cluster"

PREDICATES = (COVERING_TRIPLE, THREE_CLUSTER, D_CLUSTER)


class Family:
    """Duplicate-free set of k-dimensional subspaces of one ambient space.

    Members are kept sorted by canonical key, so iteration order is
    deterministic. Exact duplicates in the input collapse silently (file
    loading is stricter, see familyfile).
    """

    __slots__ = ("field", "n", "k", "members", "_keys", "_forbidden_cache")

    def __init__(
        self,
        field: FieldSpec,
        n: int,
        k: int,
        subspaces: Sequence[Subspace] = (),
    ):
        for s in subspaces:
            if s.field != field or s.n != n:
                raise MixedAmbient(
                    f"member in GF({s.field.q})^{s.n} does not live in GF({field.q})^{n}"
                )
            if s.k != k:
                raise MixedDimension(f"member has dimension {s.k}, family requires {k}")
        unique = {s.key: s for s in subspaces}
        self.field = field
        self.n = n
        self.k = k
        self.members = tuple(sorted(unique.values()))
        self._keys = frozenset(unique)
        self._forbidden_cache: dict = {}

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[Subspace]:
        return iter(self.members)

    def __contains__(self, s: Subspace) -> bool:
        return s.key in self._keys

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Family) and other.members == self.members

    def __hash__(self) -> int:
        return hash(self.members)

    def __repr__(self) -> str:
        return f"Family(q={self.field.q}, n={self.n}, k={self.k}, size={len(self)})"


def family_new(
    field: FieldSpec, n: int, k: int, subspaces: Sequence[Subspace]
) -> Family:
    """Canonicalized, deduplicated family of the given subspaces."""
    return Family(field, n, k, subspaces)


def star_family(field: FieldSpec, n: int, k: int, center: Sequence[int]) -> Family:
    """The full star: every k-dimensional subspace containing <center>.

    Built through the quotient by <center>: members correspond one-to-one
    with (k-1)-dimensional subspaces of an (n-1)-dimensional space.
    """
    center_space = subspace_from_vectors(field, n, [center])
    if center_space.k != 1:
        raise EmptyFamily("star center must be a nonzero vector")
    # complete <center> to a basis; the added rows span a complement
    rows = [list(center_space.basis.row(0))]
    complement: list[list[int]] = []
    from .gfq import _rref_rows  # local: shares the elimination core

    for j in range(n):
        cand = [0] * n
        cand[j] = 1
        trial = [r[:] for r in rows] + [cand]
        kept, _ = _rref_rows(field, trial, n)
        if len(kept) == len(rows) + 1:
            rows.append(cand)
            complement.append(cand)
    members = []
    for coeff in enum_grassmannian(field, n - 1, k - 1):
        vectors = [list(center)]
        for crow in coeff.basis.to_rows():
            vec = [0] * n
            for c, wrow in zip(crow, complement):
                if c:
                    for t in range(n):
                        if wrow[t]:
                            vec[t] = field.add(vec[t], field.mul(c, wrow[t]))
            vectors.append(vec)
        members.append(subspace_from_vectors(field, n, vectors))
    fam = Family(field, n, k, members)
    assert len(fam) == gauss_binom(n - 1, k - 1, field.q)
    return fam


def is_intersecting(fam: Family) -> bool:
    """Every pair of distinct members meets in more than the zero vector."""
    return all(
        a.intersection_dim(b) > 0 for a, b in itertools.combinations(fam.members, 2)
    )


def star_centers(fam: Family) -> frozenset[Subspace]:
    """All 1-dimensional subspaces contained in every member."""
    if not fam.members:
        raise EmptyFamily("star_centers needs at least one member")
    common = fam.members[0]
    for s in fam.members[1:]:
        common = common.intersect(s)
        if common.k == 0:
            return frozenset()
    return frozenset(subspaces_of(common, 1))


def _check_triple(*subs: Subspace) -> None:
    first = subs[0]
    for s in subs[1:]:
        if s.field != first.field or s.n != first.n:
            raise MixedAmbient("configuration members live in different ambient spaces")
        if s.k != first.k:
            raise MixedDimension("configuration members have different dimensions")
    if len({s.key for s in subs}) != len(subs):
        raise NotDistinct("configuration members must be pairwise distinct")


def _is_covering_triple_pivot(a: Subspace, b: Subspace, c: Subspace) -> bool:
    """a = (a ∩ b) ⊕ (a ∩ c), with the direct sum checked explicitly."""
    ab = a.intersect(b)
    ac = a.intersect(c)
    if ab.k + ac.k != a.k:
        return False
    if ab.intersection_dim(ac) != 0:
        return False
    return ab.sum(ac) == a


def is_covering_triple(
    a: Subspace, b: Subspace, c: Subspace, ordered: bool = False
) -> bool:
    """Covering-triple predicate; ordered=True fixes a as the pivot."""
    _check_triple(a, b, c)
    if ordered:
        return _is_covering_triple_pivot(a, b, c)
    return (
        _is_covering_triple_pivot(a, b, c)
        or _is_covering_triple_pivot(b, a, c)
        or _is_covering_triple_pivot(c, a, b)
    )


def is_3_cluster(a: Subspace, b: Subspace, c: Subspace) -> bool:
    """Trivial triple meet and join of dimension at most 2k."""
    _check_triple(a, b, c)
    if a.intersect(b).intersection_dim(c) != 0:
        return False
    return a.sum(b).sum_dim(c) <= 2 * a.k


def is_d_cluster(subspaces: Sequence[Subspace]) -> bool:
    """d distinct k-spaces with trivial common meet and join dimension <= 2k."""
    if len(subspaces) < 2:
        raise BadArity(f"a cluster needs at least 2 subspaces, got {len(subspaces)}")
    _check_triple(*subspaces)
    k = subspaces[0].k
    meet = subspaces[0]
    for s in subspaces[1:]:
        meet = meet.intersect(s)
        if meet.k == 0:
            break
    if meet.k != 0:
        return False
    join = subspaces[0]
    for s in subspaces[1:]:
        join = join.sum(s)
        if join.k > 2 * k:
            return False
    return join.k <= 2 * k


def find_forbidden(
    fam: Family, predicate: str, d: int | None = None
) -> Optional[tuple[Subspace, ...]]:
    """First forbidden configuration in the family's canonical order, or None.

    Works from cached pairwise intersections and sums, so large families
    (hundreds of members) stay tractable; the per-triple tests agree with
    the is_covering_triple / is_3_cluster reference predicates.
    """
    if predicate == D_CLUSTER and (d is None or d < 2):
        raise BadArity(f"d-cluster predicate needs d >= 2, got {d}")
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; expected one of {PREDICATES}")
    cache_key = (predicate, d)
    if cache_key in fam._forbidden_cache:
        return fam._forbidden_cache[cache_key]
    result = _find_forbidden_uncached(fam, predicate, d)
    fam._forbidden_cache[cache_key] = result
    return result


def _find_forbidden_uncached(
    fam: Family, predicate: str, d: int | None
) -> Optional[tuple[Subspace, ...]]:
    members = fam.members
    m = len(members)
    k = fam.k
    if predicate == D_CLUSTER and d is not None and d != 3:
        for tup in itertools.combinations(members, d):
            if is_d_cluster(tup):
                return tup
        return None
    # triple predicates: precompute pairwise meets, walk triples in lex order
    meet: dict[tuple[int, int], Subspace] = {}
    for i, j in itertools.combinations(range(m), 2):
        meet[(i, j)] = members[i].intersect(members[j])
    if predicate == COVERING_TRIPLE:
        for i in range(m - 2):
            for j in range(i + 1, m - 1):
                mij = meet[(i, j)]
                for l in range(j + 1, m):
                    mil, mjl = meet[(i, l)], meet[(j, l)]
                    if (
                        (mij.k + mil.k == k and mij.intersection_dim(mil) == 0)
                        or (mij.k + mjl.k == k and mij.intersection_dim(mjl) == 0)
                        or (mil.k + mjl.k == k and mil.intersection_dim(mjl) == 0)
                    ):
                        return (members[i], members[j], members[l])
        return None
    # 3-cluster (directly or as d-cluster with d = 3: identical predicate)
    twok = 2 * k
    for i in range(m - 2):
        for j in range(i + 1, m - 1):
            mij = meet[(i, j)]
            sij = members[i].sum(members[j])
            for l in range(j + 1, m):
                if mij.k and mij.intersection_dim(members[l]) != 0:
                    continue
                if sij.sum_dim(members[l]) <= twok:
                    return (members[i], members[j], members[l])
    return None


# ---------------------------------------------------------------------------
# claiming machinery
# ---------------------------------------------------------------------------


class PhiContext:
    """Layer indices, witness sets and claimed subspaces for a fixed pivot.

    For a member B that is not isolated:
      * i_of(B) is dim(A ∩ B) when that is positive, otherwise the smallest
        positive intersection dimension of B with any other member;
      * witnesses_of(B) is {A} in the first case, otherwise every member
        realizing that minimum;
      * claims_of(B) is the set of (k - i)-dimensional subspaces D of B that
        are skew to at least one witness.
    Isolated members (skew to every other member) claim every subspace of
    themselves; their claims are materialized per requested dimension.
    """

    def __init__(self, family: Family, pivot: Subspace):
        if pivot not in family:
            raise PivotNotMember("pivot must belong to the family")
        self.family = family
        self.pivot = pivot
        members = family.members
        dims: dict[tuple[bytes, bytes], int] = {}
        for x, y in itertools.combinations(members, 2):
            d = x.intersection_dim(y)
            dims[(x.key, y.key)] = d
            dims[(y.key, x.key)] = d

        def dim_of(x: Subspace, y: Subspace) -> int:
            return dims[(x.key, y.key)]

        self.f_star = frozenset(
            b
            for b in members
            if all(dim_of(b, c) == 0 for c in members if c.key != b.key)
        )
        i_map: dict[bytes, int] = {}
        witness_map: dict[bytes, tuple[Subspace, ...]] = {}
        for b in members:
            if b in self.f_star:
                continue
            d_ab = pivot.intersection_dim(b) if b.key != pivot.key else b.k
            if d_ab > 0:
                i_map[b.key] = d_ab
                witness_map[b.key] = (pivot,)
            else:
                positive = [
                    dim_of(b, c)
                    for c in members
                    if c.key != b.key and dim_of(b, c) > 0
                ]
                i = min(positive)
                i_map[b.key] = i
                witness_map[b.key] = tuple(
                    c for c in members if c.key != b.key and dim_of(b, c) == i
                )
        self._i_map = i_map
        self._witness_map = witness_map
        self._claims: dict[bytes, tuple[Subspace, ...]] = {}
        self._star_claims: dict[tuple[bytes, int], tuple[Subspace, ...]] = {}

    def is_isolated(self, b: Subspace) -> bool:
        return b in self.f_star

    def i_of(self, b: Subspace) -> int:
        return self._i_map[b.key]

    def witnesses_of(self, b: Subspace) -> tuple[Subspace, ...]:
        return self._witness_map[b.key]

    def claims_of(self, b: Subspace, dim: int | None = None) -> tuple[Subspace, ...]:
        """Claimed subspaces of b; dim selects a dimension for isolated members."""
        if b in self.f_star:
            if dim is None:
                raise BadLayer(
                    "claims of an isolated member are materialized per dimension"
                )
            key = (b.key, dim)
            if key not in self._star_claims:
                self._star_claims[key] = tuple(sorted(subspaces_of(b, dim)))
            return self._star_claims[key]
        if b.key not in self._claims:
            i = self._i_map[b.key]
            witnesses = self._witness_map[b.key]
            claimed = [
                d
                for d in subspaces_of(b, b.k - i)
                if any(d.intersection_dim(c) == 0 for c in witnesses)
            ]
            self._claims[b.key] = tuple(sorted(claimed))
        found = self._claims[b.key]
        if dim is not None and found and found[0].k != dim:
            return ()
        return found


def phi_context(fam: Family, pivot: Subspace) -> PhiContext:
    """Build the claiming machinery for the family with the given pivot."""
    return PhiContext(fam, pivot)


def phi_inverse(ctx: PhiContext, d: Subspace) -> tuple[Subspace, ...]:
    """Members whose claim set contains d. Empty when d meets the pivot."""
    if d.intersection_dim(ctx.pivot) != 0:
        return ()
    out = []
    for b in ctx.family.members:
        if b in ctx.f_star:
            if b.contains(d):
                out.append(b)
        else:
            expected = b.k - ctx.i_of(b)
            if d.k == expected and any(
                c.key == d.key for c in ctx.claims_of(b)
            ):
                out.append(b)
    return tuple(out)


def layer_partition(ctx: PhiContext) -> dict[int, tuple[Subspace, ...]]:
    """Layer i holds the members with index i plus every isolated member.

    Isolated members appear in every layer, so layers are not disjoint when
    F* is nonempty; the pivot sits alone in layer k.
    """
    k = ctx.family.k
    layers: dict[int, list[Subspace]] = {i: [] for i in range(1, k + 1)}
    for b in ctx.family.members:
        if b in ctx.f_star:
            for i in range(1, k + 1):
                layers[i].append(b)
        else:
            layers[ctx.i_of(b)].append(b)
    return {i: tuple(sorted(v)) for i, v in layers.items()}


def _is_direct_sum(whole: Subspace, left: Subspace, right: Subspace) -> bool:
    return (
        left.k + right.k == whole.k
        and left.intersection_dim(right) == 0
        and left.sum(right) == whole
    )


@dataclass
class PhiLemmaReport:
    """Outcome of the structural checks on a PhiContext, one flag per fact."""

    witness_dims_ok: bool = True
    claim_characterization_ok: bool = True
    skew_floor_ok: bool = True
    claim_bound_ok: bool = True
    isolated_counts_ok: bool = True
    failures: list[str] = dc_field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return (
            self.witness_dims_ok
            and self.claim_characterization_ok
            and self.skew_floor_ok
            and self.claim_bound_ok
            and self.isolated_counts_ok
        )


def check_phi_lemma(ctx: PhiContext) -> PhiLemmaReport:
    """Verify the claiming-map facts on every member of the context's family.

    Checks, member by member: witness intersections realize the layer index;
    a subspace of the right dimension is claimed exactly when some witness
    is skew to it, and then the claimed subspace complements B ∩ C inside B;
    members skew to the pivot never meet another member below their index;
    claim counts reach q^(i(k-i)) with the stated equality condition; and
    isolated members claim all [k, i]_q subspaces of each dimension i.
    """
    report = PhiLemmaReport()
    fam = ctx.family
    q = fam.field.q
    k = fam.k
    for b in fam.members:
        if b in ctx.f_star:
            for i in range(1, k):
                count = len(ctx.claims_of(b, dim=i))
                expected = gauss_binom(k, i, q)
                if count != expected or count <= q ** (i * (k - i)):
                    report.isolated_counts_ok = False
                    report.failures.append(
                        f"isolated member {b!r} claims {count} subspaces of dim {i},"
                        f" expected {expected} > {q ** (i * (k - i))}"
                    )
            continue
        i = ctx.i_of(b)
        witnesses = ctx.witnesses_of(b)
        for c in witnesses:
            if b.intersection_dim(c) != i:
                report.witness_dims_ok = False
                report.failures.append(f"witness {c!r} of {b!r} misses index {i}")
        claimed_keys = {d.key for d in ctx.claims_of(b)}
        for d in subspaces_of(b, k - i):
            skew_witnesses = [c for c in witnesses if d.intersection_dim(c) == 0]
            if d.key in claimed_keys:
                if not skew_witnesses:
                    report.claim_characterization_ok = False
                    report.failures.append(f"{d!r} claimed by {b!r} without witness")
                elif not any(
                    _is_direct_sum(b, d, b.intersect(c)) for c in skew_witnesses
                ):
                    report.claim_characterization_ok = False
                    report.failures.append(
                        f"{d!r} claimed by {b!r} but no witness gives a direct sum"
                    )
                if witnesses == (ctx.pivot,) and not _is_direct_sum(
                    b, d, b.intersect(ctx.pivot)
                ):
                    report.claim_characterization_ok = False
                    report.failures.append(
                        f"{d!r} claimed by {b!r} but B != D + (B ∩ pivot)"
                    )
            elif skew_witnesses:
                report.claim_characterization_ok = False
                report.failures.append(f"{d!r} not claimed by {b!r} despite witness")
        if b.intersection_dim(ctx.pivot) == 0 and b.key != ctx.pivot.key:
            for c in fam.members:
                if c.key == b.key:
                    continue
                d_bc = b.intersection_dim(c)
                if d_bc == 0:
                    continue
                if d_bc < i:
                    report.skew_floor_ok = False
                    report.failures.append(
                        f"{b!r} meets {c!r} in dimension {d_bc} below index {i}"
                    )
                for d in ctx.claims_of(b):
                    if d.intersection_dim(c) == 0 and not _is_direct_sum(
                        b, d, b.intersect(c)
                    ):
                        report.skew_floor_ok = False
                        report.failures.append(
                            f"claimed {d!r} skew to {c!r} but B != D + (B ∩ C)"
                        )
        count = len(ctx.claims_of(b))
        floor = q ** (i * (k - i))
        if count < floor:
            report.claim_bound_ok = False
            report.failures.append(f"{b!r} claims {count} < {floor}")
        elif count == floor:
            meets = {b.intersect(c).key for c in witnesses}
            if len(meets) != 1:
                report.claim_bound_ok = False
                report.failures.append(
                    f"{b!r} meets witnesses in different subspaces despite tight count"
                )
    return report


def check_common_form(
    ctx: PhiContext, e: Subspace, d: Subspace
) -> Optional[Subspace]:
    """Find one member C with B = D ⊕ (B ∩ C) for every B claiming d.

    Follows the guaranteed construction: take the first claimant of e and
    its first witness skew to e. Returns None only if that witness fails,
    which would contradict the covering-triple-free hypothesis.
    """
    fam = ctx.family
    k = fam.k
    if find_forbidden(fam, COVERING_TRIPLE) is not None:
        raise HypothesisViolated("family contains a covering triple")
    if e.intersection_dim(ctx.pivot) != 0:
        raise HypothesisViolated("e must be skew to the pivot")
    if not (k / 2 <= e.k <= k - 1):
        raise HypothesisViolated(f"need k/2 <= dim(e) <= k-1, got dim(e)={e.k}")
    if d.key != e.key and not (e.contains(d) and d.k == k - e.k):
        raise HypothesisViolated("d must equal e or be a (k - dim e)-subspace of e")
    claimants_e = phi_inverse(ctx, e)
    if not claimants_e:
        raise HypothesisViolated("no member claims e")
    if any(b in ctx.f_star for b in claimants_e):
        raise HypothesisViolated("an isolated member claims e")
    b_star = claimants_e[0]
    c_star = None
    for c in ctx.witnesses_of(b_star):
        if c.intersection_dim(e) == 0:
            c_star = c
            break
    if c_star is None:
        return None
    for b in phi_inverse(ctx, d):
        if not _is_direct_sum(b, d, b.intersect(c_star)):
            return None
    return c_star


class LayerBound(NamedTuple):
    lhs: int
    rhs: int
    holds: bool


def check_layer_inequality(ctx: PhiContext, i: int) -> LayerBound:
    """Compare |F_i| + |F_(k-i)| with its product-formula ceiling.

    At i = k/2 the two layers coincide and the single layer is counted
    twice, mirroring the double-counted pair convention the bound comes
    from (stars then attain equality).
    """
    fam = ctx.family
    k, q, n = fam.k, fam.field.q, fam.n
    if not 1 <= i <= k / 2:
        raise BadLayer(f"need 1 <= i <= k/2, got i={i}, k={k}")
    if find_forbidden(fam, COVERING_TRIPLE) is not None:
        raise NotCoveringTripleFree("layer bound applies to covering-triple-free families")
    layers = layer_partition(ctx)
    lhs = len(layers[i]) + len(layers[k - i])
    rhs = q ** ((k - i) ** 2) * gauss_binom(n - k, k - i, q) * gauss_binom(
        k - 1, i - 1, q
    ) + q ** (i**2) * gauss_binom(n - k, i, q) * gauss_binom(k - 1, i, q)
    return LayerBound(lhs, rhs, lhs <= rhs)


class CrossBound(NamedTuple):
    alpha: int
    lhs: int
    rhs: int
    holds: bool
    is_equality: bool
    equality_floor_ok: bool


def cross_intersecting_bound(
    g_k: Family, g_nk: Family, alpha: int | None = None
) -> CrossBound:
    """Weighted size bound for a cross-intersecting pair of families.

    g_k holds k-spaces and g_nk holds (n-k)-spaces of the same ambient
    space, with every pair across and inside the union intersecting
    non-trivially. The weighted sum alpha*|g_k| + |g_nk| is compared with
    alpha*[n-1, k-1]_q + [n-1, k]_q; when the bound is attained, |g_nk|
    must be at least [n-1, k]_q, and that floor is reported too.
    """
    if g_k.field != g_nk.field or g_k.n != g_nk.n:
        raise MixedAmbient("families live in different ambient spaces")
    n, q, k = g_k.n, g_k.field.q, g_k.k
    if g_nk.k != n - k:
        raise MixedDimension(f"second family must hold {n - k}-spaces, has {g_nk.k}")
    if not 1 <= k <= n / 2:
        raise HypothesisViolated(f"need 1 <= k <= n/2, got k={k}, n={n}")
    default_alpha = 1 if 2 * k == n else q ** (n - k)
    if alpha is None:
        alpha = default_alpha
    if alpha < default_alpha:
        raise HypothesisViolated(f"alpha must be at least {default_alpha}, got {alpha}")
    both = list(g_k.members) + list(g_nk.members)
    for a, b in itertools.combinations(both, 2):
        if a.intersection_dim(b) == 0:
            raise HypothesisViolated("the union of the two families must be intersecting")
    lhs = alpha * len(g_k) + len(g_nk)
    rhs = alpha * gauss_binom(n - 1, k - 1, q) + gauss_binom(n - 1, k, q)
    is_eq = lhs == rhs
    floor_ok = (not is_eq) or len(g_nk) >= gauss_binom(n - 1, k, q)
    return CrossBound(alpha, lhs, rhs, lhs <= rhs, is_eq, floor_ok)
