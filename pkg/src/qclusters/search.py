"""Exact extremal search over Grassmannian ground sets, plus the inclusion
graphs and one-to-m matchings behind the layer bounds.

The branch-and-bound core works on bitmask candidate sets. For the triple
predicates it precomputes, for every pair of ground elements, the mask of
third elements completing a forbidden configuration; child candidate sets
are then pure mask intersections. A lookahead pass additionally drops any
candidate whose own filtered mask cannot reach the target size, which cuts
the search tree by orders of magnitude on the larger instances.

Ground-set predicate tests run on projective point incidence masks and are
deliberately independent of the reference predicates in families; every
witness the search produces is re-verified through those.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

from . import families as fam_mod
from .errors import BadArity, BadLayer, UnmatchedUncoverable
from .families import COVERING_TRIPLE, D_CLUSTER, THREE_CLUSTER, Family
from .gfq import FieldSpec
from .grassmann import Subspace, enum_grassmannian, enum_skew_to, subspaces_of
from .qarith import gauss_binom


# ---------------------------------------------------------------------------
# ground sets
# ---------------------------------------------------------------------------


class GroundSet:
    """Search-ready view of equal-dimension subspaces in canonical order."""

    def __init__(self, elements: Sequence[Subspace]):
        if not elements:
            raise ValueError("ground set must not be empty")
        elems = sorted({s.key: s for s in elements}.values())
        first = elems[0]
        self.field: FieldSpec = first.field
        self.n: int = first.n
        self.k: int = first.k
        for s in elems:
            if s.field != self.field or s.n != self.n or s.k != self.k:
                raise ValueError("ground set mixes ambient spaces or dimensions")
        self.elements: tuple[Subspace, ...] = tuple(elems)
        q, n = self.field.q, self.n
        # projective point index: normalized nonzero vectors
        self._point_index: dict[tuple[int, ...], int] = {}
        for vec in _normalized_points(self.field, n):
            self._point_index[vec] = len(self._point_index)
        self.point_masks: list[int] = [
            self._point_mask(s) for s in self.elements
        ]
        self._dim_of_count = {
            (q**d - 1) // (q - 1): d for d in range(0, min(n, 2 * self.k) + 1)
        }
        self.size = len(self.elements)
        self.full_mask = (1 << self.size) - 1
        self._gf2 = self.field.q == 2
        if self._gf2:
            self.rows: list[tuple[int, ...]] = [
                tuple(_bits(r) for r in s.basis.to_rows()) for s in self.elements
            ]
        else:
            self.rows = [s.basis.to_rows() for s in self.elements]

    @classmethod
    def full_grassmannian(cls, field: FieldSpec, n: int, k: int) -> "GroundSet":
        return cls(tuple(enum_grassmannian(field, n, k)))

    def _point_mask(self, s: Subspace) -> int:
        mask = 0
        for vec in s.vectors():
            norm = _normalize(self.field, vec)
            if norm is not None:
                mask |= 1 << self._point_index[norm]
        return mask

    def meet_dim(self, i: int, j: int) -> int:
        return self._dim_of_count[(self.point_masks[i] & self.point_masks[j]).bit_count()]

    def join_dim(self, idxs: Sequence[int]) -> int:
        rows: list = []
        for i in idxs:
            rows.extend(self.rows[i])
        if self._gf2:
            return _rank_gf2(rows)
        return _rank_gfq(self.field, rows, self.n)

    def index_of(self, s: Subspace) -> int:
        # elements are sorted by key, so bisection would also work; linear is fine
        for i, e in enumerate(self.elements):
            if e.key == s.key:
                return i
        raise KeyError("subspace not in ground set")


def _bits(row: Sequence[int]) -> int:
    out = 0
    for j, e in enumerate(row):
        if e:
            out |= 1 << j
    return out


def _rank_gf2(rows: list[int]) -> int:
    lead: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            hb = row.bit_length() - 1
            if hb in lead:
                row ^= lead[hb]
            else:
                lead[hb] = row
                rank += 1
                break
    return rank


def _rank_gfq(field: FieldSpec, rows: Sequence[Sequence[int]], n: int) -> int:
    work = [list(r) for r in rows]
    rank = 0
    for c in range(n):
        piv = None
        for i in range(rank, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.inv(work[rank][c])
        if inv != 1:
            work[rank] = [field.mul(inv, e) for e in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                coef = work[i][c]
                work[i] = [
                    field.sub(e, field.mul(coef, pe))
                    for e, pe in zip(work[i], work[rank])
                ]
        rank += 1
    return rank


def _normalize(field: FieldSpec, vec: tuple[int, ...]) -> Optional[tuple[int, ...]]:
    """Scale so the first nonzero coordinate is 1; None for the zero vector."""
    for e in vec:
        if e:
            if e == 1:
                return vec
            inv = field.inv(e)
            return tuple(field.mul(inv, x) for x in vec)
    return None


def _normalized_points(field: FieldSpec, n: int) -> Iterator[tuple[int, ...]]:
    seen: set[tuple[int, ...]] = set()
    for vec in itertools.product(field.elements(), repeat=n):
        norm = _normalize(field, vec)
        if norm is not None and norm not in seen:
            seen.add(norm)
            yield norm


# ---------------------------------------------------------------------------
# forbidden-configuration tests on ground indices (mask arithmetic)
# ---------------------------------------------------------------------------


def _forbidden_test(
    ground: GroundSet, predicate: str, d: int | None
) -> Callable[[tuple[int, ...]], bool]:
    """Tuple-of-indices predicate matching the reference definitions."""
    k = ground.k
    pm = ground.point_masks
    twok = 2 * k

    if predicate == COVERING_TRIPLE:
        dim_of = ground._dim_of_count

        def test(t: tuple[int, ...]) -> bool:
            i, j, l = t
            pi, pj, pl = pm[i], pm[j], pm[l]
            if pi & pj & pl:
                return False
            dij = dim_of[(pi & pj).bit_count()]
            dil = dim_of[(pi & pl).bit_count()]
            djl = dim_of[(pj & pl).bit_count()]
            return (
                dij + dil == k or dij + djl == k or dil + djl == k
            )

        return test

    if predicate == THREE_CLUSTER or (predicate == D_CLUSTER and d == 3):

        def test(t: tuple[int, ...]) -> bool:
            i, j, l = t
            if pm[i] & pm[j] & pm[l]:
                return False
            return ground.join_dim(t) <= twok

        return test

    if predicate == D_CLUSTER:
        if d is None or d < 2:
            raise BadArity(f"d-cluster predicate needs d >= 2, got {d}")

        def test(t: tuple[int, ...]) -> bool:
            meet = pm[t[0]]
            for i in t[1:]:
                meet &= pm[i]
            if meet:
                return False
            return ground.join_dim(t) <= twok

        return test

    raise ValueError(f"unknown predicate {predicate!r}")


_COMPAT_CACHE: dict = {}


def _pair_compat_masks(ground: GroundSet, predicate: str, d: int | None) -> list[list[int]]:
    """compat[i][j] = mask of l such that {i, j, l} completes no forbidden triple.

    Cached per (q, n, k, ground fingerprint, predicate); the Grassmannian
    searches and enumerations share one table.
    """
    key = (
        ground.field.q,
        ground.n,
        ground.k,
        ground.size,
        hash(tuple(s.key for s in ground.elements)),
        predicate,
        d,
    )
    cached = _COMPAT_CACHE.get(key)
    if cached is not None:
        return cached
    test = _forbidden_test(ground, predicate, d)
    m = ground.size
    full = ground.full_mask
    compat = [[full] * m for _ in range(m)]
    # the tuple tests are symmetric in their arguments, so index order is free
    for i in range(m):
        row_i = compat[i]
        for j in range(i + 1, m):
            mask = 0
            bit = 1
            for l in range(m):
                if l != i and l != j and not test((i, j, l)):
                    mask |= bit
                bit <<= 1
            row_i[j] = mask
            compat[j][i] = mask
    _COMPAT_CACHE[key] = compat
    return compat


# ---------------------------------------------------------------------------
# DFS cores
# ---------------------------------------------------------------------------


class _Timeout(Exception):
    pass


class _TripleSearch:
    """Lookahead branch-and-bound for the triple predicates."""

    __slots__ = (
        "compat",
        "best",
        "witness",
        "nodes",
        "deadline",
        "check_every",
        "_tick",
    )

    def __init__(self, compat: list[list[int]], best: int, deadline: float | None):
        self.compat = compat
        self.best = best
        self.witness: Optional[tuple[int, ...]] = None
        self.nodes = 0
        self.deadline = deadline
        self.check_every = 8192
        self._tick = 0

    def _time_check(self) -> None:
        self._tick += 1
        if self._tick >= self.check_every:
            self._tick = 0
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Timeout

    def extend(self, members: list[int], cand: int, rows: list[list[int]]) -> None:
        self.nodes += 1
        self._time_check()
        lp = len(members)
        if lp > self.best:
            self.best = lp
            self.witness = tuple(members)
        lams: list[tuple[int, int, int]] = []
        need = self.best - lp
        c = cand
        while c:
            y = c & -c
            c ^= y
            yi = y.bit_length() - 1
            lam = cand
            for row in rows:
                lam &= row[yi]
            if lam.bit_count() >= need:
                lams.append((y, yi, lam))
        nsurv = len(lams)
        if lp + nsurv <= self.best:
            return
        remaining = 0
        for y, _, _ in lams:
            remaining |= y
        for idx, (y, yi, lam) in enumerate(lams):
            if lp + nsurv - idx <= self.best:
                return
            remaining ^= y
            child = lam & remaining
            members.append(yi)
            if lp + 1 > self.best:
                self.best = lp + 1
                self.witness = tuple(members)
            if child:
                self.extend(members, child, rows + [self.compat[yi]])
            else:
                self.nodes += 1
            members.pop()


class _TripleEnumerate:
    """Exhaustive collection of every family of exactly the target size."""

    __slots__ = ("compat", "target", "found", "nodes", "deadline", "_tick", "check_every")

    def __init__(self, compat: list[list[int]], target: int, deadline: float | None):
        self.compat = compat
        self.target = target
        self.found: list[tuple[int, ...]] = []
        self.nodes = 0
        self.deadline = deadline
        self.check_every = 8192
        self._tick = 0

    def _time_check(self) -> None:
        self._tick += 1
        if self._tick >= self.check_every:
            self._tick = 0
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Timeout

    def extend(self, members: list[int], cand: int, rows: list[list[int]]) -> None:
        self.nodes += 1
        self._time_check()
        lp = len(members)
        target = self.target
        if lp == target:
            self.found.append(tuple(members))
            return
        if lp + 2 == target:
            # the filtered mask of a candidate is exactly its set of valid
            # completions, so collect the final pairs without recursing
            prefix = tuple(members)
            found = self.found
            remaining = cand
            while remaining:
                y = remaining & -remaining
                remaining ^= y
                yi = y.bit_length() - 1
                lam = remaining
                for row in rows:
                    lam &= row[yi]
                while lam:
                    z = lam & -lam
                    lam ^= z
                    found.append(prefix + (yi, z.bit_length() - 1))
            return
        lams: list[tuple[int, int, int]] = []
        need = target - lp - 1
        c = cand
        while c:
            y = c & -c
            c ^= y
            yi = y.bit_length() - 1
            lam = cand
            for row in rows:
                lam &= row[yi]
            if lam.bit_count() >= need:
                lams.append((y, yi, lam))
        nsurv = len(lams)
        if lp + nsurv < target:
            return
        remaining = 0
        for y, _, _ in lams:
            remaining |= y
        for idx, (y, yi, lam) in enumerate(lams):
            if lp + nsurv - idx < target:
                return
            remaining ^= y
            if lp + 1 == target:
                self.nodes += 1
                self.found.append(tuple(members) + (yi,))
                continue
            child = lam & remaining
            if child:
                members.append(yi)
                self.extend(members, child, rows + [self.compat[yi]])
                members.pop()
            else:
                self.nodes += 1


class _GeneralSearch:
    """Branch and bound for d-cluster predicates with d >= 4 (tiny instances)."""

    __slots__ = ("ground", "test", "d", "best", "witness", "nodes", "deadline", "_tick")

    def __init__(self, ground: GroundSet, d: int, best: int, deadline: float | None):
        self.ground = ground
        self.test = _forbidden_test(ground, D_CLUSTER, d)
        self.d = d
        self.best = best
        self.witness: Optional[tuple[int, ...]] = None
        self.nodes = 0
        self.deadline = deadline
        self._tick = 0

    def _time_check(self) -> None:
        self._tick += 1
        if self._tick >= 2048:
            self._tick = 0
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise _Timeout

    def _legal(self, members: list[int], x: int) -> bool:
        if len(members) < self.d - 1:
            return True
        for subset in itertools.combinations(members, self.d - 1):
            if self.test(tuple(sorted(subset + (x,)))):
                return False
        return True

    def extend(self, members: list[int], cand: list[int]) -> None:
        self.nodes += 1
        self._time_check()
        lp = len(members)
        if lp > self.best:
            self.best = lp
            self.witness = tuple(members)
        while cand:
            if lp + len(cand) <= self.best:
                return
            x = cand[0]
            cand = cand[1:]
            child = [y for y in cand if self._legal(members + [x], y)]
            members.append(x)
            if lp + 1 > self.best:
                self.best = lp + 1
                self.witness = tuple(members)
            self.extend(members, child)
            members.pop()


def _first_of_size(compat: list[list[int]], full: int, target: int) -> tuple[int, ...]:
    """Lexicographically first family of the given (achievable) size."""

    result: list[int] = []

    def walk(members: list[int], cand: int, rows: list[list[int]]) -> bool:
        lp = len(members)
        if lp == target:
            result.extend(members)
            return True
        if lp + cand.bit_count() < target:
            return False
        remaining = cand
        while remaining:
            if lp + remaining.bit_count() < target:
                return False
            y = remaining & -remaining
            remaining ^= y
            yi = y.bit_length() - 1
            child = remaining
            for row in rows:
                child &= row[yi]
            members.append(yi)
            if walk(members, child, rows + [compat[yi]]):
                return True
            members.pop()
        return False

    if not walk([], full, []):
        raise AssertionError(f"no family of size {target} found, but one must exist")
    return tuple(result)


# ---------------------------------------------------------------------------
# public search API
# ---------------------------------------------------------------------------


@dataclass
class SearchReport:
    """Outcome of an extremal search run."""

    q: int
    n: int
    k: int
    predicate: str
    d: int | None
    optimum: int
    witness: Family
    star_bound: int
    nodes_explored: int
    optimality_proved: bool
    wall_time_s: float
    all_maxima_count: int | None = None
    star_maxima_count: int | None = None


def _canonical_star(field: FieldSpec, n: int, k: int) -> Family:
    """Full star at the canonically smallest 1-dimensional subspace."""
    center = min(enum_grassmannian(field, n, 1))
    return fam_mod.star_family(field, n, k, center.basis.row(0))


def _second_orbit_reps(ground: GroundSet) -> list[int]:
    """First ground index realizing each intersection dimension with element 0.

    The stabilizer of element 0 in the ambient linear group acts transitively
    on subspaces of a fixed intersection dimension with it, so one
    representative per dimension class is enough for maximum-size search.
    """
    reps: dict[int, int] = {}
    for j in range(1, ground.size):
        t = ground.meet_dim(0, j)
        if t not in reps:
            reps[t] = j
    return [reps[t] for t in sorted(reps)]


def search_max(
    field: FieldSpec,
    n: int,
    k: int,
    predicate: str,
    d: int | None = None,
    *,
    fix_first: bool = False,
    time_limit: float | None = None,
    parallel: bool = False,
) -> SearchReport:
    """Exact maximum size of a predicate-free family in the Grassmannian.

    The incumbent starts at the full star, so the search only has to refute
    larger families; optimality_proved reports whether the tree was
    exhausted within the time limit. fix_first pins the canonically first
    subspace into the family and splits the second choice into stabilizer
    orbit representatives, both justified by the transitive linear group
    action; it is sound for the maximum size but not for enumerating all
    maxima.
    """
    t_start = time.monotonic()
    deadline = None if time_limit is None else t_start + time_limit
    ground = GroundSet.full_grassmannian(field, n, k)
    star_bound = int(gauss_binom(n - 1, k - 1, field.q))
    star = _canonical_star(field, n, k)
    assert fam_mod.find_forbidden(star, predicate, d) is None
    best = len(star)
    witness: Family = star
    nodes = 0
    proved = False
    if deadline is not None and time.monotonic() >= deadline:
        return SearchReport(
            q=field.q,
            n=n,
            k=k,
            predicate=predicate,
            d=d,
            optimum=best,
            witness=witness,
            star_bound=star_bound,
            nodes_explored=0,
            optimality_proved=False,
            wall_time_s=time.monotonic() - t_start,
        )
    if predicate == D_CLUSTER and d is not None and d != 3:
        searcher = _GeneralSearch(ground, d, best, deadline)
        try:
            init = list(range(ground.size))
            if fix_first:
                searcher.extend([0], [y for y in init if y != 0])
            else:
                searcher.extend([], init)
            proved = True
        except _Timeout:
            proved = False
        nodes = searcher.nodes
        best = searcher.best
        found = searcher.witness
        if found is not None:
            witness = Family(field, n, k, [ground.elements[i] for i in found])
    else:
        dd = 3 if predicate == D_CLUSTER else None
        compat = _pair_compat_masks(ground, predicate, d if predicate == D_CLUSTER else dd)
        tasks = _toplevel_tasks(ground, compat, fix_first)
        if parallel:
            best, found, nodes, proved = _run_parallel(compat, tasks, best, deadline)
        else:
            best, found, nodes, proved = _run_serial(compat, tasks, best, deadline)
        if found is not None:
            witness = Family(field, n, k, [ground.elements[i] for i in found])
        if proved:
            lex_first = _first_of_size(compat, ground.full_mask, best)
            witness = Family(field, n, k, [ground.elements[i] for i in lex_first])
    assert fam_mod.find_forbidden(witness, predicate, d) is None
    assert len(witness) == best
    return SearchReport(
        q=field.q,
        n=n,
        k=k,
        predicate=predicate,
        d=d,
        optimum=best,
        witness=witness,
        star_bound=star_bound,
        nodes_explored=nodes,
        optimality_proved=proved,
        wall_time_s=time.monotonic() - t_start,
    )


def _toplevel_tasks(
    ground: GroundSet, compat: list[list[int]], fix_first: bool
) -> list[tuple[list[int], int]]:
    """Initial (members, candidate mask) pairs covering the whole search."""
    full = ground.full_mask
    if not fix_first:
        return [([], full)]
    tasks = []
    for rep in _second_orbit_reps(ground):
        cand = full & ~1 & ~(1 << rep) & compat[0][rep]
        tasks.append(([0, rep], cand))
    if ground.size == 1:
        tasks.append(([0], 0))
    return tasks


def _fan_out(
    tasks: list[tuple[list[int], int]],
    compat: list[list[int]],
    best: int,
    levels: int = 2,
) -> list[tuple[list[int], int]]:
    """Split tasks a few branching levels deeper for load balancing.

    Mirrors the serial node exactly: the same lookahead pass first drops
    candidates that cannot reach past the incumbent, then each surviving
    candidate x (ascending, remaining candidates only) becomes a task.
    Tasks whose candidate set is already empty are kept as leaves so node
    counts still match.
    """
    for _ in range(levels):
        out: list[tuple[list[int], int]] = []
        for members, cand in tasks:
            if not cand:
                out.append((members, cand))
                continue
            out.append((members, 0))  # the task's own node, no descent
            lp = len(members)
            need = best - lp
            lams: list[tuple[int, int]] = []
            c = cand
            while c:
                y = c & -c
                c ^= y
                lam = cand
                for p in members:
                    lam &= compat[p][y.bit_length() - 1]
                if lam.bit_count() >= need:
                    lams.append((y, lam))
            remaining = 0
            for y, _ in lams:
                remaining |= y
            for y, lam in lams:
                remaining ^= y
                out.append((members + [y.bit_length() - 1], lam & remaining))
        tasks = out
    return tasks


def _run_serial(
    compat: list[list[int]],
    tasks: list[tuple[list[int], int]],
    best: int,
    deadline: float | None,
) -> tuple[int, Optional[tuple[int, ...]], int, bool]:
    searcher = _TripleSearch(compat, best, deadline)
    completed = True
    try:
        for members, cand in tasks:
            rows = [compat[p] for p in members]
            searcher.extend(list(members), cand, rows)
    except _Timeout:
        completed = False
    return searcher.best, searcher.witness, searcher.nodes, completed


_PARALLEL_STATE: dict = {}


def _parallel_init(compat: list[list[int]], best: int, deadline: float | None) -> None:
    _PARALLEL_STATE["compat"] = compat
    _PARALLEL_STATE["best"] = best
    _PARALLEL_STATE["deadline"] = deadline


def _parallel_task(task: tuple[list[int], int]) -> tuple[int, Optional[tuple[int, ...]], int, bool]:
    members, cand = task
    compat = _PARALLEL_STATE["compat"]
    searcher = _TripleSearch(compat, _PARALLEL_STATE["best"], _PARALLEL_STATE["deadline"])
    try:
        searcher.extend(list(members), cand, [compat[p] for p in members])
        ok = True
    except _Timeout:
        ok = False
    return searcher.best, searcher.witness, searcher.nodes, ok


def _run_parallel(
    compat: list[list[int]],
    tasks: list[tuple[list[int], int]],
    best: int,
    deadline: float | None,
) -> tuple[int, Optional[tuple[int, ...]], int, bool]:
    """Fan tasks out to worker processes; merge deterministically in order.

    Workers search independent subtrees with the same starting incumbent;
    the merged optimum and witness match the serial run because pruning by
    a shared incumbent never discards the first family of a new best size.
    """
    import multiprocessing as mp

    tasks = _fan_out(tasks, compat, best)
    if len(tasks) <= 1:
        return _run_serial(compat, tasks, best, deadline)
    ctx = mp.get_context("fork")
    with ctx.Pool(
        processes=min(len(tasks), ctx.cpu_count()),
        initializer=_parallel_init,
        initargs=(compat, best, deadline),
    ) as pool:
        results = pool.map(_parallel_task, tasks, chunksize=1)
    nodes = 0
    witness = None
    completed = True
    for sub_best, sub_witness, sub_nodes, ok in results:
        nodes += sub_nodes
        completed = completed and ok
        if sub_best > best and sub_witness is not None:
            best = sub_best
            witness = sub_witness
    return best, witness, nodes, completed


def max_family_over(
    elements: Sequence[Subspace], predicate: str, d: int | None = None
) -> tuple[int, Family, int]:
    """Branch-and-bound maximum over an explicit ground set.

    No star incumbent and no symmetry fixing (neither is justified on an
    arbitrary ground set). Returns (optimum, lexicographically first
    witness, nodes explored).
    """
    ground = GroundSet(elements)
    if predicate == D_CLUSTER and d is not None and d != 3:
        searcher = _GeneralSearch(ground, d, 0, None)
        searcher.extend([], list(range(ground.size)))
        best, found, nodes = searcher.best, searcher.witness, searcher.nodes
        if best == 0:
            fam = Family(ground.field, ground.n, ground.k, [])
            return 0, fam, nodes
        fam = Family(ground.field, ground.n, ground.k, [ground.elements[i] for i in found])
        assert fam_mod.find_forbidden(fam, predicate, d) is None
        return best, fam, nodes
    dd = 3 if predicate == D_CLUSTER else None
    compat = _pair_compat_masks(ground, predicate, d if predicate == D_CLUSTER else dd)
    searcher = _TripleSearch(compat, 0, None)
    searcher.extend([], ground.full_mask, [])
    best, nodes = searcher.best, searcher.nodes
    lex_first = _first_of_size(compat, ground.full_mask, best)
    fam = Family(ground.field, ground.n, ground.k, [ground.elements[i] for i in lex_first])
    assert fam_mod.find_forbidden(fam, predicate, d) is None
    return best, fam, nodes


_ENUM_STATE: dict = {}


def _enum_init(compat: list[list[int]], target: int) -> None:
    _ENUM_STATE["compat"] = compat
    _ENUM_STATE["target"] = target


def _enum_task(task: tuple[list[int], int]) -> list[tuple[int, ...]]:
    members, cand = task
    compat = _ENUM_STATE["compat"]
    enum = _TripleEnumerate(compat, _ENUM_STATE["target"], None)
    enum.extend(list(members), cand, [compat[p] for p in members])
    return enum.found


def enumerate_maxima(
    field: FieldSpec,
    n: int,
    k: int,
    predicate: str,
    optimum: int,
    d: int | None = None,
    time_limit: float | None = None,
    parallel: bool = False,
) -> Iterator[tuple[Family, bool]]:
    """Every predicate-free family of exactly the known optimum size.

    Runs without any symmetry fixing (pinning elements is unsound here) and
    yields (family, is_star) in deterministic lexicographic order. Each
    family is re-verified against the reference predicates before it is
    yielded. Parallel mode partitions the tree by its first branching level
    and merges the per-subtree results in order, reproducing the serial
    output exactly.
    """
    deadline = None if time_limit is None else time.monotonic() + time_limit
    ground = GroundSet.full_grassmannian(field, n, k)
    if predicate == D_CLUSTER and d is not None and d != 3:
        yield from _enumerate_general(ground, optimum, d, deadline)
        return
    dd = 3 if predicate == D_CLUSTER else None
    compat = _pair_compat_masks(ground, predicate, d if predicate == D_CLUSTER else dd)
    if parallel:
        import multiprocessing as mp

        tasks = _fan_out([([], ground.full_mask)], compat, optimum - 1)
        ctx = mp.get_context("fork")
        with ctx.Pool(
            processes=ctx.cpu_count(),
            initializer=_enum_init,
            initargs=(compat, optimum),
        ) as pool:
            per_task = pool.map(_enum_task, tasks, chunksize=1)
        found = [idxs for sub in per_task for idxs in sub]
    else:
        enum = _TripleEnumerate(compat, optimum, deadline)
        enum.extend([], ground.full_mask, [])
        found = enum.found
    for idxs in found:
        fam = Family(field, n, k, [ground.elements[i] for i in idxs])
        assert fam_mod.find_forbidden(fam, predicate, d) is None
        yield fam, bool(fam_mod.star_centers(fam))


def _enumerate_general(
    ground: GroundSet, optimum: int, d: int, deadline: float | None
) -> Iterator[tuple[Family, bool]]:
    test = _forbidden_test(ground, D_CLUSTER, d)
    found: list[tuple[int, ...]] = []

    def legal(members: list[int], x: int) -> bool:
        if len(members) < d - 1:
            return True
        return not any(
            test(tuple(sorted(s + (x,))))
            for s in itertools.combinations(members, d - 1)
        )

    def walk(members: list[int], cand: list[int]) -> None:
        if deadline is not None and time.monotonic() > deadline:
            raise _Timeout
        if len(members) == optimum:
            found.append(tuple(members))
            return
        while cand:
            if len(members) + len(cand) < optimum:
                return
            x = cand[0]
            cand = cand[1:]
            child = [y for y in cand if legal(members + [x], y)]
            members.append(x)
            walk(members, child)
            members.pop()

    walk([], list(range(ground.size)))
    for idxs in found:
        fam = Family(ground.field, ground.n, ground.k, [ground.elements[i] for i in idxs])
        assert fam_mod.find_forbidden(fam, D_CLUSTER, d) is None
        yield fam, bool(fam_mod.star_centers(fam))


def brute_force_max(
    elements: Sequence[Subspace], predicate: str, d: int | None = None
) -> tuple[int, Family]:
    """Oracle maximum by unpruned subset DFS over an explicit ground set.

    Forbidden tuples come straight from the reference predicates; no
    bounds, no incumbent, no symmetry. Only sensible for small ground sets.
    """
    elems = sorted({s.key: s for s in elements}.values())
    m = len(elems)
    arity = d if predicate == D_CLUSTER else 3
    if predicate == D_CLUSTER and (d is None or d < 2):
        raise BadArity(f"d-cluster predicate needs d >= 2, got {d}")
    forbidden_masks: list[int] = []
    for combo in itertools.combinations(range(m), arity):
        subs = [elems[i] for i in combo]
        if predicate == COVERING_TRIPLE:
            bad = fam_mod.is_covering_triple(*subs)
        elif predicate == THREE_CLUSTER:
            bad = fam_mod.is_3_cluster(*subs)
        else:
            bad = fam_mod.is_d_cluster(subs)
        if bad:
            mask = 0
            for i in combo:
                mask |= 1 << i
            forbidden_masks.append(mask)
    best = 0
    best_set: tuple[int, ...] = ()

    def ok(mask: int) -> bool:
        return all((fm & mask) != fm for fm in forbidden_masks)

    def walk(members: list[int], mask: int, start: int) -> None:
        nonlocal best, best_set
        if len(members) > best:
            best = len(members)
            best_set = tuple(members)
        for x in range(start, m):
            new_mask = mask | (1 << x)
            if ok(new_mask):
                members.append(x)
                walk(members, new_mask, x + 1)
                members.pop()

    walk([], 0, 0)
    first = elems[0]
    fam = Family(first.field, first.n, first.k, [elems[i] for i in best_set])
    return best, fam


# ---------------------------------------------------------------------------
# inclusion graphs and one-to-m matchings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite graph on two subspace lists; adjacency maps X index to Y indices."""

    x_vertices: tuple[Subspace, ...]
    y_vertices: tuple[Subspace, ...]
    adjacency: tuple[tuple[int, ...], ...]


def build_inclusion_graph(
    field: FieldSpec, n: int, k: int, i: int, pivot: Subspace
) -> BipartiteGraph:
    """Containment graph between i- and (k-i)-dimensional subspaces skew to pivot.

    Vertex degrees are asserted against their product-formula counts.
    """
    if not 1 <= i <= k / 2:
        raise BadLayer(f"need 1 <= i <= k/2, got i={i}, k={k}")
    if n < 2 * k:
        raise BadLayer(f"inclusion graphs require n >= 2k, got n={n}, k={k}")
    q = field.q
    xs = tuple(sorted(enum_skew_to(pivot, i)))
    ys = tuple(sorted(enum_skew_to(pivot, k - i)))
    y_index = {s.key: t for t, s in enumerate(ys)}
    adjacency = []
    for dsub in xs:
        nbrs = [y_index[e.key] for e in ys if e.contains(dsub)]
        adjacency.append(tuple(sorted(nbrs)))
    deg_x = q ** ((k - 2 * i) * k) * gauss_binom(n - k - i, k - 2 * i, q)
    deg_y = gauss_binom(k - i, i, q)
    assert all(len(a) == deg_x for a in adjacency)
    counts = [0] * len(ys)
    for a in adjacency:
        for t in a:
            counts[t] += 1
    assert all(c == deg_y for c in counts)
    return BipartiteGraph(xs, ys, tuple(adjacency))


@dataclass
class OneToMResult:
    """Either a one-to-m assignment or a set violating the expansion condition."""

    m: int
    assignment: tuple[tuple[int, ...], ...] | None
    deficient: tuple[int, ...] | None


def one_to_m_matching(g: BipartiteGraph, m: int) -> OneToMResult:
    """Assign m distinct Y vertices to every X vertex, or exhibit a violator.

    Clones every X vertex m times and runs augmenting-path maximum matching;
    if some clone stays unmatched, the alternating tree from it projects to
    a set S with |N_Y(S)| < m|S|.
    """
    nx = len(g.x_vertices)
    ny = len(g.y_vertices)
    total = nx * m
    match_y = [-1] * ny  # y -> clone index
    match_x = [-1] * total  # clone -> y

    def augment(clone: int, seen: list[bool]) -> bool:
        x = clone // m
        for y in g.adjacency[x]:
            if not seen[y]:
                seen[y] = True
                if match_y[y] == -1 or augment(match_y[y], seen):
                    match_y[y] = clone
                    match_x[clone] = y
                    return True
        return False

    failed_clone = -1
    for clone in range(total):
        seen = [False] * ny
        if not augment(clone, seen) and failed_clone == -1:
            failed_clone = clone
    if failed_clone == -1:
        assignment = tuple(
            tuple(sorted(match_x[x * m : (x + 1) * m])) for x in range(nx)
        )
        return OneToMResult(m, assignment, None)
    # alternating reachability from the first failed clone
    reach_x = {failed_clone // m}
    reach_y: set[int] = set()
    frontier = [failed_clone // m]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.adjacency[x]:
                if y not in reach_y:
                    reach_y.add(y)
                    partner = match_y[y]
                    if partner != -1:
                        px = partner // m
                        if px not in reach_x:
                            reach_x.add(px)
                            nxt.append(px)
        frontier = nxt
    deficient = tuple(sorted(reach_x))
    assert len(reach_y) < m * len(deficient)
    return OneToMResult(m, None, deficient)


def partition_y(
    g: BipartiteGraph, assignment: tuple[tuple[int, ...], ...]
) -> dict[int, tuple[int, ...]]:
    """Partition Y: matched vertices stay with their X, leftovers join their
    first containing X vertex."""
    owner = [-1] * len(g.y_vertices)
    for x, ys in enumerate(assignment):
        for y in ys:
            owner[y] = x
    x_of_y: dict[int, list[int]] = {x: list(ys) for x, ys in enumerate(assignment)}
    for y in range(len(g.y_vertices)):
        if owner[y] != -1:
            continue
        host = -1
        for x in range(len(g.x_vertices)):
            if y in g.adjacency[x]:
                host = x
                break
        if host == -1:
            raise UnmatchedUncoverable(f"Y vertex {y} contains no X vertex")
        owner[y] = host
        x_of_y[host].append(y)
    return {x: tuple(sorted(ys)) for x, ys in x_of_y.items()}
