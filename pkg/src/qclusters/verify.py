"""Verification suites behind the `verify` CLI command.

Each suite runs a battery of exact checks and returns a VerifyReport whose
JSON form is byte-stable (timing aside), so runs can be compared against
committed golden files.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field as dc_field
from typing import Any

from . import families as fam_mod
from . import qarith
from .errors import HypothesisViolated, NotCoveringTripleFree
from .families import (
    COVERING_TRIPLE,
    THREE_CLUSTER,
    Family,
    check_common_form,
    check_layer_inequality,
    check_phi_lemma,
    cross_intersecting_bound,
    is_intersecting,
    layer_partition,
    phi_context,
    phi_inverse,
    star_family,
)
from .gfq import make_field
from .grassmann import enum_grassmannian, enum_skew_to, subspaces_of
from .search import build_inclusion_graph, one_to_m_matching, partition_y, BipartiteGraph

DEFAULT_SEED = 12345


@dataclass
class CheckRecord:
    check_id: str
    params: dict[str, Any]
    expected: Any
    actual: Any

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "check_id": self.check_id,
            "params": dict(sorted(self.params.items())),
            "expected": self.expected,
            "actual": self.actual,
            "pass": self.passed,
        }


@dataclass
class VerifyReport:
    suite: str
    checks: list[CheckRecord] = dc_field(default_factory=list)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check_id: str, params: dict[str, Any], expected: Any, actual: Any) -> None:
        self.checks.append(CheckRecord(check_id, params, expected, actual))

    def to_json_dict(self, include_timing: bool = True) -> dict[str, Any]:
        raw = {
            "suite": self.suite,
            "checks": [c.to_json_dict() for c in self.checks],
            "pass": self.passed,
            "wall_time_s": round(self.wall_time_s, 3) if include_timing else 0.0,
        }
        # normalize to JSON-native types so reports compare cleanly to goldens
        import json

        return json.loads(json.dumps(raw))


SUITES = (
    "counts",
    "identities",
    "star-structure",
    "phi",
    "matching",
    "cross-intersecting",
    "layers",
)


def run_suite(
    suite: str,
    qs: tuple[int, ...] | None = None,
    n_max: int | None = None,
    seed: int = DEFAULT_SEED,
) -> VerifyReport:
    t0 = time.monotonic()
    if suite == "counts":
        report = _suite_counts(qs or (2, 3, 4), n_max or 6)
    elif suite == "identities":
        report = _suite_identities(qs or (2, 3, 4, 5, 7, 8, 9), n_max or 20)
    elif suite == "star-structure":
        report = _suite_star_structure()
    elif suite == "phi":
        report = _suite_phi(seed)
    elif suite == "matching":
        report = _suite_matching()
    elif suite == "cross-intersecting":
        report = _suite_cross_intersecting()
    elif suite == "layers":
        report = _suite_layers()
    else:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    report.wall_time_s = time.monotonic() - t0
    return report


def _suite_counts(qs: tuple[int, ...], n_max: int) -> VerifyReport:
    report = VerifyReport("counts")
    for q in qs:
        field = make_field(q)
        for n in range(1, n_max + 1):
            for k in range(n + 1):
                counted = sum(1 for _ in enum_grassmannian(field, n, k))
                report.add(
                    "grassmannian-count",
                    {"q": q, "n": n, "k": k},
                    int(qarith.gauss_binom(n, k, q)),
                    counted,
                )
    skew_qs = tuple(q for q in qs if q <= 3) or (2,)
    skew_n_max = min(n_max, 5)
    for q in skew_qs:
        field = make_field(q)
        for n in range(1, skew_n_max + 1):
            for m in range(n + 1):
                w = next(enum_grassmannian(field, n, m))
                for i in range(n - m + 1):
                    counted = sum(1 for _ in enum_skew_to(w, i))
                    report.add(
                        "skew-count",
                        {"q": q, "n": n, "m": m, "i": i},
                        q ** (m * i) * int(qarith.gauss_binom(n - m, i, q)),
                        counted,
                    )
                complements = sum(1 for _ in enum_skew_to(w, n - m))
                report.add(
                    "complement-count",
                    {"q": q, "n": n, "m": m},
                    q ** (m * (n - m)),
                    complements,
                )
    return report


def _suite_identities(qs: tuple[int, ...], n_max: int) -> VerifyReport:
    report = VerifyReport("identities")
    for n in range(2, n_max + 1):
        ok = all(qarith.verify_pascal(n, k) for k in range(1, n))
        report.add("pascal-symbolic", {"n": n}, True, ok)
    for n in range(1, min(n_max, 16) + 1):
        ok = all(
            qarith.gauss_binom_poly(n, k)(q) == qarith.gauss_binom(n, k, q)
            for k in range(n + 1)
            for q in qs
        )
        report.add("poly-matches-numeric", {"n": n, "qs": list(qs)}, True, ok)
    for q in qs:
        ok = True
        cases = 0
        for n in range(4, 25):
            for k in range(2, n // 2 + 1):
                res = qarith.verify_star_identity(n, k, q)
                cases += 1
                if not res.holds:
                    ok = False
        report.add("star-identity", {"q": q, "n_max": 24, "cases": cases}, True, ok)
    return report


def _suite_star_structure() -> VerifyReport:
    report = VerifyReport("star-structure")
    for q, n, k in ((2, 5, 2), (2, 6, 2), (2, 6, 3)):
        field = make_field(q)
        center = [0] * n
        center[0] = 1
        star = star_family(field, n, k, center)
        pivot = star.members[0]
        by_dim = {i: 0 for i in range(1, k + 1)}
        for b in star.members:
            by_dim[pivot.intersection_dim(b)] += 1
        for i in range(1, k + 1):
            report.add(
                "star-layer-size",
                {"q": q, "n": n, "k": k, "i": i},
                int(qarith.star_layer_size(n, k, i, q)),
                by_dim[i],
            )
        report.add(
            "star-total",
            {"q": q, "n": n, "k": k},
            int(qarith.gauss_binom(n - 1, k - 1, q)),
            len(star),
        )
    return report


def _suite_phi(seed: int) -> VerifyReport:
    report = VerifyReport("phi")
    f2 = make_field(2)
    rng = random.Random(seed)

    def phi_checks(tag: str, fam: Family, pivot) -> None:
        ctx = phi_context(fam, pivot)
        rep = check_phi_lemma(ctx)
        report.add(
            "phi-lemma",
            {"family": tag, "size": len(fam)},
            True,
            rep.all_ok,
        )
        # round trip: B claims D  <=>  B in phi_inverse(D)
        round_trip = True
        for b in fam.members:
            claims = (
                ctx.claims_of(b)
                if b not in ctx.f_star
                else tuple(
                    d for i in range(0, fam.k + 1) for d in ctx.claims_of(b, dim=i)
                )
            )
            for d in claims:
                if d.intersection_dim(pivot) != 0:
                    continue
                inv = phi_inverse(ctx, d)
                if b not in inv:
                    round_trip = False
                if not all(bb.contains(d) for bb in inv):
                    round_trip = False
        report.add("phi-inverse-roundtrip", {"family": tag}, True, round_trip)

    for n in (4, 5):
        star = star_family(f2, n, 2, [1] + [0] * (n - 1))
        pivot = star.members[0]
        phi_checks(f"star-{n}-2-2", star, pivot)
        ctx = phi_context(star, pivot)
        layers = layer_partition(ctx)
        for i in (1, 2):
            report.add(
                "star-phi-layers",
                {"n": n, "i": i},
                int(qarith.star_layer_size(n, 2, i, 2)),
                len(layers[i]),
            )
        claim_sizes = sorted(
            {len(ctx.claims_of(b)) for b in star.members if b.key != pivot.key}
        )
        report.add("star-claim-size", {"n": n}, [2], claim_sizes)
        # subfamilies stay covering-triple-free; the claim checks must hold on them
        members = list(star.members)
        for size in (4, max(4, len(members) // 2)):
            sub = Family(f2, n, 2, rng.sample(members, size))
            sub_pivot = sub.members[0]
            phi_checks(f"star-{n}-sub-{size}", sub, sub_pivot)

    from .grassmann import subspace_from_vectors

    sp = lambda *vs: subspace_from_vectors(f2, 4, vs)
    a = sp((1, 0, 0, 0), (0, 1, 0, 0))
    b34 = sp((0, 0, 1, 0), (0, 0, 0, 1))
    c13 = sp((1, 0, 0, 0), (0, 0, 1, 0))
    mixed = Family(f2, 4, 2, [a, b34, c13])
    phi_checks("mixed-3", mixed, a)
    ctx_mixed = phi_context(mixed, a)
    report.add(
        "mixed-witness",
        {"member": "skew-plane"},
        ["<1000,0010>"],
        ["<%s>" % ",".join("".join(map(str, r)) for r in w.basis.to_rows())
         for w in ctx_mixed.witnesses_of(b34)],
    )

    # isolated members claim every subspace dimension fully
    single = Family(f2, 4, 2, [a])
    ctx1 = phi_context(single, a)
    report.add(
        "isolated-claim-count",
        {"dim": 1},
        int(qarith.gauss_binom(2, 1, 2)),
        len(ctx1.claims_of(a, dim=1)),
    )

    # common-form search on star contexts returns the pivot itself
    star4 = star_family(f2, 4, 2, (1, 0, 0, 0))
    pivot4 = min(s for s in star4.members)
    ctx4 = phi_context(star4, pivot4)
    ok = True
    tested = 0
    for e in enum_skew_to(pivot4, 1):
        if not phi_inverse(ctx4, e):
            continue
        tested += 1
        c = check_common_form(ctx4, e, e)
        if c is None or c.key != pivot4.key:
            ok = False
    report.add("common-form-star", {"tested": tested}, True, ok and tested > 0)

    violated = 0
    try:
        check_common_form(ctx4, next(subspaces_of(pivot4, 1)), pivot4)
    except HypothesisViolated:  # e not skew to the pivot
        violated += 1
    two = Family(f2, 4, 2, [a, b34])
    ctx_two = phi_context(two, a)
    try:
        check_common_form(ctx_two, sp((0, 0, 1, 0)), sp((0, 0, 1, 0)))
    except HypothesisViolated:  # an isolated member claims e
        violated += 1
    try:
        check_common_form(ctx_two, sp((1, 0, 1, 0)), sp((1, 0, 1, 0)))
    except HypothesisViolated:  # nothing claims e
        violated += 1
    report.add("common-form-hypotheses", {}, 3, violated)

    # paired claim-inverse bound: for D skew to the pivot and a set E_D of
    # (k-d)-dimensional supersets of D skew to the pivot (at least q^(k-d)
    # of them, or one when d = k/2), the claimant counts obey
    # |inv(D)| + sum_E |inv(E)| <= [k-1, d]_q + |E_D| [k-1, d-1]_q
    for (n, k) in ((4, 2), (6, 3)):
        star_big = star_family(f2, n, k, [1] + [0] * (n - 1))
        pivot_big = star_big.members[0]
        ctx_big = phi_context(star_big, pivot_big)
        q = 2
        d = 1
        need = 1 if 2 * d == k else q ** (k - d)
        holds = True
        tested = 0
        for dsub in enum_skew_to(pivot_big, d):
            supersets = [
                e
                for e in enum_skew_to(pivot_big, k - d)
                if e.contains(dsub)
            ]
            if len(supersets) < need:
                continue
            e_d = supersets[:need]
            tested += 1
            lhs = len(phi_inverse(ctx_big, dsub)) + sum(
                len(phi_inverse(ctx_big, e)) for e in e_d
            )
            rhs = int(qarith.gauss_binom(k - 1, d, q)) + need * int(
                qarith.gauss_binom(k - 1, d - 1, q)
            )
            if lhs > rhs:
                holds = False
            if tested >= 8:
                break
        report.add(
            "claim-inverse-pair-bound",
            {"n": n, "k": k, "d": d, "tested": tested},
            True,
            holds and tested > 0,
        )

    # claimants of nested subspaces meet the witness of the inner claimant
    nested_ok = True
    pairs_checked = 0
    for fam, pivot in ((star4, pivot4), (mixed, a)):
        ctx = phi_context(fam, pivot)
        for e in enum_skew_to(pivot, 1):
            inv_e = phi_inverse(ctx, e)
            if not inv_e:
                continue
            for b1 in inv_e:
                if b1 in ctx.f_star:
                    continue
                for b2 in inv_e:
                    if b2 in ctx.f_star:
                        continue
                    for c2 in ctx.witnesses_of(b2):
                        if c2.intersection_dim(e) == 0:
                            pairs_checked += 1
                            if b1.intersection_dim(c2) == 0:
                                nested_ok = False
    report.add(
        "claimant-witness-meets", {"pairs": pairs_checked}, True, nested_ok
    )
    return report


def _validate_matching(g: BipartiteGraph, assignment, m: int) -> bool:
    used: set[int] = set()
    for x, ys in enumerate(assignment):
        if len(ys) != m or len(set(ys)) != m:
            return False
        for y in ys:
            if y in used or y not in g.adjacency[x]:
                return False
            used.add(y)
    return True


def _suite_matching() -> VerifyReport:
    report = VerifyReport("matching")
    f2 = make_field(2)
    from .grassmann import subspace_from_vectors

    # (2,6,3), layer 1: degrees 24 and 3, one-to-4 matching
    pivot = subspace_from_vectors(
        f2, 6, [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 0, 0), (0, 0, 1, 0, 0, 0)]
    )
    g = build_inclusion_graph(f2, 6, 3, 1, pivot)
    report.add("x-size", {"q": 2, "n": 6, "k": 3, "i": 1}, 56, len(g.x_vertices))
    report.add("y-size", {"q": 2, "n": 6, "k": 3, "i": 1}, 448, len(g.y_vertices))
    report.add(
        "x-degree", {"q": 2, "n": 6, "k": 3, "i": 1}, 24, len(g.adjacency[0])
    )
    ydeg = [0] * len(g.y_vertices)
    for nbrs in g.adjacency:
        for y in nbrs:
            ydeg[y] += 1
    report.add("y-degree", {"q": 2, "n": 6, "k": 3, "i": 1}, [3], sorted(set(ydeg)))
    report.add(
        "edge-double-count",
        {"q": 2, "n": 6, "k": 3, "i": 1},
        len(g.x_vertices) * 24,
        len(g.y_vertices) * 3,
    )
    res = one_to_m_matching(g, 4)
    report.add(
        "one-to-4-found", {"q": 2, "n": 6, "k": 3, "i": 1}, True, res.assignment is not None
    )
    report.add(
        "one-to-4-valid",
        {"q": 2, "n": 6, "k": 3, "i": 1},
        True,
        res.assignment is not None and _validate_matching(g, res.assignment, 4),
    )

    # (2,4,2), layer 1: perfect pairing, one-to-1 matching, full partition
    pivot2 = subspace_from_vectors(f2, 4, [(1, 0, 0, 0), (0, 1, 0, 0)])
    g2 = build_inclusion_graph(f2, 4, 2, 1, pivot2)
    report.add("pairing-sizes", {"q": 2, "n": 4, "k": 2, "i": 1}, [12, 12],
               [len(g2.x_vertices), len(g2.y_vertices)])
    res2 = one_to_m_matching(g2, 1)
    parts = partition_y(g2, res2.assignment)
    covered = sorted(y for ys in parts.values() for y in ys)
    report.add(
        "partition-covers-y",
        {"q": 2, "n": 4, "k": 2, "i": 1},
        list(range(len(g2.y_vertices))),
        covered,
    )
    report.add(
        "partition-min-size",
        {"q": 2, "n": 4, "k": 2, "i": 1},
        True,
        all(len(ys) >= 1 for ys in parts.values()),
    )
    contain_ok = all(
        g2.y_vertices[y].contains(g2.x_vertices[x])
        for x, ys in parts.items()
        for y in ys
    )
    report.add("partition-containment", {"q": 2, "n": 4, "k": 2, "i": 1}, True, contain_ok)

    # deficiency: two X vertices sharing two Y neighbors cannot be 2-matched
    tiny = BipartiteGraph(
        g2.x_vertices[:2], g2.y_vertices[:2], ((0, 1), (0, 1))
    )
    res3 = one_to_m_matching(tiny, 2)
    report.add(
        "deficiency-witness",
        {},
        [None, [0, 1]],
        [res3.assignment, list(res3.deficient) if res3.deficient else None],
    )
    return report


def _suite_cross_intersecting() -> VerifyReport:
    report = VerifyReport("cross-intersecting")
    f2 = make_field(2)
    for n in (5, 6):
        center = [1] + [0] * (n - 1)
        g_k = star_family(f2, n, 2, center)
        g_nk_star = star_family(f2, n, n - 2, center)
        cb = cross_intersecting_bound(g_k, g_nk_star)
        report.add(
            "two-stars-bound",
            {"q": 2, "n": n, "k": 2, "alpha": cb.alpha, "lhs": cb.lhs, "rhs": cb.rhs},
            [True, True],
            [cb.holds, cb.equality_floor_ok],
        )
        # all (n-k)-spaces meeting every star member: exactly those through
        # the center, so the same bound and the same equality
        meeting = [
            w
            for w in enum_grassmannian(f2, n, n - 2)
            if all(w.intersection_dim(b) > 0 for b in g_k.members)
        ]
        g_meet = Family(f2, n, n - 2, meeting)
        report.add(
            "meeting-family-is-center-star",
            {"q": 2, "n": n},
            len(g_nk_star),
            len(g_meet),
        )
        cb2 = cross_intersecting_bound(g_k, g_meet)
        report.add(
            "star-vs-meeting-bound",
            {"q": 2, "n": n, "lhs": cb2.lhs, "rhs": cb2.rhs},
            [True, True, True],
            [cb2.holds, cb2.is_equality, cb2.equality_floor_ok],
        )
        # pruned star: the inequality must be strict
        pruned = Family(f2, n, 2, g_k.members[:-3])
        cb3 = cross_intersecting_bound(pruned, g_nk_star)
        report.add(
            "pruned-star-strict",
            {"q": 2, "n": n},
            [True, False],
            [cb3.holds, cb3.is_equality],
        )
    return report


def _suite_layers() -> VerifyReport:
    report = VerifyReport("layers")
    f2 = make_field(2)
    for n, k in ((5, 2), (6, 2), (6, 3)):
        center = [1] + [0] * (n - 1)
        star = star_family(f2, n, k, center)
        ctx = phi_context(star, star.members[0])
        for i in range(1, k // 2 + 1):
            lb = check_layer_inequality(ctx, i)
            report.add(
                "star-layer-bound",
                {"q": 2, "n": n, "k": k, "i": i, "lhs": lb.lhs, "rhs": lb.rhs},
                [True, True],
                [lb.holds, lb.lhs == lb.rhs],
            )
    star5 = star_family(f2, 5, 2, (1, 0, 0, 0, 0))
    sub = Family(f2, 5, 2, star5.members[:3])
    lb = check_layer_inequality(phi_context(sub, sub.members[0]), 1)
    report.add(
        "subfamily-layer-bound",
        {"q": 2, "n": 5, "k": 2, "size": 3, "lhs": lb.lhs, "rhs": lb.rhs},
        [True, False],
        [lb.holds, lb.lhs == lb.rhs],
    )
    from .grassmann import subspace_from_vectors

    sp = lambda *vs: subspace_from_vectors(f2, 4, vs)
    bad = Family(
        f2,
        4,
        2,
        [
            sp((1, 0, 0, 0), (0, 1, 0, 0)),
            sp((0, 0, 1, 0), (0, 0, 0, 1)),
            sp((1, 0, 0, 0), (0, 0, 1, 0)),
        ],
    )
    raised = False
    try:
        check_layer_inequality(phi_context(bad, bad.members[0]), 1)
    except NotCoveringTripleFree:
        raised = True
    report.add("covering-triple-guard", {}, True, raised)
    return report
