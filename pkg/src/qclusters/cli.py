"""Command-line interface.

Subcommands: count, generate-star, check, verify, search, explore.
Exit codes: 0 success/pass, 1 predicate or verification failure,
2 usage or parse error, 3 search timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Any, Sequence

from . import families as fam_mod
from . import familyfile, qarith, search as search_mod, verify as verify_mod
from .errors import DuplicateSubspace, EmptyFamily, FamilyFileError, NotPrimePower, Unsupported
from .families import COVERING_TRIPLE, D_CLUSTER, THREE_CLUSTER, Family
from .gfq import make_field
from .qarith import gauss_binom, gauss_binom_poly

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3

CHECK_PREDICATES = (
    "intersecting",
    "star",
    "covering-triple-free",
    "3-cluster-free",
    "d-cluster-free",
)

SEARCH_PREDICATES = {
    "covering-triple": COVERING_TRIPLE,
    "3-cluster": THREE_CLUSTER,
    "d-cluster": D_CLUSTER,
}


def _poly_text(coeffs: Sequence[int]) -> str:
    terms = []
    for power in range(len(coeffs) - 1, -1, -1):
        c = coeffs[power]
        if not c:
            continue
        if power == 0:
            terms.append(str(c))
        else:
            q = "q" if power == 1 else f"q^{power}"
            terms.append(q if c == 1 else f"{c}{q}")
    return " + ".join(terms) if terms else "0"


def _emit(data: dict[str, Any], as_json: bool, text_lines: Sequence[str]) -> None:
    if as_json:
        print(json.dumps(data, separators=(",", ":"), sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _witness_rows(subs: Sequence) -> list[list[list[int]]]:
    return [[list(r) for r in s.basis.to_rows()] for s in subs]


def cmd_count(args: argparse.Namespace) -> int:
    try:
        make_field(args.q)
        value = gauss_binom(args.n, args.k, args.q)
    except (NotPrimePower, Unsupported, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    poly = gauss_binom_poly(args.n, args.k)
    data = {
        "q": args.q,
        "n": args.n,
        "k": args.k,
        "count": value,
        "polynomial": list(poly.coeffs),
    }
    _emit(
        data,
        args.output == "json",
        [
            f"[{args.n}, {args.k}]_{args.q} = {value}",
            f"polynomial: {_poly_text(poly.coeffs)}",
        ],
    )
    return EXIT_OK


def cmd_generate_star(args: argparse.Namespace) -> int:
    try:
        center = [int(x) for x in args.center.split(",")]
    except ValueError:
        print("error: center must be comma-separated integers", file=sys.stderr)
        return EXIT_USAGE
    if len(center) != args.n or not any(center):
        print("error: center must be a nonzero vector of length n", file=sys.stderr)
        return EXIT_USAGE
    try:
        field = make_field(args.q)
        star = fam_mod.star_family(field, args.n, args.k, center)
    except (NotPrimePower, Unsupported, EmptyFamily, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(familyfile.format_family(star))
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    try:
        with open(args.family) as fh:
            fam = familyfile.load_family(fh)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DuplicateSubspace, FamilyFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    # star is opt-in: an empty family vacuously passes the default checks
    requested = args.predicate or [
        "intersecting",
        "covering-triple-free",
        "3-cluster-free",
    ]
    if "d-cluster-free" in requested and args.d is None:
        print("error: d-cluster-free needs --d", file=sys.stderr)
        return EXIT_USAGE
    checks = []
    all_hold = True
    for pred in requested:
        witness = None
        centers = None
        if pred == "intersecting":
            holds = fam_mod.is_intersecting(fam)
        elif pred == "star":
            found_centers = (
                fam_mod.star_centers(fam) if fam.members else frozenset()
            )
            holds = bool(found_centers)
            centers = sorted(list(c.basis.row(0)) for c in found_centers)
        elif pred == "covering-triple-free":
            found = fam_mod.find_forbidden(fam, COVERING_TRIPLE)
            holds = found is None
            witness = found
        elif pred == "3-cluster-free":
            found = fam_mod.find_forbidden(fam, THREE_CLUSTER)
            holds = found is None
            witness = found
        else:
            found = fam_mod.find_forbidden(fam, D_CLUSTER, args.d)
            holds = found is None
            witness = found
        all_hold = all_hold and holds
        record: dict[str, Any] = {
            "predicate": pred,
            "holds": holds,
            "witness": _witness_rows(witness) if witness else None,
        }
        if centers is not None:
            record["centers"] = centers
        checks.append(record)
    data = {
        "q": fam.field.q,
        "n": fam.n,
        "k": fam.k,
        "size": len(fam),
        "checks": checks,
        "pass": all_hold,
    }
    lines = [f"family: q={fam.field.q} n={fam.n} k={fam.k} size={len(fam)}"]
    for c in checks:
        mark = "ok" if c["holds"] else "VIOLATED"
        lines.append(f"  {c['predicate']}: {mark}")
        if c["witness"]:
            lines.append(f"    witness: {c['witness']}")
    lines.append("PASS" if all_hold else "FAIL")
    _emit(data, args.output == "json", lines)
    return EXIT_OK if all_hold else EXIT_FAIL


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        qs = tuple(int(x) for x in args.q.split(",")) if args.q else None
    except ValueError:
        print("error: --q expects comma-separated integers", file=sys.stderr)
        return EXIT_USAGE
    report = verify_mod.run_suite(args.suite, qs=qs, n_max=args.n_max, seed=args.seed)
    data = report.to_json_dict(include_timing=not args.no_timing)
    lines = [f"suite {report.suite}: {len(report.checks)} checks"]
    for c in report.checks:
        if not c.passed:
            lines.append(f"  FAIL {c.check_id} {c.params}: expected {c.expected}, got {c.actual}")
    lines.append("PASS" if report.passed else "FAIL")
    _emit(data, args.output == "json", lines)
    return EXIT_OK if report.passed else EXIT_FAIL


def _search_report_dict(report: search_mod.SearchReport, no_timing: bool) -> dict[str, Any]:
    return {
        "q": report.q,
        "n": report.n,
        "k": report.k,
        "predicate": report.predicate,
        "d": report.d,
        "optimum": report.optimum,
        "star_bound": report.star_bound,
        "bound_attained": report.optimum == report.star_bound,
        "nodes_explored": report.nodes_explored,
        "optimality_proved": report.optimality_proved,
        "witness": _witness_rows(report.witness.members),
        "all_maxima_count": report.all_maxima_count,
        "star_maxima_count": report.star_maxima_count,
        "wall_time_s": 0.0 if no_timing else round(report.wall_time_s, 3),
    }


def cmd_search(args: argparse.Namespace) -> int:
    predicate = SEARCH_PREDICATES[args.predicate]
    if predicate == D_CLUSTER and args.d is None:
        print("error: --predicate d-cluster needs --d", file=sys.stderr)
        return EXIT_USAGE
    try:
        field = make_field(args.q)
    except (NotPrimePower, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not 1 <= args.k <= args.n:
        print("error: need 1 <= k <= n", file=sys.stderr)
        return EXIT_USAGE
    report = search_mod.search_max(
        field,
        args.n,
        args.k,
        predicate,
        d=args.d,
        fix_first=args.fix_first,
        time_limit=args.time_limit,
        parallel=args.parallel,
    )
    if args.all_maxima and report.optimality_proved:
        maxima = list(
            search_mod.enumerate_maxima(
                field, args.n, args.k, predicate, report.optimum, d=args.d
            )
        )
        report.all_maxima_count = len(maxima)
        report.star_maxima_count = sum(1 for _, is_star in maxima if is_star)
    data = _search_report_dict(report, args.no_timing)
    lines = [
        f"search q={args.q} n={args.n} k={args.k} predicate={args.predicate}"
        + (f" d={args.d}" if args.d else ""),
        f"optimum = {report.optimum} (star bound {report.star_bound})",
        f"optimality proved: {report.optimality_proved}",
        f"nodes explored: {report.nodes_explored}",
    ]
    if report.all_maxima_count is not None:
        lines.append(
            f"maximum families: {report.all_maxima_count} "
            f"({report.star_maxima_count} stars)"
        )
    _emit(data, args.output == "json", lines)
    return EXIT_OK if report.optimality_proved else EXIT_TIMEOUT


def cmd_explore(args: argparse.Namespace) -> int:
    """Search sweep over a (q, n, k, d) grid for d-cluster-free maxima."""
    try:
        qs = [int(x) for x in args.q.split(",")]
        ds = [int(x) for x in args.d_list.split(",")]
    except ValueError:
        print("error: --q and --d-list expect comma-separated integers", file=sys.stderr)
        return EXIT_USAGE
    rows = []
    timed_out = False
    for q in qs:
        field = make_field(q)
        for n in range(2, args.n_max + 1):
            for k in range(1, min(args.k_max, n) + 1):
                for d in ds:
                    # below this bound any d members of the Grassmannian
                    # share a nonzero vector, so nothing is ever forbidden
                    if n * (d - 1) < d * k:
                        continue
                    report = search_mod.search_max(
                        field, n, k, D_CLUSTER, d=d, time_limit=args.time_limit,
                        fix_first=args.fix_first,
                    )
                    timed_out = timed_out or not report.optimality_proved
                    rows.append(_search_report_dict(report, args.no_timing))
    data = {"grid": rows}
    lines = ["q n k d optimum star_bound attained proved"]
    for r in rows:
        lines.append(
            f"{r['q']} {r['n']} {r['k']} {r['d']} {r['optimum']} "
            f"{r['star_bound']} {str(r['bound_attained']).lower()} "
            f"{str(r['optimality_proved']).lower()}"
        )
    _emit(data, args.output == "json", lines)
    return EXIT_TIMEOUT if timed_out else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qclusters",
        description="Exact search and verification for cluster-free subspace families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="Gaussian binomial, numeric and polynomial")
    p_count.add_argument("--q", type=int, required=True)
    p_count.add_argument("--n", type=int, required=True)
    p_count.add_argument("--k", type=int, required=True)
    p_count.add_argument("--output", choices=("text", "json"), default="text")
    p_count.set_defaults(func=cmd_count)

    p_star = sub.add_parser("generate-star", help="emit the full star as a family file")
    p_star.add_argument("--q", type=int, required=True)
    p_star.add_argument("--n", type=int, required=True)
    p_star.add_argument("--k", type=int, required=True)
    p_star.add_argument("--center", required=True, help="comma-separated coordinates")
    p_star.set_defaults(func=cmd_generate_star)

    p_check = sub.add_parser("check", help="predicate checks on a family file")
    p_check.add_argument("family", help="path to a family file")
    p_check.add_argument(
        "--predicate", action="append", choices=CHECK_PREDICATES, default=None
    )
    p_check.add_argument("--d", type=int, default=None)
    p_check.add_argument("--output", choices=("text", "json"), default="text")
    p_check.set_defaults(func=cmd_check)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=verify_mod.SUITES)
    p_verify.add_argument("--q", default=None, help="comma-separated field orders")
    p_verify.add_argument("--n-max", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    p_verify.add_argument("--output", choices=("text", "json"), default="text")
    p_verify.add_argument("--no-timing", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_search = sub.add_parser("search", help="exact maximum predicate-free family")
    p_search.add_argument("--q", type=int, required=True)
    p_search.add_argument("--n", type=int, required=True)
    p_search.add_argument("--k", type=int, required=True)
    p_search.add_argument(
        "--predicate", choices=tuple(SEARCH_PREDICATES), required=True
    )
    p_search.add_argument("--d", type=int, default=None)
    p_search.add_argument("--fix-first", action="store_true")
    p_search.add_argument("--all-maxima", action="store_true")
    p_search.add_argument("--time-limit", type=float, default=None)
    p_search.add_argument("--parallel", action="store_true")
    p_search.add_argument("--output", choices=("text", "json"), default="text")
    p_search.add_argument("--no-timing", action="store_true")
    p_search.set_defaults(func=cmd_search)

    p_explore = sub.add_parser("explore", help="d-cluster search sweep over a grid")
    p_explore.add_argument("--q", default="2")
    p_explore.add_argument("--n-max", type=int, default=4)
    p_explore.add_argument("--k-max", type=int, default=2)
    p_explore.add_argument("--d-list", default="3,4")
    p_explore.add_argument("--time-limit", type=float, default=None)
    p_explore.add_argument("--fix-first", action="store_true")
    p_explore.add_argument("--output", choices=("text", "json"), default="text")
    p_explore.add_argument("--no-timing", action="store_true")
    p_explore.set_defaults(func=cmd_explore)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
