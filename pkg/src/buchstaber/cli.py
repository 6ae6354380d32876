"""Command-line front end.

Exit codes: 0 success or map exists, 1 proven nonexistent or invalid map,
2 usage or guard error, 3 undecided within the budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import verify
from .cache import ResultCache, resolve_path
from .complexes import GuardError, Skeleton, Universal, count_minimal_nonsimplices, descriptor_from_json, enumerate_minimal_nonsimplices
from .fplinalg import FieldError, Prime, ShapeError
from .invariants import InvariantResult, sp_skeleton, sp_universal
from .search import IncompleteMapError, SearchBudget, VertexMap, find_violation, search_map

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3
TABLE_GUARD = 9

log = logging.getLogger("buchstaber")


class UsageError(Exception):
    pass


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget_nodes, args.budget_seconds, args.threads)


def _prime(value: str) -> int:
    try:
        return Prime(int(value))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _load_complex(path: str):
    try:
        return descriptor_from_json(_read_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad complex description in {path}: {exc}") from None


def _write_witness(path: str | None, fmap: VertexMap | None) -> None:
    if path and fmap is not None:
        Path(path).write_text(fmap.dumps() + "\n")
        log.info("witness written to %s", path)


def _cache(args) -> ResultCache | None:
    if args.no_cache:
        return None
    return ResultCache(resolve_path(args.cache))


def _solve(args, descriptor, compute) -> InvariantResult:
    cache = _cache(args)
    if cache is not None:
        hit = cache.get(descriptor.key(), args.p)
        if hit is not None:
            hit.method = f"cached:{hit.method}"
            return hit
    res = compute()
    if cache is not None:
        cache.put(res)
    return res


def _method_text(method: str) -> str:
    return method.replace("+", " + ")


def _report(args, res: InvariantResult) -> int:
    if args.format == "json":
        print(json.dumps(res.to_json(), indent=1))
    else:
        value = str(res.value) if res.exact else f"[{res.lo}, {res.hi}]"
        print(f"s_{res.p} = {value} ({_method_text(res.method)})")
        r = res.complex.n_vertices - res.hi
        print(f"  witness at r = {r}", file=sys.stderr)
        if res.lower_proof:
            print(f"  lower side: {res.lower_proof}", file=sys.stderr)
        elif not res.exact:
            print(f"  unproven: whether s_{res.p} exceeds {res.lo} (budget exhausted)", file=sys.stderr)
    _write_witness(args.witness, res.witness)
    return EXIT_OK if res.exact else EXIT_BUDGET


def cmd_skeleton(args) -> int:
    if args.m is None or args.k is None:
        raise UsageError("skeleton needs --m and --k")
    if args.m < 1 or not 0 <= args.k <= args.m:
        raise UsageError(f"need m >= 1 and 0 <= k <= m, got m={args.m}, k={args.k}")
    desc = Skeleton(args.m, args.k)
    res = _solve(args, desc, lambda: sp_skeleton(args.m, args.k, args.p, _budget(args)))
    return _report(args, res)


def cmd_universal(args) -> int:
    if args.source_p is None or args.n is None:
        raise UsageError("universal needs --source-p and --n")
    desc = Universal(args.source_p, args.n)
    res = _solve(args, desc, lambda: sp_universal(args.source_p, args.n, args.p, _budget(args)))
    return _report(args, res)


def _cell(res: InvariantResult) -> str:
    return str(res.value) if res.exact else f"{res.lo}..{res.hi}?"


def render_table(results: dict[tuple[int, int], InvariantResult], max_m: int, fmt: str) -> str:
    ks = list(range(max_m + 1))
    rows = [[str(m)] + [_cell(results[(m, k)]) if (m, k) in results else "" for k in ks] for m in range(1, max_m + 1)]
    header = ["m\\k"] + [str(k) for k in ks]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        cells = [
            {"m": m, "k": k, "lo": r.lo, "hi": r.hi, "exact": r.exact, "method": r.method}
            for (m, k), r in sorted(results.items())
        ]
        return json.dumps({"cells": cells}, indent=1) + "\n"
    lines = ["| " + " | ".join(header) + " |", "|" + "---|" * len(header)]
    lines += ["| " + " | ".join(row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def cmd_table(args) -> int:
    max_m = args.max_m
    if max_m < 1:
        raise UsageError("--max-m must be at least 1")
    if max_m > TABLE_GUARD and not args.force:
        raise UsageError(f"--max-m {max_m} exceeds the guard {TABLE_GUARD}; pass --force to override")
    cache = _cache(args)
    budget = _budget(args)
    results = {}
    for m in range(1, max_m + 1):
        for k in range(m + 1):
            res = cache.get(Skeleton(m, k).key(), args.p) if cache else None
            if res is None:
                res = sp_skeleton(m, k, args.p, budget)
                if cache is not None:
                    cache.put(res)
            results[(m, k)] = res
    sys.stdout.write(render_table(results, max_m, args.format or "md"))
    undecided = [mk for mk, r in results.items() if not r.exact]
    if undecided:
        print(f"{len(undecided)} cell(s) undecided within the budget: {undecided}", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_search_map(args) -> int:
    if args.r is None or args.r < 1:
        raise UsageError("search-map needs --r >= 1")
    source = _load_complex(args.source)
    facets = source.facets() if isinstance(source, Universal) else None
    out = search_map(source, args.p, args.r, _budget(args), facets=facets)
    print(out.summary(), file=sys.stderr)
    if out.found:
        if args.witness:
            _write_witness(args.witness, out.witness)
        else:
            print(out.witness.dumps())
        return EXIT_OK
    if out.exhausted:
        print(f"no nondegenerate map into X(F_{args.p}^{args.r})")
        return EXIT_NO
    print("undecided: budget exhausted")
    return EXIT_BUDGET


def cmd_check_map(args) -> int:
    source = _load_complex(args.source)
    try:
        fmap = VertexMap.from_json(_read_json(args.map))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad map file {args.map}: {exc}") from None
    extra = [v for v in fmap.assignments if not 0 <= v < source.n_vertices]
    if extra:
        raise UsageError(f"map assigns vertices outside the source: {extra[:10]}")
    try:
        bad = find_violation(source, fmap)
    except IncompleteMapError as exc:
        raise UsageError(str(exc)) from None
    if bad is None:
        print("nondegenerate")
        return EXIT_OK
    print(f"degenerate: simplex {list(bad)} maps to a dependent set")
    return EXIT_NO


def cmd_count(args) -> int:
    if args.n is None or args.j is None:
        raise UsageError("count needs --n and --j")
    try:
        value = count_minimal_nonsimplices(args.p, args.n, args.j)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(value)
    if args.brute_force:
        oracle = len(enumerate_minimal_nonsimplices(args.p, args.n, args.j))
        print(f"enumeration: {oracle}")
        print("MATCH" if oracle == value else "MISMATCH")
        return EXIT_OK if oracle == value else EXIT_NO
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    budget = _budget(args)

    def show(res):
        if args.format != "json":
            print(res.line(), flush=True)

    results = verify.run_all(seed=args.seed, skip_slow=args.skip_slow, budget=budget, progress=show)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in results], indent=1))
    return EXIT_OK if all(r.status != verify.FAIL for r in results) else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_prime, default=2, help="target prime (default 2)")
    common.add_argument("--budget-nodes", type=int, default=None, help="node limit per search")
    common.add_argument("--budget-seconds", type=float, default=None, help="time limit per search")
    common.add_argument("--threads", type=int, default=1, help="worker processes for search")
    common.add_argument("--format", choices=("md", "csv", "json"), default=None)
    common.add_argument("--witness", metavar="PATH", help="write the witness map here")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the result cache")
    common.add_argument("--cache", metavar="PATH", help="cache file (else $BUCHSTABER_CACHE, else the user data dir)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="buchstaber", description="Mod-p Buchstaber invariants via nondegenerate maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("skeleton", parents=[common], help="s_p of the k-skeleton of the m-simplex")
    p.add_argument("--m", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("table", parents=[common], help="triangular table of s_p(skeleton)")
    p.add_argument("--max-m", type=int, default=TABLE_GUARD)
    p.add_argument("--force", action="store_true", help=f"allow --max-m above {TABLE_GUARD}")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("search-map", parents=[common], help="search a nondegenerate map into X(F_p^r)")
    p.add_argument("source", help="complex JSON file ('-' for stdin)")
    p.add_argument("--r", type=int)
    p.set_defaults(func=cmd_search_map)

    p = sub.add_parser("check-map", parents=[common], help="verify a witness map")
    p.add_argument("source", help="complex JSON file")
    p.add_argument("map", help="witness JSON file")
    p.set_defaults(func=cmd_check_map)

    p = sub.add_parser("count", parents=[common], help="minimal j-nonsimplices of X(F_p^n)")
    p.add_argument("--n", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--brute-force", action="store_true", help="also enumerate and compare")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("universal", parents=[common], help="s_p of the universal complex X(F_q^n)")
    p.add_argument("--source-p", type=_prime, help="prime of the source complex")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_universal)

    p = sub.add_parser("verify-paper", parents=[common], help="run the reproduction checks")
    p.add_argument("--skip-slow", action="store_true", help="skip the nonexistence searches")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        for name in ("budget_nodes", "budget_seconds"):
            val = getattr(args, name)
            if val is not None and val <= 0:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GuardError, ShapeError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
