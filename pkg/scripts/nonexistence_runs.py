#!/usr/bin/env python3
"""Nonexistence searches for the universal complexes, with reduction ablations.

Prints node counts and wall time for X(F_2^4) -> X(F_3^4) and
X(F_3^3) -> X(F_2^4) under every combination of the three reductions.
Unreduced variants can take a very long time; cap them with --seconds.
"""

import argparse

from buchstaber.complexes import Universal
from buchstaber.search import SearchBudget, Symmetry, search_map

CASES = {"f24-f34": (2, 4, 3, 4), "f33-f24": (3, 3, 2, 4)}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--case", choices=sorted(CASES), nargs="+", default=sorted(CASES))
    ap.add_argument("--seconds", type=float, default=600.0, help="budget per ablation run")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--full-only", action="store_true", help="only the fully reduced search")
    args = ap.parse_args()

    for name in args.case:
        p, n, q, r = CASES[name]
        src = Universal(p, n)
        facets = src.facets()
        print(f"{name}: X(F_{p}^{n}) -> X(F_{q}^{r}), {src.n_vertices} vertices, {len(facets)} facets")
        variants = [Symmetry()]
        if not args.full_only:
            variants += [Symmetry(a, b, c) for a in (True, False) for b in (True, False) for c in (True, False)][1:]
        for sym in variants:
            out = search_map(src, q, r, SearchBudget(max_seconds=args.seconds, workers=args.threads), sym, facets=facets)
            flags = f"orbits={sym.scalar_orbits:d} pinning={sym.basis_pinning:d} zero_one={sym.zero_one:d}"
            print(f"  {flags}: {out.summary()}", flush=True)


if __name__ == "__main__":
    main()
