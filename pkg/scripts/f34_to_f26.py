#!/usr/bin/env python3
"""Long-running, budgeted search for a nondegenerate map X(F_3^4) -> X(F_2^6).

A map would give s_2(X(F_3^4)) >= 74.  The complex has 80 vertices and
about 10^6 facets, so facet enumeration alone takes a while; the result is
informative only if the search finishes within the budget.
"""

import argparse
import time

from buchstaber.complexes import Universal, count_bases
from buchstaber.search import SearchBudget, search_map


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--hours", type=float, default=1.0)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--witness", default="f34_to_f26_witness.json")
    args = ap.parse_args()

    src = Universal(3, 4)
    print(f"enumerating {count_bases(3, 4)} facets of X(F_3^4) ...", flush=True)
    t0 = time.perf_counter()
    facets = src.facets()
    print(f"  done in {time.perf_counter() - t0:.0f}s", flush=True)
    budget = SearchBudget(max_seconds=args.hours * 3600, workers=args.threads)
    out = search_map(src, 2, 6, budget, facets=facets)
    print(out.summary())
    if out.found:
        with open(args.witness, "w") as fh:
            fh.write(out.witness.dumps())
        print(f"witness written to {args.witness}")


if __name__ == "__main__":
    main()
