"""Published values of mod-p Buchstaber invariants.

These tables are acceptance oracles only.  Nothing in the solvers reads
them; ``verify-paper`` and the test-suite compare computed values against
them.  Cell keys are ``(m, k)`` for the k-skeleton of the m-simplex.
"""

from __future__ import annotations

from dataclasses import dataclass

_TABLE_1_ROWS = {
    2: [2, 1, 0],
    3: [3, 2, 1, 0],
    4: [4, 2, 1, 1, 0],
    5: [5, 3, 2, 1, 1, 0],
    6: [6, 4, 3, 2, 1, 1, 0],
    7: [7, 5, 4, 3, 2, 1, 1, 0],
    8: [8, 6, 5, 4, 3, 1, 1, 1, 0],
    9: [9, 7, 6, 5, 4, 2, 1, 1, 1, 0],
}

#: mod 3 values, including the partially filled row m = 10
TABLE_1: dict[tuple[int, int], int] = {(m, k): v for m, row in _TABLE_1_ROWS.items() for k, v in enumerate(row)}
TABLE_1.update({(10, 0): 10, (10, 1): 8, (10, 8): 1, (10, 9): 1, (10, 10): 0})

#: cells that differ from the mod 2 value (printed in red)
TABLE_1_RED = {(6, 3), (7, 3), (8, 2), (8, 3), (8, 4), (8, 5), (9, 2), (9, 3), (9, 4), (9, 5), (9, 6)}

# Table 2: per cell, values for p = 2, 3, 5, 7 in that order; a short list
# means the remaining primes were left blank.
_TABLE_2_PRIMES = (2, 3, 5, 7)
_TABLE_2_CELLS = {
    2: {1: (1, 1, 1, 1), 2: (0, 0, 0, 0)},
    3: {1: (1, 2, 2, 2), 2: (1, 1, 1, 1), 3: (0, 0, 0, 0)},
    4: {1: (2, 2, 3, 3), 2: (1, 1, 2, 2), 3: (1, 1, 1, 1), 4: (0, 0, 0, 0)},
    5: {1: (3, 3, 4, 4), 2: (2, 2, 3, 3), 3: (1, 1, 2, 2), 4: (1, 1, 1, 1), 5: (0, 0, 0, 0)},
    6: {1: (4, 4, 5, 5), 2: (3, 3, 4, 4), 3: (1, 2, 2, 3), 4: (1, 1, 1, 2), 5: (1, 1, 1, 1), 6: (0, 0, 0, 0)},
    7: {1: (4, 5, 5, 6), 2: (4, 4, 4, 5), 3: (2, 3, 3, 4), 4: (1, 2, 2, 3), 5: (1, 1, 1, 2), 6: (1, 1, 1, 1), 7: (0, 0, 0, 0)},
    8: {1: (5, 6, 6, 6), 2: (4, 5, 5), 3: (2, 4, 4), 4: (2, 3, 3), 5: (1, 1, 2), 6: (1, 1, 1, 1), 7: (1, 1, 1, 1), 8: (0, 0, 0, 0)},
    9: {1: (6, 7, 7, 7), 2: (5, 6), 3: (3, 5), 4: (2, 4), 5: (1, 2), 6: (1, 1), 7: (1, 1, 1, 1), 8: (1, 1, 1, 1), 9: (0, 0, 0, 0)},
}

#: TABLE_2[p][(m, k)]
TABLE_2: dict[int, dict[tuple[int, int], int]] = {p: {} for p in _TABLE_2_PRIMES}
for _m, _row in _TABLE_2_CELLS.items():
    for _k, _vals in _row.items():
        for _p, _v in zip(_TABLE_2_PRIMES, _vals):
            TABLE_2[_p][(_m, _k)] = _v


@dataclass(frozen=True)
class UniversalClaim:
    p_src: int
    n_src: int
    q: int
    value: int
    relation: str = "="  # "=" or "<="
    verified_by_paper: bool = True
    note: str = ""


UNIVERSAL_CLAIMS = [
    UniversalClaim(2, 4, 3, 10, note="no map into X(F_3^4); explicit map into X(F_3^5)"),
    UniversalClaim(2, 4, 2, 11),
    UniversalClaim(2, 4, 5, 11, note="0/1 lift, |det| <= 3 < 5"),
    UniversalClaim(2, 4, 7, 11, note="0/1 lift"),
    UniversalClaim(3, 3, 2, 21, note="pairing into the 2-skeleton of a 12-simplex, embedded in X(F_2^5)"),
    UniversalClaim(3, 4, 3, 76),
    UniversalClaim(
        3, 4, 2, 73, relation="<=", verified_by_paper=False,
        note="argued from vertex degrees only; recorded, not independently verified",
    ),
]


def identity_value(p: int, n: int) -> int:
    """s_p(X(F_p^n)) = p^n - 1 - n."""
    return p**n - 1 - n
