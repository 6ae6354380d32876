"""Mod-p Buchstaber invariants of simplex skeleta and universal complexes.

s_p(K) = m - r where m is the number of vertices of K and r the least
dimension admitting a nondegenerate map K -> X(F_p^r).  Values are derived
from closed-form rules where they apply and otherwise by bracketing r
between a construction (upper) and the dimension bound (lower), then
searching downward until a level has no map.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from . import constructions as cons
from .complexes import ComplexDescriptor, Skeleton, Universal, count_bases, enumerate_orbit_representatives
from .fplinalg import Prime
from .search import SearchBudget, SearchOutcome, VertexMap, check_nondegenerate, search_map


@dataclass
class InvariantResult:
    """Value (or bracket) of s_p together with how it was obtained.

    ``lo``/``hi`` bound s_p; the value is exact when they agree.  ``witness``
    is a map at r = m - hi and ``lower_proof`` says why no map exists one
    dimension lower.
    """

    complex: ComplexDescriptor
    p: int
    lo: int
    hi: int
    method: str
    rules: list[str] = field(default_factory=list)
    witness: VertexMap | None = None
    lower_proof: str | None = None
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def value(self) -> int | None:
        return self.lo if self.exact else None

    def describe(self) -> str:
        v = str(self.lo) if self.exact else f"[{self.lo}, {self.hi}]"
        return f"s_{self.p} = {v} ({self.method})"

    def to_json(self) -> dict:
        return {
            "complex": self.complex.to_json(),
            "p": int(self.p),
            "lo": self.lo,
            "hi": self.hi,
            "method": self.method,
            "rules": self.rules,
            "witness": self.witness.to_json() if self.witness else None,
            "lower_proof": self.lower_proof,
            "nodes": self.nodes,
        }

    @classmethod
    def from_json(cls, data: dict) -> "InvariantResult":
        from .complexes import descriptor_from_json

        w = data.get("witness")
        return cls(
            descriptor_from_json(data["complex"]),
            int(data["p"]),
            int(data["lo"]),
            int(data["hi"]),
            data["method"],
            list(data.get("rules", [])),
            VertexMap.from_json(w) if w else None,
            data.get("lower_proof"),
            int(data.get("nodes", 0)),
        )


# -- closed forms --------------------------------------------------------------


def sp_geq_two(m: int, k: int, p: int) -> bool:
    """Whether s_p(Δ^m_(k)) >= 2, for m >= 2 and 0 <= k <= m."""
    p = Prime(p)
    if m < 2 or not 0 <= k <= m:
        raise ValueError(f"need m >= 2 and 0 <= k <= m, got m={m}, k={k}")
    extra = 3 if k % p == p - 1 else 2
    return m >= k + k // p + extra


def sp_equals_one(m: int, k: int, p: int) -> bool:
    """Direct form of the s_p = 1 classification (floors written out)."""
    p = Prime(p)
    if k > m - 1:
        return False
    if k % p == p - 1:
        return p * ((m - 1) // (p + 1)) + p - 1 <= k
    return m - m // (p + 1) - 1 <= k


@dataclass(frozen=True)
class Sp2Certificate:
    x1: int
    x2: int
    x11: int
    M: int

    @property
    def total(self) -> int:
        return self.x1 + self.x2 + self.x11


def sp2_system_holds(x1: int, x2: int, x11: int, k: int, p: int) -> bool:
    return (
        x1 + x11 >= k + 1
        and x2 + x11 >= k + 1
        and x1 + x2 + x11 - (x11 + p - 2) // (p - 1) >= k
    )


def solve_sp2_system(m: int, k: int, p: int) -> Sp2Certificate | None:
    """Minimal-sum solution of the x1/x2/x11 system, or None if its sum
    exceeds m - 1."""
    p = Prime(p)
    alpha, beta = divmod(k, p)
    if beta == p - 1:
        x1 = x2 = alpha + 1
        x11 = k - alpha
    else:
        x1 = x2 = alpha
        x11 = alpha * (p - 1) + 1 + beta
    cert = Sp2Certificate(x1, x2, x11, (x11 + p - 2) // (p - 1))
    assert sp2_system_holds(x1, x2, x11, k, p)
    return cert if cert.total <= m - 1 else None


def log_argument(m: int, k: int, p: int) -> int:
    return 1 + sum((p - 1) ** i * comb(m, i) for i in range(k + 1))


def ceil_log(x: int, p: int) -> int:
    """Least n >= 0 with p^n >= x (exact integer arithmetic)."""
    n, power = 0, 1
    while power < x:
        power *= p
        n += 1
    return n


def sp_lower_bound_log(m: int, k: int, p: int) -> int:
    """m + 1 - ceil(log_p(1 + sum_{i<=k} (p-1)^i C(m,i)))."""
    p = Prime(p)
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    return m + 1 - ceil_log(log_argument(m, k, p), p)


# -- skeleta -------------------------------------------------------------------


def _closed(m: int, k: int, p: int, value: int, rule: str, witness: VertexMap, lower: str) -> InvariantResult:
    return InvariantResult(Skeleton(m, k), p, value, value, f"closed-form:{rule}", [rule], witness, lower)


def sp_skeleton(
    m: int,
    k: int,
    p: int,
    budget: SearchBudget | None = None,
    closed_forms: bool = True,
) -> InvariantResult:
    """s_p of the k-skeleton of the m-simplex.

    With ``closed_forms=False`` only constructions and searches are used,
    so the closed-form rules can be cross-checked against search.
    """
    p = Prime(p)
    if m < 1 or not 0 <= k <= m:
        raise ValueError(f"need m >= 1 and 0 <= k <= m, got m={m}, k={k}")
    source = Skeleton(m, k)
    dim_note = f"dimension: a {k}-simplex needs r >= {k + 1}"

    if k == m:
        w = VertexMap(p, m + 1, {i: cons._unit(i, m + 1) for i in range(m + 1)})
        return _closed(m, k, p, 0, "full-simplex", w, dim_note)

    if closed_forms:
        if m <= p:
            w = cons.vandermonde_skeleton_map(m, k, p)
            return _closed(m, k, p, m - k, "vandermonde", w, dim_note)
        if m >= 2 and not sp_geq_two(m, k, p):
            w = cons.basis_plus_ones_map(m, p)
            note = dim_note if k == m - 1 else "no map into X(F_p^{m-1}) by the x1/x2/x11 inequality count"
            return _closed(m, k, p, 1, "sp-equals-one", w, note)

    # upper construction for r
    rules: list[str] = []
    r_hi, witness = m, cons.basis_plus_ones_map(m, p)
    rules.append("basis-plus-ones")
    if closed_forms:
        cert = solve_sp2_system(m, k, p)
        if cert is not None and m - 1 < r_hi:
            r_hi, witness = m - 1, cons.sp2_witness_map(m, k, p, cert.x1, cert.x2, cert.x11)
            rules.append("sp2-system")
        r_greedy = m + 1 - sp_lower_bound_log(m, k, p)
        if r_greedy < r_hi:
            r_hi, witness = r_greedy, cons.greedy_skeleton_map(m, k, p, r_greedy)
            rules.append("greedy")
        r_floor = k + 1
    else:
        r_floor = 1
    if not check_nondegenerate(source, witness):
        raise AssertionError(f"construction for ({m},{k},{p}) at r={r_hi} is degenerate")

    nodes = 0
    lower = dim_note if r_hi == k + 1 else None
    r = r_hi - 1
    while r >= r_floor:
        out = search_map(source, p, r, budget)
        nodes += out.nodes
        if out.found:
            r_hi, witness = r, out.witness
            r -= 1
            continue
        if out.exhausted:
            lower = f"search exhausted at r={r} ({out.nodes} nodes)"
            break
        # budget ran out: r_hi is proven, anything down to k+1 is open
        res = InvariantResult(source, p, m + 1 - r_hi, m - k, "search", rules + ["search"], witness, None, nodes)
        return res
    else:
        lower = dim_note
    method = "closed-form+search" if closed_forms else "search"
    return InvariantResult(source, p, m + 1 - r_hi, m + 1 - r_hi, method, rules + ["search"], witness, lower, nodes)


def monotonicity_audit(table: dict[tuple[int, int], int]) -> list[str]:
    """Check s(m+1,k+1) <= s(m,k) <= s(m+1,k) <= s(m,k) + 1 over a table.

    Only inequalities whose cells are all present are tested.
    """
    out = []
    for (m, k), s in sorted(table.items()):
        diag = table.get((m + 1, k + 1))
        down = table.get((m + 1, k))
        if diag is not None and diag > s:
            out.append(f"s({m + 1},{k + 1})={diag} > s({m},{k})={s}")
        if down is not None and s > down:
            out.append(f"s({m},{k})={s} > s({m + 1},{k})={down}")
        if down is not None and down > s + 1:
            out.append(f"s({m + 1},{k})={down} > s({m},{k})+1={s + 1}")
    return out


def skeleton_table(p: int, max_m: int, budget: SearchBudget | None = None, min_m: int = 1) -> dict[tuple[int, int], InvariantResult]:
    return {(m, k): sp_skeleton(m, k, p, budget) for m in range(min_m, max_m + 1) for k in range(m + 1)}


# -- universal complexes -------------------------------------------------------


def _universal_search(source: Universal, q: int, r: int, budget: SearchBudget | None) -> SearchOutcome:
    return search_map(source, q, r, budget, facets=source.facets())


def sp_universal(p_src: int, n_src: int, q: int, budget: SearchBudget | None = None) -> InvariantResult:
    """s_q(X(F_p^n))."""
    p_src, q = Prime(p_src), Prime(q)
    source = Universal(p_src, n_src)
    N = source.n_vertices
    dim_note = f"dimension: X(F_{p_src}^{n_src}) has {n_src - 1}-simplices, so r >= {n_src}"

    def exact(r: int, rule: str, witness: VertexMap, lower: str, nodes: int = 0, method: str | None = None):
        return InvariantResult(source, q, N - r, N - r, method or f"closed-form:{rule}", [rule], witness, lower, nodes)

    if q == p_src:
        return exact(n_src, "identity", cons.identity_map(p_src, n_src), dim_note)

    r_hi, witness, rule = None, None, None
    if (p_src, n_src, q) == (2, 4, 3):
        r_hi, witness, rule = 5, cons.build_f24_to_f35_map(), "f24-to-f35"
    elif (p_src, n_src, q) == (3, 3, 2):
        r_hi, witness, rule = 5, cons.x_f33_to_f25_map(), "orbit-pairing"
    elif p_src == 2:
        lifted = cons.zero_one_identity(n_src, q)
        if n_src <= 3 or cons.hadamard_exceeds(q, n_src) or check_nondegenerate(source, lifted):
            return exact(n_src, "zero-one-lift", lifted, dim_note)

    if witness is None:
        # orbit pairing composed with a greedy map of the skeleton
        reps = len(enumerate_orbit_representatives(p_src, n_src))
        r_g = next(r for r in range(1, reps + 1) if cons.greedy_feasible(reps - 1, n_src - 1, q, r))
        sk = cons.greedy_skeleton_map(reps - 1, n_src - 1, q, r_g)
        r_hi, witness, rule = r_g, cons.pairing_map(p_src, n_src, sk), "orbit-pairing+greedy"
    if not check_nondegenerate(source, witness):
        raise AssertionError(f"construction {rule} is degenerate")

    nodes = 0
    r = r_hi - 1
    while r >= n_src:
        out = _universal_search(source, q, r, budget)
        nodes += out.nodes
        if out.found:
            r_hi, witness, rule = r, out.witness, "search"
            r -= 1
            continue
        if out.exhausted:
            return exact(r_hi, rule, witness, f"search exhausted at r={r} ({out.nodes} nodes)", nodes, f"closed-form:{rule}+search")
        return InvariantResult(source, q, N - r_hi, N - n_src, "search", [rule, "search"], witness, None, nodes)
    return exact(r_hi, rule, witness, dim_note, nodes)


def universal_facet_count(p: int, n: int) -> int:
    return count_bases(p, n)
