"""Explicit nondegenerate maps used as witnesses.

Every builder returns a :class:`~buchstaber.search.VertexMap`; callers that
need certainty should still run ``check_nondegenerate`` on the result, and
the test-suite does so for all of them.
"""

from __future__ import annotations

from itertools import combinations
from math import comb

from .complexes import ComplexDescriptor, Universal, enumerate_orbit_representatives, enumerate_vertices, leading_one
from .fplinalg import Prime, next_prime
from .search import VertexMap, find_violation


class PreconditionError(ValueError):
    """A construction was asked for outside the range where it is valid."""


class LiftError(ValueError):
    """Reading a 0/1 map modulo q produced a degenerate map."""

    def __init__(self, simplex: tuple[int, ...], q: int):
        super().__init__(f"lifted map is degenerate mod {q} on simplex {list(simplex)}")
        self.simplex = simplex
        self.q = q


def _unit(i: int, r: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(r))


def basis_plus_ones_map(m: int, p: int) -> VertexMap:
    """Vertices 0..m-1 to e_1..e_m and vertex m to (1, ..., 1).

    Nondegenerate on the k-skeleton of the m-simplex for every k <= m-1.
    """
    if m < 1:
        raise PreconditionError("need m >= 1")
    images = {i: _unit(i, m) for i in range(m)}
    images[m] = (1,) * m
    return VertexMap(p, m, images)


def vandermonde_skeleton_map(m: int, k: int, p: int) -> VertexMap:
    """Map of the k-skeleton of the m-simplex into X(F_p^{k+1}) when m <= p.

    Vertex i < m goes to (1, i, i^2, ..., i^k) and vertex m to e_{k+1}.
    Any k+1 of the first m images form a Vandermonde matrix with distinct
    nodes mod p, hence are independent.
    """
    p = Prime(p)
    if m > p:
        raise PreconditionError(f"the Vandermonde map needs m <= p, got m={m}, p={p}")
    if not 0 <= k <= m - 1:
        raise PreconditionError(f"need 0 <= k <= m-1, got k={k}, m={m}")
    images = {i: tuple(pow(i, e, p) for e in range(k + 1)) for i in range(m)}
    images[m] = _unit(k, k + 1)
    return VertexMap(p, k + 1, images)


def forbidden_sum(m: int, k: int, p: int) -> int:
    """(p-1)C(m,1) + ... + (p-1)^k C(m,k): the bound on the forbidden set."""
    return sum((p - 1) ** i * comb(m, i) for i in range(1, k + 1))


def greedy_feasible(m: int, k: int, p: int, n: int) -> bool:
    return forbidden_sum(m, k, p) < p**n - 1


def greedy_skeleton_map(m: int, k: int, p: int, n: int) -> VertexMap:
    """Build a map Δ^m_(k) -> X(F_p^n) one vertex at a time.

    Vertices 0..k take e_1..e_{k+1}.  Each later vertex takes the
    lexicographically first nonzero vector lying in no span of k earlier
    images; the counting hypothesis guarantees one exists.
    """
    p = Prime(p)
    if not 0 <= k <= m:
        raise PreconditionError(f"need 0 <= k <= m, got m={m}, k={k}")
    if not greedy_feasible(m, k, p, n):
        raise PreconditionError(
            f"counting condition fails: {forbidden_sum(m, k, p)} >= {p}^{n} - 1"
        )
    zero = (0,) * n
    # layers[j]: vectors expressible with at most j nonzero terms
    layers = [{zero} for _ in range(k + 1)]
    images: dict[int, tuple[int, ...]] = {}
    candidates = enumerate_vertices(p, n)
    for v in range(m + 1):
        if v <= k:
            x = _unit(v, n)
        else:
            x = next(c for c in candidates if c not in layers[k])
        images[v] = x
        for j in range(k, 0, -1):
            grown = set()
            for y in layers[j - 1]:
                for a in range(1, p):
                    grown.add(tuple((yi + a * xi) % p for yi, xi in zip(y, x)))
            layers[j] |= grown
    return VertexMap(p, n, images)


def sp2_witness_map(m: int, k: int, p: int, x1: int, x2: int, x11: int) -> VertexMap:
    """Map Δ^m_(k) -> X(F_p^{m-1}) from a solution of the (x1, x2, x11) system.

    The first m-1 vertices go to the standard basis.  Vertex m-1 has ones on
    the x1 and x11 blocks; vertex m has ones on the x2 block and cycles
    through 1..p-1 on the x11 block, which keeps the largest group of equal
    entries as small as possible.
    """
    r = m - 1
    if x1 + x2 + x11 > r:
        raise PreconditionError(f"x1+x2+x11 = {x1 + x2 + x11} exceeds m-1 = {r}")
    images = {i: _unit(i, r) for i in range(r)}
    a = [0] * r
    b = [0] * r
    for j in range(x1):
        a[j] = 1
    for j in range(x1, x1 + x2):
        b[j] = 1
    for t, j in enumerate(range(x1 + x2, x1 + x2 + x11)):
        a[j] = 1
        b[j] = 1 + t % (p - 1)
    images[r] = tuple(a)
    images[r + 1] = tuple(b)
    return VertexMap(p, r, images)


def build_f24_to_f35_map() -> VertexMap:
    """X(F_2^4) -> X(F_3^5): v -> v, except v -> v + e_5 when v has weight 3."""
    images = {}
    for i, v in enumerate(enumerate_vertices(2, 4)):
        last = 1 if sum(v) == 3 else 0
        images[i] = tuple(v) + (last,)
    return VertexMap(3, 5, images)


def hadamard_exceeds(q: int, r: int) -> bool:
    """True iff q > (r+1)^((r+1)/2) / 2^r, compared exactly as q^2 4^r > (r+1)^(r+1)."""
    return q * q * 4**r > (r + 1) ** (r + 1)


def min_safe_prime(m: int, s2: int) -> int:
    """Least prime q with q > (r+1)^((r+1)/2) / 2^r where r = m - s2."""
    if not 0 <= s2 <= m:
        raise ValueError(f"need 0 <= s2 <= m, got m={m}, s2={s2}")
    r = m - s2
    q = 2
    while not hadamard_exceeds(q, r):
        q = next_prime(q)
    return q


def lift_mod_p(fmap: VertexMap, q: int, source: ComplexDescriptor) -> VertexMap:
    """Read a 0/1 map over F_2 as a map over F_q.

    The result is nondegenerate without checking when ``source`` has
    dimension at most 2 or when q exceeds the Hadamard determinant bound for
    r x r 0/1 matrices.  Otherwise it is verified and :class:`LiftError`
    names the first failing simplex.
    """
    q = Prime(q)
    if any(c not in (0, 1) for vec in fmap.assignments.values() for c in vec):
        raise PreconditionError("lift needs a map with all coordinates in {0, 1}")
    lifted = VertexMap(q, fmap.r, fmap.assignments)
    if source.dimension <= 2 or hadamard_exceeds(q, fmap.r):
        return lifted
    bad = find_violation(source, lifted)
    if bad is not None:
        raise LiftError(bad, q)
    return lifted


def identity_map(p: int, n: int) -> VertexMap:
    return VertexMap(p, n, dict(enumerate(enumerate_vertices(p, n))))


def orbit_index(p: int, n: int) -> list[int]:
    """For each vertex of X(F_p^n), the index of its scalar orbit."""
    reps = {v: i for i, v in enumerate(enumerate_orbit_representatives(p, n))}
    return [reps[leading_one(v, p)] for v in enumerate_vertices(p, n)]


def pairing_map(p: int, n: int, skeleton_map: VertexMap) -> VertexMap:
    """Compose X(F_p^n) -> Δ^{R-1}_(n-1) (one vertex per scalar orbit) with a
    map of that skeleton.  Non-adjacent vertices v, cv share an image."""
    idx = orbit_index(p, n)
    return VertexMap(skeleton_map.p, skeleton_map.r, {v: skeleton_map[o] for v, o in enumerate(idx)})


def weight_three_cap_map() -> VertexMap:
    """Δ^12_(2) -> X(F_2^5): e_1..e_5 then the first eight weight-3 vectors.

    No three of these sum to zero: sums of two have weight 2 or 4.
    """
    vecs = [_unit(i, 5) for i in range(5)]
    for ones in combinations(range(5), 3):
        if len(vecs) == 13:
            break
        vecs.append(tuple(int(j in ones) for j in range(5)))
    return VertexMap(2, 5, dict(enumerate(vecs)))


def x_f33_to_f25_map() -> VertexMap:
    return pairing_map(3, 3, weight_three_cap_map())


def zero_one_identity(n: int, q: int) -> VertexMap:
    """The identity on X(F_2^n) with coordinates read in F_q (unchecked)."""
    return VertexMap(q, n, dict(enumerate(enumerate_vertices(2, n))))


def is_universal(source: ComplexDescriptor) -> bool:
    return isinstance(source, Universal)
