"""Simplicial complex descriptors and the universal complexes X(F_p^n).

Three kinds of source complex are supported:

* :class:`Explicit` -- vertex count plus a list of maximal simplices,
* :class:`Skeleton` -- the k-skeleton of the m-simplex, on vertices 0..m,
* :class:`Universal` -- X(F_p^n), whose vertices are the nonzero vectors of
  F_p^n in lexicographic order and whose simplices are the linearly
  independent subsets.

The universal complex is never stored as a list of simplices; membership is
a rank test.  Vectors are also handled as integer *codes*: the base-p
number whose digits are the coordinates, most significant first, so integer
order is lexicographic order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from math import comb, factorial
from typing import Iterable, Iterator, Sequence, Union

from .fplinalg import FieldError, FpVector, Prime, ShapeError, columns_independent

ENUMERATION_LIMIT = 1 << 20


class GuardError(RuntimeError):
    """An enumeration would exceed its configured size guard."""


Vector = tuple[int, ...]


def encode(v: Sequence[int], p: int) -> int:
    code = 0
    for c in v:
        code = code * p + c % p
    return code


def decode(code: int, p: int, n: int) -> Vector:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        code, out[i] = divmod(code, p)
    return tuple(out)


def leading_one(v: Sequence[int], p: int) -> Vector:
    """Scale ``v`` so that its first nonzero coordinate is 1."""
    lead = next((c % p for c in v if c % p), None)
    if lead is None:
        raise FieldError("the zero vector has no scalar normal form")
    inv = pow(lead, -1, p)
    return tuple(c * inv % p for c in v)


def _guard(p: int, n: int, limit: int | None) -> None:
    limit = ENUMERATION_LIMIT if limit is None else limit
    if p**n > limit:
        raise GuardError(f"F_{p}^{n} has {p**n} vectors, above the enumeration guard {limit}")


def enumerate_vertices(p: int, n: int, limit: int | None = None) -> list[Vector]:
    """All nonzero vectors of F_p^n in lexicographic order (p^n - 1 of them)."""
    p = Prime(p)
    if n < 0:
        raise ShapeError("negative dimension")
    _guard(p, n, limit)
    return list(_nonzero_vectors(p, n))


@lru_cache(maxsize=64)
def _nonzero_vectors(p: int, n: int) -> tuple[Vector, ...]:
    return tuple(v for v in product(range(p), repeat=n) if any(v))


def enumerate_orbit_representatives(p: int, n: int, limit: int | None = None) -> list[Vector]:
    """One vector per scalar orbit: those whose leading nonzero coordinate is 1."""
    return [v for v in enumerate_vertices(p, n, limit) if next(c for c in v if c) == 1]


def universal_degree(p: int, n: int) -> int:
    """Number of neighbours of any vertex of X(F_p^n), i.e. p^n - p."""
    p = Prime(p)
    if n < 1:
        raise ShapeError("n must be at least 1")
    return p**n - p


# -- descriptors -------------------------------------------------------------


@dataclass(frozen=True)
class Explicit:
    vertex_count: int
    maximal_simplices: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        faces = tuple(sorted({frozenset(s) for s in self.maximal_simplices}, key=lambda s: (len(s), sorted(s))))
        for s in faces:
            if not s:
                raise ValueError("empty maximal simplex")
            if min(s) < 0 or max(s) >= self.vertex_count:
                raise ValueError(f"simplex {sorted(s)} outside vertex range 0..{self.vertex_count - 1}")
        for a in faces:
            for b in faces:
                if a < b:
                    raise ValueError(f"maximal simplex {sorted(a)} is contained in {sorted(b)}")
        object.__setattr__(self, "maximal_simplices", faces)

    @property
    def n_vertices(self) -> int:
        return self.vertex_count

    @property
    def dimension(self) -> int:
        return max((len(s) for s in self.maximal_simplices), default=0) - 1

    def facets(self) -> list[tuple[int, ...]]:
        # isolated vertices are still vertices of the complex
        covered = set().union(*self.maximal_simplices) if self.maximal_simplices else set()
        out = [tuple(sorted(s)) for s in self.maximal_simplices]
        out += [(v,) for v in range(self.vertex_count) if v not in covered]
        return out

    def contains(self, vertices: Iterable[int]) -> bool:
        s = frozenset(vertices)
        if any(v < 0 or v >= self.vertex_count for v in s):
            return False
        return len(s) <= 1 or any(s <= f for f in self.maximal_simplices)

    def key(self) -> str:
        return "explicit:" + json.dumps([self.vertex_count, [sorted(s) for s in self.maximal_simplices]])

    def to_json(self) -> dict:
        return {"explicit": {"vertices": self.vertex_count, "maximal_simplices": [sorted(s) for s in self.maximal_simplices]}}


@dataclass(frozen=True)
class Skeleton:
    """The k-skeleton of the m-simplex on vertices 0..m."""

    m: int
    k: int

    def __post_init__(self) -> None:
        if not 0 <= self.k <= self.m:
            raise ValueError(f"skeleton needs 0 <= k <= m, got m={self.m}, k={self.k}")

    @property
    def n_vertices(self) -> int:
        return self.m + 1

    @property
    def dimension(self) -> int:
        return self.k

    def facets(self) -> list[tuple[int, ...]]:
        return list(combinations(range(self.m + 1), self.k + 1))

    def contains(self, vertices: Iterable[int]) -> bool:
        s = set(vertices)
        return len(s) <= self.k + 1 and all(0 <= v <= self.m for v in s)

    def key(self) -> str:
        return f"skeleton:{self.m}:{self.k}"

    def to_json(self) -> dict:
        return {"skeleton": {"m": self.m, "k": self.k}}


@dataclass(frozen=True)
class Universal:
    """X(F_p^n); vertex i is ``enumerate_vertices(p, n)[i]``."""

    p: int
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Prime(self.p))
        if self.n < 1:
            raise ValueError("universal complex needs n >= 1")

    @property
    def n_vertices(self) -> int:
        return self.p**self.n - 1

    @property
    def dimension(self) -> int:
        return self.n - 1

    def vectors(self) -> list[Vector]:
        return enumerate_vertices(self.p, self.n)

    def facets(self, limit: int = 5_000_000) -> list[tuple[int, ...]]:
        """All bases of F_p^n as sorted vertex-index tuples.

        There are (p^n-1)(p^n-p)...(p^n-p^{n-1})/n! of them, so this is only
        practical for small p^n.
        """
        vecs = self.vectors()
        total = count_bases(self.p, self.n)
        if total > limit:
            raise GuardError(f"X(F_{self.p}^{self.n}) has {total} maximal simplices, above {limit}")
        return list(_independent_sets(vecs, self.p, self.n))

    def contains(self, vertices: Iterable[int]) -> bool:
        vecs = _nonzero_vectors(self.p, self.n)
        return columns_independent([vecs[i] for i in set(vertices)], self.p)

    def key(self) -> str:
        return f"universal:{self.p}:{self.n}"

    def to_json(self) -> dict:
        return {"universal": {"p": int(self.p), "n": self.n}}


ComplexDescriptor = Union[Explicit, Skeleton, Universal]


def count_bases(p: int, n: int) -> int:
    num = 1
    for i in range(n):
        num *= p**n - p**i
    return num // factorial(n)


def _independent_sets(vecs: Sequence[Vector], p: int, size: int) -> Iterator[tuple[int, ...]]:
    """Index tuples (increasing) of independent subsets of ``vecs`` of the given size."""

    def extend(prefix: list[int], start: int) -> Iterator[tuple[int, ...]]:
        if len(prefix) == size:
            yield tuple(prefix)
            return
        for i in range(start, len(vecs)):
            cand = [vecs[j] for j in prefix] + [vecs[i]]
            if columns_independent(cand, p):
                prefix.append(i)
                yield from extend(prefix, i + 1)
                prefix.pop()

    yield from extend([], 0)


def descriptor_from_json(data: dict | str) -> ComplexDescriptor:
    """Parse the complex JSON format (skeleton / universal / explicit)."""
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict) or len(data) != 1:
        raise ValueError("complex JSON must be an object with exactly one of skeleton/universal/explicit")
    (kind, body), = data.items()
    if kind == "skeleton":
        return Skeleton(int(body["m"]), int(body["k"]))
    if kind == "universal":
        return Universal(int(body["p"]), int(body["n"]))
    if kind == "explicit":
        return Explicit(int(body["vertices"]), tuple(frozenset(int(v) for v in s) for s in body["maximal_simplices"]))
    raise ValueError(f"unknown complex kind {kind!r}")


def is_simplex(descriptor: ComplexDescriptor, vertices: Iterable) -> bool:
    """Membership test.

    For :class:`Universal` the members may be given either as coordinate
    vectors or as vertex indices; vectors must be nonzero and of length n.
    """
    items = list(vertices)
    if isinstance(descriptor, Universal):
        p, n = descriptor.p, descriptor.n
        if items and not isinstance(items[0], int):
            vecs = []
            for v in items:
                if isinstance(v, FpVector) and v.p != p:
                    raise FieldError(f"vector over F_{v.p} given to X(F_{p}^{n})")
                t = tuple(int(c) % p for c in v)
                if len(t) != n:
                    raise ShapeError(f"vector {t} has length {len(t)}, expected {n}")
                if not any(t):
                    raise FieldError("the zero vector is not a vertex")
                vecs.append(t)
            return columns_independent(vecs, p)
        return descriptor.contains(items)
    return descriptor.contains(items)


def skeleton_simplices(m: int, k: int, containing: int | None = None, maximal_only: bool = False) -> Iterator[tuple[int, ...]]:
    """Faces of the k-skeleton of the m-simplex (vertices 0..m), smallest first.

    With ``containing`` only faces through that vertex are produced.
    """
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got m={m}, k={k}")
    sizes = [k + 1] if maximal_only else range(1, k + 2)
    for size in sizes:
        if containing is None:
            yield from combinations(range(m + 1), size)
        else:
            others = [v for v in range(m + 1) if v != containing]
            for rest in combinations(others, size - 1):
                yield tuple(sorted(rest + (containing,)))


# -- minimal nonsimplices of X(F_p^n) ----------------------------------------


def count_minimal_nonsimplices(p: int, n: int, j: int) -> int:
    """Number of minimal j-nonsimplices (j+1 vertices) of X(F_p^n), closed form."""
    p = Prime(p)
    if n < 2:
        raise ValueError("the counting formula needs n >= 2")
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    q = p**n
    if j == 1:
        num, den = (q - 1) * (p - 2), 2
    else:
        num = (p - 1) ** j
        for i in range(j):
            num *= q - p**i
        den = factorial(j + 1)
    count, rem = divmod(num, den)
    if rem:
        raise ArithmeticError(f"non-exact division {num}/{den}")
    return count


def enumerate_minimal_nonsimplices(p: int, n: int, j: int, max_subsets: int = 5_000_000) -> list[tuple[Vector, ...]]:
    """Brute force: every (j+1)-set of vertices that is dependent while all
    its j-subsets are independent."""
    p = Prime(p)
    if not 1 <= j <= n:
        raise ValueError(f"need 1 <= j <= n, got j={j}, n={n}")
    vecs = enumerate_vertices(p, n)
    total = comb(len(vecs), j + 1)
    if total > max_subsets:
        raise GuardError(f"{total} candidate subsets exceed the brute-force guard {max_subsets}")
    out = []
    for s in combinations(vecs, j + 1):
        if columns_independent(s, p):
            continue
        if all(columns_independent(s[:i] + s[i + 1 :], p) for i in range(j + 1)):
            out.append(s)
    return out
