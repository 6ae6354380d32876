"""Exact linear algebra over the prime field F_p.

Two layers live here.  The value types (:class:`Prime`, :class:`FpScalar`,
:class:`FpVector`, :class:`FpMatrix`) carry their modulus and validate on
construction; they are what the public API hands around.  Underneath them
are plain functions on tuples of residues (``rank_mod_p``, ``det_mod_p``)
which the search engine calls directly in its hot paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence


class FieldError(ValueError):
    """Raised for domain errors (zero inverse, non-prime modulus, ...)."""


class ShapeError(ValueError):
    """Raised when matrix or vector dimensions do not fit together."""


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def next_prime(n: int) -> int:
    """Least prime strictly greater than ``n``."""
    c = max(n + 1, 2)
    while not is_prime(c):
        c += 1
    return c


class Prime(int):
    """An ``int`` that is known to be prime."""

    def __new__(cls, value: int) -> "Prime":
        if isinstance(value, Prime):
            return value
        if isinstance(value, bool) or int(value) != value or not is_prime(int(value)):
            raise FieldError(f"{value!r} is not a prime")
        return super().__new__(cls, int(value))


def _inv(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise FieldError(f"0 has no inverse mod {p}")
    return pow(a, -1, p)


@dataclass(frozen=True)
class FpScalar:
    residue: int
    p: Prime

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "residue", self.residue % self.p)

    def _coerce(self, other: "FpScalar | int") -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise FieldError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.residue
        return int(other)

    def __add__(self, other: "FpScalar | int") -> "FpScalar":
        return FpScalar(self.residue + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other: "FpScalar | int") -> "FpScalar":
        return FpScalar(self.residue - self._coerce(other), self.p)

    def __neg__(self) -> "FpScalar":
        return FpScalar(-self.residue, self.p)

    def __mul__(self, other: "FpScalar | int") -> "FpScalar":
        return FpScalar(self.residue * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __truediv__(self, other: "FpScalar | int") -> "FpScalar":
        return self * _inv(self._coerce(other), self.p)

    def __bool__(self) -> bool:
        return self.residue != 0

    def __int__(self) -> int:
        return self.residue

    def inverse(self) -> "FpScalar":
        return scalar_inverse(self)


def scalar_inverse(a: FpScalar) -> FpScalar:
    """Multiplicative inverse; raises :class:`FieldError` on zero."""
    return FpScalar(_inv(a.residue, a.p), a.p)


@dataclass(frozen=True)
class FpVector:
    coords: tuple[int, ...]
    p: Prime

    def __post_init__(self) -> None:
        p = Prime(self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coords", tuple(int(c) % p for c in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def _check(self, other: "FpVector") -> None:
        if other.p != self.p:
            raise FieldError(f"modulus mismatch: {self.p} vs {other.p}")
        if len(other) != len(self):
            raise ShapeError(f"length mismatch: {len(self)} vs {len(other)}")

    def __add__(self, other: "FpVector") -> "FpVector":
        self._check(other)
        return FpVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.p)

    def __sub__(self, other: "FpVector") -> "FpVector":
        self._check(other)
        return FpVector(tuple(a - b for a, b in zip(self.coords, other.coords)), self.p)

    def scale(self, c: "FpScalar | int") -> "FpVector":
        c = int(c)
        return FpVector(tuple(c * a for a in self.coords), self.p)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return not any(self.coords)


def support(v: FpVector | Sequence[int], offset: int = 1) -> frozenset[int]:
    """Indices of the nonzero coordinates of ``v``.

    Indices start at ``offset``; the default of 1 matches the usual
    mathematical convention ``I(v) = {i : v_i != 0}``.
    """
    coords = v.coords if isinstance(v, FpVector) else v
    return frozenset(i + offset for i, c in enumerate(coords) if c)


@dataclass(frozen=True)
class FpMatrix:
    """Dense ``rows x cols`` matrix over F_p, stored row-major."""

    rows: tuple[tuple[int, ...], ...]
    p: Prime
    ncols: int = -1

    def __post_init__(self) -> None:
        p = Prime(self.p)
        rows = tuple(tuple(int(x) % p for x in r) for r in self.rows)
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise ShapeError("ragged matrix")
        ncols = widths.pop() if widths else max(self.ncols, 0)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "ncols", ncols)

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int] | FpVector], p: int, nrows: int | None = None) -> "FpMatrix":
        cols = [tuple(c) for c in columns]
        if not cols:
            return cls(tuple(() for _ in range(nrows or 0)), Prime(p), 0)
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ShapeError("columns of different lengths")
        if nrows is not None and nrows != n:
            raise ShapeError(f"expected columns of length {nrows}, got {n}")
        return cls(tuple(zip(*cols)), Prime(p))

    @classmethod
    def identity(cls, n: int, p: int) -> "FpMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), Prime(p), n)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def transpose(self) -> "FpMatrix":
        if not self.rows:
            return FpMatrix(tuple(() for _ in range(self.ncols)), self.p, 0)
        return FpMatrix(tuple(zip(*self.rows)), self.p, len(self.rows))

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.ncols)]


def _echelon(rows: Sequence[Sequence[int]], p: int) -> tuple[list[list[int]], int, int]:
    """Row-reduce a copy of ``rows``; return (matrix, rank, sign-free det factor).

    Pivots are taken as the first nonzero entry scanning down each column.
    The third return value is the product of pivots times (-1)^swaps, which
    is the determinant when the matrix is square and of full rank.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank = 0
    det = 1
    for col in range(ncols):
        if rank == nrows:
            break
        piv = next((i for i in range(rank, nrows) if a[i][col] % p), None)
        if piv is None:
            continue
        if piv != rank:
            a[rank], a[piv] = a[piv], a[rank]
            det = -det
        pv = a[rank][col] % p
        det = det * pv % p
        inv = pow(pv, -1, p)
        prow = a[rank]
        for i in range(rank + 1, nrows):
            f = a[i][col] % p
            if f:
                f = f * inv % p
                row = a[i]
                for j in range(col, ncols):
                    row[j] = (row[j] - f * prow[j]) % p
        rank += 1
    return a, rank, det % p


def rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a residue table (list of rows) over F_p."""
    if not rows or not rows[0]:
        return 0
    return _echelon(rows, p)[1]


def det_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeError("determinant of a non-square matrix")
    if n == 0:
        return 1 % p
    _, r, d = _echelon(rows, p)
    return d if r == n else 0


def rank(m: FpMatrix) -> int:
    """F_p-rank by exact Gaussian elimination (0 for empty matrices)."""
    return rank_mod_p(m.rows, m.p)


def determinant(m: FpMatrix) -> FpScalar:
    nrows, ncols = m.shape
    if nrows != ncols:
        raise ShapeError(f"determinant needs a square matrix, got {nrows}x{ncols}")
    return FpScalar(det_mod_p(m.rows, m.p), m.p)


def columns_independent(vectors: Sequence[Sequence[int]], p: int) -> bool:
    """True iff the given coordinate vectors are linearly independent mod p."""
    if not vectors:
        return True
    if len(vectors) > len(vectors[0]):
        return False
    return rank_mod_p(vectors, p) == len(vectors)
