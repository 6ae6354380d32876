"""Backtracking search for nondegenerate simplicial maps K -> X(F_p^r).

The engine assigns source vertices one at a time in a fixed order.  Target
vectors are integer codes (see :func:`buchstaber.complexes.encode`), and
sets of target vectors are Python ints used as bitmasks.

Pruning is forward checking: once part of a facet is assigned, every
unassigned vertex of that facet is forbidden from the span of the images
assigned so far.  A vertex left with no admissible value cuts the branch.

Three reductions shrink the tree without losing any solution:

* scalar orbits -- a nondegenerate map stays nondegenerate after rescaling
  any single image, so images range over vectors with leading coordinate 1;
* basis pinning -- applying an invertible linear map to all images keeps a
  map nondegenerate.  If the images assigned so far span <e_1..e_s>, the
  stabiliser of that span acts transitively on the vectors outside it, so
  the next image is either inside <e_1..e_s> or equal to e_{s+1};
* 0/1 normalisation -- while every assigned image is a basis vector,
  diagonal rescaling of coordinates lets the first image chosen inside the
  pinned span be taken with all coordinates in {0, 1}.

Each step only moves already-fixed images within their scalar orbits, so the
reductions compose and apply to any source complex and any vertex order.
"""

from __future__ import annotations

import json
import logging
import multiprocessing as mp
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

import numpy as np

from .complexes import ComplexDescriptor, Universal, decode, encode, leading_one
from .fplinalg import FieldError, FpScalar, Prime, ShapeError, columns_independent, rank_mod_p

log = logging.getLogger(__name__)

TIME_CHECK_MASK = (1 << 12) - 1


class IncompleteMapError(ValueError):
    """A vertex map does not assign every source vertex."""


@dataclass(frozen=True)
class VertexMap:
    """Images of source vertices, as coordinate tuples in F_p^r."""

    p: int
    r: int
    assignments: Mapping[int, tuple[int, ...]]

    def __post_init__(self) -> None:
        p = Prime(self.p)
        clean = {}
        for v, vec in self.assignments.items():
            t = tuple(int(c) % p for c in vec)
            if len(t) != self.r:
                raise ShapeError(f"image of vertex {v} has length {len(t)}, expected {self.r}")
            if not any(t):
                raise FieldError(f"vertex {v} is mapped to the zero vector")
            clean[int(v)] = t
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "assignments", dict(sorted(clean.items())))

    def __getitem__(self, v: int) -> tuple[int, ...]:
        return self.assignments[v]

    def __len__(self) -> int:
        return len(self.assignments)

    def images(self, vertices: Iterable[int]) -> list[tuple[int, ...]]:
        try:
            return [self.assignments[v] for v in vertices]
        except KeyError as exc:
            raise IncompleteMapError(f"vertex {exc.args[0]} has no image") from None

    def to_json(self) -> dict:
        return {"p": int(self.p), "r": self.r, "assignments": {str(v): list(c) for v, c in self.assignments.items()}}

    @classmethod
    def from_json(cls, data: dict | str) -> "VertexMap":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["p"]), int(data["r"]), {int(k): tuple(v) for k, v in data["assignments"].items()})

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)


# -- verification ------------------------------------------------------------


def find_violation(source: ComplexDescriptor, fmap: VertexMap) -> tuple[int, ...] | None:
    """First facet (in facet order) whose images are not independent, or None."""
    n = source.n_vertices
    missing = [v for v in range(n) if v not in fmap.assignments]
    if missing:
        raise IncompleteMapError(f"vertices without image: {missing[:10]}")
    for facet in source.facets():
        if not columns_independent(fmap.images(facet), fmap.p):
            return tuple(facet)
    return None


def check_nondegenerate(source: ComplexDescriptor, fmap: VertexMap) -> bool:
    """True iff every simplex of ``source`` maps to an independent set.

    Checking facets suffices: subsets of independent sets are independent.
    """
    return find_violation(source, fmap) is None


def apply_scalar_reweighting(fmap: VertexMap, epsilons: Mapping[int, int | FpScalar]) -> VertexMap:
    """Multiply each image by its own nonzero scalar (missing entries mean 1)."""
    p = fmap.p
    out = {}
    for v, vec in fmap.assignments.items():
        e = int(epsilons.get(v, 1)) % p
        if e == 0:
            raise FieldError(f"zero scalar for vertex {v}")
        out[v] = tuple(e * c % p for c in vec)
    return VertexMap(p, fmap.r, out)


def canonical_witness(fmap: VertexMap) -> VertexMap:
    return VertexMap(fmap.p, fmap.r, {v: leading_one(vec, fmap.p) for v, vec in fmap.assignments.items()})


# -- outcomes ----------------------------------------------------------------


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int | None = None
    max_seconds: float | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.max_nodes is not None and self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        if self.max_seconds is not None and self.max_seconds <= 0:
            raise ValueError("max_seconds must be positive")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


UNLIMITED = SearchBudget()


@dataclass(frozen=True)
class Symmetry:
    scalar_orbits: bool = True
    basis_pinning: bool = True
    zero_one: bool = True


class Status(str, Enum):
    FOUND = "found"
    EXHAUSTED = "exhausted"
    BUDGET = "budget"


@dataclass
class SearchOutcome:
    status: Status
    witness: VertexMap | None = None
    nodes: int = 0
    seconds: float = 0.0
    tasks: int = 0

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND

    @property
    def exhausted(self) -> bool:
        return self.status is Status.EXHAUSTED

    def summary(self) -> str:
        return f"{self.status.value}: {self.nodes} nodes in {self.seconds:.2f}s"


class _BudgetExceeded(Exception):
    pass


# -- the engine --------------------------------------------------------------


def _mask_of(codes: Iterable[int]) -> int:
    m = 0
    for c in codes:
        m |= 1 << int(c)
    return m


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Space:
    """F_p^r with vectors as integer codes and subsets as bitmasks."""

    def __init__(self, p: int, r: int):
        self.p, self.r = p, r
        self.size = p**r
        self.weights = np.array([p ** (r - 1 - i) for i in range(r)], dtype=np.int64)
        self.digits = np.array(list(product(range(p), repeat=r)), dtype=np.int64).reshape(self.size, r)
        self._coeffs: dict[int, np.ndarray] = {}
        self.span_cache: dict[tuple[int, ...], int] = {}

    def e_code(self, i: int) -> int:
        """Code of the basis vector e_{i+1} (0-based ``i``)."""
        return self.p ** (self.r - 1 - i)

    def span_mask(self, key: tuple[int, ...]) -> int:
        m = self.span_cache.get(key)
        if m is not None:
            return m
        if len(self.span_cache) > 400_000:
            self.span_cache.clear()
        b = len(key)
        coeffs = self._coeffs.get(b)
        if coeffs is None:
            coeffs = np.array(list(product(range(self.p), repeat=b)), dtype=np.int64).reshape(-1, b)
            self._coeffs[b] = coeffs
        vecs = self.digits[list(key)]
        codes = ((coeffs @ vecs) % self.p) @ self.weights
        flags = np.zeros(self.size, dtype=np.uint8)
        flags[codes] = 1
        m = int.from_bytes(np.packbits(flags, bitorder="little").tobytes(), "little")
        self.span_cache[key] = m
        return m


def _vertex_order(n: int, facets: Sequence[tuple[int, ...]]) -> list[int]:
    """Greedy static order: most facets completed first, then most already
    ordered neighbours, then lowest index."""
    through: list[list[int]] = [[] for _ in range(n)]
    for fi, f in enumerate(facets):
        for v in f:
            through[v].append(fi)
    placed_in = [0] * len(facets)
    completed = [0] * n
    neigh = [0] * n
    adj = [set() for _ in range(n)]
    for f in facets:
        for v in f:
            adj[v].update(f)
    for v in range(n):
        adj[v].discard(v)
    order: list[int] = []
    remaining = set(range(n))
    while remaining:
        v = max(remaining, key=lambda u: (completed[u], neigh[u], -u))
        remaining.remove(v)
        order.append(v)
        for u in adj[v]:
            neigh[u] += 1
        for fi in through[v]:
            placed_in[fi] += 1
            f = facets[fi]
            if placed_in[fi] == len(f) - 1:
                for u in f:
                    if u in remaining:
                        completed[u] += 1
    return order


def _build_plan(order: Sequence[int], facets: Sequence[tuple[int, ...]]) -> list[list[tuple[tuple[int, ...], tuple[int, ...]]]]:
    """For each depth d: pairs (assigned part B, later vertices A) of facets
    through order[d].  After order[d] is assigned, each u in A must avoid
    span(images of B).  Pairs implied by a larger B for the same u are
    dropped."""
    n = len(order)
    pos = {v: i for i, v in enumerate(order)}
    per_depth: list[dict[int, set[frozenset[int]]]] = [dict() for _ in range(n)]
    for f in facets:
        ps = sorted(pos[v] for v in f)
        for i, d in enumerate(ps[:-1]):
            before = frozenset(order[q] for q in ps[: i + 1])
            for q in ps[i + 1 :]:
                per_depth[d].setdefault(order[q], set()).add(before)
    plan = []
    for d in range(n):
        grouped: dict[frozenset[int], list[int]] = {}
        for u, bs in per_depth[d].items():
            keep: list[frozenset[int]] = []
            for b in sorted(bs, key=len, reverse=True):
                if not any(b < k for k in keep):
                    keep.append(b)
            for b in keep:
                grouped.setdefault(b, []).append(u)
        plan.append([(tuple(sorted(b)), tuple(sorted(us))) for b, us in grouped.items()])
    return plan


class _Engine:
    def __init__(self, source: ComplexDescriptor, p: int, r: int, symmetry: Symmetry, facets=None):
        self.source = source
        self.p, self.r = Prime(p), int(r)
        if self.r < 1:
            raise ValueError("target dimension r must be >= 1")
        self.sym = symmetry
        self.n = source.n_vertices
        self.facets = list(facets) if facets is not None else source.facets()
        self.space = _Space(self.p, self.r)
        self.order = _vertex_order(self.n, self.facets)
        self.plan = _build_plan(self.order, self.facets)

        p, r = self.p, self.r
        nonzero = list(range(1, p**r))
        if symmetry.scalar_orbits:
            pool = [c for c in nonzero if leading_one(decode(c, p, r), p) == decode(c, p, r)]
        else:
            pool = nonzero
        self.domain_mask = _mask_of(pool)
        # allowed[s]: values inside <e_1..e_s>; zero_one[s]: the 0/1 ones
        step = [p ** (r - s) for s in range(r + 1)]
        self.allowed = [_mask_of(c for c in pool if c % step[s] == 0) for s in range(r + 1)]
        self.zero_one = [
            _mask_of(c for c in pool if c % step[s] == 0 and all(x < 2 for x in decode(c, p, r)))
            for s in range(r + 1)
        ]
        self.nodes = 0
        self.deadline: float | None = None
        self.max_nodes: int | None = None
        self.poll = None

    # state: img (list of codes, -1 unassigned), forbid (list of masks), s, zo_pending
    def initial_state(self):
        s0 = 0 if self.sym.basis_pinning else self.r
        return [-1] * self.n, [0] * self.n, s0, self.sym.basis_pinning and self.sym.zero_one

    def candidates(self, d: int, img, forbid, s: int, zo_pending: bool) -> int:
        v = self.order[d]
        inside = self.zero_one[s] if zo_pending else self.allowed[s]
        mask = inside & ~forbid[v]
        if s < self.r:
            mask |= 1 << self.space.e_code(s)
        return mask

    def assign(self, d: int, c: int, img, forbid, s: int, zo_pending: bool):
        """Return the child state after order[d] -> c, or None on wipeout."""
        v = self.order[d]
        img = img.copy()
        img[v] = c
        if s < self.r and c == self.space.e_code(s):
            s += 1
        else:
            zo_pending = False
        nf = forbid
        copied = False
        span = self.space.span_mask
        dom = self.domain_mask
        for before, after in self.plan[d]:
            m = span(tuple(sorted(img[b] for b in before)))
            if not copied:
                nf = forbid.copy()
                copied = True
            for u in after:
                x = nf[u] | m
                if not dom & ~x:
                    return None
                nf[u] = x
        return img, nf, s, zo_pending

    def _tick(self) -> None:
        if self.poll is not None:
            self.poll(self)
        if self.deadline is not None and time.perf_counter() > self.deadline:
            raise _BudgetExceeded

    def dfs(self, d: int, state) -> list[int] | None:
        img, forbid, s, zo = state
        if d == self.n:
            return img
        free = self.candidates(d, img, forbid, s, zo)
        while free:
            low = free & -free
            c = low.bit_length() - 1
            free ^= low
            self.nodes += 1
            if self.max_nodes is not None and self.nodes > self.max_nodes:
                raise _BudgetExceeded
            if not self.nodes & TIME_CHECK_MASK:
                self._tick()
            child = self.assign(d, c, img, forbid, s, zo)
            if child is None:
                continue
            res = self.dfs(d + 1, child)
            if res is not None:
                return res
        return None

    def replay(self, prefix: Sequence[int]):
        state = self.initial_state()
        for d, c in enumerate(prefix):
            state = self.assign(d, c, *state)
            if state is None:
                raise RuntimeError("replayed prefix is inconsistent")
        return state

    def frontier(self, want: int) -> tuple[list[tuple[int, ...]], list[int] | None]:
        """Expand breadth-first until at least ``want`` open prefixes exist."""
        level: list[tuple[tuple[int, ...], tuple]] = [((), self.initial_state())]
        d = 0
        while level and len(level) < want and d < self.n:
            nxt = []
            for prefix, state in level:
                for c in _iter_bits(self.candidates(d, *state)):
                    self.nodes += 1
                    child = self.assign(d, c, *state)
                    if child is not None:
                        nxt.append((prefix + (c,), child))
            level = nxt
            d += 1
            if d == self.n and level:
                return [], level[0][1][0]
        return [pfx for pfx, _ in level], None

    def to_map(self, img: Sequence[int]) -> VertexMap:
        return VertexMap(self.p, self.r, {v: decode(img[v], self.p, self.r) for v in range(self.n)})


# -- parallel driver -----------------------------------------------------------

_WORKER: dict = {}


def _worker_init(engine: _Engine, stop, counter, deadline, max_nodes) -> None:
    _WORKER.update(engine=engine, stop=stop, counter=counter)
    engine.deadline = deadline
    engine.max_nodes = None

    last = [0]

    def poll(eng: _Engine) -> None:
        if stop.is_set():
            raise _BudgetExceeded
        with counter.get_lock():
            counter.value += eng.nodes - last[0]
            total = counter.value
        last[0] = eng.nodes
        if max_nodes is not None and total >= max_nodes:
            stop.set()
            raise _BudgetExceeded

    engine.poll = poll


def _worker_run(index: int, prefix: tuple[int, ...]):
    eng: _Engine = _WORKER["engine"]
    eng.nodes = 0
    try:
        res = eng.dfs(len(prefix), eng.replay(prefix))
    except _BudgetExceeded:
        return index, "budget", None, eng.nodes
    return index, ("found" if res is not None else "exhausted"), res, eng.nodes


def _run_parallel(eng: _Engine, budget: SearchBudget, deterministic: bool, t0: float) -> tuple[Status, list[int] | None, int, int]:
    prefixes, done = eng.frontier(8 * budget.workers)
    nodes = eng.nodes
    if done is not None:
        return Status.FOUND, done, nodes, 0
    if not prefixes:
        return Status.EXHAUSTED, None, nodes, 0
    ctx = mp.get_context("fork")
    stop = ctx.Event()
    counter = ctx.Value("q", nodes)
    deadline = None if budget.max_seconds is None else t0 + budget.max_seconds
    results: dict[int, tuple[str, list[int] | None]] = {}
    with ProcessPoolExecutor(
        max_workers=budget.workers,
        mp_context=ctx,
        initializer=_worker_init,
        initargs=(eng, stop, counter, deadline, budget.max_nodes),
    ) as pool:
        pending = {pool.submit(_worker_run, i, pfx) for i, pfx in enumerate(prefixes)}
        while pending:
            finished, pending = wait(pending, return_when=FIRST_COMPLETED)
            for fut in finished:
                i, status, img, k = fut.result()
                nodes += k
                results[i] = (status, img)
            found = sorted(i for i, (st, _) in results.items() if st == "found")
            if found:
                first = found[0]
                settled = all(j in results for j in range(first))
                if not deterministic or settled:
                    stop.set()
                    for fut in pending:
                        fut.cancel()
                    return Status.FOUND, results[first][1], nodes, len(prefixes)
            if any(st == "budget" for st, _ in results.values()) and not found:
                stop.set()
                for fut in pending:
                    fut.cancel()
                return Status.BUDGET, None, nodes, len(prefixes)
    return Status.EXHAUSTED, None, nodes, len(prefixes)


# -- public entry point ----------------------------------------------------------


def search_map(
    source: ComplexDescriptor,
    p: int,
    r: int,
    budget: SearchBudget | None = None,
    symmetry: Symmetry | None = None,
    deterministic: bool = True,
    facets: Sequence[tuple[int, ...]] | None = None,
) -> SearchOutcome:
    """Decide whether a nondegenerate map ``source -> X(F_p^r)`` exists.

    ``EXHAUSTED`` means the whole reduced tree was traversed without a
    solution, which (the reductions being exact) proves nonexistence.
    A found witness is re-verified against the source before returning.
    """
    budget = budget or UNLIMITED
    symmetry = symmetry or Symmetry()
    if source.n_vertices < 1:
        raise ValueError("source complex has no vertices")
    t0 = time.perf_counter()
    eng = _Engine(source, p, r, symmetry, facets)
    tasks = 0
    if budget.workers > 1:
        status, img, nodes, tasks = _run_parallel(eng, budget, deterministic, t0)
        eng.nodes = nodes
    else:
        eng.max_nodes = budget.max_nodes
        eng.deadline = None if budget.max_seconds is None else t0 + budget.max_seconds
        try:
            img = eng.dfs(0, eng.initial_state())
            status = Status.FOUND if img is not None else Status.EXHAUSTED
        except _BudgetExceeded:
            status, img = Status.BUDGET, None
    witness = None
    if status is Status.FOUND:
        witness = eng.to_map(img)
        bad = find_violation(source, witness)
        if bad is not None:
            raise AssertionError(f"search produced a degenerate map; facet {bad} fails")
    out = SearchOutcome(status, witness, eng.nodes, time.perf_counter() - t0, tasks)
    log.debug("search %s -> F_%d^%d: %s", getattr(source, "key", lambda: "?")(), p, r, out.summary())
    return out


def brute_force_exists(source: ComplexDescriptor, p: int, r: int) -> bool:
    """Unreduced reference search: every vertex ranges over all nonzero
    vectors, and each face is rank-tested once all its vertices are set.

    The only shortcut is the dimension count: a facet with more than r
    vertices cannot map to an independent set in F_p^r.
    """
    p = Prime(p)
    n = source.n_vertices
    facets = source.facets()
    if any(len(f) > r for f in facets):
        return False
    # visit vertices largest facet first so that faces close early
    order: list[int] = []
    for f in sorted(facets, key=lambda f: (-len(f), f)):
        order += [v for v in f if v not in order]
    pos = {v: i for i, v in enumerate(order)}
    faces = {sub for f in facets for size in range(1, len(f) + 1) for sub in combinations(f, size)}
    # each face is tested as soon as its last vertex is set
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for f in sorted(faces):
        closing[max(pos[u] for u in f)].append(f)
    vectors = [v for v in product(range(p), repeat=r) if any(v)]
    img: list[tuple[int, ...] | None] = [None] * n
    memo: dict[frozenset, bool] = {}

    def independent(vecs: list[tuple[int, ...]]) -> bool:
        key = frozenset(vecs)
        if len(key) < len(vecs) or len(vecs) > r:
            return False
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = rank_mod_p(vecs, p) == len(vecs)
        return hit

    def go(i: int) -> bool:
        if i == n:
            return True
        v = order[i]
        for x in vectors:
            img[v] = x
            if all(independent([img[u] for u in f]) for f in closing[i]):
                if go(i + 1):
                    return True
        img[v] = None
        return False

    return go(0)


def identity_map(source: Universal) -> VertexMap:
    return VertexMap(source.p, source.n, dict(enumerate(source.vectors())))


def code_of(vec: Sequence[int], p: int) -> int:
    return encode(vec, p)
