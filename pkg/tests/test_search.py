import random

import pytest
from hypothesis import given, settings, strategies as st

from buchstaber import constructions as cons
from buchstaber.complexes import Explicit, Skeleton, Universal
from buchstaber.fplinalg import FieldError, ShapeError
from buchstaber.search import (
    IncompleteMapError,
    SearchBudget,
    Status,
    Symmetry,
    VertexMap,
    apply_scalar_reweighting,
    brute_force_exists,
    canonical_witness,
    check_nondegenerate,
    find_violation,
    search_map,
)
from buchstaber.verify import random_complex

ALL_SYMMETRIES = [Symmetry(a, b, c) for a in (True, False) for b in (True, False) for c in (True, False)]


def test_check_examples():
    f = VertexMap(2, 2, {0: (1, 0), 1: (0, 1), 2: (1, 1)})
    assert check_nondegenerate(Skeleton(2, 1), f)
    assert not check_nondegenerate(Skeleton(2, 2), f)
    assert find_violation(Skeleton(2, 2), f) == (0, 1, 2)
    for m in range(2, 7):
        for k in range(m):
            assert check_nondegenerate(Skeleton(m, k), cons.basis_plus_ones_map(m, 3))


def test_check_incomplete_map():
    with pytest.raises(IncompleteMapError):
        check_nondegenerate(Skeleton(2, 1), VertexMap(2, 2, {0: (1, 0), 1: (0, 1)}))


def test_vertex_map_validation():
    with pytest.raises(FieldError):
        VertexMap(3, 2, {0: (0, 0)})
    with pytest.raises(ShapeError):
        VertexMap(3, 2, {0: (1, 0, 0)})
    f = VertexMap(3, 2, {0: (4, 2)})
    assert f[0] == (1, 2)


def test_witness_json_roundtrip():
    f = cons.build_f24_to_f35_map()
    data = f.to_json()
    assert set(data) == {"p", "r", "assignments"}
    assert data["assignments"]["0"] == [0, 0, 0, 1, 0]
    assert VertexMap.from_json(f.dumps()) == f


def test_search_examples():
    out = search_map(Skeleton(2, 1), 2, 2)
    assert out.found and check_nondegenerate(Skeleton(2, 1), out.witness)
    for m, k, p in [(3, 2, 2), (4, 2, 3), (5, 3, 2)]:
        assert search_map(Skeleton(m, k), p, k).status is Status.EXHAUSTED
    assert search_map(Skeleton(3, 3), 2, 3).status is Status.EXHAUSTED


def test_universal_nonexistence_and_existence():
    src = Universal(2, 4)
    facets = src.facets()
    assert search_map(src, 3, 4, facets=facets).exhausted
    out = search_map(src, 3, 5, facets=facets)
    assert out.found and check_nondegenerate(src, out.witness)


def test_budget_signalling():
    out = search_map(Skeleton(9, 3), 3, 5, SearchBudget(max_nodes=1))
    assert out.status is Status.BUDGET
    assert out.witness is None
    with pytest.raises(ValueError):
        SearchBudget(max_nodes=0)


def test_determinism():
    a = search_map(Skeleton(6, 2), 3, 4)
    b = search_map(Skeleton(6, 2), 3, 4)
    assert a.found and a.witness == b.witness
    assert canonical_witness(a.witness) == a.witness


@pytest.mark.parametrize("src,p,r", [(Skeleton(6, 3), 3, 4), (Skeleton(6, 3), 3, 5), (Skeleton(5, 1), 2, 3), (Skeleton(6, 2), 2, 3)])
def test_parallel_verdict_matches_serial(src, p, r):
    serial = search_map(src, p, r)
    par = search_map(src, p, r, SearchBudget(workers=2))
    assert serial.status == par.status
    if par.found:
        assert check_nondegenerate(src, par.witness)
        assert par.witness == serial.witness  # deterministic mode


def test_reweighting_examples():
    f = cons.vandermonde_skeleton_map(5, 2, 5)
    assert apply_scalar_reweighting(f, {}) == f
    g = cons.build_f24_to_f35_map()
    assert check_nondegenerate(Universal(2, 4), apply_scalar_reweighting(g, {v: 2 for v in g.assignments}))
    with pytest.raises(FieldError):
        apply_scalar_reweighting(f, {0: 0})


def test_canonical_examples():
    f = VertexMap(3, 3, {0: (2, 0, 1), 1: (1, 1, 0)})
    c = canonical_witness(f)
    assert c[0] == (1, 0, 2) and c[1] == (1, 1, 0)
    assert canonical_witness(c) == c


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reweighting_preserves_nondegeneracy(seed):
    rng = random.Random(seed)
    p = rng.choice((3, 5, 7))
    m = rng.randint(1, p)
    k = rng.randrange(m)
    f = cons.vandermonde_skeleton_map(m, k, p)
    eps = {v: rng.randrange(1, p) for v in f.assignments}
    assert check_nondegenerate(Skeleton(m, k), apply_scalar_reweighting(f, eps)), f"seed {seed}"


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]).flatmap(lambda p: st.tuples(
    st.just(p), st.integers(1, 5).flatmap(lambda r: st.tuples(st.just(r), st.lists(
        st.lists(st.integers(0, p - 1), min_size=r, max_size=r).filter(any), min_size=1, max_size=8))))))
def test_canonical_idempotent(args):
    p, (r, images) = args
    f = VertexMap(p, r, dict(enumerate(map(tuple, images))))
    once = canonical_witness(f)
    assert canonical_witness(once) == once
    assert all(next(c for c in v if c) == 1 for v in once.assignments.values())


# -- symmetry exactness ------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_symmetry_exact_on_all_small_skeleta(p, r):
    for m in range(1, 6):
        for k in range(m + 1):
            src = Skeleton(m, k)
            assert search_map(src, p, r).found == brute_force_exists(src, p, r), (m, k, p, r)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_symmetry_exact_on_random_complexes(seed):
    rng = random.Random(seed)
    p, r = rng.choice((2, 3)), rng.randint(1, 3)
    src = random_complex(rng, 6, r + (rng.random() < 0.1))
    assert search_map(src, p, r).found == brute_force_exists(src, p, r), f"seed {seed}: {src.to_json()} p={p} r={r}"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_every_reduction_subset_agrees(seed):
    rng = random.Random(seed)
    p, r = rng.choice((2, 3)), rng.randint(2, 3)
    src = random_complex(rng, 5, r)
    verdicts = {sym: search_map(src, p, r, symmetry=sym).found for sym in ALL_SYMMETRIES}
    assert len(set(verdicts.values())) == 1, f"seed {seed}: {verdicts}"


def test_pinning_on_non_adjacent_prefix():
    # the first two vertices are not adjacent, so a cautious pinning rule would
    # have to switch off; the generalised rule stays exact
    src = Explicit(5, (frozenset({0, 2, 3}), frozenset({1, 2, 4}), frozenset({0, 1, 4}), frozenset({3, 4})))
    for p in (2, 3):
        for r in (2, 3):
            assert search_map(src, p, r).found == brute_force_exists(src, p, r)
