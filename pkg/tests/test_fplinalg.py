import itertools

import pytest
from hypothesis import given, settings, strategies as st

from buchstaber.fplinalg import (
    FieldError,
    FpMatrix,
    FpScalar,
    FpVector,
    Prime,
    ShapeError,
    det_mod_p,
    determinant,
    is_prime,
    next_prime,
    rank,
    rank_mod_p,
    scalar_inverse,
    support,
)

PRIMES = [2, 3, 5, 7]


def cofactor_det(rows, p):
    """Independent oracle: Laplace expansion over the integers, reduced mod p."""
    n = len(rows)
    if n == 0:
        return 1 % p
    total = 0
    for perm in itertools.permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        prod = sign
        for i, j in enumerate(perm):
            prod *= rows[i][j]
        total += prod
    return total % p


def test_prime_validation():
    assert Prime(7) == 7
    for bad in (0, 1, 4, 9, -3):
        with pytest.raises(ValueError):
            Prime(bad)
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert next_prime(3) == 5 and next_prime(1) == 2


@pytest.mark.parametrize("p,a,inv", [(3, 2, 2), (5, 1, 1), (7, 3, 5)])
def test_scalar_inverse_examples(p, a, inv):
    assert scalar_inverse(FpScalar(a, p)).residue == inv


def test_scalar_inverse_all_residues():
    for p in [q for q in range(2, 32) if is_prime(q)]:
        for a in range(1, p):
            assert (scalar_inverse(FpScalar(a, p)) * a).residue == 1


def test_scalar_inverse_zero():
    with pytest.raises(FieldError):
        scalar_inverse(FpScalar(0, 5))


def test_scalar_arithmetic():
    a, b = FpScalar(3, 5), FpScalar(4, 5)
    assert (a + b).residue == 2
    assert (a - b).residue == 4
    assert (a * b).residue == 2
    assert (a / b * b) == a
    with pytest.raises(FieldError):
        a + FpScalar(1, 7)


def test_rank_examples():
    assert rank(FpMatrix.identity(3, 2)) == 3
    assert rank(FpMatrix.from_columns([(1, 0), (0, 1), (1, 1)], 2)) == 2
    vdm = FpMatrix.from_columns([(1, x, x * x) for x in (0, 1, 2)], 5)
    assert rank(vdm) == 3
    assert cofactor_det([list(r) for r in vdm.rows], 5) == 2


def test_rank_empty():
    assert rank_mod_p([], 3) == 0
    assert rank(FpMatrix((), 3, 4)) == 0


def test_determinant_examples():
    assert determinant(FpMatrix.identity(2, 3)).residue == 1
    vdm = FpMatrix.from_columns([(1, x, x * x) for x in (1, 2, 3)], 5)
    assert determinant(vdm).residue != 0
    assert determinant(FpMatrix(((1, 1), (1, 1)), 2)).residue == 0
    with pytest.raises(ShapeError):
        determinant(FpMatrix(((1, 0, 0), (0, 1, 0)), 3))


def test_support_examples():
    assert support(FpVector((0, 0, 1, 1), 3)) == {3, 4}
    assert support(FpVector((0, 0, 0), 5)) == frozenset()
    assert support(FpVector((1, 1, 1, 1), 2)) == {1, 2, 3, 4}
    assert support((0, 2, 0), offset=0) == {1}


def matrices(max_n=6):
    return st.sampled_from(PRIMES).flatmap(
        lambda p: st.tuples(
            st.just(p),
            st.integers(1, max_n).flatmap(
                lambda r: st.integers(1, max_n).flatmap(
                    lambda c: st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r)
                )
            ),
        )
    )


@settings(max_examples=200, deadline=None)
@given(matrices(), st.data())
def test_rank_invariant_under_row_operations(pm, data):
    p, rows = pm
    before = rank_mod_p(rows, p)
    rows = [r[:] for r in rows]
    n = len(rows)
    for _ in range(data.draw(st.integers(1, 6))):
        i, j = data.draw(st.integers(0, n - 1)), data.draw(st.integers(0, n - 1))
        op = data.draw(st.integers(0, 2))
        if op == 0:
            rows[i], rows[j] = rows[j], rows[i]
        elif op == 1:
            c = data.draw(st.integers(1, p - 1))
            rows[i] = [c * x % p for x in rows[i]]
        elif i != j:
            c = data.draw(st.integers(0, p - 1))
            rows[i] = [(x + c * y) % p for x, y in zip(rows[i], rows[j])]
    assert rank_mod_p(rows, p) == before


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_equals_transpose_rank(pm):
    p, rows = pm
    m = FpMatrix(tuple(map(tuple, rows)), p)
    assert rank(m) == rank(m.transpose())
    assert rank(m) <= min(m.shape)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(st.just(p), st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n)))))
def test_det_nonzero_iff_full_rank(pn):
    p, rows = pn
    d = det_mod_p(rows, p)
    assert (d != 0) == (rank_mod_p(rows, p) == len(rows))
    if len(rows) <= 5:
        assert d == cofactor_det(rows, p)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(PRIMES).flatmap(lambda p: st.tuples(
    st.just(p), st.lists(st.integers(0, p - 1), min_size=1, max_size=6), st.integers(1, p - 1))))
def test_support_scale_invariant(args):
    p, coords, c = args
    v = FpVector(tuple(coords), p)
    assert support(v.scale(c)) == support(v)
