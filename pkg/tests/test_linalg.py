"""Exact linear algebra, checked against sympy's dense rank as an oracle."""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from koszulate.fields import DEFAULT_PRIME, FieldConfig
from koszulate.linalg import (DimensionMismatch, SparseMatrix, certified_rank, contains,
                              intersect, kernel_basis, rank, row_space_basis, sample_primes)
from koszulate.rng import SplitMix64

QQ = FieldConfig.rational()


def oracle_rank(rows):
    if not rows or not rows[0]:
        return 0
    return sympy.Matrix(rows).rank()


def _rank_mod(rows, p):
    # plain dense Gaussian elimination mod p
    A = [[x % p for x in r] for r in rows]
    r = 0
    for c in range(len(A[0])):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], -1, p)
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        r += 1
    return r


int_matrices = st.integers(1, 7).flatmap(lambda r: st.integers(1, 7).flatmap(
    lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                       min_size=r, max_size=r)))


# -- field configuration ------------------------------------------------------

def test_field_rejects_composites_and_range():
    for bad in (1, 2, 4, 91, 2**62 + 1):
        with pytest.raises(ValueError):
            FieldConfig.prime(bad)
    assert FieldConfig.prime(DEFAULT_PRIME).label == f"GF({DEFAULT_PRIME})"


def test_field_json_round_trip():
    for f in (QQ, FieldConfig.prime(101)):
        assert FieldConfig.from_json(f.to_json()) == f
    assert FieldConfig.prime(101).to_json()["p"] == "101"


def test_rational_coercion():
    assert QQ("3/6") == Fraction(1, 2)
    F = FieldConfig.prime(7)
    assert F(Fraction(1, 2)) == 4
    assert F(-1) == 6


# -- reference examples ---------------------------------------------------------

def test_rank_examples():
    assert rank(SparseMatrix.identity(5, QQ)) == 5
    assert rank(SparseMatrix.zeros(3, 4, QQ)) == 0
    assert rank(SparseMatrix.from_dense([[1, 2], [2, 4]], QQ)) == 1


def test_kernel_examples():
    assert kernel_basis(SparseMatrix.identity(4, QQ)).ncols == 0
    assert kernel_basis(SparseMatrix.zeros(2, 3, QQ)).ncols == 3
    ker = kernel_basis(SparseMatrix.from_dense([[1, 1]], QQ))
    assert ker.ncols == 1
    col = [ker[i, 0] for i in range(2)]
    assert col[0] == -col[1] != 0


def test_subspace_examples():
    e = lambda *v: SparseMatrix.from_dense([list(v)], QQ)
    A = SparseMatrix.from_dense([[1, 0, 0], [0, 1, 0]], QQ)
    B = SparseMatrix.from_dense([[0, 1, 0], [0, 0, 1]], QQ)
    meet = intersect(A, B)
    assert meet.nrows == 1 and row_space_basis(meet) == e(0, 1, 0)
    assert not contains(e(1, 0, 0), [0, 1, 0])
    assert contains(A, [3, -2, 0])
    assert row_space_basis(SparseMatrix.from_dense([[1, 0], [2, 0]], QQ)).nrows == 1


def test_sparse_matrix_invariants():
    with pytest.raises(ValueError):
        SparseMatrix.from_entries(2, 2, [(0, 0, 1), (0, 0, 2)], QQ)
    with pytest.raises((ValueError, IndexError)):
        SparseMatrix.from_entries(2, 2, [(2, 0, 1)], QQ)
    M = SparseMatrix.from_entries(2, 2, [(0, 1, 0), (1, 0, 3)], QQ)
    assert M.nnz == 1  # stored zeros are dropped


def test_mismatched_ambient_rejected():
    A = SparseMatrix.identity(2, QQ)
    B = SparseMatrix.identity(3, QQ)
    with pytest.raises(DimensionMismatch):
        intersect(A, B)


# -- oracle comparisons -------------------------------------------------------

@settings(max_examples=80, deadline=None)
@given(int_matrices)
def test_rank_matches_sympy_over_q(rows):
    assert rank(SparseMatrix.from_dense(rows, QQ)) == oracle_rank(rows)


@settings(max_examples=80, deadline=None)
@given(int_matrices, st.sampled_from([3, 5, 7, 101]))
def test_rank_mod_p_matches_dense_elimination(rows, p):
    M = SparseMatrix.from_dense(rows, FieldConfig.prime(p))
    assert rank(M) == _rank_mod(rows, p)


@settings(max_examples=60, deadline=None)
@given(int_matrices)
def test_rank_transpose_and_kernel(rows):
    M = SparseMatrix.from_dense(rows, QQ)
    r = rank(M)
    assert rank(M.T) == r
    K = kernel_basis(M)
    assert K.ncols + r == M.ncols
    assert (M @ K).nnz == 0
    assert rank(K) == K.ncols


@settings(max_examples=60, deadline=None)
@given(int_matrices, st.sampled_from([3, 5, 7]))
def test_rank_mod_p_is_at_most_rational_rank(rows, p):
    assert rank(SparseMatrix.from_dense(rows, FieldConfig.prime(p))) \
        <= rank(SparseMatrix.from_dense(rows, QQ))


def test_rational_entries_and_large_sparse_block():
    rows = [[Fraction(1, 3), Fraction(2, 7), 0], [Fraction(2, 3), Fraction(4, 7), 0], [0, 0, 5]]
    assert rank(SparseMatrix.from_dense(rows, QQ)) == 2
    rng = SplitMix64(11)
    dense = [[rng.integer(-1, 1) if rng.below(5) == 0 else 0 for _ in range(40)]
             for _ in range(35)]
    assert rank(SparseMatrix.from_dense(dense, QQ)) == oracle_rank(dense)


def test_intersection_against_dimension_formula():
    rng = SplitMix64(3)
    for _ in range(10):
        A = [[rng.integer(-3, 3) for _ in range(6)] for _ in range(3)]
        B = [[rng.integer(-3, 3) for _ in range(6)] for _ in range(4)]
        MA, MB = SparseMatrix.from_dense(A, QQ), SparseMatrix.from_dense(B, QQ)
        meet = intersect(MA, MB)
        assert meet.nrows == rank(MA) + rank(MB) - oracle_rank(A + B)
        for i in range(meet.nrows):
            v = meet.select_rows([i])
            assert contains(MA, v) and contains(MB, v)


# -- modular certification ---------------------------------------------------

def test_sample_primes_range_and_determinism():
    ps = sample_primes(4, seed=9)
    assert ps == sample_primes(4, seed=9)
    assert len(set(ps)) == 4
    assert all(2**60 < p < 2**62 and sympy.isprime(p) for p in ps)


def test_certified_rank_agrees_with_exact():
    rows = [[1, 2, 3], [4, 5, 6], [7, 8, 9], [Fraction(1, 2), 1, Fraction(3, 2)]]
    cert = certified_rank(SparseMatrix.from_dense(rows, QQ))
    assert cert.rank == 2 and cert.agree and len(cert.primes) == 3
    with pytest.raises(ValueError):
        certified_rank(SparseMatrix.identity(2, FieldConfig.prime(5)))


def test_rng_is_reproducible_and_in_range():
    a, b = SplitMix64(42), SplitMix64(42)
    xs = [a.next() for _ in range(5)]
    assert xs == [b.next() for _ in range(5)]
    r = SplitMix64(1)
    assert all(-10 <= r.integer(-10, 10) <= 10 for _ in range(200))
    assert all(0 <= r.below(2**70) < 2**70 for _ in range(50))
