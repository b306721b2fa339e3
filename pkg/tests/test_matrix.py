import numpy as np
import pytest
from hypothesis import given, strategies as st

from periodic_sft.errors import DimensionMismatchError, IndexRangeError
from periodic_sft.fixtures import GM_H2, REDUCIBLE_V2
from periodic_sft.matrix import (PermutationMatrix, SparseCountMatrix, entry_sum, entry_sum_powers,
                                 float_view, hadamard, kronecker, matmul, matpow, permute_columns,
                                 trace, trace_powers)
from periodic_sft.transfer import build_Rm

E4 = SparseCountMatrix.ones(4)
I4 = SparseCountMatrix.identity(4)
GM = SparseCountMatrix.from_dense(GM_H2)


def dense_matrix(n_max=6):
    return st.integers(1, n_max).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=n, max_size=n))


def test_hadamard_examples():
    assert hadamard(E4, E4) == E4
    assert hadamard(GM, SparseCountMatrix.zeros(4)).is_zero()
    assert hadamard(GM, E4) == GM
    with pytest.raises(DimensionMismatchError):
        hadamard(E4, SparseCountMatrix.ones(3))


def test_kronecker_examples():
    i2 = SparseCountMatrix.identity(2)
    assert kronecker(i2, i2) == I4
    e2 = SparseCountMatrix.ones(2)
    assert kronecker(e2, e2) == E4
    lower = SparseCountMatrix.from_dense([[1, 0], [1, 1]])
    assert kronecker(lower, e2).to_dense() == [
        [1, 1, 0, 0],
        [1, 1, 0, 0],
        [1, 1, 1, 1],
        [1, 1, 1, 1],
    ]


def test_kronecker_matches_numpy():
    a = SparseCountMatrix.from_dense([[1, 2], [0, 3]])
    b = SparseCountMatrix.from_dense([[0, 1, 1], [1, 0, 0], [2, 0, 1]])
    assert kronecker(a, b).to_dense() == np.kron(a.to_dense(), b.to_dense()).tolist()


def test_matpow_examples():
    assert matpow(I4, 7) == I4
    assert matpow(GM, 0) == I4
    v2 = SparseCountMatrix.from_dense(REDUCIBLE_V2)
    assert entry_sum(matpow(v2, 2)) == 32
    for m in (2, 3, 5):
        r = build_Rm(m)
        for k in range(0, 2 * m + 1):
            rk = matpow(r.to_sparse(), k)
            assert rk == r.power(k).to_sparse()


def test_sums_examples():
    assert entry_sum(E4) == 16
    assert trace(SparseCountMatrix.identity(9)) == 9
    assert entry_sum(GM) == 7


@given(dense_matrix(), st.integers(0, 8), st.integers(0, 8))
def test_matpow_is_additive(rows, j, k):
    a = SparseCountMatrix.from_dense(rows)
    assert matpow(a, j + k) == matmul(matpow(a, j), matpow(a, k))


@given(st.integers(1, 32), st.integers(0, 8), st.integers(0, 10**6))
def test_matpow_is_additive_large(n, k, seed):
    rng = np.random.default_rng(seed)
    a = SparseCountMatrix.from_dense((rng.random((n, n)) < 0.2).astype(int).tolist())
    assert matpow(a, k + 3) == matmul(matpow(a, k), matpow(a, 3))


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10**6))
def test_kronecker_distributes_over_hadamard(na, nb, seed):
    rng = np.random.default_rng(seed)

    def rand(n):
        return SparseCountMatrix.from_dense(rng.integers(0, 3, (n, n)).tolist())

    a, c = rand(na), rand(na)
    b, d = rand(nb), rand(nb)
    assert hadamard(kronecker(a, b), kronecker(c, d)) == kronecker(hadamard(a, c), hadamard(b, d))


@pytest.mark.parametrize("n", [1, 2, 5, 16])
def test_entry_sum_of_all_ones_powers(n):
    e = SparseCountMatrix.ones(n)
    for k in range(1, 40, 7):
        assert entry_sum(matpow(e, k)) == n ** (k + 1)


def test_exact_beyond_int64():
    e = SparseCountMatrix.ones(16)
    p = matpow(e, 20)                        # entries 16^19 > 2^63
    assert p[1, 1] == 16**19
    assert trace(p) == 16**20
    big = SparseCountMatrix(2, {(1, 1): 2**70, (1, 2): 1, (2, 2): 3})
    sq = matmul(big, big)
    assert sq[1, 1] == 2**140 and sq[1, 2] == 2**70 + 3


def test_float_view():
    assert (float_view(GM).toarray() == np.array(GM_H2)).all()
    assert (float_view(E4).toarray() == 1).all()
    r = build_Rm(3)
    f = float_view(r.to_sparse()).toarray()
    assert (f.sum(axis=0) == 1).all() and (f.sum(axis=1) == 1).all()
    assert (float_view(SparseCountMatrix(1, {(1, 1): 10}), scale=4).toarray() == 2.5).all()
    with pytest.raises(OverflowError):
        float_view(SparseCountMatrix(1, {(1, 1): 10**400}))


def test_construction_errors():
    with pytest.raises(IndexRangeError):
        SparseCountMatrix(2, {(3, 1): 1})
    with pytest.raises(ValueError):
        SparseCountMatrix(2, {(1, 1): -1})
    with pytest.raises(IndexRangeError):
        E4[0, 1]
    with pytest.raises(DimensionMismatchError):
        SparseCountMatrix.from_dense([[1, 0]])
    with pytest.raises(ValueError):
        PermutationMatrix([1, 1, 2])


def test_zero_entries_are_not_stored():
    a = SparseCountMatrix(3, {(1, 1): 0, (2, 3): 4})
    assert a.nnz == 1 and list(a.items()) == [(2, 3, 4)]
    assert a.zero_rows() == [1, 3] and a.zero_cols() == [1, 2]


def test_submatrix_and_transpose():
    a = SparseCountMatrix.from_dense([[1, 2, 0], [0, 0, 3], [4, 0, 5]])
    assert a.submatrix([3, 1]).to_dense() == [[1, 0], [4, 5]]
    assert a.T.to_dense() == [[1, 0, 4], [2, 0, 0], [0, 3, 5]]


def test_dump_round_trip():
    a = SparseCountMatrix.from_dense([[0, 7], [1, 0]])
    assert a.dump() == "dim=2\n1 2 7\n2 1 1\n"
    assert SparseCountMatrix.parse_dump(a.dump()) == a


def test_permutation_matrix():
    p = PermutationMatrix([2, 3, 1])
    assert p[1, 2] == 1 and p[1, 1] == 0
    assert p.power(3).is_identity()
    assert p.power(-1) == p.inverse() == p.power(2)
    assert p.cycles() == [(1, 2, 3)]
    # (P Q)[i, j] = 1 iff j = Q(P(i))
    q = PermutationMatrix([1, 3, 2])
    assert (p @ q).to_sparse() == matmul(p.to_sparse(), q.to_sparse())
    a = SparseCountMatrix.from_dense([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert a @ p == matmul(a, p.to_sparse())
    assert permute_columns(a, p)[1, 2] == 1   # column 1 moves to p(1) = 2
    assert p @ a == matmul(p.to_sparse(), a)


@given(st.integers(1, 24), st.integers(1, 9), st.integers(0, 10**6))
def test_power_sequences_match_matpow(n, k, seed):
    rng = np.random.default_rng(seed)
    a = SparseCountMatrix.from_dense((rng.random((n, n)) < 0.3).astype(int).tolist())
    assert trace_powers(a, k) == [trace(matpow(a, j)) for j in range(1, k + 1)]
    assert entry_sum_powers(a, k) == [entry_sum(matpow(a, j)) for j in range(1, k + 1)]


def test_power_sequences_beyond_int64():
    a = SparseCountMatrix(3, {(1, 1): 2**40, (1, 2): 3, (2, 1): 1, (2, 3): 5, (3, 1): 7})
    assert trace_powers(a, 7) == [trace(matpow(a, j)) for j in range(1, 8)]
    assert entry_sum_powers(a, 7) == [entry_sum(matpow(a, j)) for j in range(1, 8)]
    e = SparseCountMatrix.ones(16)
    # crosses 2^62 part way through the sequence
    assert trace_powers(e, 20) == [16**j for j in range(1, 21)]
    assert entry_sum_powers(e, 20) == [16 ** (j + 1) for j in range(1, 21)]
    assert trace_powers(e, 0) == []
    z = SparseCountMatrix.zeros(4)
    assert trace_powers(z, 3) == [0, 0, 0] and entry_sum_powers(z, 3) == [0, 0, 0]
