import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from periodic_sft.errors import CapExceededError
from periodic_sft.fixtures import GM_H2, HARD_HEXAGON_H2, REDUCIBLE_V2, all_fixtures, golden_mean
from periodic_sft.matrix import SparseCountMatrix, trace, matpow
from periodic_sft.oracle import (TorusSpec, charpoly, count_strip, count_strip_naive, count_torus,
                                 exact_eigen_check, staircase_transfer)
from periodic_sft.patterns import BasicSet, Pattern2x2, reflect

FIXTURES = all_fixtures()


def test_strip_examples():
    assert count_strip(BasicSet.full(2), 2, 2) == 16
    assert count_strip(BasicSet.empty(2), 2, 2) == 0
    assert count_strip(BasicSet.full(3), 3, 1) == 27
    # golden mean 2 x 2 blocks: no two adjacent ones
    assert count_strip(golden_mean(), 2, 2) == 7


def test_torus_examples():
    assert count_torus(BasicSet.full(2), TorusSpec(2, 2)) == 16
    assert count_torus(BasicSet.full(3), TorusSpec(3, 2, 1)) == 3**6
    assert count_torus(BasicSet.empty(2), TorusSpec(1, 1)) == 0
    # golden mean on the 1 x 1 torus: a lone one neighbours itself
    assert count_torus(golden_mean(), TorusSpec(1, 1)) == 1
    # 2 x 2 torus: empty, four lone ones, two diagonal pairs
    assert count_torus(golden_mean(), TorusSpec(2, 2)) == 1 + 4 + 2


def test_constant_zero_set():
    bs = BasicSet(2, [Pattern2x2(0, 0, 0, 0)])
    for n in range(1, 4):
        for k in range(1, 4):
            for ell in range(n):
                assert count_torus(bs, TorusSpec(n, k, ell)) == 1
            # a single column or row carries no window
            assert count_strip(bs, n, k) == (1 if n > 1 and k > 1 else 2 ** (n * k))


def test_torus_spec_validation():
    with pytest.raises(ValueError):
        TorusSpec(0, 1)
    with pytest.raises(ValueError):
        TorusSpec(2, 2, 2)
    with pytest.raises(ValueError):
        TorusSpec(2, 2, -1)
    spec = TorusSpec(3, 2, 1)
    # moving up one full period shifts by ell
    assert spec.reduce(0, 2) == (2, 0)
    assert spec.reduce(4, 1) == (1, 1)


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_pruned_strip_equals_naive(name):
    bs = FIXTURES[name]
    top = 4 if bs.r == 2 else 3
    for n in range(1, top + 1):
        for k in range(1, top + 1):
            assert count_strip(bs, n, k) == count_strip_naive(bs, n, k), (n, k)


def _torus_naive(bs, spec):
    n, k = spec.n, spec.k
    total = 0
    for code in range(bs.r ** (n * k)):
        vals = [(code // bs.r**t) % bs.r for t in range(n * k)]

        def at(i, j):
            i2, j2 = spec.reduce(i, j)
            return vals[j2 * n + i2]

        total += all(Pattern2x2(at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)) in bs
                     for i in range(n) for j in range(k))
    return total


@pytest.mark.parametrize("name", ["gm", "hh", "sgm", "reducible", "random1", "random11"])
def test_torus_equals_naive(name):
    bs = FIXTURES[name]
    for n in range(1, 4):
        for k in range(1, 3 if bs.r == 3 else 4):
            for ell in range(n):
                spec = TorusSpec(n, k, ell)
                assert count_torus(bs, spec) == _torus_naive(bs, spec), spec


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_torus_reflection(name):
    bs = FIXTURES[name]
    rb = reflect(bs)
    for n in range(1, 4):
        for k in range(1, 4):
            assert count_torus(bs, TorusSpec(n, k)) == count_torus(rb, TorusSpec(k, n))


def test_caps():
    with pytest.raises(CapExceededError):
        count_torus(BasicSet.full(2), TorusSpec(5, 5), cap=2**20)
    with pytest.raises(CapExceededError):
        count_strip_naive(BasicSet.full(2), 5, 5)
    with pytest.raises(CapExceededError):
        count_strip(BasicSet.full(2), 6, 3, cap=32)
    with pytest.raises(CapExceededError):
        count_strip(BasicSet.full(2), 3, 6, cap=100)


def test_staircase_examples():
    full = staircase_transfer(BasicSet.full(2), 2)
    assert full.dim == 8
    assert all(sum(full.row(i).values()) == 2 for i in range(1, 9))
    assert staircase_transfer(BasicSet.empty(2), 3).is_zero()
    gm = staircase_transfer(golden_mean(), 2)
    # periods (1, 2) and (0, 4) span the lattice with basis (2, 0), (1, 2)
    assert trace(matpow(gm, 4)) == count_torus(golden_mean(), TorusSpec(2, 2, 1)) == 5
    with pytest.raises(ValueError):
        staircase_transfer(golden_mean(), 0)


def test_charpoly_examples():
    assert charpoly([[2, 0], [0, 3]]) == [1, -5, 6]
    assert charpoly(REDUCIBLE_V2) == [int(c) for c in np.round(np.poly(np.array(REDUCIBLE_V2)))]
    assert charpoly(GM_H2) == [int(c) for c in np.round(np.poly(np.array(GM_H2)))]


def test_exact_eigen_examples():
    phi = Fraction((1 + 5**0.5) / 2)
    neg = exact_eigen_check([[1, 1], [1, 0]])
    brackets = exact_eigen_check([[1, 1], [1, 0]], tol=1e-12)
    assert len(brackets) == 2
    lo, hi = brackets[-1]
    assert lo <= phi <= hi + Fraction(1, 10**12) and hi - lo <= Fraction(1, 10**12)
    assert neg == brackets
    assert exact_eigen_check([[2, 0], [0, 2]]) != []
    assert [float(b[1]) for b in exact_eigen_check(REDUCIBLE_V2)][-1] == pytest.approx(2, abs=1e-10)
    assert exact_eigen_check([[0, 1], [-1, 0]]) == []
    with pytest.raises(ValueError):
        exact_eigen_check(SparseCountMatrix.ones(5))


@given(st.integers(1, 4), st.integers(0, 10**6))
def test_exact_eigen_matches_numpy(n, seed):
    a = np.random.default_rng(seed).integers(0, 3, (n, n))
    real = sorted({round(float(e.real), 6) for e in np.linalg.eigvals(a) if abs(e.imag) < 1e-9})
    brackets = exact_eigen_check(a.tolist())
    mids = [float((lo + hi) / 2) for lo, hi in brackets]
    assert len(mids) == len(real)
    for m, e in zip(mids, real):
        assert math.isclose(m, e, abs_tol=1e-5)


def test_hard_hexagon_small_counts():
    hh = FIXTURES["hh"]
    assert count_strip(hh, 1, 1) == 2
    assert count_strip(hh, 2, 1) == 4
    assert count_strip(hh, 2, 2) == sum(map(sum, HARD_HEXAGON_H2))
