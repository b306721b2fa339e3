import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from periodic_sft.errors import InvalidHermiteFormError, SingularMatrixError
from periodic_sft.lattice import (GAMMA0, GAMMA0_HAT, HermiteForm, IntMat2, Unimodular,
                                  canonical_triangular, closed_form_to_gamma0, closed_form_transform,
                                  egcd, equivalent, gamma_q, hnf_of, hnf_reduce, lattice_points,
                                  bezout_form, to_gamma0, transform, _generic_transform)

entries = st.integers(-9, 9)


def random_unimodular(rng, bound=6, need=lambda g: True):
    while True:
        a, b, c, d = (rng.randint(-bound, bound) for _ in range(4))
        if abs(a * d - b * c) == 1:
            g = Unimodular(a, b, c, d)
            if need(g):
                return g


def random_hnf(rng, top=9):
    M, K = rng.randint(1, top), rng.randint(1, top)
    return M, rng.randint(0, M - 1), K


def same_lattice(gamma, form, gamma2, form2):
    """``form`` read in ``gamma`` and ``form2`` read in ``gamma2`` span one lattice."""
    A = gamma.T.as_intmat() @ IntMat2(*form[0], *form[1])
    B = gamma2.T.as_intmat() @ IntMat2(*form2[0], *form2[1])
    return equivalent(A, B)


# --- basics -------------------------------------------------------------------

def test_egcd():
    for x in range(-12, 13):
        for y in range(-12, 13):
            g, s, t = egcd(x, y)
            assert g == gcd(x, y) and s * x + t * y == g


def test_unimodular_validation():
    assert Unimodular(1, 2, 0, 1).inverse() == Unimodular(1, -2, 0, 1)
    assert GAMMA0_HAT.det == -1
    assert gamma_q(3) == Unimodular.of([[1, 3], [0, 1]])
    with pytest.raises(ValueError):
        Unimodular(2, 0, 0, 1)


def test_hermite_form_validation():
    with pytest.raises(InvalidHermiteFormError):
        HermiteForm(2, 2, 1)
    with pytest.raises(InvalidHermiteFormError):
        HermiteForm(0, 0, 1)
    with pytest.raises(InvalidHermiteFormError):
        to_gamma0(GAMMA0, 3, -1, 2)
    h = HermiteForm(3, 1, 2, gamma_q(1))
    assert h.index == 6 and h.standard_matrix().rows() == ((3, 1), (3, 3))


def test_hnf_examples():
    assert hnf_of([[2, 0], [0, 3]]).triple() == (2, 0, 3)
    assert hnf_of([[1, 0], [0, 1]]).triple() == (1, 0, 1)
    assert hnf_of([[0, 1], [1, 0]]).triple() == (1, 0, 1)
    assert hnf_of([[4, 6], [0, 2]]).triple() == (4, 2, 2)
    assert hnf_of([[-3, 0], [0, -5]]).triple() == (3, 0, 5)
    with pytest.raises(SingularMatrixError):
        hnf_of([[1, 2], [2, 4]])
    with pytest.raises(SingularMatrixError):
        lattice_points([[0, 0], [0, 0]], 3)


@given(entries, entries, entries, entries)
def test_hnf_reduce_invariants(a11, a12, a21, a22):
    A = IntMat2(a11, a12, a21, a22)
    if A.det == 0:
        return
    h, U = hnf_reduce(A)
    assert abs(U.det) == 1
    assert (A @ U.as_intmat()).rows() == h.matrix().rows()
    assert h.index == abs(A.det)
    assert hnf_of(h.matrix()) == h


def test_hnf_lattice_points_random():
    rng = random.Random(20)
    done = 0
    while done < 200:
        A = IntMat2(*(rng.randint(-9, 9) for _ in range(4)))
        if A.det == 0:
            continue
        done += 1
        assert lattice_points(A, 60) == lattice_points(hnf_of(A).matrix(), 60)


def test_lattice_points_examples():
    pts = lattice_points([[2, 0], [0, 2]], 2)
    assert pts == {(x, y) for x in (-2, 0, 2) for y in (-2, 0, 2)}
    assert len(lattice_points([[1, 0], [0, 1]], 3)) == 49
    # (1, 1) and (0, 2): the checkerboard sublattice
    assert lattice_points([[1, 0], [1, 2]], 1) == {(0, 0), (1, 1), (-1, -1), (1, -1), (-1, 1)}


def test_canonical_triangular():
    assert canonical_triangular(3, 7, 2) == (3, 1, 2)
    assert canonical_triangular(-3, 1, -2) == (3, 2, 2)
    with pytest.raises(SingularMatrixError):
        canonical_triangular(0, 1, 1)


# --- coordinate changes --------------------------------------------------------

def test_to_gamma0_examples():
    # [[1, 0], [0, 6]] in the shear system gamma_1
    assert to_gamma0(gamma_q(1), 1, 0, 6).triple() == (6, 1, 1)
    assert to_gamma0(GAMMA0, 3, 1, 2).triple() == (3, 1, 2)
    assert to_gamma0(GAMMA0_HAT, 2, 0, 3).triple() == (3, 0, 2)


def test_to_gamma0_matches_enumeration():
    rng = random.Random(5)
    for _ in range(200):
        g = random_unimodular(rng)
        M, L, K = random_hnf(rng, 6)
        # p is in the span of the gamma-coordinate generators iff its
        # coefficients, solved over Q, are integers
        u, v = (g.a, g.b), (g.c, g.d)
        g1 = (M * u[0], M * u[1])
        g2 = (L * u[0] + K * v[0], L * u[1] + K * v[1])
        det = g1[0] * g2[1] - g2[0] * g1[1]
        pts = set()
        for x in range(-12, 13):
            for y in range(-12, 13):
                s, t = Fraction(x * g2[1] - g2[0] * y, det), Fraction(g1[0] * y - x * g1[1], det)
                if s.denominator == 1 and t.denominator == 1:
                    pts.add((x, y))
        h = to_gamma0(g, M, L, K)
        assert pts == lattice_points(IntMat2(h.n, h.ell, 0, h.k), 12)


def test_transform_identity_and_round_trip():
    rng = random.Random(6)
    for _ in range(200):
        g, g2 = random_unimodular(rng), random_unimodular(rng)
        M, L, K = random_hnf(rng)
        assert transform(g, g, M, L, K).triple() == (M, L, K)
        h = transform(g, g2, M, L, K)
        assert h.system == g2
        assert transform(g2, g, *h.triple()).triple() == (M, L, K)
        assert transform(g, GAMMA0, M, L, K).triple() == to_gamma0(g, M, L, K).triple()


def test_closed_forms_match_generic():
    rng = random.Random(7)
    for _ in range(200):
        g = random_unimodular(rng, need=lambda g: g.b != 0)
        g2 = random_unimodular(rng)
        M, L, K = random_hnf(rng)
        generic = to_gamma0(g, M, L, K).triple()
        assert closed_form_to_gamma0(g, M, L, K) == generic
        assert bezout_form(g, M, L, K) == generic
        assert closed_form_transform(g, g2, M, L, K) == _generic_transform(g, g2, M, L, K).triple()
    with pytest.raises(ValueError):
        bezout_form(GAMMA0, 2, 1, 2)


def test_transform_parallel_unit_vectors():
    g = Unimodular(1, 2, 1, 3)
    g2 = Unimodular(1, 2, 2, 5)
    for M, L, K in [(3, 1, 2), (1, 0, 5), (4, 3, 4)]:
        assert transform(g, g2, M, L, K).triple() == _generic_transform(g, g2, M, L, K).triple()


def test_division_form_and_divisibility():
    """``K = mu b + nu`` and ``l' k = mu0 b + nu0`` split each entry into an
    integer part and a remainder over ``b``."""
    rng = random.Random(8)
    for _ in range(500):
        g = random_unimodular(rng, need=lambda g: g.b > 0)
        a, b, c, d, D = g.a, g.b, g.c, g.d, g.det
        M, L, K = random_hnf(rng)
        k, b1, b2 = egcd(b * M, b * L + d * K)
        m_p, l_p = b * M // k, (b * L + d * K) // k
        mu0, nu0 = divmod(l_p * k, b)
        mu, nu = divmod(K, b)
        assert (nu0 - d * nu) % b == 0
        assert mu0 - d * mu + (nu0 - d * nu) // b == L
        if (m_p * k) % b == 0:
            assert (m_p * nu) % b == 0
        if (nu0 - d * nu) % b == 0:
            assert (a * k - D * b2 * nu) % b == 0
        top = m_p * mu + m_p * nu // b
        ell = -D * b2 * mu + (a * k - D * b2 * nu) // b
        assert canonical_triangular(top, ell, k) == to_gamma0(g, M, L, K).triple()


def test_conjugate_system_form():
    rng = random.Random(9)
    for _ in range(500):
        g = random_unimodular(rng, need=lambda g: g.a > 0)
        a, b, c, D = g.a, g.b, g.c, g.det
        M, L, K = random_hnf(rng)
        kh, _, b2 = egcd(a * M, a * L + c * K)
        mh = a * M // kh
        expected = canonical_triangular(mh * K // a, (b * kh + D * b2 * K) // a, kh)
        assert (b * kh + D * b2 * K) % a == 0
        assert expected == transform(g, GAMMA0_HAT, M, L, K).triple()
        # the same split by remainders mod a
        mu, nu = divmod(K, a)
        assert (mh * nu) % a == 0 and (b * kh + D * b2 * nu) % a == 0
        alt = canonical_triangular(mh * mu + mh * nu // a, D * b2 * mu + (b * kh + D * b2 * nu) // a, kh)
        assert alt == expected


@pytest.mark.parametrize("m1", range(1, 5))
def test_standard_to_conjugate(m1):
    for l1 in range(0, 6):
        if gcd(m1, l1) != 1:
            continue
        _, b1, b2 = egcd(m1, l1)
        for k in range(1, 5):
            for kh in range(1, 5):
                assert same_lattice(GAMMA0, ((m1 * kh, l1 * kh), (0, k)),
                                    GAMMA0_HAT, ((m1 * k, b2 * k), (0, kh)))


def test_shear_general_form():
    rng = random.Random(10)
    for _ in range(300):
        q = rng.randint(1, 6)
        M, L, K = random_hnf(rng)
        k, b1, b2 = egcd(q * M, q * L + K)
        m1 = q * M // k
        # any Bezout pair works: b2 -> b2 + t m1 moves ell by a multiple of m
        b2 += rng.randint(-3, 3) * m1
        assert (k - b2 * K) % q == 0 and (m1 * K) % q == 0
        assert same_lattice(gamma_q(q), ((M, L), (0, K)),
                            GAMMA0, ((m1 * K // q, (k - b2 * K) // q), (0, k)))


@pytest.mark.parametrize("q", range(1, 5))
def test_shear_divisor_form(q):
    for m1 in (d for d in range(1, q + 1) if q % d == 0):
        k = q // m1
        for l1 in range(0, 2 * m1 + 1):
            if gcd(m1, l1) != 1:
                continue
            _, b1, b2 = egcd(m1, l1)
            for alpha in range(1, 4):
                assert same_lattice(gamma_q(q), ((1, 0), (0, alpha * q + l1 * k)),
                                    GAMMA0, ((alpha * m1 + l1, b1 - b2 * alpha), (0, k)))


@pytest.mark.parametrize("q", range(1, 5))
def test_shear_unit_form(q):
    for m in range(1, 5):
        assert same_lattice(gamma_q(q), ((1, 0), (0, m * q)), GAMMA0, ((m, 1), (0, q)))
        assert to_gamma0(gamma_q(q), 1, 0, m * q).triple() == canonical_triangular(m, 1, q)
