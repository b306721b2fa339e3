"""Skew coordinate systems on Z^2 and Hermite normal forms of 2x2 lattices.

A coordinate system ``gamma = [[a, b], [c, d]]`` in GL_2(Z) has unit vectors
``(a, b)`` and ``(c, d)``; a generator ``[[M, L], [0, K]]`` written in gamma
coordinates spans the same sublattice as ``gamma^T [[M, L], [0, K]]`` in the
standard system.

The generic route (integer multiply, then :func:`hnf_reduce`) is the
reference.  The closed forms are kept as separate functions and checked
against it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidHermiteFormError, SingularMatrixError


def egcd(x: int, y: int) -> tuple[int, int, int]:
    """``(g, s, t)`` with ``g = gcd(x, y) >= 0`` and ``s x + t y = g``."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class IntMat2:
    a11: int
    a12: int
    a21: int
    a22: int

    @classmethod
    def of(cls, rows) -> "IntMat2":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a11, self.a12), (self.a21, self.a22))

    def __matmul__(self, other: "IntMat2") -> "IntMat2":
        return IntMat2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    @property
    def T(self) -> "IntMat2":
        return type(self)(self.a11, self.a21, self.a12, self.a22)

    def as_intmat(self) -> "IntMat2":
        return IntMat2(self.a11, self.a12, self.a21, self.a22)


@dataclass(frozen=True)
class Unimodular(IntMat2):
    """Element of GL_2(Z), stored as ``[[a, b], [c, d]]``."""

    def __post_init__(self):
        if abs(self.det) != 1:
            raise ValueError(f"|det| must be 1, got {self.det}")

    @classmethod
    def of(cls, rows) -> "Unimodular":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    a = property(lambda self: self.a11)
    b = property(lambda self: self.a12)
    c = property(lambda self: self.a21)
    d = property(lambda self: self.a22)

    def inverse(self) -> "Unimodular":
        s = self.det
        return Unimodular(s * self.a22, -s * self.a12, -s * self.a21, s * self.a11)


GAMMA0 = Unimodular(1, 0, 0, 1)
GAMMA0_HAT = Unimodular(0, 1, 1, 0)


def gamma_q(q: int) -> Unimodular:
    """The shear system ``[[1, q], [0, 1]]``."""
    return Unimodular(1, q, 0, 1)


@dataclass(frozen=True)
class HermiteForm:
    """``[[n, ell], [0, k]]`` with ``n, k >= 1`` and ``0 <= ell < n``, in ``system``."""

    n: int
    ell: int
    k: int
    system: Unimodular = GAMMA0

    def __post_init__(self):
        if self.n < 1 or self.k < 1 or not 0 <= self.ell < self.n:
            raise InvalidHermiteFormError(f"not a Hermite normal form: n={self.n}, ell={self.ell}, k={self.k}")

    def matrix(self) -> IntMat2:
        return IntMat2(self.n, self.ell, 0, self.k)

    def standard_matrix(self) -> IntMat2:
        """Generator in standard coordinates: ``gamma^T [[n, ell], [0, k]]``."""
        return self.system.T.as_intmat() @ self.matrix()

    @property
    def index(self) -> int:
        return self.n * self.k

    def triple(self) -> tuple[int, int, int]:
        return (self.n, self.ell, self.k)


def canonical_triangular(m: int, ell: int, k: int) -> tuple[int, int, int]:
    """Normalize an upper-triangular generator ``[[m, ell], [0, k]]`` by column
    sign flips and column reduction to ``(n, ell mod n, k)`` with ``n, k > 0``."""
    if m == 0 or k == 0:
        raise SingularMatrixError("triangular generator is singular")
    if k < 0:
        k, ell = -k, -ell
    m = abs(m)
    return m, ell % m, k


def hnf_reduce(A: IntMat2) -> tuple[HermiteForm, Unimodular]:
    """Column-style Hermite normal form: ``A U = [[n, ell], [0, k]]``."""
    if not isinstance(A, IntMat2):
        A = IntMat2.of(A)
    det = A.det
    if det == 0:
        raise SingularMatrixError(f"singular matrix {A.rows()}")
    k, b1, b2 = egcd(A.a21, A.a22)
    # U = [[a22/k, b1], [-a21/k, b2]], det U = 1
    u11, u12, u21, u22 = A.a22 // k, b1, -A.a21 // k, b2
    m = det // k
    ell = b1 * A.a11 + b2 * A.a12
    if m < 0:
        m, u11, u21 = -m, -u11, -u21
    t = ell // m
    ell -= t * m
    u12, u22 = u12 - t * u11, u22 - t * u21
    return HermiteForm(m, ell, k), Unimodular(u11, u12, u21, u22)


def hnf_of(A) -> HermiteForm:
    return hnf_reduce(A)[0]


def _check_hnf(M: int, L: int, K: int) -> None:
    if M < 1 or K < 1 or not 0 <= L < M:
        raise InvalidHermiteFormError(f"not a Hermite normal form: M={M}, L={L}, K={K}")


def to_gamma0(gamma: Unimodular, M: int, L: int, K: int) -> HermiteForm:
    """Standard-system HNF of the lattice ``[[M, L], [0, K]]_gamma``."""
    _check_hnf(M, L, K)
    return hnf_of(gamma.T.as_intmat() @ IntMat2(M, L, 0, K))


def transform(gamma: Unimodular, gamma_new: Unimodular, M: int, L: int, K: int,
              check: bool = True) -> HermiteForm:
    """Rewrite ``[[M, L], [0, K]]_gamma`` as an HNF in ``gamma_new`` coordinates.

    Uses the closed form when ``a'b - ab' != 0`` and the triangular shortcut
    otherwise; with ``check`` the result is compared with the generic
    reduction of ``(gamma_new^T)^{-1} gamma^T [[M, L], [0, K]]``.
    """
    _check_hnf(M, L, K)
    n, ell, k = closed_form_transform(gamma, gamma_new, M, L, K)
    out = HermiteForm(n, ell, k, gamma_new)
    if check:
        ref = _generic_transform(gamma, gamma_new, M, L, K)
        if ref.triple() != out.triple():
            raise AssertionError(f"closed form {out.triple()} disagrees with generic {ref.triple()}")
    return out


def _generic_transform(gamma, gamma_new, M, L, K) -> HermiteForm:
    X = gamma_new.T.inverse().as_intmat() @ gamma.T.as_intmat() @ IntMat2(M, L, 0, K)
    h = hnf_of(X)
    return HermiteForm(h.n, h.ell, h.k, gamma_new)


# --- closed forms ----------------------------------------------------------------

def closed_form_to_gamma0(gamma: Unimodular, M: int, L: int, K: int) -> tuple[int, int, int]:
    """``k = gcd(bM, bL + dK)``, ``m = MK/k``, ``ell = b1 aM + b2 (aL + cK)``;
    requires ``b != 0``.  Returned canonicalized."""
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    if b == 0:
        raise ValueError("closed form requires b != 0")
    k, b1, b2 = egcd(b * M, b * L + d * K)
    m = M * K // k
    ell = b1 * (a * M) + b2 * (a * L + c * K)
    return canonical_triangular(m, ell, k)


def closed_form_transform(gamma: Unimodular, gamma_new: Unimodular, M: int, L: int, K: int) -> tuple[int, int, int]:
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    a_, b_, c_, d_ = gamma_new.a, gamma_new.b, gamma_new.c, gamma_new.d
    s = gamma_new.det
    cross = a_ * b - a * b_
    p = a * d_ - b * c_
    if cross == 0:
        # first unit vectors are parallel: the product is already triangular
        return canonical_triangular(s * p * M, s * (p * L + (c * d_ - c_ * d) * K), s * (a_ * d - b_ * c) * K)
    k, b1, b2 = egcd(s * cross * M, s * (cross * L + (a_ * d - b_ * c) * K))
    m = gamma.det * gamma_new.det * M * K // k
    ell = s * (b1 * p * M + b2 * (p * L + (c * d_ - c_ * d) * K))
    return canonical_triangular(m, ell, k)


def bezout_form(gamma: Unimodular, M: int, L: int, K: int) -> tuple[int, int, int]:
    """gamma -> gamma0 via ``m'``, ``l'`` with ``bM = m'k``, ``bL + dK = l'k``:
    the image is ``[[m'K/b, (ak - det(gamma) b2 K)/b], [0, k]]``.

    Written independently of :func:`closed_form_to_gamma0` so the two can be
    compared.  Requires ``b != 0``; the result is canonicalized.
    """
    _check_hnf(M, L, K)
    a, b, c, d = gamma.a, gamma.b, gamma.c, gamma.d
    if b == 0:
        raise ValueError("closed form requires b != 0")
    k, b1, b2 = egcd(b * M, b * L + d * K)
    m_p, l_p = b * M // k, (b * L + d * K) // k
    assert b1 * m_p + b2 * l_p == 1
    num_m, num_l = m_p * K, a * k - gamma.det * b2 * K
    if num_m % b or num_l % b:
        raise AssertionError(f"non-integral entries for gamma={gamma.rows()}, M={M}, L={L}, K={K}")
    return canonical_triangular(num_m // b, num_l // b, k)


def lattice_points(A, radius: int) -> set[tuple[int, int]]:
    """``{A (s, t) : s, t in Z}`` intersected with ``[-radius, radius]^2``."""
    if not isinstance(A, IntMat2):
        A = IntMat2.of(A)
    det = A.det
    if det == 0:
        raise SingularMatrixError("singular generator")
    xs = np.arange(-radius, radius + 1, dtype=np.int64)
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    # p is in the lattice iff adj(A) p = 0 mod det
    s = A.a22 * X - A.a12 * Y
    t = -A.a21 * X + A.a11 * Y
    mask = (s % det == 0) & (t % det == 0)
    return set(zip(X[mask].tolist(), Y[mask].tolist()))


def equivalent(A, B) -> bool:
    """True iff ``A Z^2 = B Z^2``."""
    return hnf_of(A).triple() == hnf_of(B).triple()
