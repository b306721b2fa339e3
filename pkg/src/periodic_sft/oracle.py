"""Brute-force ground truth.

Nothing here touches ``transfer``: windows are checked one by one on
explicit assignments, with the oracle's own state encodings.  The aim is
independent evidence, not speed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import CapExceededError
from .matrix import SparseCountMatrix
from .patterns import BasicSet, Pattern2x2

DEFAULT_CAP = 2**24


@dataclass(frozen=True)
class TorusSpec:
    """Fundamental domain ``n x k`` of the lattice spanned by ``(n, 0)`` and ``(ell, k)``."""

    n: int
    k: int
    ell: int = 0

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("torus sides must be >= 1")
        if not 0 <= self.ell < self.n:
            raise ValueError(f"shear {self.ell} outside [0, {self.n})")

    def reduce(self, i: int, j: int) -> tuple[int, int]:
        s, j = divmod(j, self.k)
        return (i - s * self.ell) % self.n, j


# --- rectangular strips -------------------------------------------------------

def _column_pairs(bs: BasicSet, n_rows: int):
    cols = list(itertools.product(range(bs.r), repeat=n_rows))
    pats = bs.patterns
    compat = []
    for left in cols:
        ok = []
        for d, right in enumerate(cols):
            for y in range(n_rows - 1):
                if Pattern2x2(left[y], right[y], left[y + 1], right[y + 1]) not in pats:
                    break
            else:
                ok.append(d)
        compat.append(ok)
    return cols, compat


def count_strip(bs: BasicSet, n_rows: int, k_cols: int, cap: int = DEFAULT_CAP) -> int:
    """Number of admissible patterns on ``k_cols`` columns of height ``n_rows``.

    Partial patterns are extended column by column; every partial pattern is
    kept individually (no merging by last column), so ``cap`` bounds how many
    may be alive at once.
    """
    if n_rows < 1 or k_cols < 1:
        raise ValueError("strip sides must be >= 1")
    r = bs.r
    if n_rows == 1 or k_cols == 1:
        return r ** (n_rows * k_cols)
    if r**n_rows > cap:
        raise CapExceededError(f"{r}^{n_rows} columns exceed cap {cap}")
    cols, compat = _column_pairs(bs, n_rows)
    deg = np.array([len(c) for c in compat], dtype=np.int64)
    flat = np.array([d for c in compat for d in c], dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(deg)[:-1])).astype(np.int64)

    frontier = np.arange(len(cols), dtype=np.int64)
    for step in range(1, k_cols):
        fdeg = deg[frontier]
        if step == k_cols - 1:
            return int(fdeg.sum(dtype=object))
        total = int(fdeg.sum())
        if total > cap:
            raise CapExceededError(f"{total} partial patterns exceed cap {cap}")
        if total == 0:
            return 0
        offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(fdeg) - fdeg, fdeg)
        frontier = flat[np.repeat(starts[frontier], fdeg) + offsets]
    raise AssertionError("unreachable")


def count_strip_naive(bs: BasicSet, n_rows: int, k_cols: int, cap: int = 2**16) -> int:
    """Check every one of the ``r**(n*k)`` assignments."""
    r = bs.r
    if r ** (n_rows * k_cols) > cap:
        raise CapExceededError(f"{r}^{n_rows * k_cols} assignments exceed cap {cap}")
    pats = bs.patterns
    count = 0
    for flat in itertools.product(range(r), repeat=n_rows * k_cols):
        grid = [flat[x * n_rows:(x + 1) * n_rows] for x in range(k_cols)]
        if all(
            Pattern2x2(grid[x][y], grid[x + 1][y], grid[x][y + 1], grid[x + 1][y + 1]) in pats
            for x in range(k_cols - 1)
            for y in range(n_rows - 1)
        ):
            count += 1
    return count


# --- periodic patterns ----------------------------------------------------------

def count_torus(bs: BasicSet, spec: TorusSpec, cap: int = DEFAULT_CAP) -> int:
    """Number of admissible patterns periodic under ``[[n, ell], [0, k]]``."""
    n, k = spec.n, spec.k
    r = bs.r
    if r ** (n * k) > cap:
        raise CapExceededError(f"{r}^{n * k} assignments exceed cap {cap}")
    order = {(i, j): j * n + i for j in range(k) for i in range(n)}
    ncells = n * k
    # windows[t]: windows whose last-assigned cell is t, as cell-index 4-tuples
    windows: list[list[tuple[int, int, int, int]]] = [[] for _ in range(ncells)]
    for j in range(k):
        for i in range(n):
            cells = tuple(order[spec.reduce(i + dx, j + dy)] for dy in (0, 1) for dx in (0, 1))
            windows[max(cells)].append(cells)
    pats = bs.patterns
    values = [0] * ncells

    def extend(t: int) -> int:
        if t == ncells:
            return 1
        total = 0
        for s in range(r):
            values[t] = s
            for a, b, c, d in windows[t]:
                if (values[a], values[b], values[c], values[d]) not in pats:
                    break
            else:
                total += extend(t + 1)
        return total

    return extend(0)


def staircase_transfer(bs: BasicSet, q: int) -> SparseCountMatrix:
    """Transfer matrix for patterns periodic under ``(1, q)``, built from the
    sequence picture ``U(x, y) = u[y - q x]``.

    A state is the run ``u[j-q], ..., u[j]``; appending ``u[j+1]`` completes the
    window whose left column is ``(u[j], u[j+1])`` and right column is
    ``(u[j-q], u[j-q+1])``.  States are indexed little-endian.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    r = bs.r
    pats = bs.patterns
    states = list(itertools.product(range(r), repeat=q + 1))

    def index(state: Sequence[int]) -> int:
        return sum(u * r**p for p, u in enumerate(state)) + 1

    entries = {}
    for st in states:
        for new in range(r):
            if Pattern2x2(st[q], st[0], new, st[1]) in pats:
                entries[(index(st), index(st[1:] + (new,)))] = 1
    return SparseCountMatrix(len(states), entries)


# --- exact eigenvalues for tiny matrices ---------------------------------------

def charpoly(a: Sequence[Sequence[int]]) -> list[int]:
    """Coefficients of ``det(x I - A)``, highest degree first (Faddeev-LeVerrier)."""
    n = len(a)
    A = [[Fraction(v) for v in row] for row in a]
    coeffs = [Fraction(1)]
    M = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{k-1} I
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            AM[i][i] += coeffs[-1]
        M = AM
        AM = [[sum(A[i][t] * M[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    assert all(c.denominator == 1 for c in coeffs)
    return [int(c) for c in coeffs]


def _trim(p):
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
    return p


def _polyrem(p, d):
    p = list(p)
    while len(p) >= len(d) and any(p):
        f = p[0] / d[0]
        for i in range(len(d)):
            p[i] -= f * d[i]
        p = p[1:]
    return _trim(p) if p else [Fraction(0)]


def _polydiv(p, d):
    p = list(p)
    out = []
    while len(p) >= len(d):
        f = p[0] / d[0]
        out.append(f)
        for i in range(len(d)):
            p[i] -= f * d[i]
        p = p[1:]
    return _trim(out)


def _deriv(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])] or [Fraction(0)]


def _eval(p, x):
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _sturm_chain(p):
    chain = [p, _deriv(p)]
    while len(chain[-1]) > 1 or chain[-1][0] != 0:
        rem = _polyrem(chain[-2], chain[-1])
        if len(rem) == 1 and rem[0] == 0:
            break
        chain.append([-c for c in rem])
    return chain


def _sign_changes(chain, x) -> int:
    signs = [v for v in (_eval(q, x) for q in chain) if v != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if (s > 0) != (t > 0))


def exact_eigen_check(a, tol: float = 1e-12) -> list[tuple[Fraction, Fraction]]:
    """Brackets ``(lo, hi)`` of width <= ``tol``, one per distinct real
    eigenvalue of the integer matrix ``a`` (dim <= 4), in increasing order."""
    if isinstance(a, SparseCountMatrix):
        a = a.to_dense()
    n = len(a)
    if n > 4:
        raise ValueError("exact eigen check supports dim <= 4 only")
    p = [Fraction(c) for c in charpoly(a)]
    g = p
    dp = _deriv(p)
    while len(dp) > 1 or dp[0] != 0:
        g, dp = dp, _polyrem(g, dp)
    sqfree = _polydiv(p, g) if len(g) > 1 else p
    if len(sqfree) == 1:
        return []
    bound = 1 + max(abs(c / sqfree[0]) for c in sqfree[1:])
    chain = _sturm_chain(sqfree)
    tol = Fraction(tol)
    out = []

    def isolate(lo, hi):
        # Sturm counts roots in the half-open interval (lo, hi]
        count = _sign_changes(chain, lo) - _sign_changes(chain, hi)
        if count == 0:
            return
        if count == 1 and hi - lo <= tol:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        isolate(lo, mid)
        isolate(mid, hi)

    isolate(-bound - 1, bound + 1)
    return out
