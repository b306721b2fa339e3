"""Transition matrices built from a basic set.

* ``H_n``  horizontal: column words of height ``n``; ``H_n[i, j] = 1`` iff
  column ``i`` may stand immediately left of column ``j``.
* ``V_m``  vertical: row words of width ``m``; ``V_m[i, j] = 1`` iff row ``i``
  may lie immediately below row ``j``.
* ``T_m``  cylindrical: as ``V_m`` but the rows wrap around with period ``m``.
* ``R_m``  rotation: permutation matrix of the cyclic left shift.
* ``T_{gamma_q,1}``  transfer matrix for patterns periodic under ``(1, q)``.

``H_n``, ``V_m`` and ``T_m`` each come with a recursive (Kronecker/Hadamard)
construction and a direct window-by-window one; the two must agree.
"""
from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass

from .errors import CapExceededError
from .matrix import PermutationMatrix, SparseCountMatrix, hadamard, kronecker
from .patterns import BasicSet, Pattern2x2, reflect, sigma, unchi

DEFAULT_DIM_CAP = 2**16


def dim_cap() -> int:
    env = os.environ.get("SFT_DIM_CAP")
    return int(env) if env else DEFAULT_DIM_CAP


def check_dim(r: int, n: int) -> int:
    dim = r**n
    cap = dim_cap()
    if dim > cap:
        raise CapExceededError(f"matrix dimension {r}^{n} = {dim} exceeds cap {cap}")
    return dim


def build_H2(bs: BasicSet) -> SparseCountMatrix:
    return _pair_matrix(bs, Pattern2x2.from_columns)


def build_V2(bs: BasicSet) -> SparseCountMatrix:
    return _pair_matrix(bs, Pattern2x2.from_rows)


def _pair_matrix(bs: BasicSet, make) -> SparseCountMatrix:
    r = bs.r
    words = list(itertools.product(range(r), repeat=2))
    entries = {}
    for i, a in enumerate(words):
        for j, b in enumerate(words):
            if make(a, b) in bs.patterns:
                entries[(i + 1, j + 1)] = 1
    return SparseCountMatrix(r * r, entries)


def _grow(prev: SparseCountMatrix, base: SparseCountMatrix, r: int, n: int) -> SparseCountMatrix:
    """One step of ``M_{n+1} = (M_n (x) E_r) o (E_{r^{n-1}} (x) M_2)``.

    The second factor is dense, so the Hadamard product is evaluated on the
    support of the first: entry ``(i r + a, j r + b)`` is
    ``M_n[i, j] * M_2[(i r + a) mod r^2, (j r + b) mod r^2]``.
    """
    rr = r * r
    entries = {}
    for i, j, v in prev.items():
        for a in range(r):
            row = (i - 1) * r + a
            for b in range(r):
                col = (j - 1) * r + b
                w = base[row % rr + 1, col % rr + 1]
                if w:
                    entries[(row + 1, col + 1)] = v * w
    return SparseCountMatrix(prev.dim * r, entries)


def _grow_materialized(prev: SparseCountMatrix, base: SparseCountMatrix, r: int, n: int) -> SparseCountMatrix:
    """The same step with both Kronecker factors built explicitly (small n only)."""
    left = kronecker(prev, SparseCountMatrix.ones(r))
    right = kronecker(SparseCountMatrix.ones(r ** (n - 1)), base)
    return hadamard(left, right)


def build_Hn(bs: BasicSet, n: int, method: str = "recursive") -> SparseCountMatrix:
    if n < 2:
        raise ValueError("H_n is defined for n >= 2")
    check_dim(bs.r, n)
    if method == "direct":
        return _direct(bs, n, "H")
    h2 = build_H2(bs)
    h = h2
    for k in range(2, n):
        h = _grow(h, h2, bs.r, k)
    return h


def build_Vm(bs: BasicSet, m: int, method: str = "recursive") -> SparseCountMatrix:
    if m < 2:
        raise ValueError("V_m is defined for m >= 2")
    check_dim(bs.r, m)
    if method == "direct":
        return _direct(bs, m, "V")
    v2 = build_V2(bs)
    v = v2
    for k in range(2, m):
        v = _grow(v, v2, bs.r, k)
    return v


def _direct(bs: BasicSet, n: int, kind: str) -> SparseCountMatrix:
    """Window-by-window construction.  For each first word the second word is
    grown one symbol at a time, checking each 2x2 window as soon as it is
    complete, so the cost follows the number of nonzero entries.

    ``kind`` is ``"H"`` (two columns side by side), ``"V"`` (a row below a
    row) or ``"T"`` (as ``"V"`` with rows wrapping around).
    """
    r = bs.r
    pats = bs.patterns
    if kind == "H":
        # position y of both words forms the bottom of the window at height y
        def window(a, b, y):
            return Pattern2x2(a[y - 1], b[y - 1], a[y], b[y])
    else:
        def window(a, b, x):
            return Pattern2x2(a[x - 1], a[x], b[x - 1], b[x])
    wrap = kind == "T"
    entries = {}
    for i, a in enumerate(itertools.product(range(r), repeat=n)):
        b = [0] * n

        def grow(pos: int, acc: int) -> None:
            for s in range(r):
                b[pos] = s
                if pos and window(a, b, pos) not in pats:
                    continue
                if pos == n - 1:
                    if wrap and Pattern2x2(a[n - 1], a[0], b[n - 1], b[0]) not in pats:
                        continue
                    entries[(i + 1, acc * r + s + 1)] = 1
                else:
                    grow(pos + 1, acc * r + s)

        grow(0, 0)
    return SparseCountMatrix(r**n, entries)


def _wrap_factor(bs: BasicSet, m: int) -> SparseCountMatrix:
    """Block matrix ``[E_{r^{m-2}} (x) H~_{2;alpha}]`` enforcing the window that
    closes the cylinder (last column beside the first)."""
    r = bs.r
    h2 = build_H2(bs)
    width = r ** (m - 1)
    ones = SparseCountMatrix.ones(r ** (m - 2))
    entries = {}
    for u1 in range(r):
        for v1 in range(r):
            # H~[x, y] = H2[chi(x, y), chi(u1, v1)]: left column (x, y), right (u1, v1)
            tilde = SparseCountMatrix(
                r,
                {(x + 1, y + 1): 1 for x in range(r) for y in range(r)
                 if h2[x * r + y + 1, u1 * r + v1 + 1]},
            )
            block = kronecker(ones, tilde)
            for i, j, v in block.items():
                entries[(u1 * width + i, v1 * width + j)] = v
    return SparseCountMatrix(r**m, entries)


def build_Tm(bs: BasicSet, m: int, method: str = "recursive") -> SparseCountMatrix:
    """Cylindrical matrix on width-``m`` rows (bottom row index first)."""
    if m < 1:
        raise ValueError("T_m is defined for m >= 1")
    check_dim(bs.r, m)
    if m == 1 or method == "direct":
        return _direct(bs, m, "T")
    # Hadamard with the wrap factor, evaluated on the support of V_m: the
    # block of (i, j) is (first symbols), the entry inside it (last symbols)
    v = build_Vm(bs, m)
    h2 = build_H2(bs)
    r = bs.r
    width = r ** (m - 1)
    entries = {}
    for i, j, val in v.items():
        u1, v1 = (i - 1) // width, (j - 1) // width
        x, y = (i - 1) % r, (j - 1) % r
        if h2[x * r + y + 1, u1 * r + v1 + 1]:
            entries[(i, j)] = val
    return SparseCountMatrix(r**m, entries)


def build_hatTm(bs: BasicSet, m: int, method: str = "recursive") -> SparseCountMatrix:
    """Vertical-periodic analogue of ``T_m``."""
    return build_Tm(reflect(bs), m, method)


def build_Rm(m: int, r: int = 2) -> PermutationMatrix:
    if m < 1:
        raise ValueError("R_m is defined for m >= 1")
    check_dim(r, m)
    return PermutationMatrix([sigma(i, m, r) for i in range(1, r**m + 1)])


@dataclass(frozen=True)
class SkewTransfer:
    q: int
    matrix: SparseCountMatrix

    @property
    def dim(self) -> int:
        return self.matrix.dim


def build_T_gamma_q_1(bs: BasicSet, q: int) -> SkewTransfer:
    """Transfer matrix for patterns periodic under the vector ``(1, q)``.

    States are words of length ``q + 1``.  For ``q >= 2`` the matrix is the
    block layout: block row ``b`` (first two symbols) holds
    ``I_{r^{q-2}} (x) A_b`` in block column ``((b-1) mod r) + 1``, where row ``t``
    of the ``r x r^2`` band ``A_b`` carries ``x_{t r + 1, b} .. x_{t r + r, b}``.
    For ``q = 1`` the single row ``b`` carries row ``((b-1) mod r)`` of ``A_b``.
    Here ``x_{i, b}`` is admissible iff ``H_2[i, b] = 1``.
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    r = bs.r
    check_dim(r, q + 1)
    h2 = build_H2(bs)
    entries = {}
    if q == 1:
        for b in range(r * r):
            t = b % r
            for new in range(r):
                if h2[t * r + new + 1, b + 1]:
                    entries[(b + 1, t * r + new + 1)] = 1
        return SkewTransfer(q, SparseCountMatrix(r * r, entries))

    inner = r ** (q - 2)
    block_h, block_w = inner * r, inner * r * r
    for b in range(r * r):
        bc = b % r
        for s in range(inner):
            for t in range(r):
                row = b * block_h + s * r + t
                for new in range(r):
                    if h2[t * r + new + 1, b + 1]:
                        col = bc * block_w + s * r * r + t * r + new
                        entries[(row + 1, col + 1)] = 1
    return SkewTransfer(q, SparseCountMatrix(r ** (q + 1), entries))


class TransferFamily:
    """Per-basic-set cache of one kind of transfer matrix, keyed by size.

    ``kind`` is one of ``"H"``, ``"V"``, ``"T"``, ``"hatT"``.  Concurrent
    ``get`` calls may build the same matrix twice; the first insert wins.
    """

    _builders = {"H": build_Hn, "V": build_Vm, "T": build_Tm, "hatT": build_hatTm}

    def __init__(self, bs: BasicSet, kind: str):
        if kind not in self._builders:
            raise ValueError(f"unknown kind {kind!r}")
        self.basic_set = bs
        self.kind = kind
        self._cache: dict[int, SparseCountMatrix] = {}
        self._lock = threading.Lock()

    def get(self, n: int) -> SparseCountMatrix:
        m = self._cache.get(n)
        if m is not None:
            return m
        m = self._builders[self.kind](self.basic_set, n)
        with self._lock:
            return self._cache.setdefault(n, m)

    def __contains__(self, n: int) -> bool:
        return n in self._cache
