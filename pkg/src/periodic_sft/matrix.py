"""Sparse square matrices with nonnegative arbitrary-precision integer entries.

Indices in the public API are 1-based.  Products run through ``scipy.sparse``
with int64 when the result provably fits, and fall back to exact Python
integers otherwise.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DimensionMismatchError, IndexRangeError

_INT64_SAFE = 2**62


class SparseCountMatrix:
    """Square nonnegative integer matrix stored as one ``{col: value}`` dict per row."""

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, entries: Mapping[tuple[int, int], int] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        rows: list[dict[int, int]] = [{} for _ in range(dim)]
        for (i, j), v in (entries or {}).items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise IndexRangeError(f"entry ({i}, {j}) outside [1, {dim}]")
            v = int(v)
            if v < 0:
                raise ValueError("entries must be nonnegative")
            if v:
                rows[i - 1][j - 1] = v
        self._rows = tuple(rows)

    @classmethod
    def _from_rows(cls, dim: int, rows: Sequence[dict[int, int]]) -> "SparseCountMatrix":
        m = object.__new__(cls)
        m.dim = dim
        m._rows = tuple(rows)
        return m

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "SparseCountMatrix":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DimensionMismatchError("matrix must be square")
        return cls(n, {(i + 1, j + 1): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> "SparseCountMatrix":
        return cls._from_rows(n, [{i: 1} for i in range(n)])

    @classmethod
    def ones(cls, n: int) -> "SparseCountMatrix":
        return cls._from_rows(n, [dict.fromkeys(range(n), 1) for _ in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "SparseCountMatrix":
        return cls._from_rows(n, [{} for _ in range(n)])

    @classmethod
    def from_scipy(cls, a) -> "SparseCountMatrix":
        a = sp.csr_matrix(a)
        n = a.shape[0]
        rows = []
        for i in range(n):
            lo, hi = a.indptr[i], a.indptr[i + 1]
            rows.append({int(j): int(v) for j, v in zip(a.indices[lo:hi], a.data[lo:hi]) if v})
        return cls._from_rows(n, rows)

    # --- access ----------------------------------------------------------

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        if not (1 <= i <= self.dim and 1 <= j <= self.dim):
            raise IndexRangeError(f"entry ({i}, {j}) outside [1, {self.dim}]")
        return self._rows[i - 1].get(j - 1, 0)

    def items(self) -> Iterator[tuple[int, int, int]]:
        """Nonzero entries as 1-based ``(i, j, v)`` in row-major order."""
        for i, row in enumerate(self._rows):
            for j in sorted(row):
                yield i + 1, j + 1, row[j]

    def row(self, i: int) -> dict[int, int]:
        """Nonzero entries of row ``i`` as a 1-based ``{j: v}`` dict."""
        return {j + 1: v for j, v in self._rows[i - 1].items()}

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows)

    def max_entry(self) -> int:
        return max((max(r.values()) for r in self._rows if r), default=0)

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseCountMatrix):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    __hash__ = None

    def __repr__(self) -> str:
        return f"SparseCountMatrix(dim={self.dim}, nnz={self.nnz})"

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.dim for _ in range(self.dim)]
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    def to_scipy(self, dtype=np.int64) -> sp.csr_matrix:
        ii, jj, vv = [], [], []
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                ii.append(i)
                jj.append(j)
                vv.append(v)
        return sp.csr_matrix((np.array(vv, dtype=dtype), (ii, jj)), shape=(self.dim, self.dim))

    def transpose(self) -> "SparseCountMatrix":
        rows: list[dict[int, int]] = [{} for _ in range(self.dim)]
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                rows[j][i] = v
        return SparseCountMatrix._from_rows(self.dim, rows)

    @property
    def T(self) -> "SparseCountMatrix":
        return self.transpose()

    def submatrix(self, indices: Iterable[int]) -> "SparseCountMatrix":
        """Principal submatrix on the given 1-based indices (kept in sorted order)."""
        idx = sorted(set(indices))
        if not idx:
            raise ValueError("empty index set")
        pos = {i - 1: k for k, i in enumerate(idx)}
        rows = []
        for i in idx:
            rows.append({pos[j]: v for j, v in self._rows[i - 1].items() if j in pos})
        return SparseCountMatrix._from_rows(len(idx), rows)

    def zero_rows(self) -> list[int]:
        return [i + 1 for i, row in enumerate(self._rows) if not row]

    def zero_cols(self) -> list[int]:
        seen = set()
        for row in self._rows:
            seen.update(row)
        return [j + 1 for j in range(self.dim) if j not in seen]

    def __matmul__(self, other):
        if isinstance(other, PermutationMatrix):
            return permute_columns(self, other)
        if isinstance(other, SparseCountMatrix):
            return matmul(self, other)
        return NotImplemented

    # --- debug dump --------------------------------------------------------

    def dump(self) -> str:
        lines = [f"dim={self.dim}"]
        lines.extend(f"{i} {j} {v}" for i, j, v in self.items())
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_dump(cls, text: str) -> "SparseCountMatrix":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines[0].startswith("dim="):
            raise ValueError("missing 'dim=' header")
        dim = int(lines[0][4:])
        entries = {}
        for ln in lines[1:]:
            i, j, v = (int(t) for t in ln.split())
            entries[(i, j)] = v
        return cls(dim, entries)


class PermutationMatrix:
    """Permutation matrix with ``P[i, mapping[i]] = 1`` (1-based)."""

    __slots__ = ("dim", "mapping")

    def __init__(self, mapping: Sequence[int]):
        mapping = tuple(int(m) for m in mapping)
        n = len(mapping)
        if sorted(mapping) != list(range(1, n + 1)):
            raise ValueError("mapping is not a bijection of [1, N]")
        self.dim = n
        self.mapping = mapping

    @classmethod
    def identity(cls, n: int) -> "PermutationMatrix":
        return cls(range(1, n + 1))

    def __getitem__(self, key: tuple[int, int]) -> int:
        i, j = key
        return int(self.mapping[i - 1] == j)

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PermutationMatrix):
            return NotImplemented
        return self.mapping == other.mapping

    __hash__ = None

    def __repr__(self) -> str:
        return f"PermutationMatrix({list(self.mapping)})"

    def compose(self, other: "PermutationMatrix") -> "PermutationMatrix":
        """Matrix product ``self @ other``: i -> other(self(i))."""
        return PermutationMatrix([other.mapping[j - 1] for j in self.mapping])

    def __matmul__(self, other):
        if isinstance(other, PermutationMatrix):
            return self.compose(other)
        if isinstance(other, SparseCountMatrix):
            return matmul(self.to_sparse(), other)
        return NotImplemented

    def power(self, k: int) -> "PermutationMatrix":
        k = int(k)
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = PermutationMatrix.identity(self.dim)
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.compose(base)
            k >>= 1
        return result

    def inverse(self) -> "PermutationMatrix":
        inv = [0] * self.dim
        for i, j in enumerate(self.mapping, start=1):
            inv[j - 1] = i
        return PermutationMatrix(inv)

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.mapping, start=1))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.dim + 1):
            if start in seen:
                continue
            cyc = []
            i = start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self.mapping[i - 1]
            out.append(tuple(cyc))
        return out

    def to_sparse(self) -> SparseCountMatrix:
        return SparseCountMatrix._from_rows(self.dim, [{j - 1: 1} for j in self.mapping])


def _check_same_dim(a: SparseCountMatrix, b: SparseCountMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {b.dim}")


def hadamard(a: SparseCountMatrix, b: SparseCountMatrix) -> SparseCountMatrix:
    _check_same_dim(a, b)
    rows = []
    for ra, rb in zip(a._rows, b._rows):
        if len(rb) < len(ra):
            ra, rb = rb, ra
        rows.append({j: v * rb[j] for j, v in ra.items() if j in rb})
    return SparseCountMatrix._from_rows(a.dim, rows)


def kronecker(a: SparseCountMatrix, b: SparseCountMatrix) -> SparseCountMatrix:
    nb = b.dim
    rows = []
    for ra in a._rows:
        for rb in b._rows:
            row = {}
            for ja, va in ra.items():
                off = ja * nb
                for jb, vb in rb.items():
                    row[off + jb] = va * vb
            rows.append(row)
    return SparseCountMatrix._from_rows(a.dim * nb, rows)


def matmul(a: SparseCountMatrix, b: SparseCountMatrix) -> SparseCountMatrix:
    _check_same_dim(a, b)
    if a.max_entry() * b.max_entry() * a.dim < _INT64_SAFE:
        return SparseCountMatrix.from_scipy(a.to_scipy() @ b.to_scipy())
    brows = b._rows
    rows = []
    for ra in a._rows:
        acc: dict[int, int] = {}
        for k, va in ra.items():
            for j, vb in brows[k].items():
                acc[j] = acc.get(j, 0) + va * vb
        rows.append(acc)
    return SparseCountMatrix._from_rows(a.dim, rows)


def permute_columns(a: SparseCountMatrix, p: PermutationMatrix) -> SparseCountMatrix:
    """``a @ p``: column ``j`` of ``a`` moves to column ``p(j)``."""
    if a.dim != p.dim:
        raise DimensionMismatchError(f"dimensions differ: {a.dim} vs {p.dim}")
    m = [j - 1 for j in p.mapping]
    return SparseCountMatrix._from_rows(a.dim, [{m[j]: v for j, v in row.items()} for row in a._rows])


def matpow(a: SparseCountMatrix, k: int) -> SparseCountMatrix:
    """Exact ``a**k`` by repeated squaring; ``a**0`` is the identity."""
    if k < 0:
        raise ValueError("exponent must be nonnegative")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else matmul(result, base)
        k >>= 1
        if k:
            base = matmul(base, base)
    return SparseCountMatrix.identity(a.dim) if result is None else result


def entry_sum(a: SparseCountMatrix) -> int:
    return sum(sum(row.values()) for row in a._rows)


def trace(a: SparseCountMatrix) -> int:
    return sum(row.get(i, 0) for i, row in enumerate(a._rows))


def float_view(a: SparseCountMatrix, scale: float = 1.0) -> sp.csr_matrix:
    """Double-precision copy of ``a / scale`` for the spectral routines."""
    ii, jj, vv = [], [], []
    for i, row in enumerate(a._rows):
        for j, v in row.items():
            try:
                x = v / scale
            except OverflowError as exc:
                raise OverflowError(f"entry ({i + 1}, {j + 1}) does not fit in a double") from exc
            if not np.isfinite(x):
                raise OverflowError(f"entry ({i + 1}, {j + 1}) does not fit in a double")
            ii.append(i)
            jj.append(j)
            vv.append(x)
    return sp.csr_matrix((np.array(vv, dtype=float), (ii, jj)), shape=(a.dim, a.dim))


def _product_fits(p: sp.csr_matrix, q: sp.csr_matrix) -> bool:
    """Every entry of ``p @ q`` (nonnegative int64) stays below 2^62."""
    if p.nnz == 0 or q.nnz == 0:
        return True
    return float(p.astype(float).sum(axis=1).max()) * float(q.max()) < _INT64_SAFE


def _trace_fits(p: sp.csr_matrix, q: sp.csr_matrix) -> bool:
    if p.nnz == 0 or q.nnz == 0:
        return True
    return float(p.astype(float).sum()) * float(q.max()) < _INT64_SAFE


def _trace_of_product(p: SparseCountMatrix, q: SparseCountMatrix) -> int:
    qr = q._rows
    return sum(v * qr[c].get(r, 0) for r, row in enumerate(p._rows) for c, v in row.items())


def trace_powers(a: SparseCountMatrix, k_max: int) -> list[int]:
    """``[trace(a), trace(a^2), ..., trace(a^k_max)]``.

    Only powers up to ``ceil(k_max / 2)`` are formed; ``trace(a^(i+j))`` is the
    entrywise product of ``a^i`` with the transpose of ``a^j``.  Each step runs
    in int64 when a bound from the operands shows it cannot overflow, and on
    exact integers otherwise.
    """
    if k_max < 1:
        return []
    half = (k_max + 1) // 2
    fast = [a.to_scipy()]
    while len(fast) < half and _product_fits(fast[-1], fast[0]):
        fast.append(fast[-1] @ fast[0])
    exact: dict[int, SparseCountMatrix] = {}

    def exact_power(i: int) -> SparseCountMatrix:
        if i not in exact:
            exact[i] = (SparseCountMatrix.from_scipy(fast[i - 1]) if i <= len(fast)
                        else matmul(exact_power(i - 1), a))
        return exact[i]

    out = [trace(a)]
    for k in range(2, k_max + 1):
        i = (k + 1) // 2
        j = k - i
        if i <= len(fast) and _trace_fits(fast[i - 1], fast[j - 1]):
            out.append(int(fast[i - 1].multiply(fast[j - 1].T).sum()))
        else:
            out.append(_trace_of_product(exact_power(i), exact_power(j)))
    return out


def entry_sum_powers(a: SparseCountMatrix, k_max: int) -> list[int]:
    """``[|a|, |a^2|, ..., |a^k_max|]`` by iterating ``v <- a v`` from the
    all-ones vector."""
    out = []
    s = a.to_scipy()
    f = s.astype(float)
    # entries of the next iterate are at most row_max * sum(v), its sum at most col_max * sum(v)
    grow = max(f.sum(axis=1).max(), f.sum(axis=0).max()) if s.nnz else 0.0
    v = np.ones(a.dim, dtype=np.int64)
    while len(out) < k_max and float(grow) * float(v.sum()) < _INT64_SAFE:
        v = s @ v
        out.append(int(v.sum()))
    w = [int(x) for x in v]
    while len(out) < k_max:        # exact from here on
        w = [sum(x * w[j] for j, x in row.items()) for row in a._rows]
        out.append(sum(w))
    return out
