"""Perron roots, strongly connected structure and the mixing diagnostics
built on top of them (diameters, gluing exponents, domination constants).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from graphlib import TopologicalSorter

import numpy as np
from scipy.sparse import csgraph, identity

from .errors import NotIrreducibleError
from .matrix import SparseCountMatrix, entry_sum, float_view, matpow
from .patterns import BasicSet
from .transfer import TransferFamily

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 10**6
INF = math.inf


@dataclass
class SpectralEstimate:
    """``rho`` with Collatz-Wielandt bounds ``certified_bounds = (lower, upper)``.

    ``certified`` is False when the iteration cap was hit before the bounds
    closed to within the tolerance.  ``vector`` is the Perron vector of the
    dominant component, zero elsewhere.
    """

    rho: float
    iterations: int
    residual: float
    certified_bounds: tuple[float, float]
    certified: bool = True
    vector: np.ndarray | None = field(default=None, repr=False)


def _power_iteration(b, tol: float, max_iter: int):
    """Power iteration on the primitive matrix ``b`` (scipy csr)."""
    n = b.shape[0]
    x = np.ones(n)
    lo, hi = 0.0, INF
    it = 0
    while it < max_iter:
        it += 1
        y = b @ x
        q = y / x
        lo, hi = max(lo, q.min()), min(hi, q.max())
        x = y / y.max()
        if hi - lo <= tol * max(1.0, hi):
            return lo, hi, x, it, True
    return lo, hi, x, it, False


def spectral_radius(a: SparseCountMatrix, tol: float = DEFAULT_TOL,
                    max_iter: int = DEFAULT_MAX_ITER) -> SpectralEstimate:
    """Perron root of a nonnegative matrix.

    Each strongly connected component is iterated separately on ``A_C + I``
    (primitive whenever ``A_C`` is irreducible) and shifted back by one;
    ``rho(A)`` is the largest component root.  The tolerance is relative to
    ``max(1, rho)``.
    """
    n = a.dim
    if n == 0 or a.is_zero():
        return SpectralEstimate(0.0, 0, 0.0, (0.0, 0.0), True, np.zeros(n))
    f = float_view(a)
    ncomp, labels = csgraph.connected_components(f, directed=True, connection="strong")
    best = None
    total_it = 0
    certified = True
    lower = upper = 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        sub = f[idx][:, idx]
        if len(idx) == 1:
            v = float(sub[0, 0])
            lo = hi = v
            vec = np.ones(1)
        else:
            shifted = sub + identity(len(idx), format="csr")
            lo, hi, vec, it, ok = _power_iteration(shifted.tocsr(), tol, max_iter)
            lo, hi = lo - 1.0, hi - 1.0
            total_it += it
            certified &= ok
        lower, upper = max(lower, lo), max(upper, hi)
        mid = (lo + hi) / 2
        if best is None or mid > best[0] + tol * max(1.0, mid):
            best = (mid, idx, vec)
    rho, idx, vec = best
    full = np.zeros(n)
    full[idx] = vec / vec.sum()
    if not certified:
        log.warning("power iteration hit the cap of %d steps; bounds [%g, %g]", max_iter, lower, upper)
    rho = min(max(rho, lower), upper)
    lower, upper = float(lower), float(upper)
    return SpectralEstimate(float(rho), total_it, upper - lower, (lower, upper), certified, full)


# --- component structure ---------------------------------------------------------

@dataclass(frozen=True)
class ComponentDecomposition:
    """Strong components of ``G(A)`` after deleting zero rows and columns.

    ``components`` are sorted tuples of 1-based indices, listed so that no
    component reaches an earlier one (``order`` gives the same list as
    positions into ``components``).
    """

    components: tuple[tuple[int, ...], ...]
    order: tuple[int, ...]
    zero_rows: tuple[int, ...]
    zero_cols: tuple[int, ...]

    @property
    def deleted(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.zero_rows) | set(self.zero_cols)))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(i for c in self.components for i in c))

    @property
    def irreducible(self) -> bool:
        return len(self.components) == 1


def _support(a: SparseCountMatrix) -> list[int]:
    gone = set(a.zero_rows()) | set(a.zero_cols())
    return [i for i in range(1, a.dim + 1) if i not in gone]


def scc(a: SparseCountMatrix) -> ComponentDecomposition:
    keep = _support(a)
    zr, zc = tuple(a.zero_rows()), tuple(a.zero_cols())
    if not keep:
        return ComponentDecomposition((), (), zr, zc)
    sub = a.submatrix(keep).to_scipy()
    ncomp, labels = csgraph.connected_components(sub, directed=True, connection="strong")
    groups: dict[int, list[int]] = {}
    for pos, lab in enumerate(labels):
        groups.setdefault(int(lab), []).append(keep[pos])
    comps = sorted(tuple(g) for g in groups.values())
    where = {i: c for c, comp in enumerate(comps) for i in comp}
    # predecessors in the condensation DAG
    preds: dict[int, set[int]] = {c: set() for c in range(len(comps))}
    coo = sub.tocoo()
    for i, j in zip(coo.row.tolist(), coo.col.tolist()):
        ci, cj = where[keep[i]], where[keep[j]]
        if ci != cj:
            preds[cj].add(ci)
    ts = TopologicalSorter(preds)
    ts.prepare()
    order = []
    while ts.is_active():
        ready = sorted(ts.get_ready())
        order.extend(ready)
        ts.done(*ready)
    return ComponentDecomposition(tuple(comps), tuple(order), zr, zc)


def max_irreducible_component(a: SparseCountMatrix, tol: float = DEFAULT_TOL):
    """``(submatrix, indices)`` of the component with the largest Perron root;
    ties go to the lexicographically smallest index set."""
    dec = scc(a)
    best = None
    for comp in dec.components:
        rho = spectral_radius(a.submatrix(comp), tol).rho
        if best is None or rho > best[0] + 1e-9 * max(1.0, rho):
            best = (rho, comp)
    if best is None:
        return SparseCountMatrix.zeros(0), ()
    return a.submatrix(best[1]), best[1]


# --- graph distances ----------------------------------------------------------------

def _pair_distances(sub) -> np.ndarray:
    """``d(i, j) = min{k >= 1 : (A^k)_{ij} >= 1}`` for a scipy adjacency matrix."""
    dist = csgraph.shortest_path(sub, method="D", unweighted=True)
    n = dist.shape[0]
    coo = sub.tocoo()
    ret = np.full(n, INF)
    for i, j in zip(coo.row.tolist(), coo.col.tolist()):
        # i -> j then back to i
        ret[i] = min(ret[i], 1 + dist[j, i])
    dist[np.arange(n), np.arange(n)] = ret
    return dist


def diameter(a: SparseCountMatrix) -> float:
    """Largest ``d(i, j)`` over the support (zero rows/columns removed);
    ``inf`` when some pair is unreachable.  The empty support has diameter 0."""
    keep = _support(a)
    if not keep:
        return 0
    d = _pair_distances(a.submatrix(keep).to_scipy())
    m = d.max()
    return INF if math.isinf(m) else int(m)


def period(a: SparseCountMatrix) -> int:
    """Cycle gcd of an irreducible support; 0 if the support is empty."""
    keep = _support(a)
    if not keep:
        return 0
    sub = a.submatrix(keep).to_scipy()
    if csgraph.connected_components(sub, directed=True, connection="strong")[0] != 1:
        raise NotIrreducibleError("period is defined for irreducible matrices")
    level = csgraph.shortest_path(sub, unweighted=True, indices=0)
    coo = sub.tocoo()
    g = 0
    for i, j in zip(coo.row.tolist(), coo.col.tolist()):
        g = math.gcd(g, int(level[i] + 1 - level[j]))
    return g


def least_positive_power(a: SparseCountMatrix, k_window: int = 8) -> int | None:
    """Least ``K`` with ``A^k > 0`` on the support for ``K <= k <= K + k_window``,
    or None when the support is not primitive."""
    keep = _support(a)
    if not keep:
        return None
    try:
        if period(a) != 1:
            return None
    except NotIrreducibleError:
        return None
    s = np.array(a.submatrix(keep).to_dense(), dtype=np.int64) > 0
    n = len(keep)
    wielandt = n * n - 2 * n + 2
    p = s.copy()
    k = 1
    while not p.all():
        if k > wielandt:
            raise AssertionError("primitive support without a positive power")
        p = (p.astype(np.int64) @ s.astype(np.int64)) > 0
        k += 1
    q = p
    for _ in range(k_window):
        q = (q.astype(np.int64) @ s.astype(np.int64)) > 0
        if not q.all():
            raise AssertionError("positive power followed by a non-positive one")
    return k


# --- per-basic-set reports -----------------------------------------------------------

@dataclass(frozen=True)
class MixingRow:
    m: int
    dim: int
    support: int
    irreducible: bool
    diameter: float
    self_loop: int | None
    gluing_K: int | None = None
    rho: float | None = None


@dataclass(frozen=True)
class ConnectivityReport:
    """Finite evidence up to ``m_max``; not a proof of uniformity."""

    rows: tuple[MixingRow, ...]
    use_max_component: bool = False

    @property
    def all_finite(self) -> bool:
        return all(not math.isinf(r.diameter) for r in self.rows if r.support)

    @property
    def all_zero(self) -> bool:
        return all(r.support == 0 for r in self.rows)

    @property
    def K(self) -> int | None:
        """Max diameter, when every nonempty support has a finite one."""
        ds = [r.diameter for r in self.rows if r.support]
        if not ds or any(math.isinf(d) for d in ds):
            return None
        return int(max(ds))

    @property
    def all_self_loops(self) -> bool:
        return all(r.self_loop is not None for r in self.rows if r.support)

    @property
    def gluing_K(self) -> int | None:
        ks = [r.gluing_K for r in self.rows if r.support]
        if not ks or any(k is None for k in ks):
            return None
        return max(ks)


def _self_loop(a: SparseCountMatrix, indices) -> int | None:
    for i in indices:
        if a[i, i]:
            return i
    return None


def connectivity_row(t: SparseCountMatrix, m: int, with_rho: bool = False) -> MixingRow:
    keep = _support(t)
    return MixingRow(
        m=m,
        dim=t.dim,
        support=len(keep),
        irreducible=scc(t).irreducible,
        diameter=diameter(t),
        self_loop=_self_loop(t, keep),
        rho=spectral_radius(t).rho if with_rho else None,
    )


def uniform_connectedness(bs: BasicSet, m_max: int, use_max_component: bool = False,
                          family: TransferFamily | None = None,
                          with_rho: bool = False) -> ConnectivityReport:
    """Diameter, irreducibility and self-loop of ``T_m`` (or of its maximum
    irreducible component) for ``1 <= m <= m_max``."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    fam = family or TransferFamily(bs, "T")
    rows = []
    for m in range(1, m_max + 1):
        t = fam.get(m)
        if use_max_component:
            t, _ = max_irreducible_component(t)
        rows.append(connectivity_row(t, m, with_rho))
    return ConnectivityReport(tuple(rows), use_max_component)


def block_gluing_check(bs: BasicSet, m_max: int, k_window: int = 8,
                       report: ConnectivityReport | None = None,
                       family: TransferFamily | None = None) -> ConnectivityReport:
    """Fill in the least all-positive power of each ``T_m`` (checked over a
    window of ``k_window`` further powers)."""
    if m_max < 1 or k_window < 1:
        raise ValueError("m_max and k_window must be >= 1")
    fam = family or TransferFamily(bs, "T")
    if report is None:
        report = uniform_connectedness(bs, m_max, family=fam)
    rows = []
    for row in report.rows:
        t = fam.get(row.m)
        if report.use_max_component:
            t, _ = max_irreducible_component(t)
        rows.append(replace(row, gluing_K=least_positive_power(t, k_window)))
    return replace(report, rows=tuple(rows))


# --- domination ------------------------------------------------------------------

@dataclass(frozen=True)
class DominationCell:
    m: int
    k: int
    norm: int                       # |T_m^k|, exact
    rho: float
    c: float                        # |T_m^k| / rho^k
    c_exact: Fraction | None        # only when rho is known exactly
    log_diag: float                 # log(c) / (m k)
    bound: int | None = None        # (r^{K+1})^m

    @property
    def within_bound(self) -> bool | None:
        if self.bound is None:
            return None
        if self.c_exact is not None:
            return self.c_exact <= self.bound
        return self.c <= self.bound * (1 + 1e-9)


@dataclass(frozen=True)
class DominationTable:
    cells: dict[tuple[int, int], DominationCell]
    K: int | None
    certified: bool

    def __getitem__(self, mk: tuple[int, int]) -> DominationCell:
        return self.cells[mk]


def _exact_integer_root(a: SparseCountMatrix) -> int | None:
    """The Perron root when all row sums (or all column sums) agree."""
    for rows in (a, a.transpose()):
        sums = {sum(rows.row(i).values()) for i in range(1, rows.dim + 1)}
        if len(sums) == 1:
            return sums.pop()
    return None


def _ratio_log(num: int, rho: float, k: int) -> float:
    # log(num / rho^k) without overflowing the float range
    return math.log(num) - k * math.log(rho)


def domination_row(t: SparseCountMatrix, r: int, m: int, k_max: int, K: int | None = None,
                   tol: float = DEFAULT_TOL) -> tuple[list[DominationCell], bool]:
    """Cells ``(m, 1..k_max)`` for the matrix ``t = T_m``, and whether rho was certified."""
    est = spectral_radius(t, tol)
    exact = _exact_integer_root(t)
    bound = r ** ((K + 1) * m) if K is not None else None
    cells = []
    power = t
    for k in range(1, k_max + 1):
        if k > 1:
            power = power @ t
        norm = entry_sum(power)
        if norm == 0 or est.rho == 0:
            cells.append(DominationCell(m, k, norm, est.rho, math.nan, None, -INF, bound))
            continue
        c_exact = Fraction(norm, exact**k) if exact else None
        lg = math.log(c_exact) if c_exact is not None else _ratio_log(norm, est.rho, k)
        c = float(c_exact) if c_exact is not None else math.exp(lg)
        cells.append(DominationCell(m, k, norm, est.rho, c, c_exact, lg / (m * k), bound))
    return cells, est.certified


def domination_table(bs: BasicSet, m_max: int, k_max: int, K: int | None = None,
                     family: TransferFamily | None = None,
                     tol: float = DEFAULT_TOL) -> DominationTable:
    """``c(m, k) = |T_m^k| / rho(T_m)^k`` for ``1 <= m <= m_max``, ``1 <= k <= k_max``."""
    fam = family or TransferFamily(bs, "T")
    cells = {}
    certified = True
    for m in range(1, m_max + 1):
        row, ok = domination_row(fam.get(m), bs.r, m, k_max, K, tol)
        certified &= ok
        cells.update({(c.m, c.k): c for c in row})
    if not certified:
        log.warning("domination table uses uncertified spectral radii")
    return DominationTable(cells, K, certified)


def ratio_bound_check(a: SparseCountMatrix, K: int, tol: float = 1e-6) -> bool:
    """Perron vector spread ``max v / min v <= rho^K`` on the support."""
    keep = _support(a)
    if not keep:
        raise NotIrreducibleError("empty support")
    sub = a.submatrix(keep)
    if not scc(sub).irreducible:
        raise NotIrreducibleError("matrix is not irreducible after deleting zero rows/columns")
    est = spectral_radius(sub)
    v = est.vector
    return v.max() / v.min() <= est.rho**K * (1 + tol)


def norm_growth(a: SparseCountMatrix, k: int) -> float:
    """``(1/k) log |A^k|`` computed exactly on the integer power."""
    n = entry_sum(matpow(a, k))
    return math.log(n) / k if n else -INF
