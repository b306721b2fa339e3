"""Finite-size entropy estimators.

All logarithms are natural.  Every estimator returns the finite-size
sequence it was asked for; a zero matrix (or a zero count) is reported as
``-inf`` rather than raised.  :func:`trend` fits ``a + b / n`` to the tail of
a sequence as a rough extrapolation; it is a diagnostic, not a limit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import entry_sum, matpow, permute_columns, trace
from .patterns import BasicSet, sigma_power
from .spectral import DEFAULT_TOL, spectral_radius
from .transfer import TransferFamily, build_Rm, build_T_gamma_q_1, build_Tm, check_dim

NEG_INF = -math.inf


@dataclass(frozen=True)
class EntropyValue:
    """``value = log(rho) / scale`` with the certified bracket mapped the same way."""

    index: int
    value: float
    lower: float
    upper: float
    certified: bool = True


@dataclass(frozen=True)
class GridCell:
    n: int
    k: int
    value: float           # sup over the shifts considered
    gamma: int             # the maximizing count
    ell: int               # the maximizing shift (smallest on ties)


def _log_over(x: float, scale: int) -> float:
    return math.log(x) / scale if x > 0 else NEG_INF


def entropy_value(matrix, scale: int, index: int, tol: float = DEFAULT_TOL) -> EntropyValue:
    """``log rho(matrix) / scale``."""
    est = spectral_radius(matrix, tol)
    lo, hi = est.certified_bounds
    return EntropyValue(index, _log_over(est.rho, scale), _log_over(lo, scale),
                        _log_over(hi, scale), est.certified)


# --- periodic counts ------------------------------------------------------------

def gamma_count(bs: BasicSet, n: int, ell: int, k: int) -> int:
    """Number of admissible patterns periodic under ``[[n, ell], [0, k]]``,
    as ``trace(T_n^k R_n^ell)``."""
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    if not 0 <= ell < n:
        raise ValueError(f"shift {ell} outside [0, {n})")
    check_dim(bs.r, n)
    t = build_Tm(bs, n)
    return trace(permute_columns(matpow(t, k), build_Rm(n, bs.r).power(ell)))


def _shift_traces(power, n: int, r: int, shifts) -> list[int]:
    """``trace(P R^ell)`` for each ``ell``: sum of ``P[i, sigma^{-ell}(i)]``."""
    out = []
    for ell in shifts:
        out.append(sum(power[i, sigma_power(i, n, r, -ell)] for i in range(1, r**n + 1)))
    return out


def _grid(bs: BasicSet, n_max: int, k_max: int, shifts_for, family: TransferFamily | None):
    fam = family or TransferFamily(bs, "T")
    cells = {}
    for n in range(1, n_max + 1):
        t = fam.get(n)
        shifts = shifts_for(n)
        power = t
        for k in range(1, k_max + 1):
            if k > 1:
                power = power @ t
            counts = _shift_traces(power, n, bs.r, shifts)
            best = max(range(len(shifts)), key=lambda s: (counts[s], -shifts[s]))
            cells[(n, k)] = GridCell(n, k, _log_over(counts[best], n * k), counts[best], shifts[best])
    return cells


def h_p_grid(bs: BasicSet, n_max: int, k_max: int,
             family: TransferFamily | None = None) -> dict[tuple[int, int], GridCell]:
    """``sup_ell log(Gamma) / (n k)`` for ``n <= n_max``, ``k <= k_max``."""
    return _grid(bs, n_max, k_max, lambda n: list(range(n)), family)


def h_ell_sequence(bs: BasicSet, ell: int, n_max: int, k_max: int,
                   family: TransferFamily | None = None) -> dict[tuple[int, int], GridCell]:
    """As :func:`h_p_grid` with the shift fixed at ``ell mod n``."""
    return _grid(bs, n_max, k_max, lambda n: [ell % n], family)


# --- spectral sequences ----------------------------------------------------------

def h_estimates(bs: BasicSet, n_max: int, tol: float = DEFAULT_TOL) -> tuple[dict[int, EntropyValue], dict[int, EntropyValue]]:
    """``log rho(H_n) / n`` and ``log rho(V_n) / n`` for ``2 <= n <= n_max``."""
    hs, vs = TransferFamily(bs, "H"), TransferFamily(bs, "V")
    h = {n: entropy_value(hs.get(n), n, n, tol) for n in range(2, n_max + 1)}
    v = {n: entropy_value(vs.get(n), n, n, tol) for n in range(2, n_max + 1)}
    return h, v


def h_star_estimates(bs: BasicSet, m_max: int, tol: float = DEFAULT_TOL,
                     family: TransferFamily | None = None) -> dict[int, EntropyValue]:
    """``log rho(T_m) / m`` for ``1 <= m <= m_max``."""
    fam = family or TransferFamily(bs, "T")
    return {m: entropy_value(fam.get(m), m, m, tol) for m in range(1, m_max + 1)}


def h1_gamma_estimates(bs: BasicSet, q_max: int, tol: float = DEFAULT_TOL) -> dict[int, EntropyValue]:
    """``log rho(T_{gamma_q, 1})`` for ``1 <= q <= q_max``."""
    return {q: entropy_value(build_T_gamma_q_1(bs, q).matrix, 1, q, tol) for q in range(1, q_max + 1)}


def strip_entropy(bs: BasicSet, n: int, k: int, family: TransferFamily | None = None) -> float:
    """``log |H_n^k| / (n k)``: all admissible ``n x (k+1)`` patterns, per site of
    the ``n x k`` block."""
    fam = family or TransferFamily(bs, "H")
    return _log_over(entry_sum(matpow(fam.get(n), k)), n * k)


def trend(seq: dict[int, EntropyValue] | dict[int, float], tail: int = 4) -> float:
    """Intercept of a least-squares fit ``a + b / n`` over the last ``tail``
    finite entries; nan with fewer than two points."""
    pts = []
    for n in sorted(seq):
        v = seq[n]
        v = v.value if isinstance(v, EntropyValue) else v
        if math.isfinite(v):
            pts.append((n, v))
    pts = pts[-tail:]
    if len(pts) < 2:
        return math.nan
    x = np.array([1.0 / n for n, _ in pts])
    y = np.array([v for _, v in pts])
    _, a = np.polyfit(x, y, 1)
    return float(a)


@dataclass
class EntropyReport:
    h_H: dict[int, EntropyValue] = field(default_factory=dict)
    h_V: dict[int, EntropyValue] = field(default_factory=dict)
    h_T: dict[int, EntropyValue] = field(default_factory=dict)
    h_gamma: dict[int, EntropyValue] = field(default_factory=dict)
    h_p: dict[tuple[int, int], GridCell] = field(default_factory=dict)

    def trends(self) -> dict[str, float]:
        return {"h_H": trend(self.h_H), "h_V": trend(self.h_V),
                "h_T": trend(self.h_T), "h_gamma": trend(self.h_gamma)}


def entropy_report(bs: BasicSet, n_max: int, m_max: int, q_max: int, k_max: int = 0,
                   tol: float = DEFAULT_TOL) -> EntropyReport:
    fam = TransferFamily(bs, "T")
    rep = EntropyReport()
    rep.h_H, rep.h_V = h_estimates(bs, n_max, tol)
    rep.h_T = h_star_estimates(bs, m_max, tol, fam)
    rep.h_gamma = h1_gamma_estimates(bs, q_max, tol)
    if k_max:
        rep.h_p = h_p_grid(bs, m_max, k_max, fam)
    return rep
