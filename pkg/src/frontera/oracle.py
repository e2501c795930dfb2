"""Brute-force verification used by the test suite.

Enumerates long-only weight vectors on a simplex grid to bound the
minimum portfolio variance from above, and checks the tangency point with
finite differences. Deliberately shares no computation with the
closed-form frontier code: the risk formula here is re-derived inline
from the scalar constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    step: float = 0.005
    return_band: float = 0.0025

    def __post_init__(self):
        if not 0 < self.step <= 0.1:
            raise OracleError(f"grid step {self.step} outside (0, 0.1]")


def _grid_weights(n: int, step: float) -> Iterator[np.ndarray]:
    """Lexicographic enumeration of nonnegative grid weights summing to 1."""
    m = round(1.0 / step)

    def rec(prefix: list[int], remaining: int, slots: int):
        if slots == 1:
            yield prefix + [remaining]
            return
        for k in range(remaining + 1):
            yield from rec(prefix + [k], remaining - k, slots - 1)

    for combo in rec([], m, n):
        yield np.array(combo, dtype=float) / m


def grid_min_variance(
    cov_matrix: np.ndarray, grid: GridSpec = GridSpec()
) -> tuple[np.ndarray, float]:
    """Exhaustive minimum of w'Aw over the long-only simplex grid."""
    a = np.asarray(cov_matrix, dtype=float)
    n = a.shape[0]
    if n > 5:
        raise OracleError(f"N = {n} too large for exhaustive enumeration (max 5)")
    best_w, best_v = None, np.inf
    for w in _grid_weights(n, grid.step):
        v = float(w @ a @ w)
        if v < best_v:
            best_w, best_v = w, v
    return best_w, best_v


def grid_min_variance_at_return(
    cov_matrix: np.ndarray,
    expected_returns: np.ndarray,
    target: float,
    grid: GridSpec = GridSpec(),
) -> tuple[np.ndarray, float]:
    """Minimum grid variance among portfolios with expected return near target."""
    a = np.asarray(cov_matrix, dtype=float)
    er = np.asarray(expected_returns, dtype=float)
    n = a.shape[0]
    if n > 5:
        raise OracleError(f"N = {n} too large for exhaustive enumeration (max 5)")
    best_w, best_v = None, np.inf
    for w in _grid_weights(n, grid.step):
        if abs(float(w @ er) - target) > grid.return_band:
            continue
        v = float(w @ a @ w)
        if v < best_v:
            best_w, best_v = w, v
    if best_w is None:
        raise OracleError(f"no grid portfolio reaches return {target} within the band")
    return best_w, best_v


def fd_tangency_check(fc, rf: float, eps: float = 1e-6) -> float:
    """Relative residual between the finite-difference frontier slope at the
    tangency return and the reciprocal of the CML slope.

    ``fc`` only needs alpha/b/gamma/delta attributes; the frontier risk is
    recomputed here from the quadratic, independent of the frontier module.
    """
    if not 1e-8 <= eps <= 1e-4:
        raise OracleError(f"eps {eps} outside [1e-8, 1e-4]")
    a, b, gam, d = fc.alpha, fc.b, fc.gamma, fc.delta

    def risk(t: float) -> float:
        return float(np.sqrt((a * t * t - 2.0 * b * t + gam) / d))

    r_t = (gam - b * rf) / (b - a * rf)
    d_risk = (risk(r_t + eps) - risk(r_t - eps)) / (2.0 * eps)
    slope = (r_t - rf) / risk(r_t)
    inv_slope = 1.0 / slope
    return abs(d_risk - inv_slope) / abs(inv_slope)
