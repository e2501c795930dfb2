"""Per-asset annualized statistics, CAPM expected returns and the
annualized covariance matrix with its certified inverse.

Conventions: daily simple returns in, decimal fractions out. Annualization
uses a configurable trading-day count (default 252): geometric compounding
for returns, sqrt scaling for volatility, linear scaling for covariances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .market_data import ReturnSeries

TRADING_DAYS = 252


class StatsError(ValueError):
    pass


class NotPositiveDefiniteError(StatsError):
    """Matrix inversion failed its positive-definiteness certificate."""

    def __init__(self, message: str, pivot_index: int | None = None):
        super().__init__(message)
        self.pivot_index = pivot_index


@dataclass(frozen=True)
class AssetStats:
    asset_id: str
    ann_return: float
    ann_vol: float
    beta: float
    capm: float
    sharpe: float
    treynor: float


@dataclass(frozen=True)
class CovarianceModel:
    """Annualized covariance matrix with an inverse certified by the
    elimination pivots (all positive, so the matrix is positive definite)."""

    labels: tuple[str, ...]
    matrix: np.ndarray
    inverse: np.ndarray

    @property
    def n(self) -> int:
        return len(self.labels)


def annualized_return(returns: ReturnSeries, trading_days: int = TRADING_DAYS) -> float:
    """Annualized geometric return: (prod(1+r))^(trading_days/n) - 1."""
    r = returns.returns
    if len(r) == 0:
        raise StatsError(f"{returns.asset_id}: no returns")
    if np.any(r <= -1.0):
        raise StatsError(f"{returns.asset_id}: return <= -100% makes the geometric mean undefined")
    growth = float(np.prod(1.0 + r))
    return growth ** (trading_days / len(r)) - 1.0


def annualized_volatility(returns: ReturnSeries, trading_days: int = TRADING_DAYS) -> float:
    """Sample standard deviation of daily returns (divisor n-1) times sqrt(trading_days)."""
    r = returns.returns
    if len(r) < 2:
        raise StatsError(f"{returns.asset_id}: need at least 2 returns for volatility")
    return float(np.std(r, ddof=1)) * float(np.sqrt(trading_days))


def beta(asset: ReturnSeries, market: ReturnSeries) -> float:
    """Sample covariance(asset, market) / sample variance(market), both divisor n-1."""
    x, m = asset.returns, market.returns
    if len(x) != len(m):
        raise StatsError(f"{asset.asset_id}: length mismatch with market series")
    if len(x) < 2:
        raise StatsError(f"{asset.asset_id}: need at least 2 aligned returns for beta")
    if asset.dates != market.dates:
        raise StatsError(f"{asset.asset_id}: dates not aligned with market series")
    xc = x - x.mean()
    mc = m - m.mean()
    var_m = float(mc @ mc)
    if var_m == 0.0:
        raise StatsError("market variance is zero")
    return float(xc @ mc) / var_m


def capm_expected_return(beta_: float, rf: float, market_return: float) -> float:
    """CAPM: rf + beta * (market_return - rf)."""
    return rf + beta_ * (market_return - rf)


def asset_sharpe(ann_return: float, rf: float, ann_vol: float) -> float:
    if ann_vol <= 0:
        raise StatsError("Sharpe undefined for zero volatility")
    return (ann_return - rf) / ann_vol


def asset_treynor(ann_return: float, rf: float, beta_: float) -> float:
    if beta_ == 0:
        raise StatsError("Treynor undefined for zero beta")
    return (ann_return - rf) / beta_


def sample_covariance(
    returns: list[ReturnSeries], trading_days: int = TRADING_DAYS
) -> np.ndarray:
    """Annualized sample covariance matrix of aligned daily return series.

    Each entry is the daily sample covariance (divisor n-1) times
    trading_days; the matrix is filled once per unordered pair, so it is
    exactly symmetric.
    """
    if len(returns) < 2:
        raise StatsError("need at least 2 return series")
    n_obs = len(returns[0].returns)
    for s in returns[1:]:
        if len(s.returns) != n_obs:
            raise StatsError(f"{s.asset_id}: return series length mismatch")
        if s.dates != returns[0].dates:
            raise StatsError(f"{s.asset_id}: dates not aligned")
    if n_obs < 2:
        raise StatsError("need at least 2 observations")
    centered = [s.returns - s.returns.mean() for s in returns]
    n = len(returns)
    a = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            cov = float(centered[i] @ centered[j]) / (n_obs - 1) * trading_days
            a[i, j] = cov
            a[j, i] = cov
    return a


def covariance_matrix(
    returns: list[ReturnSeries], trading_days: int = TRADING_DAYS
) -> CovarianceModel:
    """Sample covariance matrix plus its inverse; inversion certifies PD."""
    a = sample_covariance(returns, trading_days)
    inv = invert_matrix(a)
    return CovarianceModel(tuple(s.asset_id for s in returns), a, inv)


def invert_matrix(matrix: np.ndarray, sym_tol: float = 1e-10) -> np.ndarray:
    """Invert a symmetric positive definite matrix by Gauss-Jordan elimination.

    No row pivoting: for an SPD matrix the diagonal pivots are all positive,
    and each pivot is checked against 1e-12 times the largest diagonal entry.
    A failing pivot means the k-th leading minor is not positive, i.e. the
    matrix is not positive definite, and is reported as such.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise StatsError(f"matrix is not square: shape {a.shape}")
    scale = float(np.max(np.abs(a))) or 1.0
    if float(np.max(np.abs(a - a.T))) > sym_tol * scale:
        raise StatsError("matrix is not symmetric")
    n = a.shape[0]
    max_diag = float(np.max(np.abs(np.diag(a)))) or 1.0
    threshold = 1e-12 * max_diag
    aug = np.hstack([a, np.eye(n)])
    for k in range(n):
        pivot = aug[k, k]
        if not (pivot > threshold):
            raise NotPositiveDefiniteError(
                f"pivot {pivot:.3e} at index {k} fails the positive-definiteness check "
                f"(leading minor {k + 1} not positive)",
                pivot_index=k,
            )
        aug[k] /= pivot
        for i in range(n):
            if i != k:
                aug[i] -= aug[i, k] * aug[k]
    inv = aug[:, n:]
    # elimination leaves tiny asymmetry; the exact inverse is symmetric
    return (inv + inv.T) / 2.0
