"""Closed-form mean-variance frontier (Merton).

With annualized covariance matrix A and expected-return vector E(R):

    h = 1' A^-1          g = E(R)' A^-1
    alpha = sum(h)       b = sum(g)
    gamma = E(R) . g     delta = alpha * gamma - b^2

The frontier in (risk, return) space is risk(t) = sqrt((alpha t^2 - 2 b t
+ gamma) / delta); the global minimum-variance portfolio is omega = h /
alpha with return b / alpha and variance 1 / alpha. The tangency point of
the line through (0, rf) is r_t = (gamma - b rf) / (b - alpha rf).

Short sales are allowed: weights may be negative. All quantities are
decimal fractions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stats import CovarianceModel


class FrontierError(ValueError):
    pass


class DegenerateFrontierError(FrontierError):
    """All expected returns equal: delta = 0 and the frontier collapses."""


class TangencyUndefinedError(FrontierError):
    """b - alpha * rf = 0: the CML is parallel to the frontier asymptote."""


@dataclass(frozen=True)
class FrontierConstants:
    h: np.ndarray
    g: np.ndarray
    alpha: float
    b: float
    gamma: float
    delta: float


@dataclass(frozen=True)
class TangencySolution:
    r_t: float
    sigma_rt: float
    slope: float
    rf: float


@dataclass(frozen=True)
class PortfolioSolution:
    target_return: float
    lambda_: float
    theta: float
    weights: np.ndarray
    port_return: float
    variance: float
    risk: float
    sharpe: float | None

    def __eq__(self, other):
        if not isinstance(other, PortfolioSolution):
            return NotImplemented
        return (
            self.target_return == other.target_return
            and self.lambda_ == other.lambda_
            and self.theta == other.theta
            and np.array_equal(self.weights, other.weights)
            and self.port_return == other.port_return
            and self.variance == other.variance
            and self.risk == other.risk
            and self.sharpe == other.sharpe
        )


@dataclass(frozen=True)
class Viability:
    viable: bool
    reason: str | None = None


def frontier_constants(cov: CovarianceModel, expected_returns: np.ndarray) -> FrontierConstants:
    """Auxiliary vectors h, g and scalars alpha, b, gamma, delta."""
    er = np.asarray(expected_returns, dtype=float)
    if er.shape != (cov.n,):
        raise FrontierError(f"expected-returns length {er.shape} does not match {cov.n} assets")
    ones = np.ones(cov.n)
    h = ones @ cov.inverse
    g = er @ cov.inverse
    alpha = float(h.sum())
    b = float(g.sum())
    gamma = float(er @ g)
    delta = alpha * gamma - b * b
    if alpha <= 0:
        raise FrontierError(f"alpha = {alpha} is not positive; covariance inverse is not PD")
    return FrontierConstants(h=h, g=g, alpha=alpha, b=b, gamma=gamma, delta=delta)


def _check_delta(fc: FrontierConstants):
    if fc.delta <= 1e-12 * max(1.0, fc.alpha * abs(fc.gamma)):
        raise DegenerateFrontierError(
            f"delta = {fc.delta:.3e}: all expected returns equal, frontier is degenerate"
        )


def gmv_portfolio(fc: FrontierConstants, cov: CovarianceModel, rf: float) -> PortfolioSolution:
    """Global minimum-variance portfolio: omega = h/alpha, variance = 1/alpha."""
    mu = fc.b / fc.alpha
    weights = fc.h / fc.alpha
    variance = 1.0 / fc.alpha
    risk = float(np.sqrt(variance))
    return PortfolioSolution(
        target_return=mu,
        lambda_=1.0 / fc.alpha,
        theta=0.0,
        weights=weights,
        port_return=mu,
        variance=variance,
        risk=risk,
        sharpe=(mu - rf) / risk,
    )


def weights_for_target(
    fc: FrontierConstants, target: float, rf: float | None = None
) -> PortfolioSolution:
    """Frontier portfolio with expected return pinned to ``target``.

    lambda = (gamma - b*target)/delta, theta = (alpha*target - b)/delta,
    omega = lambda*h + theta*g. The weights sum to one by the identity
    lambda*alpha + theta*b = 1.
    """
    _check_delta(fc)
    lam = (fc.gamma - fc.b * target) / fc.delta
    theta = (fc.alpha * target - fc.b) / fc.delta
    weights = lam * fc.h + theta * fc.g
    variance = (fc.alpha * target * target - 2.0 * fc.b * target + fc.gamma) / fc.delta
    risk = float(np.sqrt(variance))
    return PortfolioSolution(
        target_return=target,
        lambda_=lam,
        theta=theta,
        weights=weights,
        port_return=target,
        variance=variance,
        risk=risk,
        sharpe=None if rf is None else (target - rf) / risk,
    )


def portfolio_return(weights: np.ndarray, expected_returns: np.ndarray) -> float:
    w = np.asarray(weights, dtype=float)
    er = np.asarray(expected_returns, dtype=float)
    if w.shape != er.shape:
        raise FrontierError("weights/expected-returns dimension mismatch")
    return float(w @ er)


def portfolio_variance(weights: np.ndarray, cov: CovarianceModel) -> tuple[float, float]:
    w = np.asarray(weights, dtype=float)
    if w.shape != (cov.n,):
        raise FrontierError(f"weights length {w.shape} does not match {cov.n} assets")
    variance = float(w @ cov.matrix @ w)
    return variance, float(np.sqrt(variance))


def portfolio_sharpe(port_return: float, rf: float, risk: float) -> float:
    if risk <= 0:
        raise FrontierError("Sharpe undefined for zero risk")
    return (port_return - rf) / risk


def tangency(fc: FrontierConstants, rf: float) -> TangencySolution:
    """Tangency point of the line from (0, rf) to the frontier, and CML slope."""
    _check_delta(fc)
    denom = fc.b - fc.alpha * rf
    if abs(denom) < 1e-12 * max(1.0, fc.alpha):
        raise TangencyUndefinedError("b - alpha*rf = 0: tangency at infinity")
    r_t = (fc.gamma - fc.b * rf) / denom
    sigma_rt = frontier_risk(fc, r_t)
    return TangencySolution(r_t=r_t, sigma_rt=sigma_rt, slope=(r_t - rf) / sigma_rt, rf=rf)


def frontier_risk(fc: FrontierConstants, target: float) -> float:
    """Risk of the frontier portfolio with the given target return."""
    _check_delta(fc)
    radicand = (fc.alpha * target * target - 2.0 * fc.b * target + fc.gamma) / fc.delta
    if radicand < 0:
        raise FrontierError(f"negative radicand {radicand:.3e} in frontier risk")
    return float(np.sqrt(radicand))


def cml_value(rf: float, slope: float, risk: float) -> float:
    """Capital market line: rf + risk * slope."""
    if risk < 0:
        raise FrontierError("risk must be nonnegative")
    return rf + risk * slope


def viability_check(expected_returns: np.ndarray) -> Viability:
    """Non-viable iff every expected return is negative (no portfolio is built)."""
    er = np.asarray(expected_returns, dtype=float)
    if er.size == 0:
        raise FrontierError("empty expected-returns vector")
    if np.all(er < 0):
        return Viability(False, "all expected returns are negative")
    return Viability(True)
