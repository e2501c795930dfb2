from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from frontera import PricePoint, PriceSeries, align_panel
from frontera.cli import load_replay_input

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


def load_fixture(name: str):
    return load_replay_input(FIXTURES / f"replay_{name}.json")


def series_from_prices(asset_id: str, prices, start=date(2020, 1, 1)):
    points = tuple(
        PricePoint(start + timedelta(days=i), float(p)) for i, p in enumerate(prices)
    )
    return PriceSeries(asset_id, points)


def series_from_returns(asset_id: str, returns, start=date(2020, 1, 1), p0=100.0):
    prices = p0 * np.cumprod(np.concatenate([[1.0], 1.0 + np.asarray(returns)]))
    return series_from_prices(asset_id, prices, start)


def panel_from_returns(asset_returns: dict, market_returns, start=date(2020, 1, 1)):
    assets = [series_from_returns(k, v, start) for k, v in asset_returns.items()]
    market = series_from_returns("MKT", market_returns, start)
    return align_panel(assets, market)


def random_pd_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    m = rng.normal(size=(n, n)) * 0.1
    return m @ m.T + 0.05 * np.eye(n)


def random_expected_returns(rng: np.random.Generator, n: int) -> np.ndarray:
    while True:
        er = rng.uniform(0.01, 0.09, size=n)
        if np.ptp(er) > 0.005:
            return er


def assert_reports_identical(a, b):
    """Bit-level equality of two WindowReport values, field by field."""
    assert a.window == b.window
    assert a.labels == b.labels
    assert np.array_equal(a.expected_returns, b.expected_returns)
    assert a.stats == b.stats
    assert a.market_stats == b.market_stats
    assert a.cov.labels == b.cov.labels
    assert np.array_equal(a.cov.matrix, b.cov.matrix)
    assert np.array_equal(a.cov.inverse, b.cov.inverse)
    for attr in ("alpha", "b", "gamma", "delta"):
        assert getattr(a.constants, attr) == getattr(b.constants, attr)
    assert np.array_equal(a.constants.h, b.constants.h)
    assert np.array_equal(a.constants.g, b.constants.g)
    assert a.viability == b.viability
    assert a.tangency == b.tangency
    assert a.solution == b.solution
    assert (a.curve is None) == (b.curve is None)
    if a.curve is not None:
        assert a.curve.points == b.curve.points
        assert a.curve.cml_points == b.curve.cml_points
        assert a.curve.asset_markers == b.curve.asset_markers
        assert a.curve.gmv_marker == b.curve.gmv_marker
        assert a.curve.tangency_marker == b.curve.tangency_marker
