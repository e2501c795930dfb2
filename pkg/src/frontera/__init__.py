"""Minimum-variance portfolio analytics over configurable date windows."""

from .market_data import (
    MarketDataError,
    PricePanel,
    PricePoint,
    PriceSeries,
    ReturnSeries,
    WindowSpec,
    align_panel,
    parse_price_csv,
    simple_returns,
    slice_window,
)
from .stats import (
    AssetStats,
    CovarianceModel,
    NotPositiveDefiniteError,
    StatsError,
    annualized_return,
    annualized_volatility,
    asset_sharpe,
    asset_treynor,
    beta,
    capm_expected_return,
    covariance_matrix,
    invert_matrix,
    sample_covariance,
)
from .frontier import (
    DegenerateFrontierError,
    FrontierConstants,
    FrontierError,
    PortfolioSolution,
    TangencySolution,
    TangencyUndefinedError,
    Viability,
    cml_value,
    frontier_constants,
    frontier_risk,
    gmv_portfolio,
    portfolio_return,
    portfolio_sharpe,
    portfolio_variance,
    tangency,
    viability_check,
    weights_for_target,
)
from .report import (
    AssetAux,
    FrontierCurve,
    ReplayInput,
    Summary,
    WindowReport,
    analyze_window,
    curve_csv,
    emit_frontier_curve,
    render_svg,
    render_summary,
    render_tables,
    replay_paper,
    summarize,
)

__version__ = "0.1.0"
