"""Window analysis orchestration and report rendering.

Two entry points build the same report structure:

- ``analyze_window``: raw aligned prices -> returns -> per-asset stats ->
  covariance -> frontier constants -> viability -> GMV portfolio,
  tangency and frontier curve.
- ``replay_paper``: start from a published covariance matrix and
  expected-return vector instead of raw prices; everything downstream is
  the identical code path.

A window in which every expected return is negative is marked non-viable:
no weights, tangency or curve are produced for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date as Date
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from . import frontier as fr
from . import stats as st
from .market_data import PricePanel, WindowSpec, simple_returns, slice_window

DEFAULT_CURVE_POINTS = 200


class ReportError(ValueError):
    pass


@dataclass(frozen=True)
class FrontierCurve:
    """Sampled frontier and CML, plus the markers drawn on the figure."""

    points: tuple[tuple[float, float], ...]  # (target_return, frontier_risk)
    cml_points: tuple[tuple[float, float], ...]  # (risk, cml_value)
    asset_markers: tuple[tuple[str, float, float], ...]  # (label, ann_vol, capm)
    gmv_marker: tuple[float, float]  # (risk, return)
    tangency_marker: tuple[float, float] | None  # (sigma_rt, r_t)


@dataclass(frozen=True)
class WindowReport:
    window: WindowSpec
    labels: tuple[str, ...]
    expected_returns: np.ndarray
    stats: tuple[st.AssetStats, ...] | None
    market_stats: st.AssetStats | None
    cov: st.CovarianceModel
    constants: fr.FrontierConstants
    viability: fr.Viability
    tangency: fr.TangencySolution | None
    solution: fr.PortfolioSolution | None
    curve: FrontierCurve | None


@dataclass(frozen=True)
class AssetAux:
    """Indicator-table echo values for replay mode (from the published tables)."""

    ann_return: float
    ann_vol: float
    beta: float


@dataclass(frozen=True)
class ReplayInput:
    labels: tuple[str, ...]
    cov_matrix: np.ndarray
    expected_returns: np.ndarray
    rf: float
    aux: tuple[AssetAux, ...] | None = None
    market_aux: tuple[str, float, float] | None = None  # (id, ann_return, ann_vol)
    window: WindowSpec | None = None


def analyze_window(
    panel: PricePanel, window: WindowSpec, trading_days: int = st.TRADING_DAYS
) -> WindowReport:
    """Run the full pipeline on one date window of an aligned price panel."""
    sliced = slice_window(panel, window)
    market_ret = simple_returns(sliced.market)
    mu_m = st.annualized_return(market_ret, trading_days)
    market_vol = st.annualized_volatility(market_ret, trading_days)
    rf = window.rf_annual

    asset_stats = []
    asset_returns = []
    for series in sliced.assets:
        ret = simple_returns(series)
        asset_returns.append(ret)
        ann_return = st.annualized_return(ret, trading_days)
        ann_vol = st.annualized_volatility(ret, trading_days)
        b = st.beta(ret, market_ret)
        capm = st.capm_expected_return(b, rf, mu_m)
        asset_stats.append(
            st.AssetStats(
                asset_id=series.asset_id,
                ann_return=ann_return,
                ann_vol=ann_vol,
                beta=b,
                capm=capm,
                sharpe=st.asset_sharpe(ann_return, rf, ann_vol),
                treynor=st.asset_treynor(ann_return, rf, b),
            )
        )
    market_stats = st.AssetStats(
        asset_id=sliced.market.asset_id,
        ann_return=mu_m,
        ann_vol=market_vol,
        beta=1.0,
        capm=st.capm_expected_return(1.0, rf, mu_m),
        sharpe=st.asset_sharpe(mu_m, rf, market_vol),
        treynor=st.asset_treynor(mu_m, rf, 1.0),
    )
    cov = st.covariance_matrix(asset_returns, trading_days)
    er = np.array([s.capm for s in asset_stats])
    return _build_report(window, cov.labels, er, tuple(asset_stats), market_stats, cov)


def replay_paper(replay: ReplayInput) -> WindowReport:
    """Run the pipeline from a published covariance matrix and CAPM vector."""
    matrix = np.asarray(replay.cov_matrix, dtype=float)
    er = np.asarray(replay.expected_returns, dtype=float)
    labels = tuple(replay.labels)
    if matrix.shape != (len(labels), len(labels)):
        raise ReportError(f"covariance shape {matrix.shape} does not match {len(labels)} labels")
    if er.shape != (len(labels),):
        raise ReportError(f"expected-returns length does not match {len(labels)} labels")
    inverse = st.invert_matrix(matrix)
    cov = st.CovarianceModel(labels, matrix, inverse)
    window = replay.window or WindowSpec("replay", Date(1900, 1, 1), Date(2100, 1, 1), replay.rf)
    rf = window.rf_annual

    asset_stats = None
    if replay.aux is not None:
        if len(replay.aux) != len(labels):
            raise ReportError("aux stats length does not match labels")
        asset_stats = tuple(
            st.AssetStats(
                asset_id=label,
                ann_return=aux.ann_return,
                ann_vol=aux.ann_vol,
                beta=aux.beta,
                capm=float(er[i]),
                sharpe=st.asset_sharpe(aux.ann_return, rf, aux.ann_vol),
                treynor=st.asset_treynor(aux.ann_return, rf, aux.beta),
            )
            for i, (label, aux) in enumerate(zip(labels, replay.aux))
        )
    market_stats = None
    if replay.market_aux is not None:
        market_id, m_ret, m_vol = replay.market_aux
        market_stats = st.AssetStats(
            asset_id=market_id,
            ann_return=m_ret,
            ann_vol=m_vol,
            beta=1.0,
            capm=st.capm_expected_return(1.0, rf, m_ret),
            sharpe=st.asset_sharpe(m_ret, rf, m_vol),
            treynor=st.asset_treynor(m_ret, rf, 1.0),
        )
    return _build_report(window, labels, er, asset_stats, market_stats, cov)


def _build_report(window, labels, er, asset_stats, market_stats, cov) -> WindowReport:
    """Shared tail of analyze/replay; keeping one code path keeps the two
    modes numerically identical on identical intermediate inputs."""
    fc = fr.frontier_constants(cov, er)
    viability = fr.viability_check(er)
    tang = solution = curve = None
    if viability.viable:
        solution = fr.gmv_portfolio(fc, cov, window.rf_annual)
        try:
            tang = fr.tangency(fc, window.rf_annual)
        except (fr.TangencyUndefinedError, fr.DegenerateFrontierError):
            tang = None
        report = WindowReport(
            window, labels, er, asset_stats, market_stats, cov, fc, viability, tang, solution, None
        )
        try:
            curve = emit_frontier_curve(report, DEFAULT_CURVE_POINTS, _default_span(er, solution))
        except fr.DegenerateFrontierError:
            curve = None
    return WindowReport(
        window, labels, er, asset_stats, market_stats, cov, fc, viability, tang, solution, curve
    )


def _default_span(er: np.ndarray, solution: fr.PortfolioSolution) -> tuple[float, float]:
    hi = 1.5 * float(np.max(er))
    if hi <= solution.port_return:
        hi = solution.port_return + 0.02
    return (min(0.0, solution.port_return - 0.02), hi)


def emit_frontier_curve(
    report: WindowReport,
    n_points: int = DEFAULT_CURVE_POINTS,
    return_span: tuple[float, float] | None = None,
) -> FrontierCurve:
    """Sample the frontier over a return span and the CML over [0, max risk]."""
    if report.solution is None:
        raise ReportError(f"window {report.window.name} is non-viable; no curve")
    if n_points < 2:
        raise ReportError("need at least 2 curve points")
    lo, hi = return_span if return_span is not None else _default_span(
        report.expected_returns, report.solution
    )
    if not lo < hi:
        raise ReportError(f"invalid return span [{lo}, {hi}]")
    targets = np.linspace(lo, hi, n_points)
    points = tuple((float(t), fr.frontier_risk(report.constants, float(t))) for t in targets)
    max_risk = max(r for _, r in points)
    cml_points: tuple[tuple[float, float], ...] = ()
    if report.tangency is not None:
        risks = np.linspace(0.0, max_risk, n_points)
        cml_points = tuple(
            (float(v), fr.cml_value(report.tangency.rf, report.tangency.slope, float(v)))
            for v in risks
        )
    vols = np.sqrt(np.diag(report.cov.matrix))
    asset_markers = tuple(
        (label, float(vols[i]), float(report.expected_returns[i]))
        for i, label in enumerate(report.labels)
    )
    return FrontierCurve(
        points=points,
        cml_points=cml_points,
        asset_markers=asset_markers,
        gmv_marker=(report.solution.risk, report.solution.port_return),
        tangency_marker=None
        if report.tangency is None
        else (report.tangency.sigma_rt, report.tangency.r_t),
    )


# --- summary across windows (shapes of the published per-period summaries) ---


@dataclass(frozen=True)
class Summary:
    windows: tuple[str, ...]
    labels: tuple[str, ...]
    # per window, None where non-viable
    returns: tuple[float | None, ...]
    betas: tuple[float | None, ...]  # portfolio beta = sum(w_i * beta_i)
    variances: tuple[float | None, ...]
    risks: tuple[float | None, ...]
    sharpes: tuple[float | None, ...]
    weights: tuple[tuple[float | None, ...], ...]  # [asset][window]
    historical: tuple[tuple[float | None, ...], ...]  # per-asset annualized return
    capm: tuple[tuple[float, ...], ...]
    contributions: tuple[tuple[float | None, ...], ...]  # w_i * E(R)_i


def summarize(reports: list[WindowReport]) -> Summary:
    """One column per window: portfolio row, weight matrix and return matrix.

    Every cell is copied from its WindowReport; nothing is recomputed here
    except the portfolio beta, which is the weight-average of asset betas
    (reported only when per-asset betas are available).
    """
    if not reports:
        raise ReportError("need at least one report to summarize")
    labels = reports[0].labels
    for r in reports[1:]:
        if r.labels != labels:
            raise ReportError("reports have mismatched asset labels")

    def per_window(fn):
        return tuple(fn(r) for r in reports)

    def port_beta(r: WindowReport):
        if r.solution is None or r.stats is None:
            return None
        return float(np.array([s.beta for s in r.stats]) @ r.solution.weights)

    return Summary(
        windows=tuple(r.window.name for r in reports),
        labels=labels,
        returns=per_window(lambda r: None if r.solution is None else r.solution.port_return),
        betas=per_window(port_beta),
        variances=per_window(lambda r: None if r.solution is None else r.solution.variance),
        risks=per_window(lambda r: None if r.solution is None else r.solution.risk),
        sharpes=per_window(lambda r: None if r.solution is None else r.solution.sharpe),
        weights=tuple(
            per_window(lambda r, i=i: None if r.solution is None else float(r.solution.weights[i]))
            for i in range(len(labels))
        ),
        historical=tuple(
            per_window(lambda r, i=i: None if r.stats is None else r.stats[i].ann_return)
            for i in range(len(labels))
        ),
        capm=tuple(
            per_window(lambda r, i=i: float(r.expected_returns[i])) for i in range(len(labels))
        ),
        contributions=tuple(
            per_window(
                lambda r, i=i: None
                if r.solution is None
                else float(r.solution.weights[i] * r.expected_returns[i])
            )
            for i in range(len(labels))
        ),
    )


# --- rendering ---


def format_pct(x: float | None, places: int = 2) -> str:
    """Percent with fixed decimals, half-up rounding; empty marker for None."""
    if x is None:
        return "non-viable"
    q = Decimal(1).scaleb(-places)
    return f"{Decimal(repr(float(x) * 100)).quantize(q, rounding=ROUND_HALF_UP)}%"


def _table(header: list[str], rows: list[list[str]], fmt: str) -> str:
    if fmt == "csv":
        return "\n".join(",".join(cells) for cells in [header] + rows)
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    def line(cells):
        return "| " + " | ".join(c.ljust(w) for c, w in zip(cells, widths)) + " |"
    sep = "|" + "|".join("-" * (w + 2) for w in widths) + "|"
    return "\n".join([line(header), sep] + [line(r) for r in rows])


def render_tables(report: WindowReport, format: str = "csv") -> str:
    """Deterministic indicator/covariance/portfolio tables for one window."""
    if format not in ("csv", "markdown"):
        raise ReportError(f"unknown format {format!r}")
    out = []
    cols = list(report.labels)
    if report.stats is not None:
        stat_cols = cols + ([report.market_stats.asset_id] if report.market_stats else [])
        all_stats = list(report.stats) + ([report.market_stats] if report.market_stats else [])
        rows = [
            [name] + [format_pct(getattr(s, attr)) for s in all_stats]
            for name, attr in [
                ("Return", "ann_return"),
                ("Volatility", "ann_vol"),
                ("Beta", "beta"),
                ("CAPM", "capm"),
                ("Sharpe", "sharpe"),
                ("Treynor", "treynor"),
            ]
        ]
        out.append(_table(["Indicator"] + stat_cols, rows, format))
    out.append(
        _table(
            ["Covariance"] + cols,
            [[lab] + [format_pct(v) for v in row] for lab, row in zip(cols, report.cov.matrix)],
            format,
        )
    )
    out.append(
        _table(
            ["Inverse"] + cols,
            [
                [lab] + [format_pct(v, 0) for v in row]
                for lab, row in zip(cols, report.cov.inverse)
            ],
            format,
        )
    )
    fc = report.constants
    out.append(
        _table(
            ["Constant", "Value"],
            [
                ["alpha", format_pct(fc.alpha)],
                ["b", format_pct(fc.b)],
                ["gamma", format_pct(fc.gamma)],
                ["delta", format_pct(fc.delta)],
            ],
            format,
        )
    )
    if report.solution is None:
        out.append(
            _table(
                ["Portfolio", "Value"],
                [["viability", f"non-viable: {report.viability.reason}"]],
                format,
            )
        )
    else:
        sol = report.solution
        rows = [[lab, format_pct(float(w))] for lab, w in zip(cols, sol.weights)]
        rows += [
            ["return", format_pct(sol.port_return)],
            ["variance", format_pct(sol.variance)],
            ["risk", format_pct(sol.risk)],
            ["sharpe", format_pct(sol.sharpe)],
        ]
        if report.tangency is not None:
            rows += [
                ["tangency return", format_pct(report.tangency.r_t)],
                ["tangency risk", format_pct(report.tangency.sigma_rt)],
                ["cml slope", format_pct(report.tangency.slope)],
            ]
        out.append(_table(["Portfolio", "Value"], rows, format))
    return "\n\n".join(out) + "\n"


def render_summary(summary: Summary, format: str = "csv") -> str:
    """Portfolio row, weight matrix and return matrix across windows."""
    if format not in ("csv", "markdown"):
        raise ReportError(f"unknown format {format!r}")
    win = list(summary.windows)
    beta_cells = [
        "non-viable" if b is None else f"{b:.2f}" for b in summary.betas
    ]
    perf = [
        ["Return"] + [format_pct(x) for x in summary.returns],
        ["Beta"] + beta_cells,
        ["Variance"] + [format_pct(x) for x in summary.variances],
        ["Risk"] + [format_pct(x) for x in summary.risks],
        ["Sharpe"] + [format_pct(x) for x in summary.sharpes],
    ]
    weights = [
        [lab] + [format_pct(x) for x in summary.weights[i]]
        for i, lab in enumerate(summary.labels)
    ]
    returns = []
    for block, matrix in [
        ("Historical", summary.historical),
        ("CAPM", summary.capm),
        ("Markowitz", summary.contributions),
    ]:
        for i, lab in enumerate(summary.labels):
            cells = [
                format_pct(x) if x is not None else ("" if block == "Historical" else "non-viable")
                for x in matrix[i]
            ]
            returns.append([block, lab] + cells)
    return "\n\n".join(
        [
            _table(["Indicator"] + win, perf, format),
            _table(["Asset"] + win, weights, format),
            _table(["Block", "Asset"] + win, returns, format),
        ]
    ) + "\n"


def curve_csv(curve: FrontierCurve) -> tuple[str, str]:
    """Frontier and CML curve files: 10 significant digits, one pair per line."""
    frontier_lines = ["target_return,frontier_risk"] + [
        f"{t:.10g},{r:.10g}" for t, r in curve.points
    ]
    cml_lines = ["risk,cml_value"] + [f"{v:.10g},{y:.10g}" for v, y in curve.cml_points]
    return "\n".join(frontier_lines) + "\n", "\n".join(cml_lines) + "\n"


# --- SVG figure ---

_SVG_W, _SVG_H = 720, 520
_MARGIN = 70


def _xml_escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_svg(curve: FrontierCurve) -> str:
    """Standalone SVG: frontier polyline, CML polyline, labeled markers, percent axes."""
    if not curve.points:
        raise ReportError("empty curve")
    xs = [r for _, r in curve.points] + [v for v, _ in curve.cml_points]
    xs += [m[1] for m in curve.asset_markers] + [curve.gmv_marker[0]]
    ys = [t for t, _ in curve.points] + [y for _, y in curve.cml_points]
    ys += [m[2] for m in curve.asset_markers] + [curve.gmv_marker[1]]
    if curve.tangency_marker is not None:
        xs.append(curve.tangency_marker[0])
        ys.append(curve.tangency_marker[1])
    x_lo, x_hi = 0.0, max(xs) * 1.05 or 1.0
    pad = (max(ys) - min(ys)) * 0.08 or 0.01
    y_lo, y_hi = min(ys) - pad, max(ys) + pad

    def sx(x):
        return _MARGIN + (x - x_lo) / (x_hi - x_lo) * (_SVG_W - 2 * _MARGIN)

    def sy(y):
        return _SVG_H - _MARGIN - (y - y_lo) / (y_hi - y_lo) * (_SVG_H - 2 * _MARGIN)

    def poly(pairs, color):
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pairs)
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_SVG_H - _MARGIN}" x2="{_SVG_W - _MARGIN}" '
        f'y2="{_SVG_H - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" y2="{_SVG_H - _MARGIN}" '
        'stroke="black"/>',
    ]
    for i in range(5):
        xv = x_lo + (x_hi - x_lo) * i / 4
        yv = y_lo + (y_hi - y_lo) * i / 4
        parts.append(
            f'<text x="{sx(xv):.2f}" y="{_SVG_H - _MARGIN + 18}" font-size="11" '
            f'text-anchor="middle">{xv * 100:.1f}%</text>'
        )
        parts.append(
            f'<text x="{_MARGIN - 8}" y="{sy(yv):.2f}" font-size="11" '
            f'text-anchor="end">{yv * 100:.1f}%</text>'
        )
    parts.append(
        f'<text x="{_SVG_W / 2}" y="{_SVG_H - 18}" font-size="13" '
        'text-anchor="middle">Risk (annualized)</text>'
    )
    parts.append(poly([(r, t) for t, r in curve.points], "#1f77b4"))
    if curve.cml_points:
        parts.append(poly(curve.cml_points, "#d62728"))
    for label, vol, capm in curve.asset_markers:
        parts.append(f'<circle cx="{sx(vol):.2f}" cy="{sy(capm):.2f}" r="4" fill="#2ca02c"/>')
        parts.append(
            f'<text x="{sx(vol) + 6:.2f}" y="{sy(capm) - 6:.2f}" '
            f'font-size="11">{_xml_escape(label)}</text>'
        )
    gx, gy = curve.gmv_marker
    parts.append(f'<circle cx="{sx(gx):.2f}" cy="{sy(gy):.2f}" r="5" fill="#1f77b4"/>')
    parts.append(f'<text x="{sx(gx) + 6:.2f}" y="{sy(gy) + 14:.2f}" font-size="11">GMV</text>')
    if curve.tangency_marker is not None:
        tx, ty = curve.tangency_marker
        parts.append(f'<circle cx="{sx(tx):.2f}" cy="{sy(ty):.2f}" r="5" fill="#d62728"/>')
        parts.append(
            f'<text x="{sx(tx) + 6:.2f}" y="{sy(ty) + 14:.2f}" font-size="11">Tangency</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
