"""Command-line entry point.

Subcommands: ``analyze`` (full pipeline from price CSVs), ``replay``
(pipeline from a published covariance/CAPM fixture), ``frontier`` (curve
files only) and ``summarize`` (cross-window summary of replay fixtures).

Exit codes: 0 success, 1 input error (missing file, schema violation,
malformed data), 2 numeric failure (non-PD matrix, degenerate frontier).
Outputs are written to temp files and renamed on success, so a failing
command leaves no partial files behind.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from datetime import date as Date
from pathlib import Path

from . import frontier as fr
from . import report as rp
from . import stats as st
from .market_data import MarketDataError, WindowSpec, align_panel, parse_price_csv


class InputError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisConfig:
    assets: tuple[tuple[str, Path], ...]  # (id, csv_path)
    market: tuple[str, Path]
    windows: tuple[WindowSpec, ...]
    trading_days: int
    output_dir: Path


class OutputSet:
    """Collects output files and renames them into place only on success."""

    def __init__(self):
        self._pending: list[tuple[Path, str]] = []

    def add(self, path: Path, text: str):
        self._pending.append((path, text))

    def commit(self):
        temps = []
        try:
            for path, text in self._pending:
                path.parent.mkdir(parents=True, exist_ok=True)
                tmp = path.with_name(path.name + f".tmp{os.getpid()}")
                tmp.write_text(text, encoding="utf-8")
                temps.append((tmp, path))
            for tmp, path in temps:
                tmp.replace(path)
        except BaseException:
            for tmp, _ in temps:
                tmp.unlink(missing_ok=True)
            raise


def _require(obj: dict, field: str, path: str):
    if field not in obj:
        raise InputError(f"{path}: missing field '{field}'")
    return obj[field]


def _check_units(obj: dict, path: str):
    if _require(obj, "units", path) != "decimal":
        raise InputError(f"{path}: field 'units' must be \"decimal\" (rates as fractions)")


def _load_json(path: Path) -> dict:
    if not path.is_file():
        raise InputError(f"{path}: config not found")
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _parse_date(raw, where: str) -> Date:
    try:
        return Date.fromisoformat(raw)
    except (TypeError, ValueError):
        raise InputError(f"{where}: invalid date {raw!r} (expected YYYY-MM-DD)") from None


def load_config(path: Path) -> AnalysisConfig:
    doc = _load_json(path)
    where = str(path)
    _check_units(doc, where)
    assets_raw = _require(doc, "assets", where)
    if not assets_raw:
        raise InputError(f"{where}: at least one asset is required")
    base = path.parent
    assets = tuple(
        (_require(a, "id", f"{where}.assets[{i}]"),
         base / _require(a, "csv_path", f"{where}.assets[{i}]"))
        for i, a in enumerate(assets_raw)
    )
    market_raw = _require(doc, "market", where)
    market = (
        _require(market_raw, "id", f"{where}.market"),
        base / _require(market_raw, "csv_path", f"{where}.market"),
    )
    windows = []
    for i, w in enumerate(_require(doc, "windows", where)):
        loc = f"{where}.windows[{i}]"
        try:
            windows.append(
                WindowSpec(
                    name=_require(w, "name", loc),
                    start=_parse_date(_require(w, "start", loc), loc),
                    end=_parse_date(_require(w, "end", loc), loc),
                    rf_annual=float(_require(w, "rf_annual", loc)),
                )
            )
        except MarketDataError as exc:
            raise InputError(f"{loc}: {exc}") from None
    names = [w.name for w in windows]
    if len(set(names)) != len(names):
        raise InputError(f"{where}: window names must be unique")
    trading_days = int(doc.get("trading_days", st.TRADING_DAYS))
    if trading_days < 1:
        raise InputError(f"{where}: trading_days must be >= 1")
    return AnalysisConfig(
        assets=assets,
        market=market,
        windows=tuple(windows),
        trading_days=trading_days,
        output_dir=base / doc.get("output_dir", "out"),
    )


def load_replay_input(path: Path) -> rp.ReplayInput:
    doc = _load_json(path)
    where = str(path)
    _check_units(doc, where)
    labels = tuple(_require(doc, "labels", where))
    rf = float(_require(doc, "rf", where))
    aux = None
    if "asset_stats" in doc:
        aux = tuple(
            rp.AssetAux(
                ann_return=float(_require(a, "ann_return", f"{where}.asset_stats[{i}]")),
                ann_vol=float(_require(a, "ann_vol", f"{where}.asset_stats[{i}]")),
                beta=float(_require(a, "beta", f"{where}.asset_stats[{i}]")),
            )
            for i, a in enumerate(doc["asset_stats"])
        )
    market_aux = None
    if "market" in doc:
        m = doc["market"]
        market_aux = (
            _require(m, "id", f"{where}.market"),
            float(_require(m, "ann_return", f"{where}.market")),
            float(_require(m, "ann_vol", f"{where}.market")),
        )
    name = doc.get("name", "replay")
    window = WindowSpec(name, Date(1900, 1, 1), Date(2100, 1, 1), rf)
    try:
        return rp.ReplayInput(
            labels=labels,
            cov_matrix=_require(doc, "cov_matrix", where),
            expected_returns=_require(doc, "expected_returns", where),
            rf=rf,
            aux=aux,
            market_aux=market_aux,
            window=window,
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _output_dir(default: Path, override: str | None) -> Path:
    env = os.environ.get("FRONTERA_OUTPUT_DIR")
    if override:
        return Path(override)
    if env:
        return Path(env)
    return default


def _ext(fmt: str) -> str:
    return "csv" if fmt == "csv" else "md"


def _add_report_files(out: OutputSet, base: Path, report: rp.WindowReport, fmt: str):
    base = base / report.window.name
    out.add(base / f"tables.{_ext(fmt)}", rp.render_tables(report, fmt))
    if report.curve is not None:
        frontier_text, cml_text = rp.curve_csv(report.curve)
        out.add(base / "frontier_curve.csv", frontier_text)
        out.add(base / "cml_curve.csv", cml_text)
        out.add(base / "frontier.svg", rp.render_svg(report.curve))


def _cmd_analyze(args) -> int:
    cfg = load_config(Path(args.config))
    out_dir = _output_dir(cfg.output_dir, args.output_dir)
    panel = _load_panel(cfg)
    windows = cfg.windows
    if args.window is not None:
        windows = tuple(w for w in cfg.windows if w.name == args.window)
        if not windows:
            raise InputError(f"{args.config}: no window named {args.window!r}")
    reports = [rp.analyze_window(panel, w, cfg.trading_days) for w in windows]
    out = OutputSet()
    for report in reports:
        _add_report_files(out, out_dir, report, args.format)
    out.add(
        out_dir / f"summary.{_ext(args.format)}",
        rp.render_summary(rp.summarize(reports), args.format),
    )
    out.commit()
    return 0


def _load_panel(cfg: AnalysisConfig):
    def read_series(asset_id: str, csv_path: Path):
        if not csv_path.is_file():
            raise InputError(f"{csv_path}: price file not found")
        return parse_price_csv(csv_path.read_text(encoding="utf-8"), asset_id)

    assets = [read_series(a, p) for a, p in cfg.assets]
    market = read_series(*cfg.market)
    return align_panel(assets, market)


def _cmd_replay(args) -> int:
    replay = load_replay_input(Path(args.input))
    report = rp.replay_paper(replay)
    out_dir = _output_dir(Path(args.input).parent / "out", args.output_dir)
    out = OutputSet()
    _add_report_files(out, out_dir, report, args.format)
    out.commit()
    return 0


def _parse_span(raw: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in raw.split(":"))
    except ValueError:
        raise InputError(f"invalid span {raw!r} (expected LO:HI)") from None
    if not lo < hi:
        raise InputError(f"invalid span {raw!r}: LO must be < HI")
    return lo, hi


def _cmd_frontier(args) -> int:
    cfg = load_config(Path(args.config))
    out_dir = _output_dir(cfg.output_dir, args.output_dir)
    matching = [w for w in cfg.windows if w.name == args.window]
    if not matching:
        raise InputError(f"{args.config}: no window named {args.window!r}")
    panel = _load_panel(cfg)
    report = rp.analyze_window(panel, matching[0], cfg.trading_days)
    span = _parse_span(args.span) if args.span else None
    try:
        curve = rp.emit_frontier_curve(report, args.points, span)
    except rp.ReportError as exc:
        raise InputError(str(exc)) from None
    frontier_text, cml_text = rp.curve_csv(curve)
    out = OutputSet()
    out.add(out_dir / args.window / "frontier_curve.csv", frontier_text)
    out.add(out_dir / args.window / "cml_curve.csv", cml_text)
    out.commit()
    return 0


def _cmd_summarize(args) -> int:
    reports = [rp.replay_paper(load_replay_input(Path(p))) for p in args.inputs]
    out_dir = _output_dir(Path(args.inputs[0]).parent / "out", args.output_dir)
    out = OutputSet()
    out.add(
        out_dir / f"summary.{_ext(args.format)}",
        rp.render_summary(rp.summarize(reports), args.format),
    )
    out.commit()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontera", description="Minimum-variance portfolio analytics"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output-dir", help="override the output directory")
        p.add_argument("--format", choices=["csv", "markdown"], default="csv")

    p = sub.add_parser("analyze", help="full pipeline from price CSVs")
    p.add_argument("--config", required=True)
    p.add_argument("--window", help="analyze only the named window")
    common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("replay", help="pipeline from a covariance/CAPM fixture")
    p.add_argument("--input", required=True)
    common(p)
    p.set_defaults(func=_cmd_replay)

    p = sub.add_parser("frontier", help="frontier/CML curve files for one window")
    p.add_argument("--config", required=True)
    p.add_argument("--window", required=True)
    p.add_argument("--points", type=int, default=rp.DEFAULT_CURVE_POINTS)
    p.add_argument("--span", help="return span LO:HI as decimal fractions")
    common(p)
    p.set_defaults(func=_cmd_frontier)

    p = sub.add_parser("summarize", help="cross-window summary of replay fixtures")
    p.add_argument("--inputs", nargs="+", required=True)
    common(p)
    p.set_defaults(func=_cmd_summarize)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, MarketDataError, rp.ReportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (st.StatsError, fr.FrontierError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
