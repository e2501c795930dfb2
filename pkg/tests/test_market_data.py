from datetime import date

import numpy as np
import pytest

from frontera import (
    MarketDataError,
    WindowSpec,
    align_panel,
    parse_price_csv,
    simple_returns,
    slice_window,
)
from conftest import series_from_prices


class TestParsePriceCsv:
    def test_minimal_file(self):
        s = parse_price_csv("date,close\n2015-01-02,100.0\n2015-01-05,110.0", "A")
        assert len(s.points) == 2
        assert s.points[0].date == date(2015, 1, 2)
        assert s.points[1].close == 110.0

    def test_crlf_accepted(self):
        s = parse_price_csv("date,close\r\n2015-01-02,100.0\r\n2015-01-05,110.0\r\n", "A")
        assert len(s.points) == 2

    def test_unsorted_rows_are_sorted(self):
        s = parse_price_csv("date,close\n2015-01-05,110\n2015-01-02,100", "A")
        assert s.dates == (date(2015, 1, 2), date(2015, 1, 5))

    def test_non_positive_price(self):
        with pytest.raises(MarketDataError, match="non-positive price at line 2"):
            parse_price_csv("date,close\n2015-01-02,-5", "A")

    def test_duplicate_date(self):
        with pytest.raises(MarketDataError, match="duplicate date"):
            parse_price_csv("date,close\n2015-01-02,100\n2015-01-02,101", "A")

    def test_empty_file(self):
        with pytest.raises(MarketDataError, match="empty file"):
            parse_price_csv("", "A")

    def test_malformed_row_reports_line(self):
        with pytest.raises(MarketDataError, match="line 3"):
            parse_price_csv("date,close\n2015-01-02,100\nnot-a-date,xyz", "A")

    def test_bad_header(self):
        with pytest.raises(MarketDataError, match="header"):
            parse_price_csv("fecha,cierre\n2015-01-02,100", "A")


class TestAlignPanel:
    def test_intersection(self):
        a = series_from_prices("A", [1, 2, 3], date(2020, 1, 1))
        m = series_from_prices("M", [5, 6, 7], date(2020, 1, 2))
        panel = align_panel([a], m)
        assert panel.common_dates == (date(2020, 1, 2), date(2020, 1, 3))
        assert panel.assets[0].closes.tolist() == [2, 3]
        assert panel.market.closes.tolist() == [5, 6]

    def test_identity_on_identical_calendars(self):
        a = series_from_prices("A", [1, 2, 3])
        m = series_from_prices("M", [4, 5, 6])
        panel = align_panel([a], m)
        assert panel.assets[0] == a
        assert panel.market == m

    def test_disjoint_calendars(self):
        a = series_from_prices("A", [1, 2], date(2020, 1, 1))
        m = series_from_prices("M", [1, 2], date(2021, 1, 1))
        with pytest.raises(MarketDataError, match="empty intersection"):
            align_panel([a], m)

    def test_single_common_date(self):
        a = series_from_prices("A", [1, 2], date(2020, 1, 1))
        m = series_from_prices("M", [1, 2], date(2020, 1, 2))
        with pytest.raises(MarketDataError, match="at least 2"):
            align_panel([a], m)

    def test_no_assets(self):
        m = series_from_prices("M", [1, 2])
        with pytest.raises(MarketDataError):
            align_panel([], m)

    def test_idempotent(self):
        a = series_from_prices("A", [1, 2, 3, 4], date(2020, 1, 1))
        m = series_from_prices("M", [1, 2, 3], date(2020, 1, 2))
        once = align_panel([a], m)
        twice = align_panel(list(once.assets), once.market)
        assert once == twice


class TestSliceWindow:
    def _panel(self):
        a = series_from_prices("A", range(1, 11), date(2020, 1, 1))
        m = series_from_prices("M", range(11, 21), date(2020, 1, 1))
        return align_panel([a], m)

    def test_full_range_identity(self):
        panel = self._panel()
        w = WindowSpec("all", date(2019, 1, 1), date(2021, 1, 1), 0.05)
        assert slice_window(panel, w) == panel

    def test_single_day_error(self):
        panel = self._panel()
        w = WindowSpec("one", date(2020, 1, 3), date(2020, 1, 3), 0.05)
        with pytest.raises(MarketDataError, match="at least 2"):
            slice_window(panel, w)

    def test_filter_semantics(self):
        panel = self._panel()
        w = WindowSpec("mid", date(2020, 1, 3), date(2020, 1, 6), 0.05)
        sliced = slice_window(panel, w)
        assert sliced.common_dates == tuple(date(2020, 1, d) for d in (3, 4, 5, 6))

    def test_monotonicity(self):
        # slicing a sliced panel == slicing once with the window intersection
        panel = self._panel()
        outer = WindowSpec("outer", date(2020, 1, 2), date(2020, 1, 8), 0.05)
        inner = WindowSpec("inner", date(2020, 1, 4), date(2020, 1, 10), 0.05)
        both = WindowSpec("both", date(2020, 1, 4), date(2020, 1, 8), 0.05)
        assert slice_window(slice_window(panel, outer), inner) == slice_window(panel, both)

    def test_window_spec_validation(self):
        with pytest.raises(MarketDataError):
            WindowSpec("bad", date(2021, 1, 1), date(2020, 1, 1), 0.05)
        with pytest.raises(MarketDataError):
            WindowSpec("bad", date(2020, 1, 1), date(2021, 1, 1), float("nan"))


class TestSimpleReturns:
    def test_hand_arithmetic(self):
        r = simple_returns(series_from_prices("A", [100, 110]))
        assert r.returns.tolist() == pytest.approx([0.10])

    def test_constant_prices(self):
        r = simple_returns(series_from_prices("A", [50, 50, 50]))
        assert r.returns.tolist() == [0.0, 0.0]

    def test_down_then_up(self):
        r = simple_returns(series_from_prices("A", [100, 80, 100]))
        assert r.returns.tolist() == pytest.approx([-0.20, 0.25])

    def test_too_short(self):
        with pytest.raises(MarketDataError, match="at least 2"):
            simple_returns(series_from_prices("A", [100]))

    def test_length_and_dates(self):
        s = series_from_prices("A", [100, 101, 99, 104])
        r = simple_returns(s)
        assert len(r.returns) == len(s.points) - 1
        assert r.dates == s.dates[1:]

    def test_reconstruction(self):
        rng = np.random.default_rng(7)
        prices = 100 * np.cumprod(1 + rng.normal(0, 0.02, 300))
        s = series_from_prices("A", prices)
        r = simple_returns(s)
        rebuilt = prices[0] * np.prod(1 + r.returns)
        assert abs(rebuilt - prices[-1]) / prices[-1] < 1e-12
