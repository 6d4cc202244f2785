import csv

import numpy as np
import pytest

from sentimarket.errors import TooShort
from sentimarket.indicators import (
    FEATURES,
    IndicatorConfig,
    adx,
    atr,
    bollinger_pctb,
    build_indicator_matrix,
    cci,
    macd,
    momentum,
    rsi,
    sma,
    tema,
    williams_r,
)
from sentimarket.ingest import PriceSeries, load_prices
from sentimarket.synth import business_days, gen_random_walk


def flat_prices(n, c=10.0):
    v = np.full(n, c)
    return PriceSeries(business_days(n), v, v, v, v, v, np.zeros(n))


@pytest.fixture(scope="module")
def fixture_prices(data_dir):
    return load_prices(data_dir / "fixture_300.csv")


@pytest.fixture(scope="module")
def oracle(data_dir):
    with (data_dir / "indicator_oracle_300.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0][1:]) == FEATURES
    return np.array([[float(v) for v in r[1:]] for r in rows[1:]])


class TestFixtureOracle:
    def test_all_columns_match(self, fixture_prices, oracle):
        m = build_indicator_matrix(fixture_prices)
        np.testing.assert_array_equal(np.isnan(m.values), np.isnan(oracle))
        np.testing.assert_allclose(m.values, oracle, rtol=0, atol=1e-9, equal_nan=True)

    def test_valid_rows(self, fixture_prices):
        assert build_indicator_matrix(fixture_prices).valid.sum() == 100


class TestWarmup:
    def test_201_bars_one_valid_row(self):
        assert build_indicator_matrix(gen_random_walk(201, seed=1)).valid.sum() == 1

    def test_too_short(self):
        with pytest.raises(TooShort):
            build_indicator_matrix(gen_random_walk(200, seed=1))

    def test_column_order(self):
        assert build_indicator_matrix(gen_random_walk(250, seed=1)).names == FEATURES
        assert len(FEATURES) == 15

    def test_first_defined_indices(self):
        c = gen_random_walk(120, seed=2).close
        assert np.flatnonzero(np.isfinite(rsi(c)))[0] == 14
        line, sig, _ = macd(c)
        assert np.flatnonzero(np.isfinite(line))[0] == 25
        assert np.flatnonzero(np.isfinite(sig))[0] == 33
        assert np.flatnonzero(np.isfinite(tema(c)))[0] == 87


class TestExamples:
    def test_sma(self):
        np.testing.assert_allclose(sma([1, 2, 3, 4, 5], 3)[2:], [2, 3, 4])
        with pytest.raises(TooShort):
            sma([1, 2], 3)

    def test_williams_extremes(self):
        h = np.arange(1.0, 11.0) + 0.5
        l = np.arange(1.0, 11.0) - 0.5
        assert williams_r(h, l, h, 10)[-1] == 0.0
        # falling bars: the last low is the window low
        assert williams_r(h[::-1], l[::-1], l[::-1], 10)[-1] == -100.0
        flat = np.ones(10)
        assert williams_r(flat, flat, flat, 10)[-1] == -50.0

    def test_momentum_ramp(self):
        np.testing.assert_allclose(momentum(np.arange(20.0), 5)[5:], 5.0)

    def test_rsi(self):
        assert np.all(rsi(np.arange(1.0, 40.0))[14:] == 100.0)
        assert np.all(rsi(np.ones(40))[14:] == 50.0)

    def test_flat_degenerate_values(self):
        p = flat_prices(260)
        m = build_indicator_matrix(p)
        last = dict(zip(FEATURES, m.values[-1]))
        assert last["macd"] == last["macd_signal"] == last["macd_hist"] == 0.0
        assert last["bb_pctb"] == 0.5 and last["cci"] == 0.0 and last["adx"] == 0.0
        assert last["atr"] == 0.0 and last["willr10"] == -50.0 and last["rsi14"] == 50.0
        assert last["tema"] == pytest.approx(10.0) and last["ma200"] == 10.0

    def test_pctb_on_sma(self):
        c = np.array([1.0, 3.0] * 10 + [2.0])
        assert bollinger_pctb(c, 20)[-1] == pytest.approx(0.5 + (2.0 - np.mean(c[1:])) / (4 * np.std(c[1:])))

    def test_cci_odd_symmetry(self):
        p = gen_random_walk(80, seed=3)
        h, l, c = p.adjusted_hlc()
        np.testing.assert_allclose(cci(-l + 300, -h + 300, -c + 300), -cci(h, l, c), atol=1e-9, equal_nan=True)

    def test_adx_monotone_up(self):
        c = np.arange(100.0, 160.0)
        assert adx(c + 0.5, c - 0.5, c)[-1] > 90

    def test_tema_tracks_ramp(self):
        c = np.arange(200.0)
        err_tema = abs(tema(c)[-1] - c[-1])
        err_sma = abs(sma(c, 30)[-1] - c[-1])
        assert err_tema < err_sma

    def test_atr_volatility_ordering(self):
        lo = gen_random_walk(300, vol=0.005, seed=5)
        hi = gen_random_walk(300, vol=0.03, seed=5)
        assert np.nanmean(atr(*hi.adjusted_hlc())) > np.nanmean(atr(*lo.adjusted_hlc()))

    def test_histogram_identity(self):
        line, sig, hist = macd(gen_random_walk(100, seed=6).close)
        np.testing.assert_array_equal(hist, line - sig)


class TestProperties:
    def test_no_lookahead(self):
        p = gen_random_walk(320, seed=7)
        full = build_indicator_matrix(p).values
        part = build_indicator_matrix(p.head(260)).values
        np.testing.assert_array_equal(full[:260], part)

    def test_scale_behaviour(self):
        p = gen_random_walk(260, seed=8)
        a = 3.7
        q = PriceSeries(p.dates, p.open * a, p.high * a, p.low * a, p.close * a, p.adj_close * a, p.volume)
        v1 = build_indicator_matrix(p).values[220:]
        v2 = build_indicator_matrix(q).values[220:]
        idx = {n: i for i, n in enumerate(FEATURES)}
        for name in ("rsi14", "willr10", "bb_pctb", "cci", "adx"):
            np.testing.assert_allclose(v2[:, idx[name]], v1[:, idx[name]], atol=1e-9)
        for name in ("ma50", "mom5", "macd", "tema", "atr"):
            np.testing.assert_allclose(v2[:, idx[name]], a * v1[:, idx[name]], rtol=1e-9)

    @pytest.mark.parametrize("seed", range(5))
    def test_ranges_on_fuzz(self, seed):
        m = build_indicator_matrix(gen_random_walk(1000, vol=0.02, seed=100 + seed))
        v = m.values[m.valid]
        col = dict(zip(FEATURES, v.T))
        assert np.all((col["rsi14"] >= 0) & (col["rsi14"] <= 100))
        assert np.all((col["adx"] >= 0) & (col["adx"] <= 100))
        assert np.all((col["willr10"] >= -100) & (col["willr10"] <= 0))
        assert np.all(col["atr"] >= 0)

    def test_config_override(self):
        cfg = IndicatorConfig(ma_windows=(5, 10, 20))
        m = build_indicator_matrix(gen_random_walk(120, seed=9), cfg)
        assert m.config.warmup == 20
        assert m.valid.sum() == 120 - 87  # TEMA(30) is then the longest warm-up
