import datetime as dt
import warnings

import numpy as np
import pytest

from sentimarket.dataset import (
    SCENARIOS,
    Dataset,
    assemble,
    label_horizon,
    load_dataset,
    normalize,
    split,
)
from sentimarket.errors import MissingSignals, NoOverlappingDates, TooFewRows, TooShort
from sentimarket.indicators import build_indicator_matrix
from sentimarket.ingest import EMOTIONS, PriceSeries
from sentimarket.sentiment import DailySignal
from sentimarket.synth import business_days, gen_random_walk, random_signals


def ramp_prices(values):
    v = np.asarray(values, dtype=float)
    return PriceSeries(business_days(len(v)), v, v, v, v, v, np.zeros(len(v)))


@pytest.fixture(scope="module")
def prices():
    return gen_random_walk(500, seed=31)


@pytest.fixture(scope="module")
def signals(prices):
    return random_signals([d.item() for d in prices.dates], seed=2)


@pytest.fixture(scope="module")
def base(prices):
    return assemble(build_indicator_matrix(prices), None, "baseline", label_horizon(prices, 5))


class TestLabels:
    def test_rising(self):
        _, y = label_horizon(ramp_prices(np.arange(1, 21)), 5)
        assert len(y) == 15 and np.all(y == 1)

    def test_falling(self):
        assert np.all(label_horizon(ramp_prices(np.arange(20, 0, -1)), 5)[1] == -1)

    def test_flat_is_down(self):
        assert np.all(label_horizon(ramp_prices(np.ones(10)), 3)[1] == -1)

    def test_mixed(self):
        dates, y = label_horizon(ramp_prices([1, 3, 2, 2, 5]), 1)
        np.testing.assert_array_equal(y, [1, -1, -1, 1])
        assert len(dates) == 4

    def test_too_short(self):
        with pytest.raises(TooShort):
            label_horizon(ramp_prices([1, 2, 3]), 3)


class TestAssemble:
    @pytest.mark.parametrize("scenario,width", list(zip(SCENARIOS, (15, 24, 23, 23))))
    def test_widths(self, prices, signals, scenario, width):
        ds = assemble(build_indicator_matrix(prices), signals, scenario, label_horizon(prices, 5))
        assert ds.X.shape[1] == width == len(ds.feature_names)

    def test_rows_are_valid_and_labeled(self, prices, base):
        assert len(base) == 500 - 200 - 5
        assert np.all(np.isfinite(base.X))

    def test_missing_signals(self, prices):
        with pytest.raises(MissingSignals):
            assemble(build_indicator_matrix(prices), None, "all+emotion", label_horizon(prices, 5))

    def test_zero_fill(self, prices):
        day = prices.dates[250].item()
        sig = [DailySignal(day, 0.5, np.full(8, 0.1), 3)]
        ds = assemble(build_indicator_matrix(prices), sig, "all+attitude+emotion", label_horizon(prices, 5))
        att = ds.X[:, ds.feature_names.index("attitude")]
        assert att[ds.dates == prices.dates[250]][0] == 0.5
        assert np.count_nonzero(att) == 1

    def test_order_independent(self, prices, signals):
        m = build_indicator_matrix(prices)
        dates, y = label_horizon(prices, 5)
        perm = np.random.default_rng(0).permutation(len(y))
        a = assemble(m, signals, "all+emotion", (dates, y))
        b = assemble(m, signals[::-1], "all+emotion", (dates[perm], y[perm]))
        assert a == b

    def test_no_overlap(self, prices):
        m = build_indicator_matrix(prices)
        with pytest.raises(NoOverlappingDates):
            assemble(m, None, "baseline", (np.array(["1990-01-01"], dtype="datetime64[D]"), np.array([1])))


class TestSplit:
    def test_fraction(self):
        ds = Dataset(("a",), business_days(300), np.zeros((300, 1)), np.ones(300, dtype=int))
        s = split(ds, seed=1)
        assert (s.split == "train").sum() == 200

    def test_deterministic_and_seed_sensitive(self, base):
        assert np.array_equal(split(base, seed=3).split, split(base, seed=3).split)
        assert not np.array_equal(split(base, seed=3).split, split(base, seed=4).split)

    def test_chronological(self, base):
        s = split(base, method="chronological")
        n = (s.split == "train").sum()
        assert np.all(s.split[:n] == "train") and np.all(s.split[n:] == "test")

    def test_too_few_rows(self):
        ds = Dataset(("a",), business_days(9), np.zeros((9, 1)), np.ones(9, dtype=int))
        with pytest.raises(TooFewRows):
            split(ds)


class TestNormalize:
    def test_scope_all(self, base):
        ds = normalize(base, "all")
        np.testing.assert_allclose(ds.X.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(ds.X.std(axis=0, ddof=1), 1.0, atol=1e-9)

    def test_scope_train_uses_train_stats(self, base):
        ds = normalize(split(base, seed=5), "train")
        train = ds.X[ds.split == "train"]
        np.testing.assert_allclose(train.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(train.std(axis=0, ddof=1), 1.0, atol=1e-9)
        raw = split(base, seed=5)
        i = int(np.flatnonzero(ds.split == "test")[0])
        mu, sd = ds.stats["rsi14"]["mean"], ds.stats["rsi14"]["sd"]
        j = ds.feature_names.index("rsi14")
        assert ds.X[i, j] == pytest.approx((raw.X[i, j] - mu) / sd)

    def test_idempotent(self, base):
        once = normalize(split(base, seed=5), "train")
        twice = normalize(once, "train")
        np.testing.assert_allclose(twice.X, once.X, atol=1e-9)

    def test_constant_column_warns(self):
        X = np.column_stack([np.arange(12.0), np.full(12, 4.0)])
        ds = Dataset(("a", "b"), business_days(12), X, np.ones(12, dtype=int))
        with pytest.warns(RuntimeWarning, match="zero-variance"):
            out = normalize(ds, "all")
        assert np.all(out.X[:, 1] == 0.0)

    def test_requires_split_for_train_scope(self, base):
        with pytest.raises(ValueError):
            normalize(base, "train")


class TestSerialization:
    def test_round_trip(self, base, tmp_path):
        ds = normalize(split(base, seed=2), "train")
        sidecar = ds.to_csv(tmp_path / "d.csv")
        assert sidecar.name == "d.json"
        back = load_dataset(tmp_path / "d.csv")
        assert back == ds
        assert back.config["scope"] == "train" and back.config["seed"] == 2
