"""Technical indicators producing the fifteen baseline features.

All indicators are causal: the value at bar ``t`` uses bars ``<= t`` only.
Undefined warm-up values are NaN. Exponential averages are seeded with the
simple mean of their first ``period`` inputs; Wilder averages likewise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TooShort
from .ingest import PriceSeries

FEATURES = (
    "ma50", "ma100", "ma200", "willr10", "mom1", "mom5", "rsi14",
    "macd", "macd_signal", "macd_hist", "bb_pctb", "cci", "adx", "tema", "atr",
)


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def sma(close, window: int) -> np.ndarray:
    c = _arr(close)
    if len(c) < window:
        raise TooShort(f"SMA({window}) needs at least {window} bars")
    out = np.full(len(c), np.nan)
    out[window - 1 :] = np.lib.stride_tricks.sliding_window_view(c, window).mean(axis=1)
    return out


def ema(values, period: int) -> np.ndarray:
    """EMA with alpha = 2/(period+1), seeded by the SMA of the first ``period`` defined inputs."""
    v = _arr(values)
    out = np.full(len(v), np.nan)
    finite = np.flatnonzero(np.isfinite(v))
    if finite.size == 0:
        return out
    start = finite[0]
    seed = start + period - 1
    if seed >= len(v):
        return out
    alpha = 2.0 / (period + 1.0)
    out[seed] = v[start : seed + 1].mean()
    for i in range(seed + 1, len(v)):
        out[i] = out[i - 1] + alpha * (v[i] - out[i - 1])
    return out


def wilder(values, period: int) -> np.ndarray:
    """Wilder's running average (prev*(p-1) + x)/p seeded by a simple mean."""
    v = _arr(values)
    out = np.full(len(v), np.nan)
    finite = np.flatnonzero(np.isfinite(v))
    if finite.size == 0:
        return out
    start = finite[0]
    seed = start + period - 1
    if seed >= len(v):
        return out
    out[seed] = v[start : seed + 1].mean()
    for i in range(seed + 1, len(v)):
        out[i] = (out[i - 1] * (period - 1) + v[i]) / period
    return out


def williams_r(high, low, close, period: int = 10) -> np.ndarray:
    h, l, c = _arr(high), _arr(low), _arr(close)
    out = np.full(len(c), np.nan)
    if len(c) < period:
        return out
    hh = np.lib.stride_tricks.sliding_window_view(h, period).max(axis=1)
    ll = np.lib.stride_tricks.sliding_window_view(l, period).min(axis=1)
    rng = hh - ll
    cc = c[period - 1 :]
    flat = rng == 0
    out[period - 1 :] = np.where(flat, -50.0, -100.0 * (hh - cc) / np.where(flat, 1.0, rng))
    return out


def momentum(close, n: int) -> np.ndarray:
    c = _arr(close)
    out = np.full(len(c), np.nan)
    out[n:] = c[n:] - c[:-n]
    return out


def rsi(close, period: int = 14) -> np.ndarray:
    c = _arr(close)
    out = np.full(len(c), np.nan)
    if len(c) <= period:
        return out
    delta = np.full(len(c), np.nan)
    delta[1:] = np.diff(c)
    avg_gain = wilder(np.where(np.isnan(delta), np.nan, np.maximum(delta, 0.0)), period)
    avg_loss = wilder(np.where(np.isnan(delta), np.nan, np.maximum(-delta, 0.0)), period)
    for i in range(period, len(c)):
        ag, al = avg_gain[i], avg_loss[i]
        if al == 0:
            out[i] = 50.0 if ag == 0 else 100.0
        else:
            out[i] = 100.0 - 100.0 / (1.0 + ag / al)
    return out


def macd(close, fast: int = 12, slow: int = 26, signal: int = 9) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    c = _arr(close)
    line = ema(c, fast) - ema(c, slow)
    sig = ema(line, signal)
    return line, sig, line - sig


def bollinger_pctb(close, window: int = 20, k: float = 2.0) -> np.ndarray:
    c = _arr(close)
    out = np.full(len(c), np.nan)
    if len(c) < window:
        return out
    win = np.lib.stride_tricks.sliding_window_view(c, window)
    mid = win.mean(axis=1)
    sd = win.std(axis=1)
    flat = np.ptp(win, axis=1) == 0
    lower = mid - k * sd
    out[window - 1 :] = np.where(flat, 0.5, (c[window - 1 :] - lower) / np.where(flat, 1.0, 2.0 * k * sd))
    return out


def cci(high, low, close, period: int = 20) -> np.ndarray:
    tp = (_arr(high) + _arr(low) + _arr(close)) / 3.0
    out = np.full(len(tp), np.nan)
    if len(tp) < period:
        return out
    win = np.lib.stride_tricks.sliding_window_view(tp, period)
    mean = win.mean(axis=1)
    mad = np.abs(win - mean[:, None]).mean(axis=1)
    flat = np.ptp(win, axis=1) == 0
    out[period - 1 :] = np.where(flat, 0.0, (tp[period - 1 :] - mean) / (0.015 * np.where(flat, 1.0, mad)))
    return out


def true_range(high, low, close) -> np.ndarray:
    h, l, c = _arr(high), _arr(low), _arr(close)
    tr = np.full(len(c), np.nan)
    prev = c[:-1]
    tr[1:] = np.maximum.reduce([h[1:] - l[1:], np.abs(h[1:] - prev), np.abs(l[1:] - prev)])
    return tr


def atr(high, low, close, period: int = 14) -> np.ndarray:
    return wilder(true_range(high, low, close), period)


def adx(high, low, close, period: int = 14) -> np.ndarray:
    h, l = _arr(high), _arr(low)
    n = len(h)
    plus_dm = np.full(n, np.nan)
    minus_dm = np.full(n, np.nan)
    up = h[1:] - h[:-1]
    down = l[:-1] - l[1:]
    plus_dm[1:] = np.where((up > down) & (up > 0), up, 0.0)
    minus_dm[1:] = np.where((down > up) & (down > 0), down, 0.0)
    tr_s = wilder(true_range(h, l, close), period)
    pdm_s = wilder(plus_dm, period)
    mdm_s = wilder(minus_dm, period)
    with np.errstate(invalid="ignore", divide="ignore"):
        plus_di = np.where(tr_s > 0, 100.0 * pdm_s / tr_s, 0.0)
        minus_di = np.where(tr_s > 0, 100.0 * mdm_s / tr_s, 0.0)
        di_sum = plus_di + minus_di
        dx = np.where(di_sum > 0, 100.0 * np.abs(plus_di - minus_di) / di_sum, 0.0)
    dx[np.isnan(tr_s)] = np.nan
    return wilder(dx, period)


def tema(close, period: int = 30) -> np.ndarray:
    e1 = ema(close, period)
    e2 = ema(e1, period)
    e3 = ema(e2, period)
    return 3.0 * e1 - 3.0 * e2 + e3


@dataclass(frozen=True)
class IndicatorConfig:
    ma_windows: tuple = (50, 100, 200)
    willr_period: int = 10
    momentum_lags: tuple = (1, 5)
    rsi_period: int = 14
    macd_fast: int = 12
    macd_slow: int = 26
    macd_signal: int = 9
    bb_window: int = 20
    bb_k: float = 2.0
    cci_period: int = 20
    adx_period: int = 14
    tema_period: int = 30
    atr_period: int = 14

    @property
    def warmup(self) -> int:
        return max(self.ma_windows)


@dataclass(frozen=True, eq=False)
class IndicatorMatrix:
    dates: np.ndarray
    values: np.ndarray
    valid: np.ndarray
    names: tuple = FEATURES
    config: IndicatorConfig = field(default_factory=IndicatorConfig)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.names.index(name)]

    def valid_rows(self) -> tuple[np.ndarray, np.ndarray]:
        return self.dates[self.valid], self.values[self.valid]


def build_indicator_matrix(prices: PriceSeries, config: IndicatorConfig | None = None) -> IndicatorMatrix:
    """Compute all fifteen columns on adjusted prices.

    The first ``config.warmup`` rows (the longest moving-average window) are
    flagged invalid, as is any row with an undefined value.
    """
    cfg = config or IndicatorConfig()
    if len(prices) <= cfg.warmup:
        raise TooShort(f"need more than {cfg.warmup} bars, got {len(prices)}")
    high, low, close = prices.adjusted_hlc()
    cols = [sma(close, w) for w in cfg.ma_windows]
    cols.append(williams_r(high, low, close, cfg.willr_period))
    cols += [momentum(close, n) for n in cfg.momentum_lags]
    cols.append(rsi(close, cfg.rsi_period))
    cols += list(macd(close, cfg.macd_fast, cfg.macd_slow, cfg.macd_signal))
    cols.append(bollinger_pctb(close, cfg.bb_window, cfg.bb_k))
    cols.append(cci(high, low, close, cfg.cci_period))
    cols.append(adx(high, low, close, cfg.adx_period))
    cols.append(tema(close, cfg.tema_period))
    cols.append(atr(high, low, close, cfg.atr_period))
    values = np.column_stack(cols)
    valid = np.all(np.isfinite(values), axis=1)
    valid[: cfg.warmup] = False
    return IndicatorMatrix(prices.dates, values, valid, FEATURES, cfg)
