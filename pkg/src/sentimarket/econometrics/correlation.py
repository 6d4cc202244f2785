"""Autocorrelation, partial autocorrelation, Ljung-Box and cross-correlation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotAligned, TooShort, ZeroVariance
from ..timeseries import DatedSeries
from .distributions import chi2_sf

CONF_Z = 1.96


def _values(s) -> np.ndarray:
    if isinstance(s, DatedSeries):
        return s.values
    return np.asarray(s, dtype=np.float64)


def acf(s, max_lag: int, include_zero: bool = False) -> np.ndarray:
    """Sample autocorrelations for lags 1..max_lag (0..max_lag with ``include_zero``)."""
    v = _values(s)
    if max_lag < 1:
        raise ValueError("max_lag must be positive")
    n = len(v)
    if n <= max_lag:
        raise TooShort(f"series of length {n} too short for max_lag={max_lag}")
    d = v - v.mean()
    denom = d @ d
    if denom == 0:
        raise ZeroVariance("series has zero variance")
    rho = np.array([d[: n - k] @ d[k:] for k in range(max_lag + 1)]) / denom
    rho = np.clip(rho, -1.0, 1.0)
    rho[0] = 1.0
    return rho if include_zero else rho[1:]


def pacf_from_acf(rho: np.ndarray) -> np.ndarray:
    """Durbin-Levinson recursion; ``rho[k-1]`` is the lag-k autocorrelation."""
    L = len(rho)
    out = np.empty(L)
    phi = np.zeros(L + 1)
    for k in range(1, L + 1):
        if k == 1:
            pkk = rho[0]
        else:
            num = rho[k - 1] - phi[1:k] @ rho[k - 2 :: -1][: k - 1]
            den = 1.0 - phi[1:k] @ rho[: k - 1]
            pkk = num / den if den != 0 else 0.0
            phi[1:k] = phi[1:k] - pkk * phi[k - 1 : 0 : -1]
        phi[k] = pkk
        out[k - 1] = pkk
    return np.clip(out, -1.0, 1.0)


def pacf(s, max_lag: int) -> np.ndarray:
    return pacf_from_acf(acf(s, max_lag))


def ljung_box(s, h: int) -> tuple[float, float]:
    """Ljung-Box portmanteau statistic over lags 1..h and its chi-square(h) p-value."""
    v = _values(s)
    n = len(v)
    if n <= h:
        raise TooShort(f"Ljung-Box with h={h} needs more than {h} observations")
    rho = acf(v, h)
    q = float(n * (n + 2) * np.sum(rho**2 / (n - np.arange(1, h + 1))))
    return q, chi2_sf(q, h)


@dataclass(frozen=True, eq=False)
class CcfReport:
    lags: np.ndarray
    correlations: np.ndarray
    conf_bound: float
    n: int

    def at(self, lag: int) -> float:
        return float(self.correlations[list(self.lags).index(lag)])

    def rows(self) -> list[dict]:
        return [
            {"lag": int(k), "corr": float(c), "conf_bound": self.conf_bound}
            for k, c in zip(self.lags, self.correlations)
        ]


def _pearson(a: np.ndarray, b: np.ndarray) -> float:
    da = a - a.mean()
    db = b - b.mean()
    den = np.sqrt((da @ da) * (db @ db))
    if den == 0:
        return 0.0
    return float(np.clip((da @ db) / den, -1.0, 1.0))


def ccf(x, y, max_lag: int) -> CcfReport:
    """corr(x_t, y_{t+k}) for k in -max_lag..max_lag over each lag's overlap window."""
    if isinstance(x, DatedSeries) and isinstance(y, DatedSeries):
        if not np.array_equal(x.dates, y.dates):
            raise NotAligned("ccf inputs must share the same dates; align them first")
    xv, yv = _values(x), _values(y)
    if len(xv) != len(yv):
        raise NotAligned("ccf inputs must have equal length")
    n = len(xv)
    if n <= max_lag:
        raise TooShort(f"series of length {n} too short for max_lag={max_lag}")
    if np.ptp(xv) == 0 or np.ptp(yv) == 0:
        raise ZeroVariance("ccf input has zero variance")
    lags = np.arange(-max_lag, max_lag + 1)
    corr = np.empty(len(lags))
    for i, k in enumerate(lags):
        if k >= 0:
            corr[i] = _pearson(xv[: n - k], yv[k:])
        else:
            corr[i] = _pearson(xv[-k:], yv[: n + k])
    return CcfReport(lags, corr, float(CONF_Z / np.sqrt(n)), n)
