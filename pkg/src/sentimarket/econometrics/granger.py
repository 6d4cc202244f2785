"""Bivariate Granger-causality F-test."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NotAligned, TooShort
from ..timeseries import DatedSeries
from .correlation import _values
from .distributions import f_sf
from .ols import ols

SIGNIFICANCE = 0.10
# RSS_u / TSS below this counts as an exact fit
_EXACT_FIT = 1e-14


def is_significant(p_value: float, threshold: float = SIGNIFICANCE) -> bool:
    """Null of no Granger-causality rejected when p is strictly below the threshold."""
    return p_value < threshold


@dataclass(frozen=True, eq=False)
class GrangerResult:
    direction: str
    lag: int
    f_stat: float
    p_value: float
    n_obs: int
    df_num: int
    df_den: int
    rss_restricted: float
    rss_unrestricted: float
    significant: bool
    threshold: float = SIGNIFICANCE
    exact_fit: bool = False
    residuals_restricted: np.ndarray | None = None
    residuals_unrestricted: np.ndarray | None = None

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "lag": self.lag,
            "f_stat": self.f_stat if np.isfinite(self.f_stat) else None,
            "p_value": self.p_value,
            "n_obs": self.n_obs,
            "df_num": self.df_num,
            "df_den": self.df_den,
            "significant": self.significant,
            "exact_fit": self.exact_fit,
        }


def lag_matrix(v: np.ndarray, lag: int) -> np.ndarray:
    """Columns v_{t-1}, ..., v_{t-lag} for t = lag..n-1."""
    n = len(v)
    return np.column_stack([v[lag - i : n - i] for i in range(1, lag + 1)])


def granger_test(x, y, lag: int, threshold: float = SIGNIFICANCE, direction: str = "x=>y") -> GrangerResult:
    """Test whether lags of ``x`` help forecast ``y`` beyond ``y``'s own lags.

    Restricted model: y_t on a constant and y_{t-1..t-lag}. Unrestricted model
    adds x_{t-1..t-lag}. With ``n`` usable observations (series length minus
    ``lag``) the statistic is F(lag, n - 2 lag - 1).
    """
    if isinstance(x, DatedSeries) and isinstance(y, DatedSeries):
        if not np.array_equal(x.dates, y.dates):
            raise NotAligned("granger inputs must share the same dates")
    xv, yv = _values(x), _values(y)
    if len(xv) != len(yv):
        raise NotAligned("granger inputs must have equal length")
    if lag < 1:
        raise ValueError("lag must be a positive integer")
    n_obs = len(yv) - lag
    df_den = n_obs - 2 * lag - 1
    if df_den <= 0:
        raise TooShort(f"{len(yv)} observations are too few for lag {lag}")

    target = yv[lag:]
    const = np.ones((n_obs, 1))
    ylags = lag_matrix(yv, lag)
    restricted = ols(np.hstack([const, ylags]), target)
    unrestricted = ols(np.hstack([const, ylags, lag_matrix(xv, lag)]), target)
    rss_r, rss_u = restricted.rss, unrestricted.rss

    centered = target - target.mean()
    tss = float(centered @ centered)
    exact = rss_u <= _EXACT_FIT * tss
    if exact and rss_r <= _EXACT_FIT * tss:
        # own lags already forecast y perfectly; x adds nothing
        f_stat, p_value = 0.0, 1.0
    elif exact:
        f_stat, p_value = float("inf"), 0.0
    else:
        f_stat = max(0.0, ((rss_r - rss_u) / lag) / (rss_u / df_den))
        p_value = f_sf(f_stat, lag, df_den)
    return GrangerResult(
        direction=direction,
        lag=lag,
        f_stat=f_stat,
        p_value=p_value,
        n_obs=n_obs,
        df_num=lag,
        df_den=df_den,
        rss_restricted=rss_r,
        rss_unrestricted=rss_u,
        significant=is_significant(p_value, threshold),
        threshold=threshold,
        exact_fit=exact,
        residuals_restricted=restricted.residuals,
        residuals_unrestricted=unrestricted.residuals,
    )
