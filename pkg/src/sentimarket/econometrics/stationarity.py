"""Augmented Dickey-Fuller test and the combined stationarity report."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import RankDeficient, SingularDesign, TooShort
from .correlation import CONF_Z, _values, acf, ljung_box, pacf_from_acf
from .ols import OlsResult, ols

# MacKinnon asymptotic critical values, constant and no trend
ADF_CRITICAL = {"1%": -3.43, "5%": -2.86, "10%": -2.57}


@dataclass(frozen=True, eq=False)
class AdfResult:
    t_stat: float
    gamma: float
    max_lag: int
    nobs: int
    reject: dict
    fit: OlsResult
    exact_fit: bool = False
    critical_values: dict = field(default_factory=lambda: dict(ADF_CRITICAL))


def adf_design(v: np.ndarray, max_lag: int) -> tuple[np.ndarray, np.ndarray]:
    """Response and regressors of dv_t = a + g v_{t-1} + sum_i d_i dv_{t-i}."""
    dv = np.diff(v)
    rows = len(dv) - max_lag
    cols = [np.ones(rows), v[max_lag : len(v) - 1]]
    for i in range(1, max_lag + 1):
        cols.append(dv[max_lag - i : len(dv) - i])
    return dv[max_lag:], np.column_stack(cols)


def adf_test(s, max_lag: int = 1) -> AdfResult:
    """Constant-only ADF regression; returns the t-statistic of the lagged level."""
    v = _values(s)
    if max_lag < 0:
        raise ValueError("max_lag must be non-negative")
    n = len(v)
    if n <= 2 * max_lag + 3:
        raise TooShort(f"ADF with max_lag={max_lag} needs more than {2 * max_lag + 3} observations")
    y, X = adf_design(v, max_lag)
    try:
        fit = ols(X, y)
    except RankDeficient as exc:
        raise SingularDesign(f"ADF design is singular: {exc}") from None
    gamma = float(fit.coef[1])
    exact = fit.rss <= 1e-20 * max(float(y @ y), 1e-300)
    if exact:
        # zero residual variance: the statistic is 0/0 or +-inf
        t = 0.0 if abs(gamma) <= 1e-8 else float(np.copysign(np.inf, gamma))
    else:
        t = gamma / float(fit.std_errors()[1])
    reject = {level: bool(t < cv) for level, cv in ADF_CRITICAL.items()}
    return AdfResult(t, gamma, max_lag, len(y), reject, fit, exact)


@dataclass(frozen=True, eq=False)
class StationarityReport:
    adf_t: float
    adf_reject: dict
    ljung_box_q: float
    ljung_box_p: float
    acf: np.ndarray
    pacf: np.ndarray
    conf_bound: float
    n: int
    adf_lag: int
    lb_lags: int

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "adf_t": self.adf_t,
            "adf_lag": self.adf_lag,
            "adf_critical_values": dict(ADF_CRITICAL),
            "adf_reject": dict(self.adf_reject),
            "ljung_box_lags": self.lb_lags,
            "ljung_box_q": self.ljung_box_q,
            "ljung_box_p": self.ljung_box_p,
            "acf": [float(r) for r in self.acf],
            "pacf": [float(r) for r in self.pacf],
            "conf_bound": self.conf_bound,
        }


def stationarity_report(s, max_lag: int = 20, lb_lags: int = 10, adf_lag: int = 1) -> StationarityReport:
    v = _values(s)
    rho = acf(v, max_lag)
    adf = adf_test(v, adf_lag)
    q, p = ljung_box(v, lb_lags)
    return StationarityReport(
        adf_t=adf.t_stat,
        adf_reject=adf.reject,
        ljung_box_q=q,
        ljung_box_p=p,
        acf=rho,
        pacf=pacf_from_acf(rho),
        conf_bound=float(CONF_Z / np.sqrt(len(v))),
        n=len(v),
        adf_lag=adf_lag,
        lb_lags=lb_lags,
    )
