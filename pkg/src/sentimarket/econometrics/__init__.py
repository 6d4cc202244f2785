"""Time-series statistics: correlations, stationarity, OLS and Granger tests."""

from .correlation import CcfReport, acf, ccf, ljung_box, pacf, pacf_from_acf
from .distributions import (
    betainc,
    chi2_cdf,
    chi2_sf,
    f_cdf,
    f_sf,
    gammainc_lower,
    gammainc_upper,
    std_normal_cdf,
)
from .granger import SIGNIFICANCE, GrangerResult, granger_test, is_significant
from .ols import OlsResult, ols
from .stationarity import ADF_CRITICAL, AdfResult, StationarityReport, adf_test, stationarity_report

__all__ = [
    "ADF_CRITICAL",
    "AdfResult",
    "CcfReport",
    "GrangerResult",
    "OlsResult",
    "SIGNIFICANCE",
    "StationarityReport",
    "acf",
    "adf_test",
    "betainc",
    "ccf",
    "chi2_cdf",
    "chi2_sf",
    "f_cdf",
    "f_sf",
    "gammainc_lower",
    "gammainc_upper",
    "granger_test",
    "is_significant",
    "ljung_box",
    "ols",
    "pacf",
    "pacf_from_acf",
    "stationarity_report",
    "std_normal_cdf",
]
