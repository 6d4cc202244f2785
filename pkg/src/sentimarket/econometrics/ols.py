"""Ordinary least squares via the normal equations."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from ..errors import RankDeficient

# smallest admissible squared Cholesky pivot of the column-scaled Gram matrix
_PIVOT_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class OlsResult:
    coef: np.ndarray
    rss: float
    residuals: np.ndarray
    chol: np.ndarray
    scale: np.ndarray

    @property
    def nobs(self) -> int:
        return len(self.residuals)

    @property
    def df_resid(self) -> int:
        return len(self.residuals) - len(self.coef)

    def xtx_inv(self) -> np.ndarray:
        k = len(self.coef)
        inv_scaled = cho_solve((self.chol, True), np.eye(k))
        return inv_scaled / np.outer(self.scale, self.scale)

    def std_errors(self) -> np.ndarray:
        sigma2 = self.rss / self.df_resid
        return np.sqrt(np.clip(np.diag(self.xtx_inv()), 0.0, None) * sigma2)


def ols(X, y) -> OlsResult:
    """Least-squares fit of ``y`` on the columns of ``X``.

    Columns are scaled to unit norm before forming ``X'X`` so the rank check
    on the Cholesky pivots is independent of units.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError("X must be (n, k) and y of length n")
    n, k = X.shape
    if n <= k:
        raise RankDeficient(f"need more rows than columns, got {n}x{k}")
    scale = np.sqrt(np.einsum("ij,ij->j", X, X))
    if np.any(scale == 0):
        raise RankDeficient("design has an all-zero column")
    Xs = X / scale
    gram = Xs.T @ Xs
    try:
        L = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError:
        raise RankDeficient("design matrix is not of full column rank") from None
    if np.min(np.diag(L)) ** 2 < _PIVOT_FLOOR:
        raise RankDeficient("design matrix is numerically rank deficient")
    z = solve_triangular(L, Xs.T @ y, lower=True)
    beta_s = solve_triangular(L.T, z, lower=False)
    coef = beta_s / scale
    residuals = y - X @ coef
    return OlsResult(coef, float(residuals @ residuals), residuals, L, scale)
