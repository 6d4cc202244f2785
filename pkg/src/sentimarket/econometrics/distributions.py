"""CDFs for the test statistics: F, chi-square and the standard normal.

The regularized incomplete gamma and beta functions are evaluated with the
classic series / modified-Lentz continued-fraction pair, switching branches
where each converges fastest.
"""

from __future__ import annotations

import math

from ..errors import InvalidDegreesOfFreedom

_EPS = 1e-16
_TINY = 1e-300
_MAX_ITER = 10_000


def _check_x(x: float) -> float:
    x = float(x)
    if math.isnan(x):
        raise ValueError("argument is NaN")
    return x


def _gamma_series(a: float, x: float) -> float:
    # P(a, x) for x < a + 1
    term = total = 1.0 / a
    ap = a
    for _ in range(_MAX_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cf(a: float, x: float) -> float:
    # Q(a, x) for x >= a + 1
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gammainc_lower(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    x = _check_x(x)
    if a <= 0:
        raise InvalidDegreesOfFreedom(f"shape must be positive, got {a}")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_cf(a, x))


def gammainc_upper(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    x = _check_x(x)
    if a <= 0:
        raise InvalidDegreesOfFreedom(f"shape must be positive, got {a}")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return max(0.0, 1.0 - _gamma_series(a, x))
    return min(1.0, _gamma_cf(a, x))


def _beta_cf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc(a: float, b: float, x: float, y: float | None = None) -> float:
    """Regularized incomplete beta I_x(a, b).

    ``y`` may supply ``1 - x`` when the caller can compute it without
    cancellation.
    """
    x = _check_x(x)
    if a <= 0 or b <= 0:
        raise InvalidDegreesOfFreedom(f"beta parameters must be positive, got {a}, {b}")
    y = 1.0 - x if y is None else y
    if x <= 0:
        return 0.0
    if y <= 0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log(y)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cf(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_cf(b, a, y) / b)


def _check_dof(*dofs: float) -> None:
    for d in dofs:
        if not d > 0 or math.isinf(d):
            raise InvalidDegreesOfFreedom(f"degrees of freedom must be positive and finite, got {d}")


def chi2_cdf(x: float, k: float) -> float:
    _check_dof(k)
    return gammainc_lower(k / 2.0, _check_x(x) / 2.0)


def chi2_sf(x: float, k: float) -> float:
    _check_dof(k)
    return gammainc_upper(k / 2.0, _check_x(x) / 2.0)


def f_cdf(x: float, d1: float, d2: float) -> float:
    _check_dof(d1, d2)
    x = _check_x(x)
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    den = d1 * x + d2
    return betainc(d1 / 2.0, d2 / 2.0, d1 * x / den, d2 / den)


def f_sf(x: float, d1: float, d2: float) -> float:
    """Upper tail of the F distribution, computed without cancellation."""
    _check_dof(d1, d2)
    x = _check_x(x)
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    den = d1 * x + d2
    return betainc(d2 / 2.0, d1 / 2.0, d2 / den, d1 * x / den)


def std_normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-_check_x(x) / math.sqrt(2.0))
