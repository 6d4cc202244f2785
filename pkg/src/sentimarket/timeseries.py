"""Dated series container and the transforms shared by the analysis modules."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import EmptyIntersection, TooShort, ZeroBase


def as_dates(values) -> np.ndarray:
    return np.asarray(values, dtype="datetime64[D]")


@dataclass(frozen=True, eq=False)
class DatedSeries:
    """Strictly increasing calendar days paired with finite values."""

    dates: np.ndarray
    values: np.ndarray
    name: str = ""

    def __post_init__(self):
        dates = as_dates(self.dates)
        values = np.asarray(self.values, dtype=np.float64)
        if dates.ndim != 1 or values.ndim != 1 or len(dates) != len(values):
            raise ValueError("dates and values must be 1-d and of equal length")
        if len(dates) < 1:
            raise TooShort("a series needs at least one observation")
        if len(dates) > 1 and not np.all(dates[1:] > dates[:-1]):
            raise ValueError("dates must be strictly increasing")
        if not np.all(np.isfinite(values)):
            raise ValueError("series values must be finite")
        dates.flags.writeable = False
        values.flags.writeable = False
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DatedSeries):
            return NotImplemented
        return (
            np.array_equal(self.dates, other.dates)
            and np.array_equal(self.values, other.values)
        )

    def with_values(self, values, name: str | None = None) -> "DatedSeries":
        return DatedSeries(self.dates, values, self.name if name is None else name)


def pct_change(s: DatedSeries) -> DatedSeries:
    """Percentage change between consecutive observations, dated at the later day."""
    if len(s) < 2:
        raise TooShort("pct_change needs at least two observations")
    v = s.values
    zero = np.flatnonzero(v == 0.0)
    if zero.size:
        raise ZeroBase(int(zero[0]))
    return DatedSeries(s.dates[1:], 100.0 * (v[1:] - v[:-1]) / v[:-1], s.name)


def diff(s: DatedSeries, k: int = 1) -> DatedSeries:
    if k < 1:
        raise ValueError("k must be a positive integer")
    if len(s) <= k:
        raise TooShort(f"diff with k={k} needs more than {k} observations")
    v = s.values
    return DatedSeries(s.dates[k:], v[k:] - v[:-k], s.name)


def align(
    a: DatedSeries, b: DatedSeries, fill: Literal["drop", "zero"] = "drop"
) -> tuple[DatedSeries, DatedSeries]:
    """Put two series on a common calendar.

    ``drop`` keeps the intersection of dates. ``zero`` keeps ``a``'s calendar
    and zero-fills ``b`` wherever it has no observation.
    """
    if fill == "drop":
        common, ia, ib = np.intersect1d(a.dates, b.dates, assume_unique=True, return_indices=True)
        if common.size == 0:
            raise EmptyIntersection("series share no dates")
        return (
            DatedSeries(common, a.values[ia], a.name),
            DatedSeries(common, b.values[ib], b.name),
        )
    if fill == "zero":
        values = np.zeros(len(a))
        _, ia, ib = np.intersect1d(a.dates, b.dates, assume_unique=True, return_indices=True)
        values[ia] = b.values[ib]
        return a, DatedSeries(a.dates, values, b.name)
    raise ValueError(f"unknown fill mode {fill!r}")
