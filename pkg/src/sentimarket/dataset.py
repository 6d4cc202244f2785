"""Labeled, normalized datasets for the four feature scenarios."""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Literal, Sequence

import numpy as np

from .errors import MissingColumn, MissingInput, MissingSignals, NoOverlappingDates, TooFewRows, TooShort
from .indicators import IndicatorMatrix
from .ingest import EMOTIONS, PriceSeries
from .rng import SplitMix64
from .sentiment import DailySignal, signal_matrix

SCENARIOS = ("baseline", "all+attitude+emotion", "all+emotion", "filtering+emotion")
SPLIT_STREAM = 1
MIN_ROWS = 10

Scope = Literal["train", "all"]


def scenario_signal_columns(scenario: str) -> tuple[str, ...]:
    if scenario == "baseline":
        return ()
    if scenario == "all+attitude+emotion":
        return ("attitude",) + EMOTIONS
    if scenario in ("all+emotion", "filtering+emotion"):
        return EMOTIONS
    raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")


def label_horizon(prices: PriceSeries, n: int = 5) -> tuple[np.ndarray, np.ndarray]:
    """+1 when the adjusted close ``n`` bars ahead is strictly higher, else -1.

    The last ``n`` bars have no label and are dropped.
    """
    if n < 1:
        raise ValueError("horizon must be positive")
    if len(prices) <= n:
        raise TooShort(f"need more than {n} bars to label a {n}-day horizon")
    c = prices.adj_close
    labels = np.where(c[n:] > c[:-n], 1, -1).astype(np.int64)
    return prices.dates[:-n], labels


@dataclass(frozen=True, eq=False)
class Dataset:
    feature_names: tuple
    dates: np.ndarray
    X: np.ndarray
    y: np.ndarray
    split: np.ndarray | None = None
    stats: dict | None = None
    config: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.y)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        same_split = (self.split is None and other.split is None) or (
            self.split is not None and other.split is not None and np.array_equal(self.split, other.split)
        )
        return (
            self.feature_names == other.feature_names
            and np.array_equal(self.dates, other.dates)
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and same_split
            and self.stats == other.stats
        )

    def subset(self, part: str) -> tuple[np.ndarray, np.ndarray]:
        if self.split is None:
            raise ValueError("dataset has not been split")
        mask = self.split == part
        return self.X[mask], self.y[mask]

    def to_csv(self, path) -> Path:
        """Write rows to ``path`` and stats/config to a sidecar ``.json``; returns the sidecar path."""
        path = Path(path)
        path.write_text(self.to_csv_text(), encoding="utf-8")
        sidecar = path.with_suffix(".json")
        sidecar.write_text(json.dumps(self.sidecar(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return sidecar

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["date", *self.feature_names, "label", "split"])
        for i in range(len(self)):
            split = "" if self.split is None else self.split[i]
            w.writerow([str(self.dates[i]), *(repr(float(v)) for v in self.X[i]), int(self.y[i]), split])
        return buf.getvalue()

    def sidecar(self) -> dict:
        return {"feature_names": list(self.feature_names), "normalization": self.stats, "config": self.config}


def load_dataset(path) -> Dataset:
    path = Path(path)
    if not path.is_file():
        raise MissingInput(f"dataset not found: {path}")
    sidecar = path.with_suffix(".json")
    meta = json.loads(sidecar.read_text(encoding="utf-8")) if sidecar.is_file() else {}
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if header[0] != "date" or header[-2:] != ["label", "split"]:
        raise MissingColumn("dataset CSV must be 'date,<features>,label,split'")
    names = tuple(header[1:-2])
    body = rows[1:]
    dates = np.array([r[0] for r in body], dtype="datetime64[D]")
    X = np.array([[float(v) for v in r[1:-2]] for r in body], dtype=np.float64).reshape(len(body), len(names))
    y = np.array([int(r[-2]) for r in body], dtype=np.int64)
    split_col = [r[-1] for r in body]
    split = np.array(split_col) if any(split_col) else None
    return Dataset(names, dates, X, y, split, meta.get("normalization"), meta.get("config", {}))


def assemble(
    indicators: IndicatorMatrix,
    signals: Sequence[DailySignal] | None,
    scenario: str,
    labels: tuple[np.ndarray, np.ndarray],
) -> Dataset:
    """Join valid indicator rows, labels and (zero-filled) sentiment on date."""
    sig_cols = scenario_signal_columns(scenario)
    if sig_cols and signals is None:
        raise MissingSignals(f"scenario {scenario!r} needs sentiment signals")

    ind_dates, ind_values = indicators.valid_rows()
    label_dates, label_values = labels
    order = np.argsort(label_dates, kind="stable")
    label_dates, label_values = np.asarray(label_dates)[order], np.asarray(label_values)[order]
    common, ii, il = np.intersect1d(ind_dates, label_dates, assume_unique=True, return_indices=True)
    if common.size == 0:
        raise NoOverlappingDates("no date has both valid indicators and a label")
    X = ind_values[ii]
    names = tuple(indicators.names)

    if sig_cols:
        sig_dates, sig_values = signal_matrix(sorted(signals, key=lambda s: s.date))
        all_cols = ("attitude",) + EMOTIONS
        take = [all_cols.index(c) for c in sig_cols]
        extra = np.zeros((len(common), len(sig_cols)))
        _, ic, is_ = np.intersect1d(common, sig_dates, assume_unique=True, return_indices=True)
        extra[ic] = sig_values[is_][:, take]
        X = np.hstack([X, extra])
        names = names + sig_cols

    return Dataset(names, common, X, label_values[il].astype(np.int64), config={"scenario": scenario})


def split(ds: Dataset, train_fraction: float = 2 / 3, seed: int = 0, method: str = "random") -> Dataset:
    """Assign rows to train/test; ``random`` draws without replacement from the seeded generator."""
    n = len(ds)
    if n < MIN_ROWS:
        raise TooFewRows(f"need at least {MIN_ROWS} rows to split, got {n}")
    if not 0 < train_fraction < 1:
        raise ValueError("train_fraction must be in (0, 1)")
    n_train = int(round(n * train_fraction))
    assignment = np.full(n, "test", dtype="<U5")
    if method == "random":
        perm = SplitMix64(seed, SPLIT_STREAM).permutation(n)
        assignment[perm[:n_train]] = "train"
    elif method == "chronological":
        assignment[:n_train] = "train"
    else:
        raise ValueError(f"unknown split method {method!r}")
    config = dict(ds.config, seed=seed, train_fraction=train_fraction, split_method=method)
    return replace(ds, split=assignment, config=config)


def fit_stats(X: np.ndarray, names: Sequence[str]) -> dict:
    mean = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1) if len(X) > 1 else np.zeros(X.shape[1])
    # exact constants can leave rounding noise in sd
    sd = np.where(np.ptp(X, axis=0) == 0, 0.0, sd) if len(X) else sd
    return {name: {"mean": float(m), "sd": float(s)} for name, m, s in zip(names, mean, sd)}


def apply_stats(X: np.ndarray, names: Sequence[str], stats: dict) -> np.ndarray:
    """Standardize columns with stored stats; zero-variance columns map to zero."""
    X = np.asarray(X, dtype=np.float64)
    out = np.zeros_like(X)
    for j, name in enumerate(names):
        m, s = stats[name]["mean"], stats[name]["sd"]
        if s > 0:
            out[:, j] = (X[:, j] - m) / s
    return out


def normalize(ds: Dataset, scope: Scope = "train") -> Dataset:
    """Per-feature z-scoring (sample standard deviation).

    ``scope="train"`` fits on training rows and applies to all rows;
    ``scope="all"`` fits on every row.
    """
    if scope == "train":
        if ds.split is None:
            raise ValueError("normalize(scope='train') requires a split dataset")
        fit_rows = ds.X[ds.split == "train"]
    elif scope == "all":
        fit_rows = ds.X
    else:
        raise ValueError(f"unknown normalization scope {scope!r}")
    stats = fit_stats(fit_rows, ds.feature_names)
    flat = [name for name in ds.feature_names if not stats[name]["sd"] > 0]
    if flat:
        warnings.warn(f"zero-variance features set to 0: {flat}", RuntimeWarning, stacklevel=2)
    X = apply_stats(ds.X, ds.feature_names, stats)
    return replace(ds, X=X, stats=stats, config=dict(ds.config, scope=scope))
