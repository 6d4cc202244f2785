"""Binary RBF-kernel SVM trained by sequential minimal optimization.

The solver is the simplified SMO scheme (random choice of the second
multiplier). Once random passes stop making progress, a polish phase steps
on the maximal violating pair until the feasible interval for the bias is
at most ``2 tol`` wide, and the bias is set to that interval's midpoint, so a
returned model satisfies the KKT conditions within ``tol``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyGrid, MissingInput, NonFiniteFeature, SingleClass, TooFewRows
from .rng import SplitMix64

SMO_STREAM = 2
FOLD_STREAM = 3
DEFAULT_C_GRID = (0.1, 1.0, 10.0, 100.0)
DEFAULT_GAMMA_GRID = (0.001, 0.01, 0.1, 1.0)

# smallest multiplier change (relative to C) that counts as a step
_STEP_EPS = 1e-9


@dataclass(frozen=True)
class SvmConfig:
    C: float = 1.0
    gamma: float = 0.1
    tol: float = 1e-3
    max_passes: int = 10
    seed: int = 0
    max_iter: int = 10_000

    def __post_init__(self):
        for name in ("C", "gamma", "tol", "max_passes", "max_iter"):
            if not getattr(self, name) > 0:
                raise ValueError(f"SvmConfig.{name} must be positive")


def rbf_kernel(u, v, gamma: float) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise DimensionMismatch(f"vectors of shape {u.shape} and {v.shape}")
    d = u - v
    return math.exp(-gamma * float(d @ d))


def rbf_gram(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    B = np.atleast_2d(np.asarray(B, dtype=np.float64))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatch(f"feature dimensions {A.shape[1]} and {B.shape[1]} differ")
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True, eq=False)
class TrainedModel:
    support_vectors: np.ndarray
    dual_coef: np.ndarray
    bias: float
    config: SvmConfig
    feature_names: tuple = ()
    normalization: dict | None = None
    n_train: int = 0

    @property
    def alphas(self) -> np.ndarray:
        return np.abs(self.dual_coef)

    def dual_objective(self) -> float:
        K = rbf_gram(self.support_vectors, self.support_vectors, self.config.gamma)
        return float(self.alphas.sum() - 0.5 * self.dual_coef @ K @ self.dual_coef)

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "feature_names": list(self.feature_names),
            "normalization": self.normalization,
            "support_vectors": self.support_vectors.tolist(),
            "dual_coef": self.dual_coef.tolist(),
            "bias": self.bias,
            "n_train": self.n_train,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def from_dict(cls, d: dict) -> "TrainedModel":
        sv = np.asarray(d["support_vectors"], dtype=np.float64)
        names = tuple(d.get("feature_names", ()))
        return cls(
            sv.reshape(len(sv), -1) if sv.size else np.zeros((0, len(names))),
            np.asarray(d["dual_coef"], dtype=np.float64),
            float(d["bias"]),
            SvmConfig(**d["config"]),
            names,
            d.get("normalization"),
            int(d.get("n_train", 0)),
        )

    @classmethod
    def load(cls, path) -> "TrainedModel":
        p = Path(path)
        if not p.is_file():
            raise MissingInput(f"model file not found: {p}")
        return cls.from_dict(json.loads(p.read_text(encoding="utf-8")))


def _check_training_data(X, y) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or y.ndim != 1 or len(X) != len(y):
        raise DimensionMismatch("features must be (n, d) with n labels")
    if not np.all(np.isfinite(X)):
        raise NonFiniteFeature("features contain NaN or infinity")
    if not np.all((y == 1) | (y == -1)):
        raise ValueError("labels must be +1 or -1")
    if len(np.unique(y)) < 2:
        raise SingleClass("training data contains a single class")
    return X, y.astype(np.float64)


class _Smo:
    def __init__(self, K: np.ndarray, y: np.ndarray, C: float, tol: float):
        self.K = K
        self.y = y
        self.C = C
        self.tol = tol
        self.n = len(y)
        self.alpha = np.zeros(self.n)
        self.b = 0.0
        self.f = np.zeros(self.n)

    def violates(self, i: int) -> bool:
        r = self.y[i] * self.f[i] - 1.0
        a = self.alpha[i]
        return (r < -self.tol and a < self.C) or (r > self.tol and a > 0)

    def violators(self) -> np.ndarray:
        r = self.y * self.f - 1.0
        return np.flatnonzero(((r < -self.tol) & (self.alpha < self.C)) | ((r > self.tol) & (self.alpha > 0)))

    def _snap(self, a: float) -> float:
        # rounding must not leave a bound multiplier looking free
        eps = 10 * _STEP_EPS * self.C
        if a < eps:
            return 0.0
        if a > self.C - eps:
            return self.C
        return a

    def step(self, i: int, j: int) -> bool:
        if i == j:
            return False
        K, y, C = self.K, self.y, self.C
        ai, aj = self.alpha[i], self.alpha[j]
        yi, yj = y[i], y[j]
        ei = self.f[i] - yi
        ej = self.f[j] - yj
        if yi != yj:
            lo, hi = max(0.0, aj - ai), min(C, C + aj - ai)
        else:
            lo, hi = max(0.0, ai + aj - C), min(C, ai + aj)
        if hi - lo <= 0:
            return False
        eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
        if eta >= 0:
            return False
        aj_new = min(hi, max(lo, aj - yj * (ei - ej) / eta))
        if abs(aj_new - aj) < _STEP_EPS * C:
            return False
        ai_new = self._snap(ai + yi * yj * (aj - aj_new))
        aj_new = self._snap(aj_new)
        di, dj = ai_new - ai, aj_new - aj
        b1 = self.b - ei - yi * di * K[i, i] - yj * dj * K[i, j]
        b2 = self.b - ej - yi * di * K[i, j] - yj * dj * K[j, j]
        if 0 < ai_new < C:
            b_new = b1
        elif 0 < aj_new < C:
            b_new = b2
        else:
            b_new = 0.5 * (b1 + b2)
        self.f += yi * di * K[:, i] + yj * dj * K[:, j] + (b_new - self.b)
        self.alpha[i], self.alpha[j] = ai_new, aj_new
        self.b = b_new
        return True

    def run(self, rng: SplitMix64, max_passes: int, max_iter: int) -> None:
        n = self.n
        passes = it = 0
        while passes < max_passes and it < max_iter:
            changed = 0
            candidates = self.violators()
            draws = rng.integers(n - 1, len(candidates)) if len(candidates) else ()
            for i, r in zip(candidates, draws):
                if not self.violates(i):
                    continue
                j = r + (r >= i)
                changed += self.step(int(i), int(j))
            passes = passes + 1 if changed == 0 else 0
            it += 1
        self._polish(100 * n)

    def _bias_bounds(self) -> tuple[float, float, int, int]:
        """Feasible interval [lo, hi] for b given the multipliers, with its arg-extremes."""
        g = self.f - self.b
        target = self.y - g  # b making y_i f_i = 1 exactly
        free = (self.alpha > 0) & (self.alpha < self.C)
        at_zero = self.alpha == 0
        at_c = self.alpha == self.C
        pos = self.y > 0
        lower = free | (at_zero & pos) | (at_c & ~pos)
        upper = free | (at_zero & ~pos) | (at_c & pos)
        lo_vals = np.where(lower, target, -np.inf)
        hi_vals = np.where(upper, target, np.inf)
        i_lo, i_hi = int(np.argmax(lo_vals)), int(np.argmin(hi_vals))
        return float(lo_vals[i_lo]), float(hi_vals[i_hi]), i_lo, i_hi

    def _polish(self, max_steps: int) -> None:
        # maximal-violating-pair steps until the bias interval is (almost) non-empty
        for _ in range(max_steps):
            lo, hi, i, j = self._bias_bounds()
            if lo - hi <= 2.0 * self.tol or not self.step(i, j):
                break
        lo, hi, _, _ = self._bias_bounds()
        if np.isfinite(lo) and np.isfinite(hi):
            b_new = 0.5 * (lo + hi)
        else:
            b_new = lo if np.isfinite(lo) else hi
        self.f += b_new - self.b
        self.b = b_new


def train(X, y, config: SvmConfig | None = None, feature_names: Sequence[str] = (), normalization=None) -> TrainedModel:
    """Fit the dual SVM on ``X`` with labels in {+1, -1}; deterministic given ``config.seed``."""
    cfg = config or SvmConfig()
    X, yf = _check_training_data(X, y)
    K = rbf_gram(X, X, cfg.gamma)
    np.fill_diagonal(K, 1.0)
    smo = _Smo(K, yf, cfg.C, cfg.tol)
    smo.run(SplitMix64(cfg.seed, SMO_STREAM), cfg.max_passes, cfg.max_iter)
    sv = smo.alpha > 0
    return TrainedModel(
        support_vectors=X[sv].copy(),
        dual_coef=(smo.alpha * yf)[sv],
        bias=float(smo.b),
        config=cfg,
        feature_names=tuple(feature_names),
        normalization=normalization,
        n_train=len(yf),
    )


def decision_values(model: TrainedModel, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if model.support_vectors.shape[0] and X.shape[1] != model.support_vectors.shape[1]:
        raise DimensionMismatch(
            f"model expects {model.support_vectors.shape[1]} features, got {X.shape[1]}"
        )
    if len(model.dual_coef) == 0:
        return np.full(len(X), model.bias)
    return rbf_gram(X, model.support_vectors, model.config.gamma) @ model.dual_coef + model.bias


def decision_value(model: TrainedModel, row) -> float:
    return float(decision_values(model, np.asarray(row, dtype=np.float64)[None, :])[0])


def predict_many(model: TrainedModel, X) -> np.ndarray:
    """Sign of the decision function; an exact zero maps to -1."""
    return np.where(decision_values(model, X) > 0, 1, -1)


def predict(model: TrainedModel, row) -> int:
    return 1 if decision_value(model, row) > 0 else -1


def kkt_violation(model: TrainedModel, X, y) -> float:
    """Largest KKT violation over the training set (0 when all conditions hold)."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    f = decision_values(model, X)
    r = y * f - 1.0
    alpha = np.zeros(len(y))
    index = {row.tobytes(): k for k, row in enumerate(model.support_vectors)}
    for i, row in enumerate(X):
        k = index.get(row.tobytes())
        if k is not None:
            alpha[i] = abs(model.dual_coef[k])
    C = model.config.C
    worst = np.where(alpha < C, np.maximum(-r, 0.0), 0.0)
    worst = np.maximum(worst, np.where(alpha > 0, np.maximum(r, 0.0), 0.0))
    return float(worst.max())


@dataclass(frozen=True)
class GridSearchResult:
    best: SvmConfig
    scores: dict = field(default_factory=dict)

    def rows(self) -> list[dict]:
        return [{"C": c, "gamma": g, "cv_accuracy": acc} for (c, g), acc in self.scores.items()]


def kfold_indices(n: int, folds: int, seed: int) -> list[np.ndarray]:
    perm = SplitMix64(seed, FOLD_STREAM).permutation(n)
    return [np.sort(part) for part in np.array_split(perm, folds)]


def grid_search(
    X,
    y,
    C_grid: Sequence[float] = DEFAULT_C_GRID,
    gamma_grid: Sequence[float] = DEFAULT_GAMMA_GRID,
    folds: int = 5,
    seed: int = 0,
    base: SvmConfig | None = None,
) -> GridSearchResult:
    """k-fold cross-validated accuracy per (C, gamma); ties prefer smaller C, then smaller gamma."""
    if not C_grid or not gamma_grid:
        raise EmptyGrid("grid search needs at least one C and one gamma")
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if len(y) < max(2 * folds, 4):
        raise TooFewRows(f"{len(y)} rows are too few for {folds}-fold cross-validation")
    base = base or SvmConfig(seed=seed)
    parts = kfold_indices(len(y), folds, seed)
    scores: dict = {}
    best_key, best_correct = None, -1
    for C in sorted(C_grid):
        for gamma in sorted(gamma_grid):
            cfg = SvmConfig(C, gamma, base.tol, base.max_passes, base.seed, base.max_iter)
            correct = 0
            for k, test_idx in enumerate(parts):
                train_idx = np.concatenate([p for m, p in enumerate(parts) if m != k])
                ytr = y[train_idx]
                if len(np.unique(ytr)) < 2:
                    pred = np.full(len(test_idx), ytr[0])
                else:
                    pred = predict_many(train(X[train_idx], ytr, cfg), X[test_idx])
                correct += int(np.sum(pred == y[test_idx]))
            scores[(C, gamma)] = correct / len(y)
            if correct > best_correct:
                best_key, best_correct = (C, gamma), correct
    C, gamma = best_key
    return GridSearchResult(SvmConfig(C, gamma, base.tol, base.max_passes, base.seed, base.max_iter), scores)


@dataclass(frozen=True)
class EvalReport:
    accuracy: float
    f1_up: float
    f1_down: float
    tp: int
    fp: int
    tn: int
    fn: int
    n_test: int

    def to_dict(self) -> dict:
        return asdict(self)


def _f1(tp: int, fp: int, fn: int) -> float:
    if tp + fp == 0 or tp + fn == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def evaluate_predictions(y_true, y_pred) -> EvalReport:
    """Accuracy and per-class F1; the up class is +1 (tp counts correct +1 calls)."""
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    tp = int(np.sum((p == 1) & (t == 1)))
    fp = int(np.sum((p == 1) & (t == -1)))
    tn = int(np.sum((p == -1) & (t == -1)))
    fn = int(np.sum((p == -1) & (t == 1)))
    n = len(t)
    return EvalReport(
        accuracy=(tp + tn) / n if n else 0.0,
        f1_up=_f1(tp, fp, fn),
        f1_down=_f1(tn, fn, fp),
        tp=tp, fp=fp, tn=tn, fn=fn, n_test=n,
    )


def evaluate(model: TrainedModel, X, y) -> EvalReport:
    return evaluate_predictions(y, predict_many(model, X))
