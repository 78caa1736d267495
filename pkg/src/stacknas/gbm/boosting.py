"""Gradient boosting with squared-error or Huber loss."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields, replace

import numpy as np

from ..errors import ConfigError, DataError
from .binning import Binning
from .tree import RegressionTree, grow_tree

LOSSES = ("squared_error", "huber")


@dataclass(frozen=True)
class GBMConfig:
    name: str = "gbm"
    loss: str = "squared_error"
    huber_delta: float = 1.0
    learning_rate: float = 0.1
    n_iterations: int = 100
    max_depth: int = 3
    min_samples_leaf: int = 1
    subsample: float = 1.0
    n_bins: int | str = "exact"
    seed: int = 0

    def __post_init__(self):
        def bad(field, why):
            raise ConfigError(f"{self.name}: {field} {why}, got {getattr(self, field)!r}", field=field)

        if self.loss not in LOSSES:
            bad("loss", f"must be one of {LOSSES}")
        if not (isinstance(self.huber_delta, (int, float)) and self.huber_delta > 0):
            bad("huber_delta", "must be > 0")
        if not (isinstance(self.learning_rate, (int, float)) and 0 < self.learning_rate <= 1):
            bad("learning_rate", "must be in (0, 1]")
        for name in ("n_iterations", "max_depth", "min_samples_leaf"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                bad(name, "must be a positive integer")
        if not (isinstance(self.subsample, (int, float)) and 0 < self.subsample <= 1):
            bad("subsample", "must be in (0, 1]")
        if self.n_bins != "exact":
            if isinstance(self.n_bins, bool) or not isinstance(self.n_bins, int) or self.n_bins < 2:
                bad("n_bins", 'must be an integer >= 2 or "exact"')
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not (0 <= self.seed < 2**64):
            bad("seed", "must be a 64-bit non-negative integer")

    def with_overrides(self, **overrides) -> "GBMConfig":
        known = {f.name for f in fields(self)}
        for key in overrides:
            if key not in known:
                raise ConfigError(f"{self.name}: unknown field {key!r}", field=key)
        return replace(self, **overrides)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "GBMConfig":
        return cls().with_overrides(**d)


def negative_gradient(loss, y, pred, delta=1.0):
    """Pseudo-residuals: ``y - pred`` for squared error, clipped at ``delta`` for Huber."""
    r = np.asarray(y, dtype=np.float64) - np.asarray(pred, dtype=np.float64)
    if loss == "squared_error":
        return r
    if loss == "huber":
        return np.clip(r, -delta, delta)
    raise ConfigError(f"unknown loss {loss!r}", field="loss")


@dataclass
class GBMModel:
    base_prediction: float
    trees: list[RegressionTree]
    learning_rate: float
    config: GBMConfig
    n_features: int

    def _check(self, X):
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DataError(
                f"model expects {self.n_features} feature columns, got {X.shape[1] if X.ndim == 2 else X.shape}"
            )
        return X

    def predict(self, X, backend=None) -> np.ndarray:
        X = self._check(X)
        out = np.full(X.shape[0], self.base_prediction)
        for tree in self.trees:
            tree.add_to(X, self.learning_rate, out, backend)
        return out

    def staged_predict(self, X, backend=None):
        """Yield predictions after 0, 1, ..., len(trees) trees."""
        X = self._check(X)
        out = np.full(X.shape[0], self.base_prediction)
        yield out.copy()
        for tree in self.trees:
            tree.add_to(X, self.learning_rate, out, backend)
            yield out.copy()

    def to_dict(self) -> dict:
        return {
            "base_prediction": self.base_prediction,
            "learning_rate": self.learning_rate,
            "n_features": self.n_features,
            "config": self.config.to_dict(),
            "trees": [t.to_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GBMModel":
        return cls(
            base_prediction=float(d["base_prediction"]),
            trees=[RegressionTree.from_dict(t) for t in d["trees"]],
            learning_rate=float(d["learning_rate"]),
            config=GBMConfig.from_dict(d["config"]),
            n_features=int(d["n_features"]),
        )


def gbm_fit(X, z, cfg: GBMConfig, backend=None) -> GBMModel:
    """Boost ``cfg.n_iterations`` trees on the pseudo-residuals of ``z``.

    Rows for each tree are drawn without replacement (``ceil(subsample * n)``
    of them) from a generator seeded by ``cfg.seed``; bins are computed once
    from ``X``.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if X.ndim != 2 or z.shape != (X.shape[0],):
        raise DataError("X must be (n, d) and z length n")
    n = X.shape[0]
    if n < 2:
        raise DataError("need at least 2 rows to fit")
    if not np.all(np.isfinite(z)):
        raise DataError("targets must be finite")

    base = float(np.median(z)) if cfg.loss == "huber" else float(np.mean(z))
    binning = Binning.fit(X, cfg.n_bins)
    codes = binning.transform(X)
    rng = np.random.default_rng(cfg.seed)
    n_rows = max(1, math.ceil(cfg.subsample * n))
    all_rows = np.arange(n, dtype=np.int64)

    pred = np.full(n, base)
    trees = []
    for _ in range(cfg.n_iterations):
        if n_rows < n:
            rows = np.sort(rng.choice(n, size=n_rows, replace=False)).astype(np.int64)
        else:
            rows = all_rows
        grad = negative_gradient(cfg.loss, z, pred, cfg.huber_delta)
        tree = grow_tree(codes, binning, grad, rows, cfg.max_depth, cfg.min_samples_leaf, backend)
        tree.add_to(X, cfg.learning_rate, pred, backend)
        trees.append(tree)
    return GBMModel(base, trees, cfg.learning_rate, cfg, X.shape[1])


def gbm_predict(model: GBMModel, X, backend=None) -> np.ndarray:
    return model.predict(X, backend)
