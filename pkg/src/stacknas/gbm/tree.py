"""Least-squares regression trees grown greedily on binned features."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _backend
from ..errors import DataError
from .binning import Binning


@dataclass(frozen=True)
class RegressionTree:
    """Flat node arrays; leaves have ``feature == -1``."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    n_samples: np.ndarray
    gain: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    @property
    def n_leaves(self) -> int:
        return int((self.feature < 0).sum())

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.int64)
        for node in range(self.n_nodes):
            if self.feature[node] >= 0:
                depth[self.left[node]] = depth[self.right[node]] = depth[node] + 1
        return int(depth.max())

    def apply(self, X: np.ndarray) -> np.ndarray:
        """Leaf index reached by every row of ``X``."""
        X = np.asarray(X, dtype=np.float64)
        node = np.zeros(X.shape[0], dtype=np.int64)
        for _ in range(self.n_nodes):
            f = self.feature[node]
            inner = f >= 0
            if not inner.any():
                break
            rows = np.flatnonzero(inner)
            cur = node[rows]
            go_left = X[rows, f[rows]] <= self.threshold[cur]
            node[rows] = np.where(go_left, self.left[cur], self.right[cur])
        return node

    def predict(self, X: np.ndarray, backend=None) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        out = np.zeros(X.shape[0])
        self.add_to(X, 1.0, out, backend)
        return out

    def add_to(self, X: np.ndarray, scale: float, out: np.ndarray, backend=None) -> None:
        """``out += scale * tree(X)`` in place; ``X`` must be C-contiguous float64."""
        k = _backend.get_kernels(backend)
        k.predict_tree(X, self.feature, self.threshold, self.left, self.right, self.value, scale, out)

    def to_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
            "n_samples": self.n_samples.tolist(),
            "gain": self.gain.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RegressionTree":
        return cls(
            feature=np.asarray(d["feature"], dtype=np.int32),
            threshold=np.asarray(d["threshold"], dtype=np.float64),
            left=np.asarray(d["left"], dtype=np.int32),
            right=np.asarray(d["right"], dtype=np.int32),
            value=np.asarray(d["value"], dtype=np.float64),
            n_samples=np.asarray(d["n_samples"], dtype=np.int64),
            gain=np.asarray(d["gain"], dtype=np.float64),
        )


def grow_tree(codes, binning: Binning, targets, rows, max_depth, min_samples_leaf, backend=None) -> RegressionTree:
    """Kernel call plus threshold resolution; inputs assumed validated."""
    k = _backend.get_kernels(backend)
    feature, lo, hi, left, right, value, count, gain = k.build_tree(
        codes, binning.n_bins, targets, rows, int(max_depth), int(min_samples_leaf)
    )
    threshold = binning.thresholds(feature, lo, hi)
    return RegressionTree(feature, threshold, left, right, value, count, gain)


def fit_tree(X, targets, row_subset=None, cfg=None, binning: Binning | None = None, backend=None) -> RegressionTree:
    """Fit one tree to ``targets`` on the rows in ``row_subset``.

    Split candidates come from ``binning`` (fitted on all of ``X`` when not
    given, using ``cfg.n_bins``). The best split maximises the drop in the
    sum of squared deviations; equal gains go to the lowest feature index,
    then the lowest threshold.
    """
    from .boosting import GBMConfig

    cfg = cfg or GBMConfig()
    X = np.asarray(X, dtype=np.float64)
    targets = np.asarray(targets, dtype=np.float64)
    if X.ndim != 2 or targets.shape != (X.shape[0],):
        raise DataError("X must be (n, d) and targets length n")
    rows = np.arange(X.shape[0]) if row_subset is None else np.sort(np.asarray(row_subset, dtype=np.int64))
    if rows.size == 0:
        raise DataError("row subset is empty")
    if not np.all(np.isfinite(targets[rows])):
        raise DataError("targets must be finite")
    if binning is None:
        binning = Binning.fit(X, cfg.n_bins)
    codes = binning.transform(X)
    return grow_tree(codes, binning, targets, rows.astype(np.int64), cfg.max_depth, cfg.min_samples_leaf, backend)
