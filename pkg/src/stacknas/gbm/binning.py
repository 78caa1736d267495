"""Per-feature binning shared by exact and histogram split search.

Both modes reduce a feature column to integer codes so the same kernel
handles them. In exact mode every distinct training value is its own bin
and a split between two occupied bins sits at the midpoint of their
values. In histogram mode bins are bounded by equal-frequency edges and a
split sits on the edge just above the left bin.
"""
from __future__ import annotations

import numpy as np


class Binning:
    def __init__(self, mode: str, tables: list[np.ndarray]):
        if mode not in ("exact", "hist"):
            raise ValueError(f"unknown binning mode {mode!r}")
        self.mode = mode
        self.tables = [np.asarray(t, dtype=np.float64) for t in tables]
        if mode == "exact":
            self.n_bins = np.array([max(1, len(t)) for t in self.tables], dtype=np.int32)
        else:
            self.n_bins = np.array([len(t) + 1 for t in self.tables], dtype=np.int32)
        width = max(1, max((len(t) for t in self.tables), default=1))
        self._padded = np.zeros((len(self.tables), width))
        for f, t in enumerate(self.tables):
            self._padded[f, : len(t)] = t

    @classmethod
    def fit(cls, X: np.ndarray, n_bins="exact") -> "Binning":
        X = np.asarray(X, dtype=np.float64)
        if n_bins == "exact":
            return cls("exact", [np.unique(X[:, f]) for f in range(X.shape[1])])
        return cls("hist", [equal_frequency_edges(X[:, f], int(n_bins)) for f in range(X.shape[1])])

    def transform(self, X: np.ndarray) -> np.ndarray:
        """Feature-major int32 codes of shape ``(d, n)``."""
        X = np.asarray(X, dtype=np.float64)
        codes = np.empty((X.shape[1], X.shape[0]), dtype=np.int32)
        for f, t in enumerate(self.tables):
            # exact: index of the value; hist: number of edges strictly below x
            codes[f] = np.searchsorted(t, X[:, f], side="left")
        if self.mode == "exact":
            np.minimum(codes, self.n_bins[:, None] - 1, out=codes)
        return codes

    def thresholds(self, feature: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """Real-valued thresholds for split nodes given occupied-bin bounds."""
        out = np.zeros(len(feature))
        split = feature >= 0
        f, a, b = feature[split], lo[split], hi[split]
        if self.mode == "exact":
            out[split] = (self._padded[f, a] + self._padded[f, b]) / 2.0
        else:
            out[split] = self._padded[f, a]
        return out


def equal_frequency_edges(x: np.ndarray, n_bins: int) -> np.ndarray:
    """At most ``n_bins - 1`` edges splitting ``x`` into roughly equal-count bins.

    Each edge is placed midway between two consecutive distinct values, so
    no training value sits on an edge. With no more distinct values than
    bins, every gap gets an edge.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    distinct = np.unique(x)
    if len(distinct) <= 1:
        return np.zeros(0)
    mids = (distinct[:-1] + distinct[1:]) / 2.0
    if len(distinct) <= n_bins:
        return mids
    q = np.quantile(x, np.arange(1, n_bins) / n_bins)
    idx = np.searchsorted(distinct, q, side="right") - 1
    idx = np.clip(idx, 0, len(distinct) - 2)
    return np.unique(mids[idx])
