"""Kendall rank correlation (tau-b / tau-a), MultiRMSE and per-task reports."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .errors import DataError, MetricUndefinedError


@dataclass(frozen=True)
class PairCounts:
    """Integer pair statistics underlying Kendall's tau."""

    n: int
    concordant: int
    discordant: int
    ties_a: int  # pairs tied in a (including joint ties)
    ties_b: int
    ties_both: int

    @property
    def n_pairs(self) -> int:
        return self.n * (self.n - 1) // 2


def _pairs_in_groups(sorted_vals) -> int:
    if len(sorted_vals) == 0:
        return 0
    change = np.flatnonzero(np.diff(sorted_vals) != 0)
    sizes = np.diff(np.concatenate([[0], change + 1, [len(sorted_vals)]]))
    return int((sizes * (sizes - 1) // 2).sum())


def _validate(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or a.shape != b.shape:
        raise DataError("inputs must be 1-D vectors of equal length")
    if len(a) < 2:
        raise DataError("need at least 2 observations")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DataError("inputs must be finite")
    return a, b


def pair_counts(a, b, backend=None) -> PairCounts:
    """O(n log n) pair counts: sort by (a, b), then count inversions of b."""
    a, b = _validate(a, b)
    n = len(a)
    order = np.lexsort((b, a))
    a_s, b_s = a[order], b[order]
    ties_a = _pairs_in_groups(a_s)
    joint = np.flatnonzero((np.diff(a_s) != 0) | (np.diff(b_s) != 0))
    sizes = np.diff(np.concatenate([[0], joint + 1, [n]]))
    ties_both = int((sizes * (sizes - 1) // 2).sum())
    ties_b = _pairs_in_groups(np.sort(b))
    # dense integer ranks of b keep the kernel in integer arithmetic
    b_rank = np.unique(b_s, return_inverse=True)[1].astype(np.int64)
    discordant = _backend.get_kernels(backend).count_inversions(np.ascontiguousarray(b_rank))
    total = n * (n - 1) // 2
    concordant = total - ties_a - ties_b + ties_both - discordant
    return PairCounts(n, concordant, discordant, ties_a, ties_b, ties_both)


def pair_counts_bruteforce(a, b) -> PairCounts:
    """O(n^2) reference enumeration of all pairs."""
    a, b = _validate(a, b)
    n = len(a)
    c = d = ta = tb = tab = 0
    for i in range(n - 1):
        sa = np.sign(a[i + 1:] - a[i])
        sb = np.sign(b[i + 1:] - b[i])
        prod = sa * sb
        c += int((prod > 0).sum())
        d += int((prod < 0).sum())
        za = sa == 0
        zb = sb == 0
        ta += int(za.sum())
        tb += int(zb.sum())
        tab += int((za & zb).sum())
    return PairCounts(n, c, d, ta, tb, tab)


def tau_from_counts(counts: PairCounts, variant: str = "b") -> float:
    num = counts.concordant - counts.discordant
    n0 = counts.n_pairs
    if variant == "a":
        return num / n0
    if variant != "b":
        raise ValueError(f"unknown tau variant {variant!r}")
    da = n0 - counts.ties_a
    db = n0 - counts.ties_b
    if da == 0 or db == 0:
        raise MetricUndefinedError("tau-b undefined: one input is entirely tied")
    return num / math.sqrt(da * db)


def kendall_tau_b(a, b, backend=None) -> float:
    return tau_from_counts(pair_counts(a, b, backend), "b")


def kendall_tau(a, b, variant: str = "b", backend=None) -> float:
    return tau_from_counts(pair_counts(a, b, backend), variant)


def multi_rmse(pred, target, weights=None) -> float:
    """Weighted root mean squared error summed over output dimensions."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.ndim == 1:
        pred = pred[:, None]
    if target.ndim == 1:
        target = target[:, None]
    if pred.shape != target.shape:
        raise DataError(f"shape mismatch {pred.shape} vs {target.shape}")
    w = np.ones(pred.shape[0]) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != (pred.shape[0],):
        raise DataError("one weight per row required")
    if np.any(w < 0):
        raise DataError("weights must be non-negative")
    total = w.sum()
    if not total > 0:
        raise DataError("total weight must be positive")
    per_row = ((pred - target) ** 2).sum(axis=1)
    return math.sqrt(float(per_row @ w) / total)


@dataclass
class TaskScore:
    task_id: str
    n: int
    tau: float


@dataclass
class TaskReport:
    tasks: list[TaskScore] = field(default_factory=list)
    variant: str = "b"

    @property
    def mean_tau(self) -> float:
        return float(np.mean([t.tau for t in self.tasks]))

    def to_text(self) -> str:
        lines = ["task\tn\ttau"]
        lines += [f"{t.task_id}\t{t.n}\t{t.tau:.6f}" for t in self.tasks]
        lines.append(f"mean\t-\t{self.mean_tau:.6f}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "tasks": [{"task_id": t.task_id, "n": t.n, "tau": t.tau} for t in self.tasks],
            "mean_tau": self.mean_tau,
        }


def _task_key(task_id):
    # numeric suffixes sort numerically: task2 before task10
    s = str(task_id)
    digits = s.rstrip("0123456789")
    tail = s[len(digits):]
    return (digits, int(tail) if tail else -1, s)


def per_task_report(tasks: Sequence, variant: str = "b", backend=None) -> TaskReport:
    """Score ``(task_id, predicted, actual)`` triples; rows sorted by task id."""
    if not tasks:
        raise DataError("no tasks to report")
    scores = []
    for task_id, predicted, actual in sorted(tasks, key=lambda t: _task_key(t[0])):
        try:
            tau = kendall_tau(predicted, actual, variant, backend)
        except (DataError, MetricUndefinedError) as exc:
            raise type(exc)(f"task {task_id}: {exc}") from exc
        scores.append(TaskScore(str(task_id), len(predicted), tau))
    return TaskReport(scores, variant)
