"""K-fold stacking of boosted sub-models under a Bayesian linear meta-learner.

Sub-models used at inference time are refit on all training rows. The
meta-learner is trained on out-of-fold predictions only: row ``i`` of the
meta matrix comes from models that never saw the fold containing ``i``.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gpnas
from .errors import DataError, StackNASError
from .gbm import GBMConfig, GBMModel, gbm_fit
from .rank_transform import latent_to_rank

FORMAT = "stacknas/ensemble"
VERSION = 1


@dataclass(frozen=True)
class FoldSpec:
    k: int
    seed: int
    assignment: np.ndarray

    @property
    def n(self) -> int:
        return len(self.assignment)

    def fold_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=self.k)

    def to_dict(self) -> dict:
        return {"k": self.k, "seed": self.seed, "n": self.n}

    @classmethod
    def from_dict(cls, d: dict) -> "FoldSpec":
        return make_folds(int(d["n"]), int(d["k"]), int(d["seed"]))


def make_folds(n: int, k: int, seed: int = 0) -> FoldSpec:
    """Seeded shuffle of ``range(n)`` dealt round-robin into ``k`` folds."""
    if k < 2:
        raise DataError(f"need at least 2 folds, got {k}")
    if k > n:
        raise DataError(f"{k} folds requested for only {n} rows")
    perm = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    assignment[perm] = np.arange(n) % k
    return FoldSpec(k, seed, assignment)


class SubModelError(StackNASError):
    def __init__(self, name, exc):
        super().__init__(f"sub-model {name!r}: {exc}")
        self.name = name


def _fit(cfg, X, z, backend):
    try:
        return gbm_fit(X, z, cfg, backend)
    except Exception as exc:
        raise SubModelError(cfg.name, exc) from exc


def _run(jobs, fn, items):
    if jobs and jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(it) for it in items]


def oof_predictions(configs, X, z, folds: FoldSpec, jobs: int = 1, backend=None, fit=None) -> np.ndarray:
    """Out-of-fold prediction matrix of shape ``(n, len(configs))``.

    ``fit(cfg, X, z)`` must return an object with ``predict``; it defaults
    to :func:`gbm_fit`.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    n = X.shape[0]
    if folds.n != n:
        raise DataError(f"fold spec covers {folds.n} rows, data has {n}")
    if not configs:
        raise DataError("need at least one sub-model")
    for f in range(folds.k):
        if int((folds.assignment != f).sum()) < 2:
            raise DataError(f"training complement of fold {f} has fewer than 2 rows")
    fit = fit or (lambda cfg, X_, z_: _fit(cfg, X_, z_, backend))

    def cell(job):
        j, f = job
        train = folds.assignment != f
        model = fit(configs[j], X[train], z[train])
        return j, f, model.predict(X[~train])

    grid = [(j, f) for j in range(len(configs)) for f in range(folds.k)]
    M = np.empty((n, len(configs)))
    for j, f, pred in _run(jobs, cell, grid):
        M[folds.assignment == f, j] = pred
    return M


@dataclass
class StackEnsemble:
    submodels: list[GBMModel]
    meta: gpnas.GPNASModel
    fold_spec: FoldSpec
    n_train: int
    back_transform: str = "exact"
    feature_names: list[str] = field(default_factory=list)
    encoding: str = "ordinal"
    schema: dict = field(default_factory=dict)
    # out-of-fold meta matrix from fitting; diagnostics only, not serialized
    oof: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def names(self) -> list[str]:
        return [m.config.name for m in self.submodels]

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "version": VERSION,
            "submodels": [m.to_dict() for m in self.submodels],
            "meta": self.meta.to_dict(),
            "fold_spec": self.fold_spec.to_dict(),
            "transform": {"n_train": self.n_train, "back_transform": self.back_transform},
            "features": {"names": list(self.feature_names), "encoding": self.encoding, "schema": self.schema},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "StackEnsemble":
        if d.get("format") != FORMAT:
            raise DataError(f"not an ensemble file (format={d.get('format')!r})")
        if d.get("version") != VERSION:
            raise DataError(f"unsupported ensemble version {d.get('version')!r}")
        return cls(
            submodels=[GBMModel.from_dict(m) for m in d["submodels"]],
            meta=gpnas.GPNASModel.from_dict(d["meta"]),
            fold_spec=FoldSpec.from_dict(d["fold_spec"]),
            n_train=int(d["transform"]["n_train"]),
            back_transform=d["transform"]["back_transform"],
            feature_names=list(d["features"]["names"]),
            encoding=d["features"]["encoding"],
            schema=dict(d["features"]["schema"]),
        )


def fit_meta(M, z, ridge: float = 1e-3) -> gpnas.GPNASModel:
    """Empirical prior on ``[M, 1]`` followed by the conjugate update on the same data."""
    prior = gpnas.prior_from_data(M, z, ridge, intercept=True)
    return gpnas.posterior_update(prior, M, z)


def fit_stack(
    X,
    z,
    pool: list[GBMConfig],
    k: int = 5,
    ridge: float = 1e-3,
    seed: int = 0,
    jobs: int = 1,
    backend=None,
    **meta,
) -> StackEnsemble:
    """Full-data sub-models, out-of-fold meta matrix, then the meta-learner."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if X.ndim != 2 or z.shape != (X.shape[0],):
        raise DataError("X must be (n, d) and z length n")
    folds = make_folds(X.shape[0], k, seed)
    submodels = _run(jobs, lambda cfg: _fit(cfg, X, z, backend), pool)
    M = oof_predictions(pool, X, z, folds, jobs, backend)
    return StackEnsemble(submodels, fit_meta(M, z, ridge), folds, X.shape[0], oof=M, **meta)


def submodel_predictions(ensemble: StackEnsemble, X, backend=None) -> np.ndarray:
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DataError("X must be 2-D")
    if X.shape[0] == 0:
        return np.zeros((0, len(ensemble.submodels)))
    return np.column_stack([m.predict(X, backend) for m in ensemble.submodels])


def stack_predict(ensemble: StackEnsemble, X, backend=None) -> np.ndarray:
    """Latent predictions of the meta-learner on the sub-models' outputs."""
    return gpnas.predict_mean(ensemble.meta, submodel_predictions(ensemble, X, backend))


def predict_ranks(ensemble: StackEnsemble, X, n_test: int | None = None, variant: str | None = None, backend=None) -> np.ndarray:
    """Per-row rounded ranks in ``[0, n_test - 1]``; ties are allowed."""
    X = np.asarray(X, dtype=np.float64)
    n_test = X.shape[0] if n_test is None else n_test
    z = stack_predict(ensemble, X, backend)
    if z.size == 0:
        return np.zeros(0, dtype=np.int64)
    return np.atleast_1d(latent_to_rank(z, n_test, variant or ensemble.back_transform))
