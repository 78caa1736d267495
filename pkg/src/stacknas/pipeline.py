"""Task-level glue: token strings in, ensembles and rank predictions out."""
from __future__ import annotations

from dataclasses import asdict

import numpy as np

from .config import TaskSettings
from .encoding import (
    FeatureMatrix,
    SearchSpaceSchema,
    drop_constant_columns,
    encode_architectures,
    parse_architecture,
    select_columns,
)
from .errors import DataError, MetricUndefinedError
from .metrics import kendall_tau
from .rank_transform import rank_to_latent
from .stacking import StackEnsemble, fit_stack, predict_ranks


def schema_to_dict(schema: SearchSpaceSchema) -> dict:
    d = asdict(schema)
    d["depth_symbols"] = list(d["depth_symbols"])
    return d


def featurize(arch_strings, schema: SearchSpaceSchema, encoding: str = "ordinal") -> FeatureMatrix:
    archs = []
    for i, text in enumerate(arch_strings):
        try:
            archs.append(parse_architecture(text, schema))
        except DataError as exc:
            raise type(exc)(f"row {i + 1}: {exc}") from exc
    return encode_architectures(archs, schema, encoding)


def _safe_tau(a, b, variant):
    try:
        return kendall_tau(a, b, variant)
    except MetricUndefinedError:
        return None


def train_task(arch_strings, ranks, settings: TaskSettings, schema: SearchSpaceSchema,
               encoding: str = "ordinal", seed: int = 0, jobs: int = 1, backend=None):
    """Fit a stacked ensemble on one task; returns ``(ensemble, report)``."""
    if len(arch_strings) == 0:
        raise DataError("training set is empty")
    ranks = np.asarray(ranks, dtype=np.int64)
    n = len(ranks)
    if n < 2:
        raise DataError("need at least 2 training rows")
    full = featurize(arch_strings, schema, encoding)
    X, dropped = drop_constant_columns(full)
    z = rank_to_latent(ranks, n)
    pool = settings.pool(seed)
    ens = fit_stack(
        X.values, z, pool, k=settings.k_folds, ridge=settings.ridge, seed=seed, jobs=jobs, backend=backend,
        back_transform=settings.back_transform, feature_names=X.column_names, encoding=encoding,
        schema=schema_to_dict(schema),
    )
    oof_tau = [_safe_tau(ens.oof[:, j], z, settings.tau) for j in range(len(pool))]
    names = ens.names
    report = {
        "n_train": n,
        "dropped_columns": dropped,
        "fold_spec": {
            "k": ens.fold_spec.k,
            "seed": ens.fold_spec.seed,
            "sizes": ens.fold_spec.fold_sizes().tolist(),
        },
        "submodels": [
            {"name": name, "oof_tau": tau, "config": cfg.to_dict()}
            for name, tau, cfg in zip(names, oof_tau, pool)
        ],
        "meta": {
            "weights": dict(zip(names, ens.meta.mu[:-1].tolist())),
            "intercept": float(ens.meta.mu[-1]),
            "noise_var": ens.meta.noise_var,
            "ridge": ens.meta.ridge,
        },
        "tau_variant": settings.tau,
    }
    return ens, report


def predict_task(ensemble: StackEnsemble, arch_strings, n_test: int | None = None,
                 back_transform: str | None = None, backend=None) -> np.ndarray:
    if len(arch_strings) == 0:
        return np.zeros(0, dtype=np.int64)
    schema = SearchSpaceSchema(**ensemble.schema)
    X = select_columns(featurize(arch_strings, schema, ensemble.encoding), ensemble.feature_names)
    n_test = len(arch_strings) if n_test is None else n_test
    return predict_ranks(ensemble, X.values, n_test, back_transform, backend)
