"""Named sub-model presets for the stacking pool.

The names follow the boosting libraries whose roles they stand in for; all
of them run on the single engine in this package and differ only in
configuration.
"""
from __future__ import annotations

from typing import Mapping

from ..errors import ConfigError
from .boosting import GBMConfig

PRESETS: dict[str, GBMConfig] = {
    "gbrt-mse": GBMConfig(
        name="gbrt-mse", loss="squared_error", learning_rate=0.1, n_iterations=300,
        max_depth=2, min_samples_leaf=5, subsample=0.5, n_bins="exact",
    ),
    "histgb": GBMConfig(
        name="histgb", loss="squared_error", learning_rate=0.1, n_iterations=300,
        max_depth=2, min_samples_leaf=10, subsample=0.6, n_bins=32,
    ),
    "catgb-mse": GBMConfig(
        name="catgb-mse", loss="squared_error", learning_rate=0.07, n_iterations=400,
        max_depth=2, min_samples_leaf=8, subsample=0.5, n_bins=64,
    ),
    "xgboost": GBMConfig(
        name="xgboost", loss="squared_error", learning_rate=0.12, n_iterations=250,
        max_depth=2, min_samples_leaf=3, subsample=0.5, n_bins="exact",
    ),
    "lightgb": GBMConfig(
        name="lightgb", loss="squared_error", learning_rate=0.06, n_iterations=200,
        max_depth=3, min_samples_leaf=20, subsample=0.5, n_bins=16,
    ),
    "gbrt-huber": GBMConfig(
        name="gbrt-huber", loss="huber", huber_delta=1.0, learning_rate=0.1, n_iterations=300,
        max_depth=2, min_samples_leaf=5, subsample=0.5, n_bins="exact",
    ),
    "catgb-huber": GBMConfig(
        name="catgb-huber", loss="huber", huber_delta=1.5, learning_rate=0.07, n_iterations=400,
        max_depth=2, min_samples_leaf=8, subsample=0.5, n_bins=64,
    ),
}

BASE_MEMBERS = ("gbrt-mse", "histgb", "catgb-mse", "xgboost", "lightgb")
DEFAULT_MEMBERS = BASE_MEMBERS + ("gbrt-huber", "catgb-huber")


def submodel_pool(
    task_cfg: Mapping | None = None,
    seed: int = 0,
) -> list[GBMConfig]:
    """Preset configs for one task.

    ``task_cfg`` may hold ``members`` (preset names, default all seven) and
    ``overrides`` mapping a preset name to field overrides. Each member's
    seed is derived from ``seed`` and its position, so seeds are pairwise
    distinct; an explicit ``seed`` override wins.
    """
    task_cfg = dict(task_cfg or {})
    unknown = set(task_cfg) - {"members", "overrides"}
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown pool setting {key!r}", field=key)
    members = list(task_cfg.get("members", DEFAULT_MEMBERS))
    overrides = dict(task_cfg.get("overrides", {}))
    if not members:
        raise ConfigError("pool must have at least one member", field="members")
    if len(set(members)) != len(members):
        raise ConfigError("pool members must be distinct", field="members")
    for name in list(members) + list(overrides):
        if name not in PRESETS:
            raise ConfigError(f"unknown sub-model preset {name!r}", field=name)
    for name in overrides:
        if name not in members:
            raise ConfigError(f"override for {name!r} which is not a pool member", field=name)

    pool = []
    for idx, name in enumerate(members):
        cfg = PRESETS[name].with_overrides(seed=(seed * 64 + idx) % 2**64)
        if name in overrides:
            cfg = cfg.with_overrides(**overrides[name])
        pool.append(cfg)
    seeds = [c.seed for c in pool]
    if len(set(seeds)) != len(seeds):
        raise ConfigError("sub-model seeds must be pairwise distinct", field="seed")
    return pool
