"""Pipeline configuration: a TOML file with global settings and per-task sections.

Example::

    seed = 0
    encoding = "ordinal"

    [schema]
    max_layers = 12
    depth_symbols = ["j", "k", "l"]

    [synthetic]
    n_tasks = 8
    n_train = 500
    n_test = 2000

    [defaults]
    k_folds = 5
    ridge = 1e-3

    [tasks.task2]
    back_transform = "paper"
    [tasks.task2.overrides.gbrt-mse]
    max_depth = 3

Unknown keys anywhere are rejected.
"""
from __future__ import annotations

import copy
import sys
from dataclasses import dataclass, field

from .encoding import ENCODERS, SearchSpaceSchema
from .errors import ConfigError
from .gbm import DEFAULT_MEMBERS, submodel_pool
from .rank_transform import VARIANTS
from .synthetic import CHALLENGE_N_TEST

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

TAU_VARIANTS = ("b", "a")
_TOP_KEYS = {"seed", "encoding", "schema", "synthetic", "defaults", "tasks"}
_SCHEMA_KEYS = {"max_layers", "depth_symbols", "includes_embed_column"}
_SYNTH_KEYS = {"n_tasks", "n_train", "n_test", "challenge_scale", "noise_scale"}
_TASK_KEYS = {"k_folds", "ridge", "back_transform", "tau", "members", "overrides"}


@dataclass(frozen=True)
class TaskSettings:
    k_folds: int = 5
    ridge: float = 1e-3
    back_transform: str = "exact"
    tau: str = "b"
    members: tuple[str, ...] = DEFAULT_MEMBERS
    overrides: dict = field(default_factory=dict)

    def pool(self, seed: int):
        return submodel_pool({"members": list(self.members), "overrides": self.overrides}, seed=seed)


@dataclass(frozen=True)
class SyntheticSettings:
    n_tasks: int = 8
    n_train: int = 500
    n_test: int = 2000
    noise_scale: float = 1.0


@dataclass
class PipelineConfig:
    seed: int = 0
    encoding: str = "ordinal"
    schema: SearchSpaceSchema = field(default_factory=SearchSpaceSchema)
    synthetic: SyntheticSettings = field(default_factory=SyntheticSettings)
    defaults: TaskSettings = field(default_factory=TaskSettings)
    tasks: dict[str, TaskSettings] = field(default_factory=dict)

    def for_task(self, task_id: str) -> TaskSettings:
        return self.tasks.get(task_id, self.defaults)

    def with_cli_overrides(self, seed=None, back_transform=None, tau=None) -> "PipelineConfig":
        cfg = copy.deepcopy(self)
        if seed is not None:
            cfg.seed = _int(seed, "seed", lo=0)
        if back_transform is not None or tau is not None:
            def patch(ts):
                return _task_settings(
                    {
                        "back_transform": back_transform or ts.back_transform,
                        "tau": tau or ts.tau,
                    },
                    ts,
                    "cli",
                )
            cfg.defaults = patch(cfg.defaults)
            cfg.tasks = {k: patch(v) for k, v in cfg.tasks.items()}
        return cfg


def _reject_unknown(section: dict, allowed: set, where: str):
    for key in section:
        if key not in allowed:
            raise ConfigError(f"unknown key {where}.{key}" if where else f"unknown key {key}", field=key)


def _int(v, name, lo=None):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer, got {v!r}", field=name)
    if lo is not None and v < lo:
        raise ConfigError(f"{name} must be >= {lo}, got {v}", field=name)
    return v


def _task_settings(section: dict, base: TaskSettings, where: str) -> TaskSettings:
    _reject_unknown(section, _TASK_KEYS, where)
    k = _int(section.get("k_folds", base.k_folds), f"{where}.k_folds", lo=2)
    ridge = section.get("ridge", base.ridge)
    if isinstance(ridge, bool) or not isinstance(ridge, (int, float)) or ridge < 0:
        raise ConfigError(f"{where}.ridge must be a non-negative number, got {ridge!r}", field="ridge")
    bt = section.get("back_transform", base.back_transform)
    if bt not in VARIANTS:
        raise ConfigError(f"{where}.back_transform must be one of {VARIANTS}, got {bt!r}", field="back_transform")
    tau = section.get("tau", base.tau)
    if tau not in TAU_VARIANTS:
        raise ConfigError(f"{where}.tau must be one of {TAU_VARIANTS}, got {tau!r}", field="tau")
    members = tuple(section.get("members", base.members))
    overrides = copy.deepcopy(base.overrides)
    for name, ov in section.get("overrides", {}).items():
        if not isinstance(ov, dict):
            raise ConfigError(f"{where}.overrides.{name} must be a table", field=name)
        overrides.setdefault(name, {}).update(ov)
    ts = TaskSettings(k, float(ridge), bt, tau, members, overrides)
    # validates member names, override fields and value ranges
    ts.pool(seed=0)
    return ts


def parse_config(data: dict) -> PipelineConfig:
    _reject_unknown(data, _TOP_KEYS, "")
    seed = _int(data.get("seed", 0), "seed", lo=0)
    encoding = data.get("encoding", "ordinal")
    if encoding not in ENCODERS:
        raise ConfigError(f"encoding must be one of {tuple(ENCODERS)}, got {encoding!r}", field="encoding")

    sch = data.get("schema", {})
    _reject_unknown(sch, _SCHEMA_KEYS, "schema")
    try:
        schema = SearchSpaceSchema(**sch)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"schema: {exc}", field="schema") from exc

    syn = dict(data.get("synthetic", {}))
    _reject_unknown(syn, _SYNTH_KEYS, "synthetic")
    challenge = syn.pop("challenge_scale", False)
    if not isinstance(challenge, bool):
        raise ConfigError("synthetic.challenge_scale must be a boolean", field="challenge_scale")
    n_test = _int(syn.get("n_test", CHALLENGE_N_TEST if challenge else 2000), "synthetic.n_test", lo=2)
    noise_scale = syn.get("noise_scale", 1.0)
    if isinstance(noise_scale, bool) or not isinstance(noise_scale, (int, float)) or noise_scale < 0:
        raise ConfigError("synthetic.noise_scale must be a non-negative number", field="noise_scale")
    synthetic = SyntheticSettings(
        n_tasks=_int(syn.get("n_tasks", 8), "synthetic.n_tasks", lo=1),
        n_train=_int(syn.get("n_train", 500), "synthetic.n_train", lo=2),
        n_test=n_test,
        noise_scale=float(noise_scale),
    )

    defaults = _task_settings(data.get("defaults", {}), TaskSettings(), "defaults")
    tasks = {}
    for task_id, section in data.get("tasks", {}).items():
        if not isinstance(section, dict):
            raise ConfigError(f"tasks.{task_id} must be a table", field=task_id)
        tasks[task_id] = _task_settings(section, defaults, f"tasks.{task_id}")
    return PipelineConfig(seed, encoding, schema, synthetic, defaults, tasks)


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    return parse_config(data)
