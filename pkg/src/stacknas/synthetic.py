"""Synthetic architecture-ranking tasks shaped like supernet benchmarks.

Each task draws architectures uniformly without replacement from the
search space, scores them with a hidden effect model (linear terms,
pairwise interactions and a tanh saturation) plus Gaussian noise, and
ranks each split by the noisy score.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .encoding import (
    LAYER_CODES,
    RawArchitecture,
    SearchSpaceSchema,
    encode_architectures,
    format_architecture,
)
from .errors import DataError

CHALLENGE_N_TEST = 99500

# per-task (noise_sd, interaction_strength, nonlinearity) for the default suite
DEFAULT_TASK_PROFILES = (
    (0.30, 0.4, 0.6),
    (0.45, 0.9, 0.4),
    (0.60, 0.6, 0.8),
    (0.35, 1.1, 0.3),
    (0.50, 0.5, 1.0),
    (0.70, 0.7, 0.5),
    (0.40, 1.0, 0.7),
    (0.55, 0.8, 0.9),
)


@dataclass(frozen=True)
class TaskGenerator:
    schema: SearchSpaceSchema = field(default_factory=SearchSpaceSchema)
    noise_sd: float = 0.5
    interaction_strength: float = 0.6
    n_interactions: int = 12
    nonlinearity: float = 0.6
    seed: int = 0
    n_train: int = 500
    n_test: int = 2000

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be non-negative")
        if self.n_train < 2 or self.n_test < 2:
            raise ValueError("each split needs at least 2 architectures")
        if self.n_train + self.n_test > self.schema.space_size():
            raise ValueError("search space too small for the requested split sizes")


@dataclass
class SyntheticTask:
    task_id: int
    train_archs: list[RawArchitecture]
    train_ranks: np.ndarray
    test_archs: list[RawArchitecture]
    test_ranks: np.ndarray
    # diagnostics only; never handed to training code
    train_latent: np.ndarray
    test_latent: np.ndarray


def _decode(index: int, schema: SearchSpaceSchema) -> RawArchitecture:
    n_codes = len(LAYER_CODES) - 1
    per_layer = n_codes * n_codes
    for sym in schema.depth_symbols:
        active = schema.active_layers(sym)
        size = per_layer ** active
        if index < size:
            pairs = []
            for pos in range(active):
                digit = (index // per_layer ** (active - 1 - pos)) % per_layer
                pairs.append((1 + digit // n_codes, 1 + digit % n_codes))
            pairs += [(0, 0)] * (schema.max_layers - active)
            embed = 1 if schema.includes_embed_column else None
            return RawArchitecture(sym, tuple(pairs), embed)
        index -= size
    raise IndexError("architecture index out of range")


def sample_architectures(schema: SearchSpaceSchema, count: int, seed=0) -> list[RawArchitecture]:
    """``count`` distinct architectures drawn uniformly from the whole space."""
    size = schema.space_size()
    if count < 0 or count > size:
        raise DataError(f"cannot draw {count} distinct architectures from a space of {size}")
    idx = np.random.default_rng(seed).choice(size, size=count, replace=False)
    return [_decode(int(i), schema) for i in idx]


def _task_seed(seed, task_id, stream):
    return np.random.SeedSequence([int(seed), int(task_id), stream])


def _effect(gen: TaskGenerator, task_id: int, X: np.ndarray) -> np.ndarray:
    rng = np.random.default_rng(_task_seed(gen.seed, task_id, 1))
    d = X.shape[1]
    w = rng.normal(size=d) / np.sqrt(d * 2.0 / 3.0)
    lin = X @ w
    latent = lin.copy()
    if gen.interaction_strength > 0 and gen.n_interactions > 0 and d >= 2:
        pairs = np.array([rng.choice(d, size=2, replace=False) for _ in range(gen.n_interactions)])
        u = rng.normal(size=gen.n_interactions)
        scale = gen.interaction_strength / np.sqrt(gen.n_interactions * (2.0 / 3.0) ** 2)
        latent += scale * (X[:, pairs[:, 0]] * X[:, pairs[:, 1]]) @ u
    if gen.nonlinearity > 0:
        latent += gen.nonlinearity * np.tanh(1.5 * lin)
    return latent


def _rank(observed: np.ndarray, keys: list[str]) -> np.ndarray:
    order = np.lexsort((np.array(keys), observed))
    ranks = np.empty(len(observed), dtype=np.int64)
    ranks[order] = np.arange(len(observed))
    return ranks


def gen_task(gen: TaskGenerator, task_id: int) -> SyntheticTask:
    n_total = gen.n_train + gen.n_test
    archs = sample_architectures(gen.schema, n_total, _task_seed(gen.seed, task_id, 0))
    X = encode_architectures(archs, gen.schema, "ordinal").values
    latent = _effect(gen, task_id, X)
    noise = np.random.default_rng(_task_seed(gen.seed, task_id, 2)).normal(size=n_total)
    observed = latent + gen.noise_sd * noise
    keys = [format_architecture(a, gen.schema) for a in archs]
    tr, te = slice(0, gen.n_train), slice(gen.n_train, n_total)
    return SyntheticTask(
        task_id=task_id,
        train_archs=archs[tr],
        train_ranks=_rank(observed[tr], keys[tr]),
        test_archs=archs[te],
        test_ranks=_rank(observed[te], keys[te]),
        train_latent=latent[tr],
        test_latent=latent[te],
    )


def default_generators(seed: int = 0, n_train: int = 500, n_test: int = 2000,
                       schema: SearchSpaceSchema | None = None, noise_scale: float = 1.0) -> dict[int, TaskGenerator]:
    """Eight generators with distinct signal-to-noise profiles, keyed by task id 1..8."""
    base = TaskGenerator(schema=schema or SearchSpaceSchema(), seed=seed, n_train=n_train, n_test=n_test)
    return {
        i + 1: replace(base, noise_sd=noise * noise_scale, interaction_strength=inter, nonlinearity=nonlin)
        for i, (noise, inter, nonlin) in enumerate(DEFAULT_TASK_PROFILES)
    }
