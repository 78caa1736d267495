"""Architecture token strings and their numeric encodings.

An architecture is written as a fixed-width token string: one depth symbol
followed by ``2 * max_layers`` digits, a (heads, mlp-ratio) code pair per
layer. Code ``0`` is padding and may only fill a trailing block of layers.
When the schema carries an embed-dim column, one extra trailing digit is
parsed and then ignored by every encoder.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError, DomainError, ParseError, StructureError

LAYER_CODES = (0, 1, 2, 3)
PAD = 0
NEUTRAL = 2


@dataclass(frozen=True)
class SearchSpaceSchema:
    max_layers: int = 12
    depth_symbols: tuple[str, ...] = ("j", "k", "l")
    includes_embed_column: bool = False

    def __post_init__(self):
        object.__setattr__(self, "depth_symbols", tuple(self.depth_symbols))
        if int(self.max_layers) < 1:
            raise ValueError("max_layers must be >= 1")
        syms = self.depth_symbols
        if not syms:
            raise ValueError("depth_symbols must be non-empty")
        if len(set(syms)) != len(syms):
            raise ValueError("depth_symbols must be duplicate-free")
        if any(len(s) != 1 or s.isdigit() for s in syms):
            raise ValueError("depth symbols must be single non-digit characters")
        if len(syms) > self.max_layers:
            raise ValueError("more depth symbols than layers")

    def ordinal(self, symbol: str) -> int:
        """1-based position of ``symbol`` in the depth alphabet."""
        try:
            return self.depth_symbols.index(symbol) + 1
        except ValueError:
            raise DomainError(f"unknown depth symbol {symbol!r}") from None

    def active_layers(self, symbol: str) -> int:
        # the deepest symbol uses every layer, each step down drops one
        return self.max_layers - (len(self.depth_symbols) - self.ordinal(symbol))

    @property
    def token_length(self) -> int:
        return 1 + 2 * self.max_layers + (1 if self.includes_embed_column else 0)

    def ordinal_columns(self) -> list[str]:
        names = ["depth"]
        for i in range(1, self.max_layers + 1):
            names += [f"layer{i}_heads", f"layer{i}_mlp"]
        return names

    def onehot_columns(self) -> list[str]:
        names = [f"depth={s}" for s in self.depth_symbols]
        for i in range(1, self.max_layers + 1):
            for part in ("heads", "mlp"):
                names += [f"layer{i}_{part}={c}" for c in LAYER_CODES]
        return names

    def space_size(self) -> int:
        """Number of distinct valid architectures (embed column excluded)."""
        per_layer = (len(LAYER_CODES) - 1) ** 2
        return sum(per_layer ** self.active_layers(s) for s in self.depth_symbols)


@dataclass(frozen=True)
class RawArchitecture:
    depth_code: str
    layer_tokens: tuple[tuple[int, int], ...]
    embed_code: int | None = None

    @property
    def n_active(self) -> int:
        return sum(1 for pair in self.layer_tokens if pair != (PAD, PAD))


@dataclass
class FeatureVector:
    values: np.ndarray
    column_names: list[str]


@dataclass
class FeatureMatrix:
    """Row-stacked feature vectors sharing one column layout."""

    values: np.ndarray
    column_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise DataError("feature matrix must be 2-D")
        if self.values.shape[1] != len(self.column_names):
            raise DataError(
                f"{self.values.shape[1]} columns but {len(self.column_names)} names"
            )

    @property
    def shape(self):
        return self.values.shape


def parse_architecture(text: str, schema: SearchSpaceSchema = SearchSpaceSchema()) -> RawArchitecture:
    """Parse one token string, validating length, alphabet and padding layout."""
    text = text.strip()
    if len(text) != schema.token_length:
        raise ParseError(
            f"expected {schema.token_length} characters, got {len(text)} in {text!r}",
            position=min(len(text), schema.token_length),
        )
    depth = text[0]
    if depth not in schema.depth_symbols:
        raise DomainError(f"unknown depth symbol {depth!r} at position 0")
    digits = []
    for pos in range(1, len(text)):
        ch = text[pos]
        if ch not in "0123":
            raise ParseError(f"character {ch!r} at position {pos} is not a code in 0-3", position=pos)
        digits.append(int(ch))

    pairs = tuple(
        (digits[2 * i], digits[2 * i + 1]) for i in range(schema.max_layers)
    )
    embed = digits[-1] if schema.includes_embed_column else None

    padded = False
    n_active = 0
    for i, (h, m) in enumerate(pairs):
        if (h == PAD) != (m == PAD):
            raise StructureError(f"layer {i + 1} is half padded: ({h},{m})")
        if h == PAD:
            padded = True
        elif padded:
            raise StructureError(f"layer {i + 1} follows padding; padding must be trailing")
        else:
            n_active += 1
    expected = schema.active_layers(depth)
    if n_active != expected:
        raise StructureError(
            f"depth {depth!r} implies {expected} active layers, found {n_active}"
        )
    return RawArchitecture(depth, pairs, embed)


def format_architecture(arch: RawArchitecture, schema: SearchSpaceSchema = SearchSpaceSchema()) -> str:
    """Inverse of :func:`parse_architecture`."""
    body = "".join(f"{h}{m}" for h, m in arch.layer_tokens)
    tail = ""
    if schema.includes_embed_column:
        tail = str(arch.embed_code if arch.embed_code is not None else 0)
    return arch.depth_code + body + tail


def encode_ordinal(arch: RawArchitecture, schema: SearchSpaceSchema = SearchSpaceSchema()) -> FeatureVector:
    """Ordinal encoding centred on the neutral code.

    Depth maps to its ordinal, padding codes become the neutral value 2,
    and everything is shifted by -2 so codes 1, 2, 3 land on -1, 0, 1.
    """
    vals = [schema.ordinal(arch.depth_code) - NEUTRAL]
    for h, m in arch.layer_tokens:
        vals.append((h or NEUTRAL) - NEUTRAL)
        vals.append((m or NEUTRAL) - NEUTRAL)
    return FeatureVector(np.asarray(vals, dtype=np.float64), schema.ordinal_columns())


def encode_onehot(arch: RawArchitecture, schema: SearchSpaceSchema = SearchSpaceSchema()) -> FeatureVector:
    """Indicator blocks: one per depth symbol, four per layer code (padding included)."""
    n_sym = len(schema.depth_symbols)
    k = len(LAYER_CODES)
    vals = np.zeros(n_sym + 2 * k * schema.max_layers)
    vals[schema.ordinal(arch.depth_code) - 1] = 1.0
    pos = n_sym
    for h, m in arch.layer_tokens:
        vals[pos + h] = 1.0
        vals[pos + k + m] = 1.0
        pos += 2 * k
    return FeatureVector(vals, schema.onehot_columns())


ENCODERS = {"ordinal": encode_ordinal, "onehot": encode_onehot}


def encode_architectures(
    archs: Iterable[RawArchitecture],
    schema: SearchSpaceSchema = SearchSpaceSchema(),
    kind: str = "ordinal",
) -> FeatureMatrix:
    try:
        encoder = ENCODERS[kind]
    except KeyError:
        raise ValueError(f"unknown encoding {kind!r}") from None
    names = schema.ordinal_columns() if kind == "ordinal" else schema.onehot_columns()
    rows = [encoder(a, schema).values for a in archs]
    values = np.vstack(rows) if rows else np.zeros((0, len(names)))
    return FeatureMatrix(values, names)


def drop_constant_columns(matrix: FeatureMatrix, tol: float = 1e-12) -> tuple[FeatureMatrix, list[str]]:
    """Remove columns whose sample variance is below ``tol``.

    Returns the reduced matrix and the dropped column names in input order.
    Apply the same layout to new data with :func:`select_columns`.
    """
    X = matrix.values
    if X.shape[0] == 0:
        raise DataError("cannot screen columns of an empty dataset")
    if X.shape[0] == 1:
        var = np.zeros(X.shape[1])
    else:
        var = X.var(axis=0, ddof=1)
    keep = var >= tol
    if not keep.any():
        raise DataError("every column is constant; dataset is degenerate")
    names = matrix.column_names
    dropped = [n for n, k in zip(names, keep) if not k]
    kept = [n for n, k in zip(names, keep) if k]
    return FeatureMatrix(X[:, keep], kept), dropped


def select_columns(matrix: FeatureMatrix, names: Sequence[str]) -> FeatureMatrix:
    """Project ``matrix`` onto ``names`` (order as given); missing names raise."""
    index = {n: i for i, n in enumerate(matrix.column_names)}
    missing = [n for n in names if n not in index]
    if missing:
        raise DataError(f"missing feature column(s): {', '.join(missing)}")
    cols = [index[n] for n in names]
    return FeatureMatrix(matrix.values[:, cols], list(names))
