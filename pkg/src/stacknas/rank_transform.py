"""Logit transform of integer rank labels and its back-transforms.

Ranks ``y`` in ``[0, n-1]`` are mapped to ``z = ln((y+1)/(n-y))``, which
turns the uniform rank distribution into a symmetric bell-shaped one.
Two back-transforms are offered:

``exact``
    ``s = (n+1) * sigmoid(z) - 1``, the algebraic inverse, so rounding
    recovers every rank.
``paper``
    ``s = (n-1) * sigmoid(z)``, a sigmoid scaled onto ``(0, n-1)``. It is a
    monotone map of ``exact`` and therefore induces the same ordering, but
    it is not an inverse.
"""
import numpy as np

from .errors import DomainError

VARIANTS = ("exact", "paper")


def _check_n(n):
    if int(n) != n or n < 2:
        raise DomainError(f"population size must be an integer >= 2, got {n}")
    return int(n)


def _sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def rank_to_latent(y, n):
    """``ln((y+1)/(n-y))``; scalar or array ``y``.

    Computed as a difference of logs so that ``y`` and ``n-1-y`` map to
    exact negatives of each other.
    """
    n = _check_n(n)
    y_arr = np.asarray(y)
    if y_arr.dtype.kind == "f":
        if not np.all(np.isfinite(y_arr)) or np.any(y_arr != np.round(y_arr)):
            raise DomainError("rank labels must be integers")
    elif y_arr.dtype.kind not in "iu":
        raise DomainError("rank labels must be integers")
    if np.any(y_arr < 0) or np.any(y_arr > n - 1):
        raise DomainError(f"rank labels must lie in [0, {n - 1}]")
    y_f = y_arr.astype(np.float64)
    z = np.log(y_f + 1.0) - np.log(n - y_f)
    return float(z) if z.ndim == 0 else z


def latent_to_score_paper(z, n):
    """``(n-1) / (1 + exp(-z))``, saturating smoothly in ``(0, n-1)``."""
    n = _check_n(n)
    s = (n - 1) * _sigmoid(z)
    return float(s) if np.ndim(s) == 0 else s


def latent_to_score_exact(z, n):
    """``(n+1) * sigmoid(z) - 1``, the inverse of :func:`rank_to_latent` before rounding."""
    n = _check_n(n)
    s = (n + 1) * _sigmoid(z) - 1.0
    return float(s) if np.ndim(s) == 0 else s


def latent_to_score(z, n, variant="exact"):
    if variant == "exact":
        return latent_to_score_exact(z, n)
    if variant == "paper":
        return latent_to_score_paper(z, n)
    raise ValueError(f"unknown back-transform {variant!r}; choose from {VARIANTS}")


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def latent_to_rank(z, n, variant="exact"):
    """Back-transform, round half away from zero, clamp to ``[0, n-1]``."""
    n = _check_n(n)
    s = latent_to_score(z, n, variant)
    r = np.clip(round_half_away(s), 0, n - 1).astype(np.int64)
    return int(r) if r.ndim == 0 else r
