"""Bayesian linear regression with a data-driven Gaussian prior.

The prior over weights is centred on the (ridge-stabilised) least-squares
solution with covariance ``sigma^2 (X'X + lam I)^-1``; the posterior is the
usual normal-normal conjugate update with known noise variance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError, SingularMatrixError

NOISE_FLOOR = 1e-12
_COND_LIMIT = 1e13


@dataclass
class GPNASPrior:
    mu0: np.ndarray
    sigma0: np.ndarray
    noise_var: float
    ridge: float = 0.0
    intercept: bool = False


@dataclass
class GPNASModel:
    mu: np.ndarray
    sigma: np.ndarray
    noise_var: float
    ridge: float = 0.0
    intercept: bool = False

    @property
    def n_inputs(self) -> int:
        return len(self.mu) - int(self.intercept)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu.tolist(),
            "sigma": self.sigma.tolist(),
            "noise_var": self.noise_var,
            "ridge": self.ridge,
            "intercept": self.intercept,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GPNASModel":
        return cls(
            mu=np.asarray(d["mu"], dtype=np.float64),
            sigma=np.asarray(d["sigma"], dtype=np.float64).reshape(len(d["mu"]), len(d["mu"])),
            noise_var=float(d["noise_var"]),
            ridge=float(d["ridge"]),
            intercept=bool(d["intercept"]),
        )


def add_intercept(X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    return np.hstack([X, np.ones((X.shape[0], 1))])


def _design(X, intercept):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise DataError("design matrix must be 2-D")
    return add_intercept(X) if intercept else X


def _sym(a):
    return (a + a.T) / 2.0


def _spd_inverse(a, what):
    try:
        np.linalg.cholesky(a)
    except np.linalg.LinAlgError:
        raise SingularMatrixError(f"{what} is not positive definite") from None
    return _sym(np.linalg.solve(a, np.eye(a.shape[0])))


def prior_from_data(X, Y, ridge: float = 1e-3, intercept: bool = False) -> GPNASPrior:
    """Empirical prior: ``mu0 = A^-1 X'Y``, ``sigma0 = s2 A^-1`` with ``A = X'X + ridge I``.

    ``s2`` is the residual variance of ``mu0`` with divisor ``max(1, n - d)``,
    floored at 1e-12.
    """
    X = _design(X, intercept)
    Y = np.asarray(Y, dtype=np.float64)
    n, d = X.shape
    if Y.shape != (n,):
        raise DataError(f"Y has shape {Y.shape}, expected ({n},)")
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    if ridge == 0 and n < d:
        raise SingularMatrixError(
            f"{n} rows < {d} columns: X'X is singular, use ridge > 0"
        )
    A = X.T @ X + ridge * np.eye(d)
    if ridge == 0 and np.linalg.cond(A) > _COND_LIMIT:
        raise SingularMatrixError("X'X is numerically singular, use ridge > 0")
    A_inv = _spd_inverse(A, "X'X + ridge*I")
    mu0 = np.linalg.solve(A, X.T @ Y)
    resid = Y - X @ mu0
    s2 = max(float(resid @ resid) / max(1, n - d), NOISE_FLOOR)
    return GPNASPrior(mu0=mu0, sigma0=_sym(s2 * A_inv), noise_var=s2, ridge=ridge, intercept=intercept)


def posterior_update(prior: GPNASPrior, X, Y) -> GPNASModel:
    """Conjugate update: ``Sigma = (Sigma0^-1 + X'X/s2)^-1``, ``mu = Sigma (Sigma0^-1 mu0 + X'Y/s2)``."""
    X = _design(X, prior.intercept)
    Y = np.asarray(Y, dtype=np.float64)
    d = len(prior.mu0)
    if X.shape[1] != d or prior.sigma0.shape != (d, d):
        raise DataError(f"design has {X.shape[1]} columns, prior has {d}")
    if Y.shape != (X.shape[0],):
        raise DataError("Y length must match X rows")
    if X.shape[0] == 0:
        _spd_inverse(prior.sigma0, "prior covariance")
        return GPNASModel(prior.mu0.copy(), prior.sigma0.copy(), prior.noise_var, prior.ridge, prior.intercept)
    s2 = prior.noise_var
    P0 = _spd_inverse(prior.sigma0, "prior covariance")
    precision = _sym(P0 + X.T @ X / s2)
    rhs = P0 @ prior.mu0 + X.T @ Y / s2
    sigma = _spd_inverse(precision, "posterior precision")
    mu = np.linalg.solve(precision, rhs)
    return GPNASModel(mu, sigma, s2, prior.ridge, prior.intercept)


def as_prior(model: GPNASModel) -> GPNASPrior:
    """Use a posterior as the prior for a further update."""
    return GPNASPrior(model.mu.copy(), model.sigma.copy(), model.noise_var, model.ridge, model.intercept)


def _inputs(model, X):
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.n_inputs:
        got = X.shape[1] if X.ndim == 2 else X.shape
        raise DataError(f"model expects {model.n_inputs} input columns, got {got}")
    return _design(X, model.intercept)


def predict_mean(model: GPNASModel, X) -> np.ndarray:
    return _inputs(model, X) @ model.mu


def predict_variance(model: GPNASModel, X) -> np.ndarray:
    """Predictive variance ``diag(X Sigma X') + s2``."""
    Xd = _inputs(model, X)
    return np.einsum("ij,jk,ik->i", Xd, model.sigma, Xd) + model.noise_var
