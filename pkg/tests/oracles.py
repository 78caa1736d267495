"""Independent reference implementations used as test oracles."""
from fractions import Fraction

import mpmath
import numpy as np


def _sse(vals):
    if not vals:
        return Fraction(0)
    mean = sum(vals, Fraction(0)) / len(vals)
    return sum(((v - mean) ** 2 for v in vals), Fraction(0))


def brute_force_split(X, y, min_samples_leaf=1):
    """Best root split by exhaustive enumeration in exact rational arithmetic.

    Returns ``(feature, threshold, gain)`` or ``None`` when no split
    reduces the squared error. Candidates are visited feature-major with
    ascending thresholds; only a strictly larger gain replaces the incumbent.
    """
    X = np.asarray(X, dtype=float)
    ys = [Fraction(float(v)) for v in y]
    parent = _sse(ys)
    best = None
    for f in range(X.shape[1]):
        col = [Fraction(float(v)) for v in X[:, f]]
        distinct = sorted(set(col))
        for a, b in zip(distinct[:-1], distinct[1:]):
            thr = (a + b) / 2
            left = [t for c, t in zip(col, ys) if c <= thr]
            right = [t for c, t in zip(col, ys) if c > thr]
            if len(left) < min_samples_leaf or len(right) < min_samples_leaf:
                continue
            gain = parent - _sse(left) - _sse(right)
            if gain > 0 and (best is None or gain > best[2]):
                best = (f, thr, gain)
    if best is None:
        return None
    return best[0], float(best[1]), float(best[2])


def random_split_dataset(rng):
    """Small dataset with frequent ties in both features and targets."""
    n = int(rng.integers(2, 65))
    d = int(rng.integers(1, 5))
    kind = rng.integers(3)
    if kind == 0:
        X = rng.integers(0, 4, size=(n, d)).astype(float)
    elif kind == 1:
        X = rng.normal(size=(n, d))
    else:
        X = np.round(rng.normal(size=(n, d)), 1)
    if rng.random() < 0.5:
        y = rng.integers(-5, 6, size=n).astype(float)
    else:
        y = rng.normal(scale=2.0, size=n)
    return X, y


def mp_posterior(mu0, sigma0, noise_var, X, Y, dps=50):
    """Conjugate normal posterior solved in high precision."""
    mpmath.mp.dps = dps
    S0 = mpmath.matrix(sigma0.tolist())
    m0 = mpmath.matrix(mu0.tolist())
    Xm = mpmath.matrix(X.tolist())
    Ym = mpmath.matrix(Y.tolist())
    s2 = mpmath.mpf(noise_var)
    P0 = mpmath.inverse(S0)
    prec = P0 + Xm.T * Xm / s2
    sigma = mpmath.inverse(prec)
    mu = mpmath.lu_solve(prec, P0 * m0 + Xm.T * Ym / s2)
    return (np.array(mu.tolist(), dtype=float).ravel(),
            np.array(sigma.tolist(), dtype=float))


def mp_prior(X, Y, ridge, dps=50):
    """Empirical prior (mu0, sigma0, s2) in high precision."""
    mpmath.mp.dps = dps
    n, d = X.shape
    Xm = mpmath.matrix(X.tolist())
    Ym = mpmath.matrix(Y.tolist())
    A = Xm.T * Xm + mpmath.mpf(ridge) * mpmath.eye(d)
    A_inv = mpmath.inverse(A)
    mu0 = A_inv * (Xm.T * Ym)
    resid = Ym - Xm * mu0
    s2 = sum(r**2 for r in resid) / max(1, n - d)
    s2 = max(s2, mpmath.mpf("1e-12"))
    return (np.array(mu0.tolist(), dtype=float).ravel(),
            np.array((s2 * A_inv).tolist(), dtype=float), float(s2))


def kendall_counts_quadratic(a, b):
    """(concordant, discordant, ties_a_only, ties_b_only, ties_both) by pair enumeration."""
    c = dis = ta = tb = tab = 0
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            da = (a[i] > a[j]) - (a[i] < a[j])
            db = (b[i] > b[j]) - (b[i] < b[j])
            if da == 0 and db == 0:
                tab += 1
            elif da == 0:
                ta += 1
            elif db == 0:
                tb += 1
            elif da == db:
                c += 1
            else:
                dis += 1
    return c, dis, ta, tb, tab
