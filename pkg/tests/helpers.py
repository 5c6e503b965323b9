"""Shared fixtures-free helpers: dataset builders and independent oracles."""

import itertools

import numpy as np

from llasso import Dataset, standardize


def make_dataset(rng, n, p, beta=None, noise=1.0, corr=None):
    """Random standardized dataset, optionally with AR-type column correlation."""
    Z = rng.standard_normal((n, p))
    if corr is not None:
        idx = np.arange(p)
        sigma = corr ** np.abs(idx[:, None] - idx[None, :])
        Z = Z @ np.linalg.cholesky(sigma).T
    if beta is None:
        beta = rng.standard_normal(p)
    y = Z @ beta + noise * rng.standard_normal(n)
    return standardize(Dataset(X=Z, y=y,
                               column_names=[f"x{j}" for j in range(p)]))


def orthonormal_dataset(rng, n, p):
    Q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    y = rng.standard_normal(n)
    return Dataset(X=Q, y=y, column_names=[f"x{j}" for j in range(p)],
                   standardized=True)


def lasso_objective(X, y, lam, beta):
    r = y - X @ beta
    return float(r @ r) / len(y) + lam * float(np.abs(beta).sum())


def lasso_sign_pattern_oracle(X, y, lam):
    """Global LASSO minimum by enumerating all 3^p sign patterns."""
    n, p = X.shape
    C = X.T @ X
    Xty = X.T @ y
    best_beta = np.zeros(p)
    best_obj = lasso_objective(X, y, lam, best_beta)
    for signs in itertools.product((-1.0, 0.0, 1.0), repeat=p):
        s = np.array(signs)
        active = s != 0
        if not active.any():
            continue
        A = C[np.ix_(active, active)]
        rhs = Xty[active] - 0.5 * n * lam * s[active]
        try:
            ba = np.linalg.solve(A, rhs)
        except np.linalg.LinAlgError:
            continue
        if np.any(ba * s[active] < 0):
            continue
        beta = np.zeros(p)
        beta[active] = ba
        obj = lasso_objective(X, y, lam, beta)
        if obj < best_obj:
            best_obj, best_beta = obj, beta
    return best_beta, best_obj


def lasso_kkt_gap(X, y, lam, beta):
    """Largest violation of the LASSO stationarity conditions."""
    grad = (2.0 / len(y)) * X.T @ (y - X @ beta)
    gap = 0.0
    for j in range(len(beta)):
        if beta[j] != 0.0:
            gap = max(gap, abs(grad[j] - lam * np.sign(beta[j])))
        else:
            gap = max(gap, max(0.0, abs(grad[j]) - lam))
    return gap
