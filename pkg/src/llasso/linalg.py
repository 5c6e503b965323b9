"""Dense symmetric positive-definite solves used by every estimator."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .exceptions import NumericError


def cholesky_spd(A: np.ndarray, min_pivot: float = 0.0) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix.

    Raises NumericError naming the failing pivot index when the matrix is
    not positive definite, or when any pivot falls below ``min_pivot``
    (used as a near-singularity gate by the unpenalized solvers).
    """
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericError("matrix must be square")
    try:
        L = scipy.linalg.cholesky(A, lower=True, check_finite=False)
    except scipy.linalg.LinAlgError:
        j = _first_bad_pivot(A)
        raise NumericError(
            f"matrix is not positive definite: pivot {j} is non-positive"
        ) from None
    if min_pivot > 0.0:
        pivots = np.diag(L) ** 2
        bad = np.flatnonzero(pivots < min_pivot)
        if bad.size:
            raise NumericError(
                f"matrix is numerically singular: pivot {bad[0]} = "
                f"{pivots[bad[0]]:.3e} below threshold {min_pivot:.3e}"
            )
    return L


def _first_bad_pivot(A: np.ndarray) -> int:
    """Index of the first non-positive pivot in an LL' factorization."""
    n = A.shape[0]
    L = np.zeros_like(A)
    for j in range(n):
        d = A[j, j] - L[j, :j] @ L[j, :j]
        if not np.isfinite(d) or d <= 0.0:
            return j
        L[j, j] = np.sqrt(d)
        if j + 1 < n:
            L[j + 1 :, j] = (A[j + 1 :, j] - L[j + 1 :, :j] @ L[j, :j]) / L[j, j]
    return n - 1


def solve_spd(A: np.ndarray, b: np.ndarray, min_pivot: float = 0.0) -> np.ndarray:
    """Solve A x = b for symmetric positive-definite A via Cholesky."""
    L = cholesky_spd(A, min_pivot=min_pivot)
    return solve_with_factor(L, b)


def solve_with_factor(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve using a precomputed lower Cholesky factor."""
    b = np.asarray(b, dtype=np.float64)
    z = scipy.linalg.solve_triangular(L, b, lower=True, check_finite=False)
    return scipy.linalg.solve_triangular(L.T, z, lower=False, check_finite=False)


def spectral_norm_power(A: np.ndarray, n_iter: int = 200, seed: int = 0) -> float:
    """Largest singular value of A estimated by power iteration on A'A."""
    A = np.asarray(A, dtype=np.float64)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(A.shape[1])
    v /= np.linalg.norm(v)
    s = 0.0
    for _ in range(n_iter):
        w = A.T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        v = w / nw
        s = nw
    return float(np.sqrt(s))
