"""Point estimators for the standardized linear model.

Implements OLS, ridge, the Liu (linear unified) estimator, the LASSO via
cyclic coordinate descent, the naive elastic net, and the Liu-rescaled
LASSO obtained by premultiplying the LASSO solution with the biasing factor
F(d) = (C + I)^-1 (C + d I), C = X'X.  Also provides the ridge-augmented
design transform, the anchored-penalty objectives used to study the
estimator's quadratic reformulation, a sandwich covariance approximation in
the style of Osborne, Presnell and Turlach (2000), and an approximate
closed form for the anchored penalized problem based on a generalized
inverse of diag(|beta_j|).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is optional, loops just run slower
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap

from .dataset import Dataset, GramCache, gram
from .exceptions import InputError, NumericError
from .linalg import cholesky_spd, solve_spd, solve_with_factor

CD_TOL = 1e-8
CD_MAX_SWEEPS = 10_000
PIVOT_RTOL = 1e-12          # near-singularity gate for unpenalized solves
ZERO_COEF_TOL = 1e-10       # |beta_j| below this counts as a killed coordinate

ESTIMATOR_FAMILIES = ("ols", "ridge", "liu", "lasso", "llasso", "enet")


def soft_threshold(v, t):
    """Proximal map of the l1 norm: sgn(v) * max(|v| - t, 0)."""
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


@dataclass(frozen=True)
class PenaltySpec:
    """Identity of an estimator together with its tuning parameters."""

    kind: str
    k: float | None = None
    d: float | None = None
    lam: float | None = None
    lam1: float | None = None
    lam2: float | None = None
    D: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("ols", "ridge", "liu", "lasso", "enet", "llasso",
                             "gen_llasso"):
            raise InputError(f"unknown estimator kind {self.kind!r}")
        for name in ("k", "lam", "lam1", "lam2"):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v >= 0):
                raise InputError(f"{name} must be finite and >= 0, got {v}")
        if self.d is not None and not (0.0 <= self.d <= 1.0):
            raise InputError(f"d must lie in [0, 1], got {self.d}")
        if self.D is not None:
            D = tuple(float(v) for v in self.D)
            object.__setattr__(self, "D", D)
            if any(not (0.0 <= v <= 1.0) for v in D):
                raise InputError("all entries of D must lie in [0, 1]")

    @classmethod
    def ols(cls):
        return cls(kind="ols")

    @classmethod
    def ridge(cls, k: float):
        return cls(kind="ridge", k=float(k))

    @classmethod
    def liu(cls, d: float):
        return cls(kind="liu", d=float(d))

    @classmethod
    def lasso(cls, lam: float):
        return cls(kind="lasso", lam=float(lam))

    @classmethod
    def enet(cls, lam1: float, lam2: float):
        return cls(kind="enet", lam1=float(lam1), lam2=float(lam2))

    @classmethod
    def llasso(cls, lam: float, d: float):
        return cls(kind="llasso", lam=float(lam), d=float(d))

    @classmethod
    def gen_llasso(cls, lam: float, D):
        return cls(kind="gen_llasso", lam=float(lam), D=tuple(D))


@dataclass(frozen=True)
class FitResult:
    """Fitted coefficients on the standardized scale plus solver diagnostics."""

    beta: np.ndarray
    intercept: float
    spec: PenaltySpec
    iterations: int
    converged: bool
    objective: float


@dataclass(frozen=True)
class BiasingFactor:
    """The matrix (C + I)^-1 (C + d I) applied by Liu-type estimators."""

    matrix: np.ndarray
    d: float | np.ndarray


def biasing_factor(C: np.ndarray, d) -> BiasingFactor:
    """Explicit biasing factor; estimators use linear solves instead."""
    p = C.shape[0]
    d_arr = np.asarray(d, dtype=np.float64)
    if np.any(d_arr < 0) or np.any(d_arr > 1):
        raise InputError("biasing parameter must lie in [0, 1]")
    rhs = C + (np.diag(np.full(p, float(d))) if d_arr.ndim == 0
               else np.diag(d_arr))
    F = solve_spd(C + np.eye(p), rhs)
    return BiasingFactor(matrix=F, d=d if d_arr.ndim == 0 else d_arr)


def apply_biasing_factor(C: np.ndarray, beta: np.ndarray, d) -> np.ndarray:
    """Compute (C + I)^-1 (C + diag(d)) beta without forming the factor.

    A scalar d exactly equal to 1 short-circuits to a copy of ``beta`` so
    that the rescaled estimator reduces to the plain LASSO bit for bit.
    """
    d_arr = np.asarray(d, dtype=np.float64)
    if np.any(d_arr < 0) or np.any(d_arr > 1):
        raise InputError("biasing parameter must lie in [0, 1]")
    if d_arr.ndim == 0 and float(d_arr) == 1.0:
        return np.array(beta, copy=True)
    rhs = C @ beta + d_arr * beta
    return solve_spd(C + np.eye(C.shape[0]), rhs)


# ---------------------------------------------------------------------------
# coordinate descent
# ---------------------------------------------------------------------------

def penalized_objective(C, Xty, yty, n_obs, lam1, lam2, beta) -> float:
    """(1/n)||y - X b||^2 + lam2 ||b||_2^2 + lam1 ||b||_1 from Gram data."""
    b = np.asarray(beta)
    sse = float(b @ (C @ b) - 2.0 * (Xty @ b) + yty)
    return sse / n_obs + lam2 * float(b @ b) + lam1 * float(np.abs(b).sum())


@njit(cache=True)
def _cd_kernel(C, Xty, n_obs, lam1, lam2, beta, tol, max_sweeps):
    p = C.shape[0]
    g = np.zeros(p)
    for j in range(p):
        bj = beta[j]
        if bj != 0.0:
            for i in range(p):
                g[i] += C[i, j] * bj
    two_over_n = 2.0 / n_obs
    for sweep in range(1, max_sweeps + 1):
        delta_max = 0.0
        for j in range(p):
            denom = two_over_n * C[j, j] + 2.0 * lam2
            if denom <= 0.0:
                continue
            bj = beta[j]
            rho = two_over_n * (Xty[j] - g[j] + C[j, j] * bj)
            if rho > lam1:
                new = (rho - lam1) / denom
            elif rho < -lam1:
                new = (rho + lam1) / denom
            else:
                new = 0.0
            if new != bj:
                beta[j] = new
                diff = new - bj
                for i in range(p):
                    g[i] += C[i, j] * diff
                step = abs(diff)
                if step > delta_max:
                    delta_max = step
        if delta_max < tol:
            return sweep, True
    return max_sweeps, False


def coordinate_descent(C, Xty, n_obs, lam1, lam2=0.0, beta0=None,
                       tol=CD_TOL, max_sweeps=CD_MAX_SWEEPS):
    """Cyclic coordinate descent on (1/n)||y - X b||^2 + lam2||b||^2 + lam1||b||_1.

    Operates on the Gram system (C = X'X, Xty = X'y), so each sweep costs
    O(p^2) independent of n.  Stops when no coefficient moves by more than
    ``tol`` in a full sweep.  Returns ``(beta, sweeps, converged)``.
    """
    C = np.ascontiguousarray(C, dtype=np.float64)
    Xty = np.ascontiguousarray(Xty, dtype=np.float64)
    p = C.shape[0]
    beta = (np.zeros(p) if beta0 is None
            else np.ascontiguousarray(beta0, dtype=np.float64).copy())
    sweeps, converged = _cd_kernel(C, Xty, float(n_obs), float(lam1),
                                   float(lam2), beta, float(tol),
                                   int(max_sweeps))
    return beta, sweeps, bool(converged)


def lasso_path(C, Xty, n_obs, lams_desc, tol=CD_TOL, max_sweeps=CD_MAX_SWEEPS,
               lam2=0.0):
    """Warm-started coordinate-descent solutions along a descending grid.

    Returns an array of shape (len(lams_desc), p) in the given order.
    """
    lams = np.asarray(lams_desc, dtype=np.float64)
    if lams.size and np.any(np.diff(lams) > 0):
        raise InputError("path grid must be non-increasing")
    p = C.shape[0]
    betas = np.empty((lams.size, p))
    beta = np.zeros(p)
    for i, lam in enumerate(lams):
        beta, _, _ = coordinate_descent(C, Xty, n_obs, lam, lam2=lam2,
                                        beta0=beta, tol=tol,
                                        max_sweeps=max_sweeps)
        betas[i] = beta
    return betas


def lambda_max(gc: GramCache, n_obs: int) -> float:
    """Smallest l1 penalty that zeroes every coefficient: (2/n) ||X'y||_inf."""
    return float(2.0 / n_obs * np.max(np.abs(gc.Xty)))


# ---------------------------------------------------------------------------
# fits
# ---------------------------------------------------------------------------

def _require_standardized(ds: Dataset):
    if not ds.standardized:
        raise InputError("estimators require a standardized dataset")


def _intercept(ds: Dataset) -> float:
    return float(ds.y_mean) if ds.y_mean is not None else 0.0


def _ols_factor(C: np.ndarray):
    min_pivot = PIVOT_RTOL * float(np.trace(C)) / C.shape[0]
    return cholesky_spd(C, min_pivot=min_pivot)


def fit_ols(ds: Dataset) -> FitResult:
    """Ordinary least squares via the normal equations C b = X'y."""
    _require_standardized(ds)
    gc = gram(ds)
    L = _ols_factor(gc.C)
    beta = solve_with_factor(L, gc.Xty)
    yty = float(ds.y @ ds.y)
    obj = penalized_objective(gc.C, gc.Xty, yty, ds.n, 0.0, 0.0, beta)
    return FitResult(beta=beta, intercept=_intercept(ds), spec=PenaltySpec.ols(),
                     iterations=0, converged=True, objective=obj)


def fit_ridge(ds: Dataset, k: float) -> FitResult:
    """Ridge estimator (C + kI)^-1 X'y."""
    _require_standardized(ds)
    spec = PenaltySpec.ridge(k)
    gc = gram(ds)
    beta = solve_spd(gc.C + spec.k * np.eye(ds.p), gc.Xty)
    resid = ds.y - ds.X @ beta
    obj = float(resid @ resid) + spec.k * float(beta @ beta)
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=0, converged=True, objective=obj)


def fit_liu(ds: Dataset, d: float) -> FitResult:
    """Liu estimator F(d) b_ols with F(d) = (C + I)^-1 (C + d I)."""
    _require_standardized(ds)
    spec = PenaltySpec.liu(d)
    gc = gram(ds)
    L = _ols_factor(gc.C)
    beta_ols = solve_with_factor(L, gc.Xty)
    beta = apply_biasing_factor(gc.C, beta_ols, spec.d)
    resid = ds.y - ds.X @ beta
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=0, converged=True,
                     objective=float(resid @ resid) / ds.n)


def fit_lasso(ds: Dataset, lam: float, tol=CD_TOL,
              max_sweeps=CD_MAX_SWEEPS) -> FitResult:
    """LASSO: argmin (1/n)||y - X b||^2 + lam ||b||_1 by coordinate descent."""
    _require_standardized(ds)
    spec = PenaltySpec.lasso(lam)
    gc = gram(ds)
    beta, sweeps, converged = coordinate_descent(
        gc.C, gc.Xty, ds.n, spec.lam, tol=tol, max_sweeps=max_sweeps)
    yty = float(ds.y @ ds.y)
    obj = penalized_objective(gc.C, gc.Xty, yty, ds.n, spec.lam, 0.0, beta)
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=sweeps, converged=converged, objective=obj)


def fit_enet(ds: Dataset, lam1: float, lam2: float, rescale: bool = False,
             tol=CD_TOL, max_sweeps=CD_MAX_SWEEPS) -> FitResult:
    """Naive elastic net: argmin (1/n)||y - X b||^2 + lam2||b||^2 + lam1||b||_1.

    ``rescale=True`` post-multiplies the solution by (1 + lam2), the usual
    debiasing of the naive form; the default keeps the naive solution.
    """
    _require_standardized(ds)
    spec = PenaltySpec.enet(lam1, lam2)
    gc = gram(ds)
    beta, sweeps, converged = coordinate_descent(
        gc.C, gc.Xty, ds.n, spec.lam1, lam2=spec.lam2, tol=tol,
        max_sweeps=max_sweeps)
    yty = float(ds.y @ ds.y)
    obj = penalized_objective(gc.C, gc.Xty, yty, ds.n, spec.lam1, spec.lam2, beta)
    if rescale:
        beta = (1.0 + spec.lam2) * beta
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=sweeps, converged=converged, objective=obj)


def fit_llasso(ds: Dataset, lam: float, d: float, tol=CD_TOL,
               max_sweeps=CD_MAX_SWEEPS) -> FitResult:
    """Liu-rescaled LASSO: F(d) applied to the LASSO solution.

    The reported objective is the defining LASSO loss evaluated at the
    rescaled coefficients.
    """
    _require_standardized(ds)
    spec = PenaltySpec.llasso(lam, d)
    gc = gram(ds)
    base = coordinate_descent(gc.C, gc.Xty, ds.n, spec.lam, tol=tol,
                              max_sweeps=max_sweeps)
    beta_lasso, sweeps, converged = base
    beta = apply_biasing_factor(gc.C, beta_lasso, spec.d)
    yty = float(ds.y @ ds.y)
    obj = penalized_objective(gc.C, gc.Xty, yty, ds.n, spec.lam, 0.0, beta)
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=sweeps, converged=converged, objective=obj)


def fit_gen_llasso(ds: Dataset, lam: float, D) -> FitResult:
    """Per-coordinate biasing: (C + I)^-1 (C + diag(D)) applied to the LASSO."""
    _require_standardized(ds)
    spec = PenaltySpec.gen_llasso(lam, D)
    D_arr = np.asarray(spec.D, dtype=np.float64)
    if D_arr.shape != (ds.p,):
        raise InputError(f"D must have length {ds.p}, got {D_arr.shape}")
    gc = gram(ds)
    beta_lasso, sweeps, converged = coordinate_descent(gc.C, gc.Xty, ds.n,
                                                       spec.lam)
    beta = apply_biasing_factor(gc.C, beta_lasso, D_arr)
    yty = float(ds.y @ ds.y)
    obj = penalized_objective(gc.C, gc.Xty, yty, ds.n, spec.lam, 0.0, beta)
    return FitResult(beta=beta, intercept=_intercept(ds), spec=spec,
                     iterations=sweeps, converged=converged, objective=obj)


def fit(ds: Dataset, spec: PenaltySpec, **kwargs) -> FitResult:
    """Dispatch a fit from a PenaltySpec."""
    if spec.kind == "ols":
        return fit_ols(ds)
    if spec.kind == "ridge":
        return fit_ridge(ds, spec.k)
    if spec.kind == "liu":
        return fit_liu(ds, spec.d)
    if spec.kind == "lasso":
        return fit_lasso(ds, spec.lam, **kwargs)
    if spec.kind == "enet":
        return fit_enet(ds, spec.lam1, spec.lam2, **kwargs)
    if spec.kind == "llasso":
        return fit_llasso(ds, spec.lam, spec.d, **kwargs)
    if spec.kind == "gen_llasso":
        return fit_gen_llasso(ds, spec.lam, spec.D)
    raise InputError(f"unknown estimator kind {spec.kind!r}")


# ---------------------------------------------------------------------------
# anchored-penalty machinery
# ---------------------------------------------------------------------------

def approx_penalized_closed_form(ds: Dataset, lam1: float, lam2: float,
                                 d: float, beta_ref: np.ndarray) -> np.ndarray:
    """Approximate closed form (C + lam2 I + lam1 W^-)^-1 (X'y + d lam2 beta_ref).

    W = diag(|beta_ref_j|) and W^- is its generalized inverse: coordinates
    with |beta_ref_j| <= 1e-10 are treated as killed and forced to zero
    (the penalty lam1 / |beta_ref_j| diverges there).  With lam1 = 0 no
    coordinate is killed and the map is a Liu-type ridge solve.
    """
    _require_standardized(ds)
    beta_ref = np.asarray(beta_ref, dtype=np.float64)
    if beta_ref.shape != (ds.p,):
        raise InputError(f"beta_ref must have length {ds.p}")
    if not np.all(np.isfinite(beta_ref)):
        raise InputError("beta_ref must be finite")
    if lam1 < 0 or lam2 < 0 or not (0.0 <= d <= 1.0):
        raise InputError("require lam1, lam2 >= 0 and d in [0, 1]")
    gc = gram(ds)
    rhs = gc.Xty + d * lam2 * beta_ref
    beta = np.zeros(ds.p)
    if lam1 == 0.0:
        active = np.ones(ds.p, dtype=bool)
    else:
        active = np.abs(beta_ref) > ZERO_COEF_TOL
    if not active.any():
        return beta
    idx = np.flatnonzero(active)
    A = gc.C[np.ix_(idx, idx)] + lam2 * np.eye(idx.size)
    if lam1 > 0.0:
        A = A + lam1 * np.diag(1.0 / np.abs(beta_ref[idx]))
    try:
        beta[idx] = solve_spd(A, rhs[idx])
    except NumericError as exc:
        raise NumericError(f"singular system after augmentation: {exc}") from exc
    return beta


def augment_design(ds: Dataset, lam2: float) -> tuple[np.ndarray, np.ndarray]:
    """Ridge-augmented design: Y* = (y', 0')', X* = (1+lam2)^-1/2 (X', sqrt(lam2) I)'.

    Satisfies X*'X* = (X'X + lam2 I) / (1 + lam2) and Y*'Y* = y'y, so an
    l1 problem on (Y*, X*) is an ordinary LASSO on the augmented data.
    """
    _require_standardized(ds)
    if lam2 < 0:
        raise InputError("lam2 must be >= 0")
    scale = 1.0 / np.sqrt(1.0 + lam2)
    X_star = scale * np.vstack([ds.X, np.sqrt(lam2) * np.eye(ds.p)])
    y_star = np.concatenate([ds.y, np.zeros(ds.p)])
    return y_star, X_star


def anchored_naive_loss(ds: Dataset, beta: np.ndarray, lam1: float,
                        lam2: float, d: float, beta_ols: np.ndarray) -> float:
    """||y - X b||^2 + lam2 ||d b_ols - b||^2 + lam1 ||b||_1 (unnormalized)."""
    _require_standardized(ds)
    beta = np.asarray(beta, dtype=np.float64)
    resid = ds.y - ds.X @ beta
    shift = d * np.asarray(beta_ols) - beta
    return (float(resid @ resid) + lam2 * float(shift @ shift)
            + lam1 * float(np.abs(beta).sum()))


def anchored_quadratic_objective(ds: Dataset, beta: np.ndarray, lam1: float,
                                 lam2: float, d: float,
                                 beta_ols: np.ndarray) -> float:
    """Quadratic reformulation with the shrunken Gram matrix.

    b' ((X'X + lam2 I)/(1 + lam2)) b - 2 y'X b + lam1 ||d b_ols - b||_1.
    """
    _require_standardized(ds)
    beta = np.asarray(beta, dtype=np.float64)
    gc = gram(ds)
    G = (gc.C + lam2 * np.eye(ds.p)) / (1.0 + lam2)
    quad = float(beta @ (G @ beta)) - 2.0 * float(gc.Xty @ beta)
    return quad + lam1 * float(np.abs(d * np.asarray(beta_ols) - beta).sum())


def osborne_covariance(ds: Dataset, lam2: float, b: np.ndarray,
                       beta_norm1: float, sigma2: float) -> np.ndarray:
    """Sandwich covariance approximation on the ridge-augmented design.

    Uses the residual-driven correction
    C* + W* = X*' (I + e e' / (||b||_1 ||X*'e||_inf)) X* and returns
    (C* + W*)^-1 C* (C* + W*)^-1 sigma2 / (1 + lam2).
    """
    b = np.asarray(b, dtype=np.float64)
    y_star, X_star = augment_design(ds, lam2)
    e = y_star - X_star @ b
    g = X_star.T @ e
    g_inf = float(np.max(np.abs(g)))
    if g_inf <= 1e-12 or beta_norm1 <= 0.0:
        raise NumericError("covariance undefined at interpolating fit")
    C_star = X_star.T @ X_star
    C_star = 0.5 * (C_star + C_star.T)
    M = C_star + np.outer(g, g) / (beta_norm1 * g_inf)
    T = solve_spd(M, C_star)
    cov = solve_spd(M, T.T) * (sigma2 / (1.0 + lam2))
    return 0.5 * (cov + cov.T)
