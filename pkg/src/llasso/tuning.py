"""Tuning-parameter selection.

Grid search over validation sets or repeated K-fold cross validation for
the penalty parameters, plus the two dedicated rules for the biasing
parameter d: the discriminant-based closed form and the l1-proximity rule
min_d ||d * anchor - target||_1, which is solved exactly by a weighted
median of the coordinate ratios.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, GramCache, gram, standardize
from .estimators import (
    coordinate_descent,
    fit_enet,
    fit_lasso,
    fit_liu,
    fit_llasso,
    fit_ols,
    fit_ridge,
    lambda_max,
    lasso_path,
)
from .exceptions import InputError
from .linalg import cholesky_spd, solve_spd, solve_with_factor
from .seeding import DEFAULT_SEED, SeedPlan

ANCHOR_TOL = 1e-10


@dataclass(frozen=True)
class Grid:
    """A sorted, strictly increasing grid of legal parameter values."""

    values: tuple[float, ...]
    scale: str = "linear"

    def __post_init__(self):
        vals = tuple(sorted(float(v) for v in self.values))
        if not vals:
            raise InputError("grid must be nonempty")
        if any(not np.isfinite(v) for v in vals):
            raise InputError("grid values must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InputError("grid values must be distinct")
        if self.scale not in ("linear", "log"):
            raise InputError(f"unknown grid scale {self.scale!r}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def log_space(cls, lo: float, hi: float, num: int) -> "Grid":
        if lo <= 0 or hi <= lo:
            raise InputError("log grid needs 0 < lo < hi")
        return cls(tuple(np.geomspace(lo, hi, num)), scale="log")

    @classmethod
    def lin_space(cls, lo: float, hi: float, num: int) -> "Grid":
        return cls(tuple(np.linspace(lo, hi, num)), scale="linear")


def default_lambda_grid(gc: GramCache, n_obs: int, num: int = 50) -> Grid:
    """50 log-spaced points from lambda_max down to 1e-4 * lambda_max."""
    lmax = lambda_max(gc, n_obs)
    if lmax <= 0.0:
        lmax = 1e-8
    return Grid.log_space(1e-4 * lmax, lmax, num)


def default_k_grid(num: int = 25) -> Grid:
    return Grid.log_space(1e-4, 1e2, num)


def default_d_grid(step: float = 0.01) -> Grid:
    n = int(round(1.0 / step)) + 1
    return Grid(tuple(np.linspace(0.0, 1.0, n)), scale="linear")


def default_grids(family: str, gc: GramCache, n_obs: int) -> dict[str, Grid]:
    if family == "ols":
        return {}
    if family == "ridge":
        return {"k": default_k_grid()}
    if family == "liu":
        return {"d": default_d_grid()}
    if family == "lasso":
        return {"lam": default_lambda_grid(gc, n_obs)}
    if family == "llasso":
        return {"lam": default_lambda_grid(gc, n_obs), "d": default_d_grid()}
    if family == "enet":
        return {"lam1": default_lambda_grid(gc, n_obs), "lam2": default_k_grid()}
    raise InputError(f"unknown estimator family {family!r}")


@dataclass(frozen=True)
class SelectionReport:
    """Outcome of a grid search; chosen attains the minimum criterion value."""

    family: str
    param_names: tuple[str, ...]
    chosen: dict[str, float]
    criterion_values: dict[tuple, float]
    criterion: str


def _check_pair(train: Dataset, valid: Dataset):
    if not train.standardized or not valid.standardized:
        raise InputError("train and validation datasets must be standardized")
    if train.p != valid.p or train.column_names != valid.column_names:
        raise InputError("train and validation sets must share columns")
    if valid.x_means is not None and train.x_means is not None:
        if not (np.allclose(valid.x_means, train.x_means)
                and np.allclose(valid.x_scales, train.x_scales)):
            raise InputError(
                "validation data must be standardized with training statistics"
            )


def _evaluate_family(train: Dataset, family: str, grids: dict[str, Grid] | None,
                     X_eval: np.ndarray, y_eval: np.ndarray):
    """Held-out mean squared error at every grid point of one family.

    Returns (param_names, values, order): ``values`` maps parameter tuples
    to MSEs and ``order`` lists the tuples from strongest to weakest
    regularization, the canonical tie-breaking order.
    """
    gc = gram(train)
    n = train.n
    defaults = default_grids(family, gc, n)
    grids = {**defaults, **(grids or {})}

    def mse(beta):
        r = y_eval - X_eval @ beta
        return float(r @ r) / y_eval.size

    values: dict[tuple, float] = {}
    if family == "ols":
        values[()] = mse(fit_ols(train).beta)
        return (), values, [()]

    if family == "ridge":
        ks = grids["k"].values
        eye = np.eye(train.p)
        for k in ks:
            values[(k,)] = mse(solve_spd(gc.C + k * eye, gc.Xty))
        return ("k",), values, [(k,) for k in reversed(ks)]

    if family == "liu":
        ds_grid = grids["d"].values
        beta_ols = fit_ols(train).beta
        L1 = cholesky_spd(gc.C + np.eye(train.p))
        u = solve_with_factor(L1, gc.C @ beta_ols)
        v = solve_with_factor(L1, beta_ols)
        r0 = y_eval - X_eval @ u
        pv = X_eval @ v
        a = float(r0 @ r0) / y_eval.size
        m = float(r0 @ pv) / y_eval.size
        q = float(pv @ pv) / y_eval.size
        for d in ds_grid:
            if d == 1.0:
                values[(d,)] = mse(beta_ols)
            else:
                values[(d,)] = a - 2.0 * d * m + d * d * q
        return ("d",), values, [(d,) for d in ds_grid]

    if family == "lasso":
        lams = grids["lam"].values
        lams_desc = tuple(reversed(lams))
        betas = lasso_path(gc.C, gc.Xty, n, lams_desc)
        for lam, beta in zip(lams_desc, betas):
            values[(lam,)] = mse(beta)
        return ("lam",), values, [(lam,) for lam in lams_desc]

    if family == "llasso":
        lams = tuple(reversed(grids["lam"].values))
        ds_grid = grids["d"].values
        betas = lasso_path(gc.C, gc.Xty, n, lams)
        L1 = cholesky_spd(gc.C + np.eye(train.p))
        for lam, beta in zip(lams, betas):
            u = solve_with_factor(L1, gc.C @ beta)
            v = solve_with_factor(L1, beta)
            r0 = y_eval - X_eval @ u
            pv = X_eval @ v
            a = float(r0 @ r0) / y_eval.size
            m = float(r0 @ pv) / y_eval.size
            q = float(pv @ pv) / y_eval.size
            for d in ds_grid:
                if d == 1.0:
                    # same arithmetic as the plain-LASSO branch, so a forced
                    # d = 1 reproduces the LASSO selection bit for bit
                    values[(lam, d)] = mse(beta)
                else:
                    values[(lam, d)] = a - 2.0 * d * m + d * d * q
        order = [(lam, d) for lam in lams for d in ds_grid]
        return ("lam", "d"), values, order

    if family == "enet":
        lam1s = tuple(reversed(grids["lam1"].values))
        lam2s = tuple(reversed(grids["lam2"].values))
        for lam2 in lam2s:
            beta = np.zeros(train.p)
            for lam1 in lam1s:
                beta, _, _ = coordinate_descent(gc.C, gc.Xty, n, lam1,
                                                lam2=lam2, beta0=beta)
                values[(lam1, lam2)] = mse(beta)
        order = [(lam1, lam2) for lam1 in lam1s for lam2 in lam2s]
        return ("lam1", "lam2"), values, order

    raise InputError(f"unknown estimator family {family!r}")


def _pick(values: dict[tuple, float], order: list[tuple]) -> tuple:
    best_key, best = None, np.inf
    for key in order:
        v = values[key]
        if v < best:
            best_key, best = key, v
    return best_key


def select_by_validation(train: Dataset, valid: Dataset, family: str,
                         grids: dict[str, Grid] | None = None) -> SelectionReport:
    """Exhaustive validation-set grid search.

    Ties are broken toward stronger regularization (larger penalties,
    smaller d); the result does not depend on the order grids are given in.
    """
    _check_pair(train, valid)
    names, values, order = _evaluate_family(train, family, grids,
                                            valid.X, valid.y)
    key = _pick(values, order)
    return SelectionReport(family=family, param_names=names,
                           chosen=dict(zip(names, key)),
                           criterion_values=values,
                           criterion="validation_mse")


def refit(train: Dataset, family: str, chosen: dict[str, float]):
    """Fit an estimator on the training set at selected parameters."""
    if family == "ols":
        return fit_ols(train)
    if family == "ridge":
        return fit_ridge(train, chosen["k"])
    if family == "liu":
        return fit_liu(train, chosen["d"])
    if family == "lasso":
        return fit_lasso(train, chosen["lam"])
    if family == "llasso":
        return fit_llasso(train, chosen["lam"], chosen["d"])
    if family == "enet":
        return fit_enet(train, chosen["lam1"], chosen["lam2"])
    raise InputError(f"unknown estimator family {family!r}")


# ---------------------------------------------------------------------------
# repeated K-fold cross validation
# ---------------------------------------------------------------------------

def _cv_single_repeat(ds: Dataset, family: str, grids: dict[str, Grid],
                      K: int, rng: np.random.Generator):
    """Average held-out MSE over one random K-fold partition, per grid point."""
    perm = rng.permutation(ds.n)
    folds = np.array_split(perm, K)
    acc: dict[tuple, float] = {}
    names, order = (), []
    for fold in folds:
        mask = np.ones(ds.n, dtype=bool)
        mask[fold] = False
        tr = standardize(Dataset(X=ds.X[mask], y=ds.y[mask],
                                 column_names=ds.column_names))
        X_eval = (ds.X[fold] - tr.x_means) / tr.x_scales
        y_eval = ds.y[fold] - tr.y_mean
        names, values, order = _evaluate_family(tr, family, grids,
                                                X_eval, y_eval)
        for key, v in values.items():
            acc[key] = acc.get(key, 0.0) + v / K
    return names, acc, order


def _cv_repeat_task(args):
    ds, family, grids, K, child_seed = args
    return _cv_single_repeat(ds, family, grids, K,
                             np.random.default_rng(child_seed))


def kfold_cv(ds: Dataset, family: str, grids: dict[str, Grid] | None = None,
             K: int = 10, repeats: int = 1, seed: int = DEFAULT_SEED,
             workers: int = 1):
    """Repeated K-fold cross validation with fold-local standardization.

    For each repeat the data are partitioned at random (seeded), every fold
    model is fit on the remaining folds, standardized with those folds'
    statistics, and scored on the held-out fold.  The per-repeat score of
    the (tuned) estimator is the minimum CV error over its grid.  Returns a
    ``SelectionReport`` whose criterion values are medians over repeats,
    together with the list of per-repeat scores.
    """
    if K < 2:
        raise InputError(f"K must be at least 2, got {K}")
    if K > ds.n:
        raise InputError(f"K = {K} exceeds the number of observations {ds.n}")
    if repeats < 1:
        raise InputError("repeats must be >= 1")
    if ds.standardized:
        raise InputError("kfold_cv expects raw data; folds are standardized locally")
    if grids is None:
        grids = default_grids(family, gram(standardize(ds)), ds.n)

    plan = SeedPlan(seed)
    tasks = [(ds, family, grids, K, plan.stream(r, "cv-partition"))
             for r in range(repeats)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cv_repeat_task, tasks, chunksize=1))
    else:
        results = [_cv_repeat_task(t) for t in tasks]

    names, _, order = results[0]
    per_point = {key: np.array([res[1][key] for res in results])
                 for key in results[0][1]}
    medians = {key: float(np.median(v)) for key, v in per_point.items()}
    per_repeat = [min(res[1].values()) for res in results]
    key = _pick(medians, order)
    report = SelectionReport(family=family, param_names=names,
                             chosen=dict(zip(names, key)),
                             criterion_values=medians,
                             criterion="kfold_cv_mse")
    return report, per_repeat


def median_bootstrap_se(values, n_boot: int = 1000,
                        seed: int = DEFAULT_SEED) -> tuple[float, float]:
    """Median of a sample and the bootstrap standard error of that median."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        raise InputError("cannot summarize an empty sample")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, vals.size, size=(n_boot, vals.size))
    meds = np.median(vals[idx], axis=1)
    return float(np.median(vals)), float(meds.std(ddof=1))


# ---------------------------------------------------------------------------
# biasing-parameter selection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DChoice:
    """Result of the closed-form d selection; flags the l1 fallback path."""

    d: float
    used_l1_fallback: bool
    q_hat: float


def choose_d_closed_form(beta_ols: np.ndarray, beta_enet: np.ndarray,
                         ds: Dataset, lam1: float, lam2: float) -> DChoice:
    """Discriminant-based biasing parameter.

    Computes Q = (lam2 b'b)^2 - lam2 b'b L(beta_enet) with the unnormalized
    loss L(b) = ||y - X b||^2 + lam1 ||b||_1 + lam2 ||b||^2 and returns
    d = max(0, 1 - sqrt(Q) / (lam2 b'b)), clamped to [0, 1].  A negative
    discriminant falls back to the l1-proximity rule.
    """
    if lam2 <= 0:
        raise InputError("closed-form d selection requires lam2 > 0")
    if lam1 < 0:
        raise InputError("lam1 must be >= 0")
    beta_ols = np.asarray(beta_ols, dtype=np.float64)
    beta_enet = np.asarray(beta_enet, dtype=np.float64)
    ss = float(beta_ols @ beta_ols)
    if ss <= ANCHOR_TOL:
        raise InputError("d undefined for null OLS fit")
    resid = ds.y - ds.X @ beta_enet
    loss = (float(resid @ resid) + lam1 * float(np.abs(beta_enet).sum())
            + lam2 * float(beta_enet @ beta_enet))
    s = lam2 * ss
    q = s * s - s * loss
    if q < 0.0:
        return DChoice(d=choose_d_l1(beta_ols, beta_enet),
                       used_l1_fallback=True, q_hat=q)
    return DChoice(d=_d_from_discriminant(q, s), used_l1_fallback=False,
                   q_hat=q)


def _d_from_discriminant(q: float, s: float) -> float:
    d = max(0.0, 1.0 - np.sqrt(q) / s)
    return float(min(1.0, d))


def choose_d_l1(beta_anchor: np.ndarray, beta_target: np.ndarray) -> float:
    """Exact minimizer of sum_j |d * anchor_j - target_j| over d in [0, 1].

    The objective is piecewise linear with breakpoints target_j / anchor_j;
    the minimizer is the weighted median of the breakpoints with weights
    |anchor_j|, ties resolved to the smaller breakpoint.
    """
    anchor = np.asarray(beta_anchor, dtype=np.float64)
    target = np.asarray(beta_target, dtype=np.float64)
    if anchor.shape != target.shape:
        raise InputError("anchor and target must have equal length")
    w = np.abs(anchor)
    live = w > ANCHOR_TOL
    if not live.any():
        raise InputError("all-zero anchor: d is unidentified")
    r = target[live] / anchor[live]
    w = w[live]
    order = np.argsort(r, kind="stable")
    r, w = r[order], w[order]
    cw = np.cumsum(w)
    idx = int(np.searchsorted(cw, 0.5 * cw[-1], side="left"))
    return float(min(1.0, max(0.0, r[idx])))
