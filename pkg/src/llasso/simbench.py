"""Monte Carlo benchmark harness.

Defines the five simulation designs used in the comparison study, draws
train/validation/test splits from them, scores estimators by the noiseless
test prediction error MSE_y and the coefficient error MSE_beta, and runs
seeded, replication-parallel benchmarks whose output is invariant to the
worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset, apply_training_stats, standardize, to_original_scale
from .estimators import ESTIMATOR_FAMILIES, fit_llasso
from .exceptions import InputError, NumericError
from .seeding import DEFAULT_SEED, SeedPlan
from .tuning import Grid, median_bootstrap_se, refit, select_by_validation


@dataclass(frozen=True)
class AR1:
    """Autoregressive covariance: Sigma_ij = rho^|i-j|."""

    rho: float

    def __post_init__(self):
        if not (-1.0 < self.rho < 1.0):
            raise InputError("AR1 correlation must lie in (-1, 1)")


@dataclass(frozen=True)
class GroupedFactors:
    """Latent-factor groups: each group shares one N(0,1) factor plus noise.

    Predictors outside the groups are independent standard normal.
    """

    group_sizes: tuple[int, ...]
    noise_var: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "group_sizes",
                           tuple(int(s) for s in self.group_sizes))
        if any(s < 1 for s in self.group_sizes):
            raise InputError("group sizes must be positive")
        if self.noise_var <= 0:
            raise InputError("idiosyncratic variance must be positive")


@dataclass(frozen=True)
class SimDesign:
    """Complete description of one simulation example."""

    name: str
    n_train: int
    n_valid: int
    n_test: int
    p: int
    beta_true: np.ndarray
    sigma: float
    covariance: AR1 | GroupedFactors

    def __post_init__(self):
        beta = np.asarray(self.beta_true, dtype=np.float64)
        object.__setattr__(self, "beta_true", beta)
        if beta.shape != (self.p,):
            raise InputError("beta_true length must equal p")
        if min(self.n_train, self.n_valid, self.n_test) < 2:
            raise InputError("all split sizes must be at least 2")
        if self.sigma <= 0:
            raise InputError("sigma must be positive")
        if isinstance(self.covariance, GroupedFactors):
            if sum(self.covariance.group_sizes) > self.p:
                raise InputError("grouped factors exceed the predictor count")


def design_example(k: int) -> SimDesign:
    """The five benchmark designs, indexed 1 through 5."""
    if k == 1:
        return SimDesign("example1", 20, 20, 200, 8,
                         np.array([3.0, 1.5, 0, 0, 2.0, 0, 0, 0]), 3.0,
                         AR1(0.5))
    if k == 2:
        beta = np.zeros(40)
        beta[10:20] = 3.0
        beta[30:40] = 3.0
        return SimDesign("example2", 100, 100, 300, 40, beta, 3.0, AR1(0.5))
    if k == 3:
        beta = np.concatenate([np.full(5, 3.0), np.full(5, 4.0), np.zeros(20)])
        return SimDesign("example3", 50, 50, 200, 30, beta, 3.0,
                         GroupedFactors(group_sizes=(5, 5), noise_var=0.01))
    if k == 4:
        return SimDesign("example4", 20, 20, 200, 8,
                         np.array([3.0, 1.5, 0, 0, 0, 0, -1.0, -1.0]), 3.0,
                         AR1(0.5))
    if k == 5:
        beta = np.concatenate([np.full(8, 2.0), np.zeros(22)])
        return SimDesign("example5", 50, 50, 200, 30, beta, 6.0, AR1(0.9))
    raise InputError(f"unknown example {k}; valid ids are 1..5")


def _ar1_chol(p: int, rho: float) -> np.ndarray:
    idx = np.arange(p)
    sigma = rho ** np.abs(idx[:, None] - idx[None, :])
    return np.linalg.cholesky(sigma)


def draw_xy(design: SimDesign, n: int,
            rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """One draw of n rows: X from the design covariance, y = X beta + sigma eps."""
    cov = design.covariance
    if isinstance(cov, AR1):
        X = rng.standard_normal((n, design.p)) @ _ar1_chol(design.p, cov.rho).T
    else:
        blocks = []
        for size in cov.group_sizes:
            factor = rng.standard_normal((n, 1))
            noise = np.sqrt(cov.noise_var) * rng.standard_normal((n, size))
            blocks.append(factor + noise)
        rest = design.p - sum(cov.group_sizes)
        if rest:
            blocks.append(rng.standard_normal((n, rest)))
        X = np.hstack(blocks)
    y = X @ design.beta_true + design.sigma * rng.standard_normal(n)
    return X, y


@dataclass(frozen=True)
class SplitData:
    """Train/validation/test datasets from one design draw.

    The training set is standardized on its own statistics; validation and
    test reuse those statistics.  The raw test design matrix is kept for
    scoring against the noiseless signal.
    """

    design: SimDesign
    train: Dataset
    valid: Dataset
    test: Dataset
    X_test_raw: np.ndarray

    @property
    def x_means_train(self) -> np.ndarray:
        return self.train.x_means

    @property
    def y_mean_train(self) -> float:
        return self.train.y_mean


def generate(design: SimDesign, seed: int) -> SplitData:
    """Draw one train/validation/test triple, standardized on training statistics."""
    rng = np.random.default_rng(seed)
    names = tuple(f"x{j + 1}" for j in range(design.p))
    X_tr, y_tr = draw_xy(design, design.n_train, rng)
    X_va, y_va = draw_xy(design, design.n_valid, rng)
    X_te, y_te = draw_xy(design, design.n_test, rng)
    train = standardize(Dataset(X=X_tr, y=y_tr, column_names=names))
    valid = apply_training_stats(train, X_va, y_va)
    test = apply_training_stats(train, X_te, y_te)
    return SplitData(design=design, train=train, valid=valid, test=test,
                     X_test_raw=X_te)


def mse_y(X_test: np.ndarray, beta_true: np.ndarray, beta_hat: np.ndarray,
          x_mean_train: np.ndarray, y_mean_train: float) -> float:
    """Noiseless test prediction error.

    Mean over test rows of (x'beta_true - (y_bar + (x - x_bar)'beta_hat))^2,
    with beta_hat on the original (unstandardized) scale.
    """
    X_test = np.asarray(X_test, dtype=np.float64)
    signal = X_test @ np.asarray(beta_true)
    pred = y_mean_train + (X_test - x_mean_train) @ np.asarray(beta_hat)
    r = signal - pred
    return float(r @ r) / X_test.shape[0]


def mse_beta(beta_hat: np.ndarray, beta_true: np.ndarray) -> float:
    """Squared Euclidean distance between estimated and true coefficients."""
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    beta_true = np.asarray(beta_true, dtype=np.float64)
    if beta_hat.shape != beta_true.shape:
        raise InputError("coefficient vectors must have equal length")
    diff = beta_hat - beta_true
    return float(diff @ diff)


# ---------------------------------------------------------------------------
# replication engine
# ---------------------------------------------------------------------------

def _bench_replication(args):
    design, families, grids, child_seed = args
    split = generate(design, child_seed)
    out = {}
    for fam in families:
        fam_grids = grids.get(fam) if grids else None
        try:
            report = select_by_validation(split.train, split.valid, fam,
                                          fam_grids)
            fitres = refit(split.train, fam, report.chosen)
        except NumericError:
            out[fam] = None
            continue
        beta_orig, _ = to_original_scale(split.train, fitres.beta)
        out[fam] = (
            mse_y(split.X_test_raw, design.beta_true, beta_orig,
                  split.train.x_means, split.train.y_mean),
            mse_beta(beta_orig, design.beta_true),
        )
    return out


@dataclass
class BenchReport:
    """Per-estimator medians of MSE_y / MSE_beta with bootstrap standard errors."""

    designs: tuple[str, ...]
    estimators: tuple[str, ...]
    reps: int
    seed: int
    mse_y_raw: dict
    mse_beta_raw: dict

    def available(self, design: str, estimator: str) -> bool:
        return self.mse_y_raw.get((design, estimator)) is not None

    def summary_rows(self):
        """One row per design x estimator: medians and bootstrap SEs."""
        plan = SeedPlan(self.seed)
        rows = []
        for dname in self.designs:
            for est in self.estimators:
                ys = self.mse_y_raw.get((dname, est))
                if ys is None:
                    continue
                bs = self.mse_beta_raw[(dname, est)]
                med_y, se_y = median_bootstrap_se(
                    ys, seed=plan.stream(0, f"boot:{dname}:{est}:y"))
                med_b, se_b = median_bootstrap_se(
                    bs, seed=plan.stream(0, f"boot:{dname}:{est}:beta"))
                rows.append({"design": dname, "estimator": est,
                             "median_mse_y": med_y, "se_mse_y": se_y,
                             "median_mse_beta": med_b, "se_mse_beta": se_b,
                             "reps": len(ys), "seed": self.seed})
        return rows

    def to_csv(self) -> str:
        header = ("design,estimator,median_mse_y,se_mse_y,"
                  "median_mse_beta,se_mse_beta,reps,seed")
        lines = [header]
        for r in self.summary_rows():
            lines.append(
                f"{r['design']},{r['estimator']},{r['median_mse_y']:.12g},"
                f"{r['se_mse_y']:.12g},{r['median_mse_beta']:.12g},"
                f"{r['se_mse_beta']:.12g},{r['reps']},{r['seed']}")
        return "\n".join(lines) + "\n"

    def to_raw_csv(self) -> str:
        """Per-replication vectors, one row per design x estimator x replication."""
        lines = ["design,estimator,rep,mse_y,mse_beta"]
        for dname in self.designs:
            for est in self.estimators:
                ys = self.mse_y_raw.get((dname, est))
                if ys is None:
                    continue
                bs = self.mse_beta_raw[(dname, est)]
                for r, (a, b) in enumerate(zip(ys, bs)):
                    lines.append(f"{dname},{est},{r},{a:.12g},{b:.12g}")
        return "\n".join(lines) + "\n"

    def to_table(self) -> str:
        rows = self.summary_rows()
        header = ["design", "estimator", "median MSE_y", "(se)",
                  "median MSE_b", "(se)", "reps"]
        cells = [[r["design"], r["estimator"], f"{r['median_mse_y']:.4f}",
                  f"{r['se_mse_y']:.4f}", f"{r['median_mse_beta']:.4f}",
                  f"{r['se_mse_beta']:.4f}", str(r["reps"])] for r in rows]
        widths = [max(len(h), *(len(c[i]) for c in cells)) if cells else len(h)
                  for i, h in enumerate(header)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        out = [fmt.format(*header), fmt.format(*("-" * w for w in widths))]
        out += [fmt.format(*c) for c in cells]
        return "\n".join(out) + "\n"


def run_benchmark(designs, estimators=ESTIMATOR_FAMILIES, reps: int = 250,
                  seed: int = DEFAULT_SEED, workers: int = 1,
                  grids: dict[str, dict[str, Grid]] | None = None) -> BenchReport:
    """Replicated tune-on-validation / score-on-test benchmark.

    Each replication draws a fresh split, selects every estimator's tuning
    parameters on the validation set, refits on the training set, and
    scores on the test set.  All randomness derives from per-replication
    child seeds, and results are reduced in replication order, so the
    report is a pure function of ``seed`` regardless of ``workers``.
    """
    if reps < 1:
        raise InputError("reps must be >= 1")
    designs = list(designs)
    estimators = tuple(estimators)
    for fam in estimators:
        if fam not in ESTIMATOR_FAMILIES:
            raise InputError(f"unknown estimator family {fam!r}")
    plan = SeedPlan(seed)
    tasks = [(design, estimators, grids,
              plan.stream(r, f"bench:{design.name}"))
             for design in designs for r in range(reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_bench_replication, tasks, chunksize=4))
    else:
        results = [_bench_replication(t) for t in tasks]

    mse_y_raw, mse_beta_raw = {}, {}
    for i, design in enumerate(designs):
        chunk = results[i * reps:(i + 1) * reps]
        for est in estimators:
            pairs = [res[est] for res in chunk if res[est] is not None]
            if not pairs:
                mse_y_raw[(design.name, est)] = None
                mse_beta_raw[(design.name, est)] = None
                continue
            mse_y_raw[(design.name, est)] = np.array([p[0] for p in pairs])
            mse_beta_raw[(design.name, est)] = np.array([p[1] for p in pairs])
    return BenchReport(designs=tuple(d.name for d in designs),
                       estimators=estimators, reps=reps, seed=seed,
                       mse_y_raw=mse_y_raw, mse_beta_raw=mse_beta_raw)


def consistency_harness(design: SimDesign, n_list, reps: int = 100,
                        seed: int = DEFAULT_SEED, lam_scale: float = 2.0,
                        d: float = 0.5):
    """Empirical root-n scaling of the Liu-rescaled LASSO error.

    For each training size n fits the estimator at lambda = lam_scale / n
    (so the penalty vanishes at the parametric rate) and reports the median
    of sqrt(n) * ||beta_hat - beta_true||_2 over replications.  Returns a
    list of (n, median) pairs.
    """
    n_list = [int(n) for n in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InputError("training sizes must be increasing")
    plan = SeedPlan(seed)
    names = tuple(f"x{j + 1}" for j in range(design.p))
    rows = []
    for n in n_list:
        stats = []
        for r in range(reps):
            rng = plan.rng(r, f"consistency:{n}")
            X, y = draw_xy(design, n, rng)
            train = standardize(Dataset(X=X, y=y, column_names=names))
            fitres = fit_llasso(train, lam_scale / n, d)
            beta_orig, _ = to_original_scale(train, fitres.beta)
            stats.append(np.sqrt(n) * float(
                np.linalg.norm(beta_orig - design.beta_true)))
        rows.append((n, float(np.median(stats))))
    return rows
