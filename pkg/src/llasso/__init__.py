"""Liu-rescaled LASSO and shrinkage baselines for multicollinear regression.

The package provides:

- penalized and shrinkage estimators for the standardized linear model
  (OLS, ridge, Liu, LASSO, elastic net, and the Liu-rescaled LASSO),
- tuning-parameter selection by validation grids, repeated K-fold cross
  validation, and dedicated rules for the biasing parameter,
- closed-form risk evaluation for the orthonormal design with Monte Carlo
  oracles and a per-coordinate risk bound,
- a seeded, reproducible Monte Carlo benchmark harness over five standard
  simulation designs.
"""

from .dataset import (
    Dataset,
    GramCache,
    apply_training_stats,
    gram,
    load_csv,
    predict,
    standardize,
    to_original_scale,
)
from .estimators import (
    ESTIMATOR_FAMILIES,
    BiasingFactor,
    FitResult,
    PenaltySpec,
    anchored_naive_loss,
    anchored_quadratic_objective,
    apply_biasing_factor,
    approx_penalized_closed_form,
    augment_design,
    biasing_factor,
    coordinate_descent,
    fit,
    fit_enet,
    fit_gen_llasso,
    fit_lasso,
    fit_liu,
    fit_llasso,
    fit_ols,
    fit_ridge,
    lambda_max,
    lasso_path,
    osborne_covariance,
    penalized_objective,
    soft_threshold,
)
from .exceptions import InputError, LlassoError, NumericError
from .linalg import cholesky_spd, solve_spd, spectral_norm_power
from .orthonormal import (
    OrthoConfig,
    coordinate_mse_mc,
    mc_risk,
    risk_bound,
    risk_closed_form,
    scaled_soft_threshold,
)
from .seeding import DEFAULT_SEED, SeedPlan
from .simbench import (
    AR1,
    BenchReport,
    GroupedFactors,
    SimDesign,
    SplitData,
    consistency_harness,
    design_example,
    draw_xy,
    generate,
    mse_beta,
    mse_y,
    run_benchmark,
)
from .tuning import (
    DChoice,
    Grid,
    SelectionReport,
    choose_d_closed_form,
    choose_d_l1,
    default_d_grid,
    default_grids,
    default_k_grid,
    default_lambda_grid,
    kfold_cv,
    median_bootstrap_se,
    refit,
    select_by_validation,
)

__version__ = "0.1.0"
