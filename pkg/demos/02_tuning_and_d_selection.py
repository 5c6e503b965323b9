"""Tuning-parameter selection on a train/validation split.

Shows the validation-grid search for each estimator family and the two
dedicated rules for the biasing parameter d: the discriminant-based closed
form and the l1-proximity weighted median.
"""

import numpy as np

from llasso import (
    Dataset,
    apply_training_stats,
    choose_d_closed_form,
    choose_d_l1,
    fit_enet,
    fit_lasso,
    fit_ols,
    select_by_validation,
    standardize,
)

rng = np.random.default_rng(21)
n, p = 50, 8
rho = 0.7
idx = np.arange(p)
sigma = rho ** np.abs(idx[:, None] - idx[None, :])
beta_true = np.array([3.0, 1.5, 0, 0, 2.0, 0, 0, 0])


def draw(m):
    X = rng.standard_normal((m, p)) @ np.linalg.cholesky(sigma).T
    return X, X @ beta_true + 3.0 * rng.standard_normal(m)


X_tr, y_tr = draw(n)
X_va, y_va = draw(n)
train = standardize(Dataset(X=X_tr, y=y_tr,
                            column_names=[f"x{j+1}" for j in range(p)]))
valid = apply_training_stats(train, X_va, y_va)

print("validation-set grid selection (held-out mean squared error):")
for family in ("ridge", "liu", "lasso", "llasso", "enet"):
    report = select_by_validation(train, valid, family)
    chosen = ", ".join(f"{k}={v:.4g}" for k, v in report.chosen.items())
    best = min(report.criterion_values.values())
    print(f"  {family:7} -> {chosen:30} validation MSE {best:.4f}")

beta_ols = fit_ols(train).beta
lam1, lam2 = 0.2, 1.0
beta_en = fit_enet(train, lam1, lam2).beta
choice = choose_d_closed_form(beta_ols, beta_en, train, lam1, lam2)
print(f"\nclosed-form d selection: d = {choice.d:.4f} "
      f"(discriminant {choice.q_hat:.3g}, "
      f"l1 fallback used: {choice.used_l1_fallback})")

beta_lasso = fit_lasso(train, 0.3).beta
d_l1 = choose_d_l1(beta_ols, beta_lasso)
print(f"l1-proximity d selection (weighted median): d = {d_l1:.4f}")
