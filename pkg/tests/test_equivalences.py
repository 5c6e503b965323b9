"""Tests for the augmented design, anchored objectives, covariance
approximation, and the generalized-inverse closed form."""

import numpy as np
import pytest

from llasso import (
    Dataset,
    NumericError,
    anchored_naive_loss,
    anchored_quadratic_objective,
    approx_penalized_closed_form,
    augment_design,
    fit_ols,
    gram,
    osborne_covariance,
    standardize,
)
from helpers import make_dataset


class TestAugmentDesign:
    def test_zero_l2_appends_zero_rows(self):
        ds = make_dataset(np.random.default_rng(0), 10, 3)
        y_star, X_star = augment_design(ds, 0.0)
        np.testing.assert_array_equal(X_star[:10], ds.X)
        np.testing.assert_array_equal(X_star[10:], np.zeros((3, 3)))
        np.testing.assert_array_equal(y_star[:10], ds.y)
        np.testing.assert_array_equal(y_star[10:], np.zeros(3))

    def test_identity_design_unit_l2(self):
        ds = Dataset(X=np.eye(2), y=np.array([1.0, -1.0]),
                     column_names=("a", "b"), standardized=True)
        _, X_star = augment_design(ds, 1.0)
        expect = np.vstack([np.eye(2), np.eye(2)]) / np.sqrt(2.0)
        np.testing.assert_allclose(X_star, expect, atol=1e-15)

    def test_gram_identity_random(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            n = int(rng.integers(10, 51))
            p = int(rng.integers(2, 9))
            ds = make_dataset(rng, n, p)
            lam2 = float(rng.uniform(0, 5))
            y_star, X_star = augment_design(ds, lam2)
            lhs = X_star.T @ X_star
            rhs = (ds.X.T @ ds.X + lam2 * np.eye(p)) / (1.0 + lam2)
            assert np.max(np.abs(lhs - rhs)) < 1e-12
            assert abs(y_star @ y_star - ds.y @ ds.y) < 1e-12

    def test_encodes_elastic_net_loss_exactly(self):
        # for any v: ||y* - X* w||^2 + gamma ||w||_1 with w = sqrt(1+lam2) v
        # equals the naive elastic-net loss at v
        rng = np.random.default_rng(2)
        ds = make_dataset(rng, 15, 4)
        lam1, lam2 = 0.7, 1.3
        gamma = lam1 / np.sqrt(1 + lam2)
        y_star, X_star = augment_design(ds, lam2)
        for _ in range(5):
            v = rng.standard_normal(4)
            w = np.sqrt(1 + lam2) * v
            lhs = (np.sum((y_star - X_star @ w) ** 2)
                   + gamma * np.sum(np.abs(w)))
            rhs = (np.sum((ds.y - ds.X @ v) ** 2)
                   + lam2 * np.sum(v ** 2) + lam1 * np.sum(np.abs(v)))
            assert abs(lhs - rhs) < 1e-10


class TestAnchoredObjectives:
    def test_pure_quadratic_minimized_at_ols(self):
        rng = np.random.default_rng(3)
        ds = make_dataset(rng, 25, 4)
        bols = fit_ols(ds).beta
        base = anchored_quadratic_objective(ds, bols, 0.0, 0.0, 0.5, bols)
        for _ in range(10):
            other = bols + 0.1 * rng.standard_normal(4)
            assert anchored_quadratic_objective(ds, other, 0.0, 0.0, 0.5,
                                                bols) > base

    def test_l1_term_vanishes_at_anchor(self):
        rng = np.random.default_rng(4)
        ds = make_dataset(rng, 20, 3)
        bols = fit_ols(ds).beta
        d = 0.6
        beta = d * bols
        with_l1 = anchored_quadratic_objective(ds, beta, 5.0, 0.8, d, bols)
        without_l1 = anchored_quadratic_objective(ds, beta, 0.0, 0.8, d, bols)
        assert abs(with_l1 - without_l1) < 1e-12

    def test_matches_manual_evaluation(self):
        rng = np.random.default_rng(5)
        ds = make_dataset(rng, 18, 4)
        bols = fit_ols(ds).beta
        beta = rng.standard_normal(4)
        lam1, lam2, d = 0.4, 0.9, 0.3
        C = ds.X.T @ ds.X
        G = (C + lam2 * np.eye(4)) / (1 + lam2)
        manual = (beta @ G @ beta - 2 * (ds.y @ ds.X) @ beta
                  + lam1 * np.abs(d * bols - beta).sum())
        got = anchored_quadratic_objective(ds, beta, lam1, lam2, d, bols)
        assert abs(got - manual) < 1e-10

    def test_naive_loss_matches_manual(self):
        rng = np.random.default_rng(6)
        ds = make_dataset(rng, 18, 4)
        bols = fit_ols(ds).beta
        beta = rng.standard_normal(4)
        lam1, lam2, d = 0.4, 0.9, 0.3
        manual = (np.sum((ds.y - ds.X @ beta) ** 2)
                  + lam2 * np.sum((d * bols - beta) ** 2)
                  + lam1 * np.abs(beta).sum())
        assert abs(anchored_naive_loss(ds, beta, lam1, lam2, d, bols)
                   - manual) < 1e-10


class TestOsborneCovariance:
    def test_interpolating_fit_rejected(self):
        rng = np.random.default_rng(7)
        Z = rng.standard_normal((12, 3))
        beta0 = np.array([1.0, -1.0, 2.0])
        ds_raw = Dataset(X=Z, y=Z @ beta0, column_names=("a", "b", "c"))
        ds = standardize(ds_raw)
        b_exact = fit_ols(ds).beta
        with pytest.raises(NumericError, match="interpolating"):
            osborne_covariance(ds, 0.0, b_exact, float(np.abs(b_exact).sum()),
                               1.0)

    def test_small_residual_structural_limit(self):
        rng = np.random.default_rng(8)
        ds = make_dataset(rng, 30, 3)
        lam2 = 0.5
        y_star, X_star = augment_design(ds, lam2)
        b_ls, *_ = np.linalg.lstsq(X_star, y_star, rcond=None)
        b = b_ls + 1e-6 * rng.standard_normal(3)
        sigma2 = 1.7
        cov = osborne_covariance(ds, lam2, b, float(np.abs(b).sum()), sigma2)
        C_star = X_star.T @ X_star
        plain = np.linalg.inv(C_star) * sigma2 / (1 + lam2)
        np.testing.assert_allclose(cov, plain, rtol=1e-3)

    def test_symmetric_psd_random(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            ds = make_dataset(rng, 25, int(rng.integers(2, 6)))
            lam2 = float(rng.uniform(0, 2))
            b = rng.standard_normal(ds.p)
            cov = osborne_covariance(ds, lam2, b, float(np.abs(b).sum()) + 0.1,
                                     1.0)
            assert np.array_equal(cov, cov.T)
            assert np.linalg.eigvalsh(cov).min() >= -1e-8


class TestApproxClosedForm:
    def test_diagonal_case(self):
        # identity Gram, lam1 = lam2 = 1, large reference coefficients:
        # coordinatewise (2 + 1/|b_j|)^-1 (z_j + d b_j)
        rng = np.random.default_rng(10)
        ds = Dataset(X=np.eye(4), y=rng.standard_normal(4) * 10,
                     column_names=tuple("abcd"), standardized=True)
        b_ref = ds.y.copy()  # equals X'y for the identity design
        d = 0.4
        got = approx_penalized_closed_form(ds, 1.0, 1.0, d, b_ref)
        expect = (ds.y + d * b_ref) / (2.0 + 1.0 / np.abs(b_ref))
        np.testing.assert_allclose(got, expect, atol=1e-12)

    def test_lam1_zero_is_liu_type_solve(self):
        rng = np.random.default_rng(11)
        ds = make_dataset(rng, 20, 4)
        gc = gram(ds)
        b_ref = rng.standard_normal(4)
        b_ref[2] = 0.0  # killed coordinates must survive when lam1 == 0
        lam2, d = 0.8, 0.6
        oracle = np.linalg.solve(gc.C + lam2 * np.eye(4),
                                 gc.Xty + d * lam2 * b_ref)
        got = approx_penalized_closed_form(ds, 0.0, lam2, d, b_ref)
        np.testing.assert_allclose(got, oracle, atol=1e-10)

    def test_kills_small_reference_coordinates(self):
        rng = np.random.default_rng(12)
        ds = make_dataset(rng, 20, 4)
        b_ref = np.array([1.0, 1e-12, -2.0, 0.0])
        got = approx_penalized_closed_form(ds, 0.5, 0.5, 0.5, b_ref)
        assert got[1] == 0.0 and got[3] == 0.0
        assert got[0] != 0.0 and got[2] != 0.0

    def test_fixed_point_near_direct_minimum(self):
        # iterate the closed-form map; its limit's anchored loss must come
        # within 1% of the true minimum found by proximal gradient descent
        rng = np.random.default_rng(13)
        ds = make_dataset(rng, 30, 4, noise=1.0)
        lam1, lam2, d = 0.5, 0.5, 0.5
        bols = fit_ols(ds).beta
        beta = bols.copy()
        for _ in range(5000):
            nxt = approx_penalized_closed_form(ds, lam1, lam2, d, beta)
            if np.max(np.abs(nxt - beta)) < 1e-8:
                beta = nxt
                break
            beta = nxt
        else:
            pytest.fail("fixed-point iteration did not converge")

        # independent oracle: ISTA on the anchored loss
        C = ds.X.T @ ds.X
        Xty = ds.X.T @ ds.y
        step = 1.0 / (2 * np.linalg.eigvalsh(C).max() + 2 * lam2)
        b = bols.copy()
        for _ in range(200_000):
            grad = 2 * (C @ b - Xty) + 2 * lam2 * (b - d * bols)
            v = b - step * grad
            b_new = np.sign(v) * np.maximum(np.abs(v) - step * lam1, 0.0)
            if np.max(np.abs(b_new - b)) < 1e-12:
                b = b_new
                break
            b = b_new
        direct = anchored_naive_loss(ds, b, lam1, lam2, d, bols)
        at_limit = anchored_naive_loss(ds, beta, lam1, lam2, d, bols)
        assert at_limit <= direct * 1.01
        assert at_limit >= direct - 1e-9
