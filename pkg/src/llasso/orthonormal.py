"""Closed-form risk theory for the orthonormal design (X'X = I).

Under an orthonormal design the Liu-rescaled LASSO acts coordinatewise as a
scaled soft threshold c_d * sgn(z)(|z| - t)+ with c_d = (1 + d)/2.  This
module evaluates the exact risk of that map for Gaussian coordinates, a
Monte Carlo oracle for the same quantity, and a per-coordinate upper bound
of Donoho-Johnstone type at the threshold t = sqrt(2 log(1/delta)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .exceptions import InputError
from .seeding import DEFAULT_SEED

MC_CHUNK = 100_000


def _phi(x):
    return np.exp(-0.5 * x * x) / np.sqrt(2.0 * np.pi)


@dataclass(frozen=True)
class OrthoConfig:
    """Configuration of a coordinatewise soft-threshold risk evaluation.

    ``means`` are the standardized coordinate means (true coefficient over
    noise scale), ``threshold`` the soft-threshold level in the same units,
    ``d`` the biasing parameter, and ``tail_prob`` the delta in (0, 1/2]
    that fixes the bound's internal threshold sqrt(2 log(1/delta)).
    """

    means: np.ndarray
    threshold: float
    d: float
    sigma: float = 1.0
    tail_prob: float = 0.1

    def __post_init__(self):
        means = np.atleast_1d(np.asarray(self.means, dtype=np.float64))
        object.__setattr__(self, "means", means)
        if not np.all(np.isfinite(means)):
            raise InputError("means must be finite")
        if self.threshold < 0:
            raise InputError("threshold must be >= 0")
        if not (0.0 <= self.d <= 1.0):
            raise InputError("d must lie in [0, 1]")
        if self.sigma <= 0:
            raise InputError("sigma must be > 0")
        if not (0.0 < self.tail_prob <= 0.5):
            raise InputError("tail_prob must lie in (0, 1/2]")

    @property
    def c_d(self) -> float:
        return (1.0 + self.d) / 2.0

    @property
    def p(self) -> int:
        return self.means.size


def scaled_soft_threshold(z, threshold: float, d: float):
    """Coordinatewise c_d * sgn(z) (|z| - threshold)+ with c_d = (1 + d)/2."""
    if threshold < 0:
        raise InputError("threshold must be >= 0")
    if not (0.0 <= d <= 1.0):
        raise InputError("d must lie in [0, 1]")
    c_d = (1.0 + d) / 2.0
    return c_d * np.sign(z) * np.maximum(np.abs(z) - threshold, 0.0)


def risk_closed_form(cfg: OrthoConfig) -> float:
    """Exact risk of the scaled soft threshold about its scaled means.

    Evaluates, with t the threshold and D the coordinate means,

        c_d^2 * sum_j { 1 + t^2 + (D_j^2 - 1 - t^2)[Phi(t - D_j) - Phi(-t - D_j)]
                        - (t - D_j) phi(t + D_j) - (t + D_j) phi(t - D_j) }

    which equals E || c_d soft(Z, t) - c_d D ||^2 for Z_j ~ N(D_j, 1); the
    braced summand is the classical soft-threshold risk and the scale factor
    c_d^2 carries the whole dependence on d.
    """
    t = cfg.threshold
    D = cfg.means
    inner = (1.0 + t * t
             + (D * D - 1.0 - t * t) * (ndtr(t - D) - ndtr(-t - D))
             - (t - D) * _phi(t + D) - (t + D) * _phi(t - D))
    return float(cfg.c_d ** 2 * inner.sum())


def mc_risk(cfg: OrthoConfig, n_draws: int, seed: int = DEFAULT_SEED):
    """Monte Carlo oracle for :func:`risk_closed_form`.

    Draws Z_j ~ N(mean_j, 1), applies the scaled soft threshold, and
    averages the squared distance to the scaled means c_d * mean_j.
    Accumulation is chunked with per-chunk child seeds, so the result is
    independent of how the chunks are scheduled.  Returns
    ``(estimate, standard_error)``.
    """
    if n_draws < 10_000:
        raise InputError("need at least 10,000 draws")
    c_d = cfg.c_d
    target = c_d * cfg.means
    total = 0.0
    total_sq = 0.0
    done = 0
    chunk_index = 0
    while done < n_draws:
        m = min(MC_CHUNK, n_draws - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=[int(seed), chunk_index]))
        Z = cfg.means + rng.standard_normal((m, cfg.p))
        est = scaled_soft_threshold(Z, cfg.threshold, cfg.d)
        err = ((est - target) ** 2).sum(axis=1)
        total += float(err.sum())
        total_sq += float((err * err).sum())
        done += m
        chunk_index += 1
    mean = total / n_draws
    var = max(0.0, (total_sq / n_draws - mean * mean) * n_draws / (n_draws - 1))
    return mean, float(np.sqrt(var / n_draws))


def coordinate_mse_mc(cfg: OrthoConfig, n_draws: int, seed: int = DEFAULT_SEED):
    """Per-coordinate Monte Carlo MSE of sigma * c_d * soft(Z, t) about the means.

    This is the unscaled-target companion of :func:`mc_risk`, matching the
    quantity bounded by :func:`risk_bound`.  Returns ``(mse, se)`` arrays.
    """
    if n_draws < 10_000:
        raise InputError("need at least 10,000 draws")
    scale = cfg.sigma * cfg.c_d
    total = np.zeros(cfg.p)
    total_sq = np.zeros(cfg.p)
    done = 0
    chunk_index = 0
    while done < n_draws:
        m = min(MC_CHUNK, n_draws - done)
        rng = np.random.default_rng(
            np.random.SeedSequence(entropy=[int(seed), chunk_index]))
        Z = cfg.means + rng.standard_normal((m, cfg.p))
        est = scale * np.sign(Z) * np.maximum(np.abs(Z) - cfg.threshold, 0.0)
        err = (est - cfg.means) ** 2
        total += err.sum(axis=0)
        total_sq += (err * err).sum(axis=0)
        done += m
        chunk_index += 1
    mean = total / n_draws
    var = np.maximum(0.0, (total_sq / n_draws - mean ** 2)
                     * n_draws / (n_draws - 1))
    return mean, np.sqrt(var / n_draws)


def risk_bound(cfg: OrthoConfig) -> np.ndarray:
    """Per-coordinate risk bound at the threshold sqrt(2 log(1/delta)).

    For delta <= 1/2 and t = sqrt(2 log(1/delta)), bounds the MSE of
    sigma * c_d * soft(Z, t) about each mean by

        sigma^2 c_d^2 (1 + 2 log(1/delta)) [delta + min(mean^2, 1)]
        + (sigma c_d - 1)^2 mean^2
        - 2 sigma c_d (sigma c_d - 1) mean t [Phi(t - mean) - Phi(t + mean)].
    """
    delta = cfg.tail_prob
    log_term = 2.0 * np.log(1.0 / delta)
    t = np.sqrt(log_term)
    s = cfg.sigma * cfg.c_d
    D = cfg.means
    return (s * s * (1.0 + log_term) * (delta + np.minimum(D * D, 1.0))
            + (s - 1.0) ** 2 * D * D
            - 2.0 * s * (s - 1.0) * D * t * (ndtr(t - D) - ndtr(t + D)))
