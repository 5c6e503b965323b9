"""Data containers, CSV ingestion, standardization, and Gram caching."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .exceptions import InputError


@dataclass(frozen=True)
class Dataset:
    """A design matrix with its response and standardization metadata.

    ``X`` is n-by-p, ``y`` has length n.  When ``standardized`` is True the
    columns of ``X`` are centered and scaled to unit sample standard
    deviation (divisor n-1) and ``y`` is centered; the training means,
    scales, and response mean are retained so that predictions can be mapped
    back to the original units.
    """

    X: np.ndarray
    y: np.ndarray
    column_names: tuple[str, ...]
    standardized: bool = False
    x_means: np.ndarray | None = None
    x_scales: np.ndarray | None = None
    y_mean: float | None = None

    def __post_init__(self):
        X = np.ascontiguousarray(np.asarray(self.X, dtype=np.float64))
        y = np.asarray(self.y, dtype=np.float64).ravel()
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "column_names", tuple(self.column_names))
        if X.ndim != 2:
            raise InputError("X must be a 2-d array")
        n, p = X.shape
        if n < 2:
            raise InputError(f"need at least 2 observations, got {n}")
        if p < 1:
            raise InputError("need at least one predictor column")
        if y.shape[0] != n:
            raise InputError(f"y has length {y.shape[0]}, expected {n}")
        if len(self.column_names) != p:
            raise InputError(
                f"got {len(self.column_names)} column names for {p} columns"
            )
        if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
            raise InputError("X and y must be finite")

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class GramCache:
    """Cross-product matrices of a standardized dataset: C = X'X, Xty = X'y."""

    C: np.ndarray
    Xty: np.ndarray


def load_csv(path, response_column: str) -> Dataset:
    """Read a plain numeric CSV (comma separated, '.' decimal, header row).

    The response column is split off into ``y``; the remaining columns form
    ``X`` in file order.  Quoting, missing values, and locale decimals are
    not supported.
    """
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if response_column not in header:
            raise InputError(f"{path}: missing column {response_column!r}")
        rows = []
        for i, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise InputError(
                    f"{path}: row {i} has {len(row)} cells, expected {len(header)}"
                )
            vals = []
            for name, cell in zip(header, row):
                try:
                    v = float(cell)
                except ValueError:
                    raise InputError(
                        f"{path}: non-numeric cell at row {i}, column {name!r}: {cell!r}"
                    ) from None
                if not np.isfinite(v):
                    raise InputError(
                        f"{path}: non-finite value at row {i}, column {name!r}"
                    )
                vals.append(v)
            rows.append(vals)
    if len(rows) < 2:
        raise InputError(f"{path}: fewer than 2 data rows")
    data = np.asarray(rows, dtype=np.float64)
    ridx = header.index(response_column)
    y = data[:, ridx]
    X = np.delete(data, ridx, axis=1)
    names = tuple(h for j, h in enumerate(header) if j != ridx)
    for j, name in enumerate(names):
        if np.all(X[:, j] == X[0, j]):
            raise InputError(f"{path}: constant predictor column {name!r}")
    return Dataset(X=X, y=y, column_names=names, standardized=False)


def standardize(ds: Dataset) -> Dataset:
    """Center and scale the predictors (sample sd, divisor n-1); center y."""
    if ds.standardized:
        raise InputError("dataset is already standardized")
    means = ds.X.mean(axis=0)
    scales = ds.X.std(axis=0, ddof=1)
    bad = np.flatnonzero(scales == 0.0)
    if bad.size:
        raise InputError(
            f"zero-variance column {ds.column_names[bad[0]]!r} cannot be standardized"
        )
    y_mean = float(ds.y.mean())
    return Dataset(
        X=(ds.X - means) / scales,
        y=ds.y - y_mean,
        column_names=ds.column_names,
        standardized=True,
        x_means=means,
        x_scales=scales,
        y_mean=y_mean,
    )


def apply_training_stats(train: Dataset, X: np.ndarray, y: np.ndarray,
                         column_names: tuple[str, ...] | None = None) -> Dataset:
    """Standardize new data with the statistics stored on a training set."""
    if not train.standardized:
        raise InputError("training dataset must be standardized")
    return Dataset(
        X=(np.asarray(X, dtype=np.float64) - train.x_means) / train.x_scales,
        y=np.asarray(y, dtype=np.float64) - train.y_mean,
        column_names=column_names if column_names is not None else train.column_names,
        standardized=True,
        x_means=train.x_means,
        x_scales=train.x_scales,
        y_mean=train.y_mean,
    )


def gram(ds: Dataset) -> GramCache:
    """Cross products C = X'X (exactly symmetric) and Xty = X'y."""
    if not ds.standardized:
        raise InputError("gram requires a standardized dataset")
    C = ds.X.T @ ds.X
    # copy the upper triangle onto the lower one so C is symmetric bit-for-bit
    C = np.triu(C) + np.triu(C, 1).T
    return GramCache(C=C, Xty=ds.X.T @ ds.y)


def to_original_scale(train: Dataset, beta: np.ndarray) -> tuple[np.ndarray, float]:
    """Map standardized-scale coefficients to original units.

    Returns ``(beta_orig, intercept)`` such that predictions on raw data are
    ``intercept + X_raw @ beta_orig``.
    """
    if not train.standardized:
        raise InputError("original-scale transform requires training statistics")
    beta = np.asarray(beta, dtype=np.float64)
    beta_orig = beta / train.x_scales
    intercept = float(train.y_mean - train.x_means @ beta_orig)
    return beta_orig, intercept


def predict(train: Dataset, beta: np.ndarray, X_new: np.ndarray) -> np.ndarray:
    """Predict responses in original units from standardized-scale coefficients."""
    if not train.standardized:
        raise InputError("prediction requires training statistics")
    X_new = np.asarray(X_new, dtype=np.float64)
    return train.y_mean + ((X_new - train.x_means) / train.x_scales) @ np.asarray(beta)
