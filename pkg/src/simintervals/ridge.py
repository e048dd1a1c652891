"""Closed-form ridge regression with expanding-window shrinkage selection.

The estimator is the usual ``beta = (X'X + kI)^-1 X'y``, obtained through a
Cholesky solve. The intercept is never penalized: features and target are
centered first and the intercept is recovered from the means.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import linalg

from .errors import ConfigError, DataError, NumericalError
from .series import Standardizer

__all__ = [
    "RidgeModel",
    "ForecastMetrics",
    "DEFAULT_K_GRID",
    "fit_ridge",
    "predict",
    "select_k",
    "expanding_folds",
    "score",
]

DEFAULT_K_GRID = tuple(float(k) for k in np.logspace(-3, 3, 20))
DEFAULT_N_FOLDS = 5


@dataclass(frozen=True, eq=False)
class RidgeModel:
    coefficients: np.ndarray
    intercept: float
    shrinkage: float
    standardizer: Standardizer | None = None

    def __post_init__(self):
        beta = np.array(self.coefficients, dtype=float)
        beta.setflags(write=False)
        if beta.ndim != 1 or not np.all(np.isfinite(beta)) or not math.isfinite(self.intercept):
            raise NumericalError("ridge solution is not finite")
        object.__setattr__(self, "coefficients", beta)
        object.__setattr__(self, "intercept", float(self.intercept))

    def predict(self, features):
        return predict(self, features)


def _as_xy(features, target):
    X = np.asarray(features, dtype=float)
    y = np.asarray(target, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise DataError(f"features {X.shape} and target {y.shape} are not aligned")
    if X.shape[0] < 1 or X.shape[1] < 1:
        raise DataError(f"need at least one row and one column, got {X.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise DataError("features and target must be finite")
    return X, y


def fit_ridge(features, target, k: float, *, fit_intercept: bool = True, standardizer=None) -> RidgeModel:
    """Fit ridge coefficients for a single shrinkage value.

    Parameters
    ----------
    features : (n, p) array_like
    target : (n,) array_like
    k : float
        Non-negative penalty added to the Gram matrix diagonal.
    fit_intercept : bool
        Center ``X`` and ``y`` before solving and return
        ``intercept = mean(y) - mean(X) @ beta``. With standardized features
        the intercept is simply ``mean(y)``. When False the normal equations
        are solved on the raw data and the intercept is 0.
    standardizer : Standardizer, optional
        Carried on the model for bookkeeping only; ``features`` must already
        be in the standardized space.

    Raises
    ------
    NumericalError
        If ``k == 0`` and the Gram matrix is singular.
    """
    X, y = _as_xy(features, target)
    k = float(k)
    if not (k >= 0 and math.isfinite(k)):
        raise ConfigError(f"shrinkage k must be a finite non-negative number, got {k!r}")

    if fit_intercept:
        x_mean, y_mean = X.mean(axis=0), y.mean()
        Xc, yc = X - x_mean, y - y_mean
    else:
        x_mean, y_mean = np.zeros(X.shape[1]), 0.0
        Xc, yc = X, y

    gram = Xc.T @ Xc
    gram[np.diag_indices_from(gram)] += k
    rhs = Xc.T @ yc
    try:
        factor, lower = linalg.cho_factor(gram, lower=False, check_finite=False)
    except linalg.LinAlgError as exc:
        raise NumericalError(f"Gram matrix is singular at k={k}") from exc
    if k == 0.0:
        # Cholesky can succeed on a numerically rank-deficient matrix; its
        # squared pivot ratio then sits near machine precision
        d = np.abs(np.diag(factor))
        if d.min() ** 2 <= d.max() ** 2 * 100 * gram.shape[0] * np.finfo(float).eps:
            raise NumericalError("Gram matrix is singular at k=0")
    beta = linalg.cho_solve((factor, lower), rhs, check_finite=False)
    intercept = y_mean - x_mean @ beta
    return RidgeModel(beta, float(intercept), k, standardizer)


def predict(model: RidgeModel, features) -> np.ndarray:
    """``X @ beta + intercept``."""
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(model.coefficients):
        raise DataError(
            f"model has {len(model.coefficients)} coefficients, features have shape {X.shape}"
        )
    return X @ model.coefficients + model.intercept


def expanding_folds(n_rows: int, n_folds: int):
    """Yield ``(train_idx, valid_idx)`` pairs for expanding-window CV.

    Rows are cut into ``n_folds + 1`` contiguous blocks; fold ``f`` trains on
    blocks ``0..f-1`` and validates on block ``f``.
    """
    blocks = np.array_split(np.arange(n_rows), n_folds + 1)
    for f in range(1, n_folds + 1):
        yield np.concatenate(blocks[:f]), blocks[f]


def select_k(features, target, grid=DEFAULT_K_GRID, n_folds: int = DEFAULT_N_FOLDS):
    """Choose the shrinkage with the lowest mean expanding-window validation MSE.

    Ties (within a relative 1e-12) go to the larger ``k``. A candidate that
    cannot be fitted on some fold (``k = 0`` with a singular Gram matrix)
    scores ``inf``.

    Returns
    -------
    best_k : float
    table : pandas.DataFrame
        Columns ``k`` and ``mean_mse``, sorted by ``k``.
    """
    X, y = _as_xy(features, target)
    grid = sorted(float(k) for k in grid)
    if not grid:
        raise ConfigError("k grid is empty")
    if any(not (k >= 0 and math.isfinite(k)) for k in grid):
        raise ConfigError("k grid must contain finite non-negative values")
    if int(n_folds) != n_folds or n_folds < 2:
        raise ConfigError(f"n_folds must be an integer >= 2, got {n_folds!r}")
    if X.shape[0] < n_folds + 1:
        raise DataError(f"{X.shape[0]} rows cannot form {n_folds} expanding folds")

    folds = list(expanding_folds(X.shape[0], int(n_folds)))
    mse = np.empty(len(grid))
    for i, k in enumerate(grid):
        errs = []
        for tr, va in folds:
            try:
                model = fit_ridge(X[tr], y[tr], k)
            except NumericalError:
                # k=0 on a short early fold; the candidate is infeasible
                errs = [np.inf]
                break
            errs.append(np.mean((predict(model, X[va]) - y[va]) ** 2))
        mse[i] = np.mean(errs)

    if not np.isfinite(mse).any():
        raise NumericalError("no shrinkage value in the grid could be fitted on every fold")
    best = mse.min()
    tied = np.flatnonzero(mse <= best + abs(best) * 1e-12)
    best_k = grid[tied[-1]]
    return best_k, pd.DataFrame({"k": grid, "mean_mse": mse})


@dataclass(frozen=True)
class ForecastMetrics:
    """Point-forecast accuracy. ``r2`` is None when ``actual`` is constant."""

    mse: float
    mae: float
    rmse: float
    r2: float | None
    n: int

    def as_dict(self):
        return {"mse": self.mse, "mae": self.mae, "rmse": self.rmse, "r2": self.r2, "n": self.n}


def score(actual, predicted) -> ForecastMetrics:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.ndim != 1 or a.shape != p.shape or a.size == 0:
        raise DataError(f"actual {a.shape} and predicted {p.shape} must be equal non-empty vectors")
    resid = a - p
    mse = float(np.mean(resid**2))
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((a - a.mean()) ** 2))
    r2 = None if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ForecastMetrics(mse, float(np.mean(np.abs(resid))), math.sqrt(mse), r2, a.size)
