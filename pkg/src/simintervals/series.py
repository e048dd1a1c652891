"""Time series ingestion, lag features, chronological split and standardization.

All algorithms downstream operate on the sample index; timestamps are carried
along as metadata only.
"""

from __future__ import annotations

import logging
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .errors import ConfigError, DataError

__all__ = [
    "TimeSeries",
    "LagDataset",
    "Standardizer",
    "load_csv",
    "build_lag_dataset",
    "chronological_split",
    "fit_standardizer",
]

logger = logging.getLogger(__name__)


def _frozen(a, dtype=float):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """A named, chronologically ordered sequence of samples."""

    name: str
    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        ts = _frozen(self.timestamps, dtype="datetime64[D]")
        vals = _frozen(self.values)
        if vals.ndim != 1 or len(vals) < 1:
            raise DataError(f"series {self.name!r} must be a non-empty 1-D sequence")
        if len(ts) != len(vals):
            raise DataError(f"series {self.name!r}: {len(ts)} timestamps for {len(vals)} values")
        if not np.all(np.isfinite(vals)):
            raise DataError(f"series {self.name!r} contains non-finite values")
        if len(ts) > 1 and not np.all(ts[1:] > ts[:-1]):
            raise DataError(f"series {self.name!r}: timestamps must be strictly increasing")
        object.__setattr__(self, "timestamps", ts)
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True, eq=False)
class LagDataset:
    """Lagged design matrix aligned with its target vector.

    Row ``r`` corresponds to time index ``offset + r`` of the source series;
    every feature in that row was observed strictly earlier.
    """

    features: np.ndarray
    target: np.ndarray
    column_labels: tuple[tuple[str, int], ...]
    timestamps: np.ndarray = field(default=None)
    offset: int = 0

    def __post_init__(self):
        X = _frozen(self.features)
        y = _frozen(self.target)
        if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
            raise DataError(f"features {X.shape} and target {y.shape} are not aligned")
        if X.shape[1] != len(self.column_labels):
            raise DataError("one column label is required per feature column")
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "target", y)
        object.__setattr__(self, "column_labels", tuple(tuple(c) for c in self.column_labels))
        if self.timestamps is not None:
            object.__setattr__(self, "timestamps", _frozen(self.timestamps, dtype="datetime64[D]"))

    @property
    def rows(self) -> int:
        return self.features.shape[0]

    def take(self, start: int, stop: int) -> "LagDataset":
        """Contiguous slice of rows ``[start, stop)``."""
        ts = None if self.timestamps is None else self.timestamps[start:stop]
        return LagDataset(
            self.features[start:stop],
            self.target[start:stop],
            self.column_labels,
            ts,
            self.offset + start,
        )


def load_csv(path, date_column=None, value_columns=None) -> list[TimeSeries]:
    """Read one or more series from a CSV file sharing a date column.

    Parameters
    ----------
    path : str or path-like
        UTF-8 CSV with a header row.
    date_column : str, optional
        Column holding ISO-8601 dates. Defaults to the first column.
    value_columns : list of str, optional
        Columns to load. Defaults to every non-date column.

    Returns
    -------
    list of TimeSeries
        One series per requested column, in the requested order, sorted by
        date. Rows with a missing or unparseable value in *any* requested
        column are dropped so all series share one timestamp grid.
    """
    if not os.path.isfile(path):
        raise DataError(f"no such file: {path}")
    frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    if frame.shape[1] == 0:
        raise DataError(f"{path}: no header row")
    if date_column is None:
        date_column = frame.columns[0]
    if value_columns is None:
        value_columns = [c for c in frame.columns if c != date_column]
    for col in [date_column, *value_columns]:
        if col not in frame.columns:
            raise DataError(f"{path}: missing column {col!r}")
    if not value_columns:
        raise DataError(f"{path}: no value columns")

    dates = pd.to_datetime(frame[date_column].str.strip(), format="%Y-%m-%d", errors="coerce")
    values = frame[list(value_columns)].apply(lambda s: pd.to_numeric(s.str.strip(), errors="coerce"))
    ok = dates.notna() & values.notna().all(axis=1) & np.isfinite(values.to_numpy(float)).all(axis=1)
    dropped = int((~ok).sum())
    if dropped:
        logger.warning("%s: dropped %d row(s) with missing or unparseable values", path, dropped)
    if not ok.any():
        raise DataError(f"{path}: zero usable rows")

    dates = dates[ok].to_numpy().astype("datetime64[D]")
    values = values[ok].to_numpy(float)
    order = np.argsort(dates, kind="stable")
    dates, values = dates[order], values[order]
    dup = dates[1:] == dates[:-1]
    if dup.any():
        raise DataError(f"{path}: duplicate timestamp {dates[1:][dup][0]}")
    return [TimeSeries(col, dates, values[:, i]) for i, col in enumerate(value_columns)]


def build_lag_dataset(target: TimeSeries, predictors=(), max_lag: int = 3) -> LagDataset:
    """Lagged features for every series (target first) at lags ``1..max_lag``.

    Row for time ``t`` has label ``target[t]`` and feature ``s[t - lag]`` for
    each series ``s`` and lag, ordered series-major then by increasing lag.
    The first ``max_lag`` time steps are consumed as history.
    """
    if int(max_lag) != max_lag or max_lag < 1:
        raise ConfigError(f"max_lag must be a positive integer, got {max_lag!r}")
    max_lag = int(max_lag)
    series = [target, *predictors]
    n = len(target)
    for s in predictors:
        if len(s) != n or not np.array_equal(s.timestamps, target.timestamps):
            raise DataError(f"series {s.name!r} is not on the target's timestamp grid")
    if max_lag >= n:
        raise DataError(f"max_lag={max_lag} requires more than {max_lag} samples, got {n}")

    rows = n - max_lag
    cols, labels = [], []
    for s in series:
        for lag in range(1, max_lag + 1):
            cols.append(s.values[max_lag - lag: n - lag])
            labels.append((s.name, lag))
    X = np.column_stack(cols) if cols else np.empty((rows, 0))
    return LagDataset(X, target.values[max_lag:], tuple(labels), target.timestamps[max_lag:], max_lag)


def chronological_split(ds: LagDataset, train_fraction: float = 0.8):
    """Split into leading train rows and trailing test rows, no shuffling."""
    if not 0.0 < train_fraction < 1.0:
        raise ConfigError(f"train_fraction must lie in (0, 1), got {train_fraction!r}")
    if ds.rows < 2:
        raise DataError("need at least 2 rows to split")
    n_train = int(np.floor(train_fraction * ds.rows))
    if n_train == 0 or n_train == ds.rows:
        raise DataError(
            f"train_fraction={train_fraction} leaves an empty partition ({n_train}/{ds.rows - n_train})"
        )
    return ds.take(0, n_train), ds.take(n_train, ds.rows)


@dataclass(frozen=True, eq=False)
class Standardizer:
    """Column-wise affine map ``(x - mean) / scale`` fitted on training data."""

    means: np.ndarray
    scales: np.ndarray

    def __post_init__(self):
        means, scales = _frozen(self.means), _frozen(self.scales)
        if means.shape != scales.shape or means.ndim != 1:
            raise ConfigError("means and scales must be 1-D and equally long")
        if not np.all(scales > 0):
            raise ConfigError("all scales must be positive")
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "scales", scales)

    def _check(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.means):
            raise DataError(f"expected a matrix with {len(self.means)} columns, got shape {X.shape}")
        return X

    def apply(self, X) -> np.ndarray:
        return (self._check(X) - self.means) / self.scales

    def invert(self, Z) -> np.ndarray:
        return self._check(Z) * self.scales + self.means


def fit_standardizer(train_features) -> Standardizer:
    """Per-column mean and population standard deviation.

    A zero-variance column gets scale 1 (so it maps to zeros) and a warning.
    """
    X = np.asarray(train_features, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0 or X.shape[1] == 0:
        raise DataError(f"cannot fit a standardizer on shape {X.shape}")
    means = X.mean(axis=0)
    scales = X.std(axis=0, ddof=0)
    flat = ~(scales > 0)
    if flat.any():
        warnings.warn(
            f"{int(flat.sum())} zero-variance column(s) at index {np.flatnonzero(flat).tolist()}; scale set to 1",
            RuntimeWarning,
            stacklevel=2,
        )
        scales = np.where(flat, 1.0, scales)
    return Standardizer(means, scales)
