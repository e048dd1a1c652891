"""Deterministic synthetic price-like data in the ingestion CSV format."""

from __future__ import annotations

import csv
import io

import numpy as np
import pandas as pd

from .errors import ConfigError

MIN_LENGTH = 50
START_DATE = "2020-04-07"


def generate(
    length: int = 1000,
    phi: float = 0.95,
    noise_sd: float = 1.0,
    n_predictors: int = 5,
    seed: int = 7,
    mean: float = 100.0,
    predictor_noise: float = 0.5,
) -> pd.DataFrame:
    """AR(1) target around ``mean`` plus noisy linear transforms of it.

    ``target[t] = mean + phi * (target[t-1] - mean) + e_t`` with
    ``e_t ~ N(0, noise_sd^2)`` and ``target[0] = mean``. Predictor ``i`` is
    ``a_i + b_i * target + u_t`` with ``u_t ~ N(0, predictor_noise^2)``.
    Dates are consecutive business days. All draws come from one
    ``numpy.random.default_rng(seed)`` stream.
    """
    if int(length) != length or length < MIN_LENGTH:
        raise ConfigError(f"synthetic length must be an integer >= {MIN_LENGTH}, got {length!r}")
    if not (-1.0 < phi < 1.0):
        raise ConfigError(f"AR coefficient must lie in (-1, 1), got {phi!r}")
    if noise_sd < 0 or predictor_noise < 0:
        raise ConfigError("noise standard deviations must be non-negative")
    if int(n_predictors) != n_predictors or n_predictors < 0:
        raise ConfigError(f"n_predictors must be a non-negative integer, got {n_predictors!r}")
    length, n_predictors = int(length), int(n_predictors)

    rng = np.random.default_rng(seed)
    shocks = rng.normal(0.0, 1.0, size=length) * noise_sd
    y = np.empty(length)
    y[0] = mean
    for t in range(1, length):
        y[t] = mean + phi * (y[t - 1] - mean) + shocks[t]

    cols = {"date": pd.bdate_range(START_DATE, periods=length).strftime("%Y-%m-%d"), "target": y}
    for i in range(n_predictors):
        a = rng.uniform(-20.0, 20.0)
        b = rng.uniform(0.5, 1.5)
        cols[f"x{i + 1}"] = a + b * y + rng.normal(0.0, 1.0, size=length) * predictor_noise
    return pd.DataFrame(cols)


def to_csv_text(frame: pd.DataFrame) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(frame.columns)
    for row in frame.itertuples(index=False):
        writer.writerow([row[0], *(f"{v:.6f}" for v in row[1:])])
    return buf.getvalue()


def write_csv(path, **kwargs) -> pd.DataFrame:
    """Generate with :func:`generate` and write a byte-reproducible CSV."""
    frame = generate(**kwargs)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(to_csv_text(frame))
    return frame
