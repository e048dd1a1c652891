"""Lag-feature ridge forecasts with sigma-based and similarity-based prediction intervals.

Modules
-------
series
    CSV ingestion, lag features, chronological split, standardization.
ridge
    Closed-form ridge regression, expanding-window selection of ``k``, scores.
distances
    Euclidean, DTW, LCSS, Hausdorff, discrete Frechet and TWED.
oracles
    Brute-force references for the distances on short sequences.
intervals
    Conventional and similarity-based intervals, coverage and width.
pipeline, config, synth, cli
    Batch runs driven by a flat config file.
"""

__version__ = "0.1.0"

from .errors import ConfigError, DataError, NumericalError, SimIntervalsError
from .series import (
    LagDataset,
    Standardizer,
    TimeSeries,
    build_lag_dataset,
    chronological_split,
    fit_standardizer,
    load_csv,
)
from .ridge import ForecastMetrics, RidgeModel, fit_ridge, predict, score, select_k
from .distances import (
    LCSSResult,
    MetricParams,
    dtw,
    euclidean,
    frechet_discrete,
    hausdorff,
    lcss,
    twed,
)
from .intervals import (
    EvalReport,
    IntervalSeries,
    MethodConfig,
    compare_methods,
    conventional_interval,
    evaluate,
    similarity_interval,
)
