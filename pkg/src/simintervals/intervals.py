"""Prediction intervals around point forecasts, and their coverage/width scores.

Two families of symmetric interval ``(yhat - m, yhat + m)`` are built:

* conventional: ``m = Z * SD / sqrt(N)`` with ``SD`` the sample standard
  deviation of recent residuals and ``Z`` the standard-normal quantile;
* similarity: ``m`` derived from a distance between the last ``w`` predicted
  and the last ``w`` actual values.

Both only ever look at values strictly before the step being bracketed.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from statistics import NormalDist

import numpy as np

from . import distances
from .distances import MetricParams
from .errors import ConfigError, DataError

__all__ = [
    "IntervalSeries",
    "EvalReport",
    "MethodConfig",
    "DEFAULT_METHODS",
    "z_value",
    "conventional_interval",
    "similarity_margin",
    "similarity_interval",
    "build_interval",
    "evaluate",
    "compare_methods",
]

SIMILARITY_METHODS = distances.METHODS
CUMULATIVE = ("euclidean", "dtw", "twed")
MAX_TYPE = ("hausdorff", "frechet")
DEFAULT_METHODS = ("conventional", "dtw", "lcss", "hausdorff", "twed", "frechet")


def _vec(a, name):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise DataError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(a)):
        raise DataError(f"{name} contains non-finite values")
    return a


@dataclass(frozen=True, eq=False)
class IntervalSeries:
    method: str
    centers: np.ndarray
    lowers: np.ndarray
    uppers: np.ndarray
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        c, lo, hi = (np.array(v, dtype=float) for v in (self.centers, self.lowers, self.uppers))
        if not (c.shape == lo.shape == hi.shape) or c.ndim != 1:
            raise DataError("centers, lowers and uppers must be equally long vectors")
        if np.any(lo > c) or np.any(c > hi):
            raise DataError(f"{self.method}: bounds do not bracket the centers")
        for a in (c, lo, hi):
            a.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "lowers", lo)
        object.__setattr__(self, "uppers", hi)

    def __len__(self):
        return len(self.centers)

    @property
    def widths(self):
        return self.uppers - self.lowers

    @classmethod
    def symmetric(cls, method, centers, margins, params=None):
        centers = np.asarray(centers, dtype=float)
        margins = np.asarray(margins, dtype=float)
        return cls(method, centers, centers - margins, centers + margins, dict(params or {}))


@dataclass(frozen=True)
class EvalReport:
    method: str
    coverage_pct: float
    mean_width: float
    n_points: int
    params: dict = field(default_factory=dict, compare=False)

    def row(self):
        return {
            "method": self.method,
            "coverage_pct": self.coverage_pct,
            "mean_width": self.mean_width,
            "n_points": self.n_points,
        }


def z_value(confidence: float) -> float:
    """Two-sided standard-normal critical value, e.g. 1.95996... for 0.95."""
    if not 0.0 < confidence < 1.0:
        raise ConfigError(f"confidence must lie in (0, 1), got {confidence!r}")
    return NormalDist().inv_cdf((1.0 + confidence) / 2.0)


def conventional_interval(
    predicted,
    warmup_residuals,
    confidence: float = 0.95,
    *,
    actual=None,
    window: int = 50,
    ci_n: int = 1,
    scale: float = 1.0,
) -> IntervalSeries:
    """Sigma-based interval ``yhat +/- scale * Z * SD / sqrt(ci_n)``.

    Parameters
    ----------
    predicted : (T,) array_like
        Point forecasts for the steps to bracket.
    warmup_residuals : array_like
        Residuals (actual - predicted) observed before the first step, oldest
        first; typically the in-sample training residuals.
    confidence : float
        Nominal level in (0, 1).
    actual : (T,) array_like, optional
        Realized values for the bracketed steps. When given, the residual of
        step ``t`` joins the rolling window from step ``t + 1`` on. When
        omitted, every step uses the tail of ``warmup_residuals``.
    window : int
        Number of trailing residuals whose sample standard deviation is used.
    ci_n : int
        Divisor inside the square root. 1 gives a per-observation interval;
        larger values give the narrower interval for a mean of ``ci_n``
        observations.
    scale : float
        Extra positive multiplier on the margin.
    """
    yhat = _vec(predicted, "predicted")
    hist = _vec(warmup_residuals, "warmup_residuals")
    z = z_value(confidence)
    if int(window) != window or window < 2:
        raise ConfigError(f"residual window must be an integer >= 2, got {window!r}")
    if int(ci_n) != ci_n or ci_n < 1:
        raise ConfigError(f"ci_n must be a positive integer, got {ci_n!r}")
    if not scale > 0:
        raise ConfigError(f"scale must be positive, got {scale!r}")
    if hist.size < 2:
        raise DataError("at least two warm-up residuals are needed for a standard deviation")
    window = int(window)

    if actual is None:
        sd = np.full(yhat.size, np.std(hist[-window:], ddof=1))
    else:
        act = _vec(actual, "actual")
        if act.shape != yhat.shape:
            raise DataError("actual and predicted must have equal lengths")
        resid = np.concatenate([hist, act - yhat])
        h = hist.size
        sd = np.array([np.std(resid[max(0, h + t - window): h + t], ddof=1) for t in range(yhat.size)])

    margins = scale * z * sd / math.sqrt(ci_n)
    params = {
        "confidence": confidence,
        "z": z,
        "residual_window": window,
        "ci_n": int(ci_n),
        "scale": scale,
        "rolling": actual is not None,
    }
    return IntervalSeries.symmetric("conventional", yhat, margins, params)


def _lcss_epsilon(A, params):
    if params.lcss_epsilon is not None:
        return params.lcss_epsilon
    eps = params.lcss_epsilon_factor * float(np.std(A))
    # a flat window would give eps = 0, which admits no threshold
    return eps if eps > 0 else np.finfo(float).eps * max(1.0, float(np.max(np.abs(A))))


def similarity_margin(method: str, P, A, params: MetricParams | None = None, scale: float = 1.0) -> float:
    """Half-width implied by the distance between a predicted and an actual window.

    ``P`` and ``A`` are equally long (``w``) windows of past predictions and
    the matching actual values.

    * euclidean, dtw, twed (cumulative costs): ``scale * D / w``
    * hausdorff, frechet (maximum-type): ``scale * D``
    * lcss: ``scale * sd(A) * (1 + (1 - similarity) * w)``
    """
    params = params or MetricParams()
    P = _vec(P, "P")
    A = _vec(A, "A")
    w = P.size
    if A.size != w or w == 0:
        raise DataError("predicted and actual windows must be equally long and non-empty")
    if method in ("euclidean", "dtw"):
        D = getattr(distances, method)(P, A)
        return scale * D / w
    if method == "twed":
        return scale * distances.twed(P, A, params.twed_nu, params.twed_lambda) / w
    if method == "hausdorff":
        return scale * distances.hausdorff(P, A, params.embed)
    if method == "frechet":
        return scale * distances.frechet_discrete(P, A, params.embed)
    if method == "lcss":
        sim = distances.lcss(P, A, _lcss_epsilon(A, params)).similarity
        return scale * float(np.std(A)) * (1.0 + (1.0 - sim) * w)
    raise ConfigError(f"unknown similarity method {method!r}; expected one of {SIMILARITY_METHODS}")


def similarity_interval(
    method: str,
    predicted,
    actual,
    history_predicted,
    history_actual,
    *,
    window: int = 20,
    scale: float = 1.0,
    params: MetricParams | None = None,
) -> IntervalSeries:
    """Distance-based interval for each forecast step.

    Parameters
    ----------
    method : str
        One of ``euclidean, dtw, lcss, hausdorff, frechet, twed``.
    predicted, actual : (T,) array_like
        Forecasts and realized values of the bracketed steps. ``actual[t]`` is
        only consulted for steps after ``t``.
    history_predicted, history_actual : array_like
        In-sample predictions and actuals immediately preceding step 0 (the
        warm-up); at least ``window`` of each.
    window : int
        Length ``w >= 2`` of the compared windows.
    scale : float
        Positive multiplier on the margin.
    params : MetricParams, optional
    """
    if method not in SIMILARITY_METHODS:
        raise ConfigError(f"unknown similarity method {method!r}; expected one of {SIMILARITY_METHODS}")
    params = params or MetricParams()
    yhat = _vec(predicted, "predicted")
    act = _vec(actual, "actual")
    hp = _vec(history_predicted, "history_predicted")
    ha = _vec(history_actual, "history_actual")
    if act.shape != yhat.shape or hp.shape != ha.shape:
        raise DataError("predicted/actual and their histories must be pairwise equally long")
    if int(window) != window or window < 2:
        raise ConfigError(f"window must be an integer >= 2, got {window!r}")
    window = int(window)
    if not scale > 0:
        raise ConfigError(f"scale must be positive, got {scale!r}")
    if hp.size < window:
        raise DataError(f"{method}: need {window} warm-up steps, have {hp.size}")

    all_p = np.concatenate([hp, yhat])
    all_a = np.concatenate([ha, act])
    h = hp.size
    margins = np.empty(yhat.size)
    for t in range(yhat.size):
        g = h + t
        margins[t] = similarity_margin(method, all_p[g - window: g], all_a[g - window: g], params, scale)

    info = {"window": window, "scale": scale}
    if method == "lcss":
        info["lcss_epsilon"] = params.lcss_epsilon
        info["lcss_epsilon_factor"] = params.lcss_epsilon_factor
    elif method == "twed":
        info["twed_nu"] = params.twed_nu
        info["twed_lambda"] = params.twed_lambda
    elif method in MAX_TYPE:
        info["embed"] = params.embed
    return IntervalSeries.symmetric(method, yhat, margins, info)


def evaluate(intervals: IntervalSeries, actual) -> EvalReport:
    """Closed-interval coverage (bounds count as covered) and mean width."""
    act = _vec(actual, "actual")
    if act.size != len(intervals):
        raise DataError(f"{len(intervals)} intervals but {act.size} actual values")
    if act.size == 0:
        raise DataError("nothing to evaluate")
    covered = int(np.count_nonzero((intervals.lowers <= act) & (act <= intervals.uppers)))
    return EvalReport(
        intervals.method,
        100.0 * covered / act.size,
        float(np.mean(intervals.widths)),
        int(act.size),
        dict(intervals.params),
    )


@dataclass(frozen=True)
class MethodConfig:
    """One interval method and every constant it needs.

    ``window`` is the similarity window; ``residual_window``, ``confidence``
    and ``ci_n`` only apply to the conventional method.
    """

    method: str
    scale: float = 1.0
    window: int = 20
    params: MetricParams = field(default_factory=MetricParams)
    confidence: float = 0.95
    ci_n: int = 1
    residual_window: int = 50
    label: str | None = None

    def __post_init__(self):
        if self.method != "conventional" and self.method not in SIMILARITY_METHODS:
            raise ConfigError(f"unknown interval method {self.method!r}")

    @property
    def name(self):
        return self.label or self.method

    def with_scale(self, scale):
        return replace(self, scale=scale)


def build_interval(config: MethodConfig, predicted, actual, history_predicted, history_actual) -> IntervalSeries:
    if config.method == "conventional":
        resid = np.asarray(history_actual, dtype=float) - np.asarray(history_predicted, dtype=float)
        iv = conventional_interval(
            predicted,
            resid,
            config.confidence,
            actual=actual,
            window=config.residual_window,
            ci_n=config.ci_n,
            scale=config.scale,
        )
    else:
        iv = similarity_interval(
            config.method,
            predicted,
            actual,
            history_predicted,
            history_actual,
            window=config.window,
            scale=config.scale,
            params=config.params,
        )
    if config.label:
        iv = replace(iv, method=config.label)
    return iv


def compare_methods(
    predicted,
    actual,
    configs,
    history_predicted,
    history_actual,
    *,
    max_workers: int | None = None,
    return_intervals: bool = False,
):
    """Evaluate several interval methods on the same forecasts.

    Every method sees the identical predictions, actuals and warm-up history.
    Reports come back in the order of ``configs`` regardless of
    ``max_workers``. With ``return_intervals`` the result is a list of
    ``(IntervalSeries, EvalReport)`` pairs instead.
    """
    configs = list(configs)
    if not configs:
        raise ConfigError("at least one interval method is required")

    def one(cfg):
        iv = build_interval(cfg, predicted, actual, history_predicted, history_actual)
        return iv, evaluate(iv, actual)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(one, configs))
    else:
        results = [one(cfg) for cfg in configs]
    return results if return_intervals else [rep for _, rep in results]
