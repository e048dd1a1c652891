"""End-to-end batch run: data -> lags -> ridge -> intervals -> report files."""

from __future__ import annotations

import contextlib
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from . import __version__, synth
from .config import RunConfig
from .errors import DataError, NumericalError, SimIntervalsError
from .intervals import EvalReport, IntervalSeries, compare_methods, z_value
from .ridge import ForecastMetrics, RidgeModel, fit_ridge, predict, score, select_k
from .series import build_lag_dataset, chronological_split, fit_standardizer, load_csv

logger = logging.getLogger(__name__)

PREDICTIONS_COLUMNS = ["t", "timestamp", "segment", "actual", "predicted"]
# defaults that stand in for constants the method description leaves open
UNSTATED_DEFAULTS = (
    "train_fraction",
    "k_grid",
    "n_folds",
    "ci_n",
    "residual_window",
    "window",
    "scale",
    "lcss_eps",
    "lcss_eps_factor",
    "twed_nu",
    "twed_lambda",
    "embed",
)


@contextlib.contextmanager
def stage(name):
    """Tag any error raised inside with the pipeline stage name."""
    try:
        yield
    except SimIntervalsError as exc:
        exc.stage = getattr(exc, "stage", name)
        raise
    except np.linalg.LinAlgError as exc:
        err = NumericalError(str(exc))
        err.stage = name
        raise err from exc
    except FileNotFoundError as exc:
        err = DataError(str(exc))
        err.stage = name
        raise err from exc


@dataclass
class RunResult:
    config: RunConfig
    model: RidgeModel
    train_metrics: ForecastMetrics
    test_metrics: ForecastMetrics
    cv_table: pd.DataFrame | None
    predictions: pd.DataFrame
    intervals: list[IntervalSeries] = field(default_factory=list)
    reports: list[EvalReport] = field(default_factory=list)
    column_labels: tuple = ()
    written: list[str] = field(default_factory=list)


def _load(cfg: RunConfig):
    if cfg.data is None:
        frame = synth.generate(
            length=cfg.synth_length,
            phi=cfg.synth_phi,
            noise_sd=cfg.synth_noise_sd,
            n_predictors=cfg.synth_predictors,
            seed=cfg.seed,
            mean=cfg.synth_mean,
            predictor_noise=cfg.synth_predictor_noise,
        )
        os.makedirs(cfg.out, exist_ok=True)
        path = os.path.join(cfg.out, "data.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(synth.to_csv_text(frame))
    else:
        path = cfg.data
    if cfg.predictors is None:
        header = pd.read_csv(path, nrows=0).columns if os.path.isfile(path) else []
        date_col = cfg.date_column or (header[0] if len(header) else None)
        predictors = [c for c in header if c not in (date_col, cfg.target)]
    else:
        predictors = list(cfg.predictors)
    series = load_csv(path, cfg.date_column, [cfg.target, *predictors])
    return series[0], series[1:]


def fit_forecast(cfg: RunConfig):
    """Run the forecasting half of the pipeline; returns a partial :class:`RunResult`."""
    with stage("load"):
        target, predictors = _load(cfg)
    with stage("lags"):
        ds = build_lag_dataset(target, predictors, cfg.max_lag)
    with stage("split"):
        train, test = chronological_split(ds, cfg.train_fraction)
    with stage("standardize"):
        std = fit_standardizer(train.features)
        Xtr, Xte = std.apply(train.features), std.apply(test.features)
    cv_table = None
    with stage("select_k"):
        if cfg.k is None:
            k, cv_table = select_k(Xtr, train.target, cfg.k_grid, cfg.n_folds)
        else:
            k = cfg.k
    with stage("fit"):
        model = fit_ridge(Xtr, train.target, k, standardizer=std)
    with stage("predict"):
        p_tr, p_te = predict(model, Xtr), predict(model, Xte)
        train_metrics = score(train.target, p_tr)
        test_metrics = score(test.target, p_te)

    preds = pd.DataFrame(
        {
            "t": np.arange(ds.rows) + ds.offset,
            "timestamp": np.datetime_as_string(ds.timestamps, unit="D"),
            "segment": ["train"] * train.rows + ["test"] * test.rows,
            "actual": ds.target,
            "predicted": np.concatenate([p_tr, p_te]),
        }
    )
    logger.info("k=%g test R2=%s", k, test_metrics.r2)
    return RunResult(
        cfg,
        model,
        train_metrics,
        test_metrics,
        cv_table,
        preds,
        column_labels=ds.column_labels,
        written=["data.csv"] if cfg.data is None else [],
    )


def attach_intervals(result: RunResult) -> RunResult:
    """Fill ``result.intervals``/``reports`` from its predictions table."""
    cfg = result.config
    configs = cfg.method_configs()
    if not configs:
        return result
    preds = result.predictions
    tr = preds[preds["segment"] == "train"]
    te = preds[preds["segment"] == "test"]
    if tr.empty or te.empty:
        raise DataError("predictions need both train and test segments")
    with stage("intervals"):
        pairs = compare_methods(
            te["predicted"].to_numpy(float),
            te["actual"].to_numpy(float),
            configs,
            tr["predicted"].to_numpy(float),
            tr["actual"].to_numpy(float),
            max_workers=cfg.max_workers,
            return_intervals=True,
        )
    result.intervals = [iv for iv, _ in pairs]
    result.reports = [rep for _, rep in pairs]
    return result


def run(cfg: RunConfig, write: bool = True) -> RunResult:
    result = attach_intervals(fit_forecast(cfg))
    if write:
        with stage("write"):
            write_outputs(result)
    return result


def read_predictions(path) -> pd.DataFrame:
    if not os.path.isfile(path):
        raise DataError(f"no such file: {path}")
    frame = pd.read_csv(path, dtype={"timestamp": str, "segment": str}, float_precision="round_trip")
    missing = [c for c in PREDICTIONS_COLUMNS if c not in frame.columns]
    if missing:
        raise DataError(f"{path}: missing column(s) {missing}")
    if not set(frame["segment"]) <= {"train", "test"}:
        raise DataError(f"{path}: segment must be 'train' or 'test'")
    return frame


def compare_predictions(cfg: RunConfig, predictions_path, write: bool = True) -> RunResult:
    """Interval comparison on an existing predictions table (no model fitting)."""
    with stage("load"):
        preds = read_predictions(predictions_path)
    result = RunResult(cfg, None, None, None, None, preds)
    attach_intervals(result)
    if write:
        with stage("write"):
            os.makedirs(cfg.out, exist_ok=True)
            _write_comparison(result)
            _write_manifest(result, {"predictions": str(predictions_path)})
    return result


def _json_dump(obj, path, result=None):
    if result is not None:
        result.written.append(os.path.basename(path))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, allow_nan=False)
        fh.write("\n")


def _csv(frame, path, result=None):
    if result is not None:
        result.written.append(os.path.basename(path))
    frame.to_csv(path, index=False, lineterminator="\n")


def _write_comparison(result: RunResult):
    out = result.config.out
    if not result.reports:
        return
    _csv(pd.DataFrame([r.row() for r in result.reports]), os.path.join(out, "comparison.csv"), result)
    _json_dump([{**r.row(), "params": r.params} for r in result.reports], os.path.join(out, "comparison.json"), result)
    te = result.predictions[result.predictions["segment"] == "test"]
    for iv in result.intervals:
        actual = te["actual"].to_numpy(float)
        frame = pd.DataFrame(
            {
                "t": te["t"].to_numpy(),
                "center": iv.centers,
                "lower": iv.lowers,
                "upper": iv.uppers,
                "actual": actual,
                "covered": ((iv.lowers <= actual) & (actual <= iv.uppers)).astype(int),
            }
        )
        _csv(frame, os.path.join(out, f"intervals_{iv.method}.csv"), result)


def _write_manifest(result: RunResult, extra=None):
    cfg = result.config
    manifest = {
        "package_version": __version__,
        "config": cfg.as_dict(),
        "defaults_not_fixed_by_method": {k: cfg.as_dict()[k] for k in UNSTATED_DEFAULTS},
        "decisions": {
            "split": "chronological, leading floor(train_fraction * rows) rows train",
            "standardization": "per-column mean / population SD fitted on train; zero-variance scale = 1",
            "ridge": "beta = (Xc'Xc + kI)^-1 Xc'yc via Cholesky; intercept unpenalized",
            "k_selection": "expanding-window CV, n_folds + 1 blocks, min mean MSE, ties to larger k",
            "conventional_margin": "scale * Z * SD / sqrt(ci_n), SD = sample SD of trailing residuals",
            "conventional_z": z_value(cfg.confidence),
            "similarity_margin": {
                "euclidean/dtw/twed": "scale * D / window",
                "hausdorff/frechet": "scale * D",
                "lcss": "scale * sd(actual window) * (1 + (1 - similarity) * window)",
            },
            "dtw_local_cost": "absolute difference",
            "coverage": "closed interval",
            "look_ahead": "interval at step t uses values before t only",
        },
        "outputs": sorted({*result.written, "manifest.json"}),
    }
    manifest.update(extra or {})
    _json_dump(manifest, os.path.join(cfg.out, "manifest.json"), result)


def write_outputs(result: RunResult):
    cfg = result.config
    out = cfg.out
    os.makedirs(out, exist_ok=True)
    metrics = {
        "target": cfg.target,
        "shrinkage_k": result.model.shrinkage,
        "k_source": "cv" if cfg.k is None else "fixed",
        "n_train": int(result.train_metrics.n),
        "n_test": int(result.test_metrics.n),
        "train": result.train_metrics.as_dict(),
        "test": result.test_metrics.as_dict(),
        "intercept": result.model.intercept,
        "coefficients": [
            {"series": s, "lag": lag, "value": float(b)}
            for (s, lag), b in zip(result.column_labels, result.model.coefficients)
        ],
    }
    _json_dump(metrics, os.path.join(out, "metrics.json"), result)
    if result.cv_table is not None:
        _csv(result.cv_table, os.path.join(out, "cv.csv"), result)
    _csv(result.predictions, os.path.join(out, "predictions.csv"), result)
    _write_comparison(result)
    _write_manifest(result)
