"""Command-line front end.

Subcommands::

    simintervals synth PATH   write a synthetic CSV
    simintervals run          forecast, intervals and all report files
    simintervals metrics      forecast and point metrics only
    simintervals compare      intervals from an existing predictions.csv

Every config-file key is also a flag (``max_lag`` -> ``--max-lag``); flags
win over the file. Exit codes: 0 ok, 2 config error, 3 data error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline, synth
from .config import KEYS, load_config, parse_value
from .errors import ConfigError, DataError, NumericalError

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERIC = 2, 3, 4


def _add_config_flags(parser, keys):
    parser.add_argument("--config", "-c", help="flat key = value config file")
    for key in keys:
        f = KEYS[key]
        flags = sorted({f"--{key.replace('_', '-')}", f"--{key}"})
        parser.add_argument(*flags, dest=key, default=argparse.SUPPRESS, metavar="V", help=f.metadata["help"])


def build_parser():
    parser = argparse.ArgumentParser(prog="simintervals", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a deterministic synthetic CSV")
    p.add_argument("path", help="output CSV path")
    _add_config_flags(p, [k for k in KEYS if k.startswith("synth_")] + ["seed"])

    for name, text in (
        ("run", "full pipeline with interval comparison"),
        ("metrics", "forecast and point metrics only"),
    ):
        p = sub.add_parser(name, help=text)
        _add_config_flags(p, list(KEYS))

    p = sub.add_parser("compare", help="interval comparison on an existing predictions.csv")
    p.add_argument("--predictions", required=True, help="CSV with columns t,timestamp,segment,actual,predicted")
    _add_config_flags(p, list(KEYS))
    return parser


def _config_from_args(args):
    overrides = {k: parse_value(k, getattr(args, k)) for k in KEYS if hasattr(args, k)}
    return load_config(args.config, overrides)


def _print_result(result, out=None):
    out = out or sys.stdout
    if result.test_metrics is not None:
        tr, te = result.train_metrics, result.test_metrics
        print(f"k = {result.model.shrinkage:.6g}", file=out)
        for label, m in (("train", tr), ("test", te)):
            r2 = "undefined" if m.r2 is None else f"{m.r2:.6f}"
            print(f"{label:<5}  R2 {r2}  MAE {m.mae:.6f}  RMSE {m.rmse:.6f}", file=out)
    if result.reports:
        print(f"{'method':<14}{'coverage %':>12}{'mean width':>14}{'n':>7}", file=out)
        for r in result.reports:
            print(f"{r.method:<14}{r.coverage_pct:>12.2f}{r.mean_width:>14.4f}{r.n_points:>7d}", file=out)
    print(f"outputs written to {result.config.out}", file=out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = _config_from_args(args)
        if args.command == "synth":
            synth.write_csv(
                args.path,
                length=cfg.synth_length,
                phi=cfg.synth_phi,
                noise_sd=cfg.synth_noise_sd,
                n_predictors=cfg.synth_predictors,
                seed=cfg.seed,
                mean=cfg.synth_mean,
                predictor_noise=cfg.synth_predictor_noise,
            )
            print(f"wrote {args.path}")
            return 0
        if args.command == "metrics":
            cfg = cfg.replace(methods=())
        if args.command == "compare":
            result = pipeline.compare_predictions(cfg, args.predictions)
        else:
            result = pipeline.run(cfg)
    except ConfigError as exc:
        return _fail(exc, EXIT_CONFIG)
    except DataError as exc:
        return _fail(exc, EXIT_DATA)
    except NumericalError as exc:
        return _fail(exc, EXIT_NUMERIC)
    _print_result(result)
    return 0


def _fail(exc, code):
    where = getattr(exc, "stage", None)
    prefix = f"error in stage '{where}'" if where else "error"
    print(f"{prefix}: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
