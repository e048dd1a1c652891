"""Run configuration: a flat ``key = value`` file whose keys mirror :class:`RunConfig`.

Blank lines and ``#`` comments are ignored. An empty value means "unset"
for optional keys. List-valued keys are comma separated.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields

from .distances import MetricParams
from .errors import ConfigError
from .intervals import DEFAULT_METHODS, MethodConfig
from .ridge import DEFAULT_K_GRID, DEFAULT_N_FOLDS


def _opt_str(s):
    return s or None


def _opt_float(s):
    return float(s) if s else None


def _str_list(s):
    return tuple(p.strip() for p in s.split(",") if p.strip())


def _opt_str_list(s):
    return _str_list(s) if s else None


def _float_list(s):
    return tuple(float(p) for p in _str_list(s))


@dataclass(frozen=True)
class RunConfig:
    # data
    data: str | None = field(default=None, metadata={"parse": _opt_str, "help": "input CSV; unset = synthetic"})
    date_column: str | None = field(default=None, metadata={"parse": _opt_str, "help": "date column (default: first)"})
    target: str = field(default="target", metadata={"parse": str, "help": "target column"})
    predictors: tuple | None = field(
        default=None, metadata={"parse": _opt_str_list, "help": "predictor columns (default: all others)"}
    )
    # model
    max_lag: int = field(default=3, metadata={"parse": int, "help": "lags per series"})
    train_fraction: float = field(default=0.8, metadata={"parse": float, "help": "leading fraction used for training"})
    k: float | None = field(default=None, metadata={"parse": _opt_float, "help": "fixed ridge k; unset = CV"})
    k_grid: tuple = field(default=DEFAULT_K_GRID, metadata={"parse": _float_list, "help": "CV grid for k"})
    n_folds: int = field(default=DEFAULT_N_FOLDS, metadata={"parse": int, "help": "expanding-window CV folds"})
    # intervals
    methods: tuple = field(default=DEFAULT_METHODS, metadata={"parse": _str_list, "help": "interval methods"})
    confidence: float = field(default=0.95, metadata={"parse": float, "help": "conventional confidence level"})
    ci_n: int = field(default=1, metadata={"parse": int, "help": "N in Z*SD/sqrt(N)"})
    residual_window: int = field(default=50, metadata={"parse": int, "help": "trailing residuals for SD"})
    window: int = field(default=20, metadata={"parse": int, "help": "similarity window length"})
    scale: float = field(default=1.0, metadata={"parse": float, "help": "margin multiplier"})
    method_scales: tuple = field(
        default=(), metadata={"parse": _str_list, "help": "per-method overrides, e.g. dtw:1.5,lcss:0.5"}
    )
    lcss_eps: float | None = field(
        default=None, metadata={"parse": _opt_float, "help": "absolute LCSS threshold; unset = relative"}
    )
    lcss_eps_factor: float = field(default=0.05, metadata={"parse": float, "help": "relative LCSS threshold factor"})
    twed_nu: float = field(default=1e-3, metadata={"parse": float, "help": "TWED stiffness"})
    twed_lambda: float = field(default=1.0, metadata={"parse": float, "help": "TWED deletion penalty"})
    embed: str = field(default="index", metadata={"parse": str, "help": "hausdorff/frechet embedding: index|value"})
    max_workers: int = field(default=1, metadata={"parse": int, "help": "threads for method evaluation"})
    # output / synthetic data
    out: str = field(default="out", metadata={"parse": str, "help": "output directory"})
    seed: int = field(default=7, metadata={"parse": int, "help": "seed for synthetic data"})
    synth_length: int = field(default=1000, metadata={"parse": int, "help": "synthetic series length"})
    synth_phi: float = field(default=0.95, metadata={"parse": float, "help": "synthetic AR(1) coefficient"})
    synth_noise_sd: float = field(default=1.0, metadata={"parse": float, "help": "synthetic AR(1) noise SD"})
    synth_mean: float = field(default=100.0, metadata={"parse": float, "help": "synthetic process mean"})
    synth_predictors: int = field(default=5, metadata={"parse": int, "help": "synthetic predictor count"})
    synth_predictor_noise: float = field(default=0.5, metadata={"parse": float, "help": "synthetic predictor noise SD"})

    def __post_init__(self):
        if self.max_lag < 1:
            raise ConfigError("max_lag must be >= 1")
        if not 0 < self.train_fraction < 1:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if self.k is not None and not (self.k >= 0 and math.isfinite(self.k)):
            raise ConfigError("k must be finite and non-negative")
        if not self.k_grid:
            raise ConfigError("k_grid is empty")
        self.method_configs()

    @property
    def metric_params(self) -> MetricParams:
        return MetricParams(
            lcss_epsilon=self.lcss_eps,
            lcss_epsilon_factor=self.lcss_eps_factor,
            twed_nu=self.twed_nu,
            twed_lambda=self.twed_lambda,
            embed=self.embed,
        )

    def _scale_for(self, method):
        for item in self.method_scales:
            name, sep, value = item.partition(":")
            if not sep:
                raise ConfigError(f"method_scales entry {item!r} is not method:value")
            if name.strip() == method:
                return float(value)
        return self.scale

    def method_configs(self) -> list[MethodConfig]:
        params = self.metric_params
        known = set(self.methods)
        for item in self.method_scales:
            if item.partition(":")[0].strip() not in known:
                raise ConfigError(f"method_scales names a method not in methods: {item!r}")
        return [
            MethodConfig(
                method=m,
                scale=self._scale_for(m),
                window=self.window,
                params=params,
                confidence=self.confidence,
                ci_n=self.ci_n,
                residual_window=self.residual_window,
            )
            for m in self.methods
        ]

    def as_dict(self):
        return {f.name: (list(v) if isinstance(v := getattr(self, f.name), tuple) else v) for f in fields(self)}

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


KEYS = {f.name: f for f in fields(RunConfig)}


def parse_value(key, text):
    if key not in KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return KEYS[key].metadata["parse"](text.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r} ({exc})") from None


def read_config_text(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key = key.strip()
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = parse_value(key, value)
    return values


def load_config(path=None, overrides=None) -> RunConfig:
    """Build a config from an optional file, then apply ``overrides`` (already parsed)."""
    values = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values = read_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
    values.update(overrides or {})
    return RunConfig(**values)


def dump_config(cfg: RunConfig) -> str:
    """Render as a config file that :func:`load_config` reads back."""
    lines = []
    for name, value in cfg.as_dict().items():
        if value is None:
            text = ""
        elif isinstance(value, list):
            text = ",".join(repr(v) if isinstance(v, float) else str(v) for v in value)
        else:
            text = repr(value) if isinstance(value, float) else str(value)
        lines.append(f"{name} = {text}")
    return "\n".join(lines) + "\n"
