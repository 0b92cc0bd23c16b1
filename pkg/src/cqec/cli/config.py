"""Experiment configuration read from INI-style ``key = value`` files."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

MODELS = ("markov", "xx", "pmme")
CODE_KEYS = ("q1", "q3", "q5")
FORMATS = ("csv", "json")
REQUIRED_RATES = {
    "markov": ("gamma", "eta"),
    "pmme": ("gamma", "eta"),
    "xx": ("alpha", "kappa", "eta"),
}
SUPPORTED = {
    "markov": ("q1", "q3", "q5"),
    "pmme": ("q1", "q3", "q5"),
    "xx": ("q1", "q3"),
}
KERNEL_PARAMS = ("a", "b", "c")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "exponential"
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig:
    model: str
    code: str
    rates: dict = field(default_factory=dict)
    kernel: KernelSpec = KernelSpec()
    t_max: float = 5.0
    samples: int = 101
    out: str | None = None
    format: str = "csv"
    sweep_rate: str | None = None
    sweep_values: tuple[float, ...] = ()

    def __post_init__(self):
        validate(self)

    def with_rate(self, name: str, value: float) -> "ExperimentConfig":
        if name in KERNEL_PARAMS:
            return replace(self, kernel=replace(self.kernel, **{name: value}))
        rates = dict(self.rates)
        rates[name] = value
        return replace(self, rates=rates)

    def times(self):
        import numpy as np

        return np.linspace(0.0, self.t_max, self.samples)


def validate(cfg: ExperimentConfig) -> None:
    if cfg.model not in MODELS:
        raise ConfigError("experiment.model", f"must be one of {', '.join(MODELS)}")
    if cfg.code not in CODE_KEYS:
        raise ConfigError("experiment.code", f"must be one of {', '.join(CODE_KEYS)}")
    if cfg.code not in SUPPORTED[cfg.model]:
        raise ConfigError("experiment.code", f"{cfg.code} is not available for the {cfg.model} model")
    for name in REQUIRED_RATES[cfg.model]:
        if name not in cfg.rates:
            raise ConfigError(f"rates.{name}", "required for this model")
        if cfg.rates[name] < 0:
            raise ConfigError(f"rates.{name}", "must be non-negative")
    if cfg.model == "xx" and cfg.rates["alpha"] <= 0:
        raise ConfigError("rates.alpha", "must be positive")
    if cfg.kernel.kind not in ("delta", "exponential", "damped"):
        raise ConfigError("kernel.kind", "must be delta, exponential or damped")
    if not cfg.t_max > 0:
        raise ConfigError("time.t_max", "must be positive")
    if cfg.samples < 2:
        raise ConfigError("time.samples", "must be at least 2")
    if cfg.format not in FORMATS:
        raise ConfigError("output.format", "must be csv or json")
    if cfg.sweep_rate is not None:
        allowed = set(REQUIRED_RATES[cfg.model])
        if cfg.model == "pmme":
            allowed |= set(KERNEL_PARAMS)
        if cfg.sweep_rate not in allowed:
            raise ConfigError("sweep.rate", f"{cfg.sweep_rate!r} is not a rate of the {cfg.model} model")
        if len(cfg.sweep_values) < 1:
            raise ConfigError("sweep.values", "needs at least one value")


def _float(parser, section, key, default=None):
    if not parser.has_option(section, key):
        if default is None:
            return None
        return default
    raw = parser.get(section, key)
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{section}.{key}", f"not a number: {raw!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), comment_prefixes=("#",))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError("file", str(exc).splitlines()[0]) from None
    if not parser.has_section("experiment"):
        raise ConfigError("experiment", "section missing")
    model = parser.get("experiment", "model", fallback="").strip()
    code = parser.get("experiment", "code", fallback="").strip()
    rates = {}
    if parser.has_section("rates"):
        for key in parser.options("rates"):
            rates[key] = _float(parser, "rates", key)
    kernel = KernelSpec()
    if parser.has_section("kernel"):
        kernel = KernelSpec(
            kind=parser.get("kernel", "kind", fallback="exponential").strip(),
            a=_float(parser, "kernel", "a", 1.0),
            b=_float(parser, "kernel", "b", 1.0),
            c=_float(parser, "kernel", "c", 1.0),
        )
    t_max = _float(parser, "time", "t_max", 5.0) if parser.has_section("time") else 5.0
    samples = 101
    if parser.has_option("time", "samples"):
        raw = parser.get("time", "samples")
        try:
            samples = int(raw)
        except ValueError:
            raise ConfigError("time.samples", f"not an integer: {raw!r}") from None
    out = parser.get("output", "path", fallback=None) if parser.has_section("output") else None
    fmt = parser.get("output", "format", fallback="csv").strip() if parser.has_section("output") else "csv"
    sweep_rate, sweep_values = None, ()
    if parser.has_section("sweep"):
        sweep_rate = parser.get("sweep", "rate", fallback="").strip() or None
        raw = parser.get("sweep", "values", fallback="")
        try:
            sweep_values = tuple(float(v) for v in raw.split(",") if v.strip())
        except ValueError:
            raise ConfigError("sweep.values", f"not a list of numbers: {raw!r}") from None
        if sweep_rate is None:
            raise ConfigError("sweep.rate", "required in the sweep section")
    return ExperimentConfig(
        model=model, code=code, rates=rates, kernel=kernel, t_max=t_max,
        samples=samples, out=out, format=fmt, sweep_rate=sweep_rate,
        sweep_values=sweep_values,
    )


def load_config(path: str | Path) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)
