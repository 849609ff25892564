"""Experiment configuration: defaults, flat key-value files, and flag overrides."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

EXPERIMENTS = ("e1-vdh", "e2-nogo", "e3-lemma", "e4-car", "e5-channel")
FORMATS = ("json", "csv", "svg")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    seed: int = 0
    grid_step: float = 1 / 12
    max_support: int = 8
    window: int = 8
    samples: int = 1000
    max_exponent: int = 16
    max_weight: int = 2
    cap: int = 2**24
    extra_generators: str | None = None
    out: str | None = None
    format: tuple[str, ...] = field(default=("json",))

    def validate(self) -> "ExperimentConfig":
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if not 0 < self.grid_step <= 0.5:
            raise ConfigError("grid-step must lie in (0, 1/2]")
        if not 1 <= self.max_support <= 64:
            raise ConfigError("max-support must lie in [1, 64]")
        if not 1 <= self.window <= 64:
            raise ConfigError("window must lie in [1, 64]")
        if self.samples < 0:
            raise ConfigError("samples must be non-negative")
        if not 0 <= self.max_exponent <= 20:
            raise ConfigError("max-exponent must lie in [0, 20]")
        if self.cap < 1:
            raise ConfigError("cap must be positive")
        if not 0 <= self.max_weight <= 4:
            raise ConfigError("max-weight must lie in [0, 4]")
        bad = [f for f in self.format if f not in FORMATS]
        if bad:
            raise ConfigError(f"unknown output format(s) {bad}")
        return self

    def echo(self) -> dict:
        return {f.name: (list(v) if isinstance(v := getattr(self, f.name), tuple) else v) for f in fields(self)}


DEFAULTS: dict[str, dict] = {
    "e1-vdh": {"max_exponent": 16},
    "e2-nogo": {"max_support": 64, "grid_step": 1 / 20, "samples": 1000},
    "e3-lemma": {"grid_step": 1 / 12, "max_support": 8},
    "e4-car": {"window": 8, "max_weight": 2, "samples": 100_000},
    "e5-channel": {"samples": 1000},
}

_CASTS = {
    "seed": int,
    "grid_step": None,
    "max_support": int,
    "window": int,
    "samples": int,
    "max_exponent": int,
    "max_weight": int,
    "cap": int,
    "extra_generators": str,
    "out": str,
    "format": None,
}


def parse_fraction(text: str) -> float:
    text = str(text).strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return float(num) / float(den)
    return float(text)


def parse_formats(text) -> tuple[str, ...]:
    if isinstance(text, (tuple, list)):
        return tuple(text)
    return tuple(part.strip() for part in str(text).split(",") if part.strip())


def coerce(key: str, value):
    if key not in _CASTS:
        raise ConfigError(f"unknown configuration key {key!r}")
    try:
        if key == "grid_step":
            return parse_fraction(value)
        if key == "format":
            return parse_formats(value)
        return _CASTS[key](value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad value {value!r} for {key}") from exc


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes equal underscores."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        out[key] = value if key == "experiment" else coerce(key, value)
    return out


def build_config(experiment: str, file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then file values, then command-line overrides."""
    values = dict(DEFAULTS.get(experiment, {}))
    values.update({k: v for k, v in (file_values or {}).items() if k != "experiment"})
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = set(values) - set(_CASTS)
    if unknown:
        raise ConfigError(f"unknown configuration keys {sorted(unknown)}")
    values = {k: coerce(k, v) if isinstance(v, str) and k not in ("out", "extra_generators") else v
              for k, v in values.items()}
    return replace(ExperimentConfig(experiment), **values).validate()
