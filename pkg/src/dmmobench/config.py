"""Run configuration: benchmark constants, optimizer parameters, and the
flat key=value file format that overrides them.

Every numeric constant of the benchmark definition lives here with its
default, so an experiment is fully described by (problem, seed, config
file).
"""

from dataclasses import dataclass, fields, replace


class ConfigError(ValueError):
    """Raised for an unreadable or inconsistent configuration file."""


@dataclass
class BenchmarkSettings:
    """Constants of the problem definition and evaluation protocol."""

    #: Fitness evaluations per environment, per search dimension.
    evals_per_dim: int = 5000
    #: Environments per run.
    environments: int = 60
    #: Small-step severity scale.
    alpha: float = 0.04
    #: Large-step severity cap, printed value; 0.1 is a common
    #: alternative in dynamic-benchmark generators.
    alpha_max: float = 0.01
    #: Logistic-map coefficient of the chaotic mode.
    chaos_factor: float = 3.67
    #: Period of the recurrent modes, in environments.
    period: int = 12
    #: Noise scale added on top of the noisy recurrent mode.
    noise_severity: float = 0.8
    #: Minimum distance allowed between any two optima.
    min_peak_distance: float = 0.1
    #: Per-parameter change severities.
    height_severity: float = 7.0
    width_severity: float = 1.0
    rotation_severity: float = 1.0
    #: Peak-counting thresholds: position tolerance and the fitness
    #: tolerance levels scored in one pass.
    distance_accuracy: float = 0.05
    fitness_accuracy_levels: tuple = (1e-3, 1e-4, 1e-5)
    #: Whether optimizers may read the current environment index (the
    #: cheap change-detection channel).
    expose_environment_index: bool = True

    def environment_budget(self, dim):
        """Fitness evaluations granted per environment at dimension `dim`."""
        return self.evals_per_dim * dim

    def validate(self):
        if self.evals_per_dim < 1 or self.environments < 1:
            raise ConfigError("budget and environment count must be >= 1")
        if self.min_peak_distance <= 0:
            raise ConfigError("min_peak_distance must be positive")
        if self.distance_accuracy <= 0 or any(
                level <= 0 for level in self.fitness_accuracy_levels):
            raise ConfigError("accuracy thresholds must be positive")
        if self.period < 1:
            raise ConfigError("period must be >= 1")
        return self


@dataclass
class OptimizerConfig:
    """Parameters of the bundled differential-evolution baseline."""

    subpopulations: int = 10
    subpopulation_size: int = 10
    scale_factor: float = 0.5
    crossover_rate: float = 0.9
    memory_size: int = 20
    reinit_fraction: float = 0.5

    def validate(self):
        if self.subpopulation_size < 4:
            raise ConfigError(
                "subpopulation_size must be >= 4 (mutation needs three "
                "partners besides the target)")
        if self.subpopulations < 1:
            raise ConfigError("subpopulations must be >= 1")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigError("crossover_rate must lie in [0, 1]")
        if not 0.0 <= self.reinit_fraction <= 1.0:
            raise ConfigError("reinit_fraction must lie in [0, 1]")
        if self.memory_size < 0:
            raise ConfigError("memory_size must be >= 0")
        return self


def _parse_value(key, raw, default):
    kind = type(default)
    try:
        if kind is bool:
            lowered = raw.lower()
            if lowered in ("true", "yes", "on", "1"):
                return True
            if lowered in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        if kind is tuple:
            return tuple(float(part) for part in raw.split(",") if part.strip())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {raw!r}") from None
    raise ConfigError(f"unsupported option type for {key}")


def parse_config_text(text, settings=None, optimizer=None):
    """Apply key=value lines to the two config dataclasses.

    Lines are `key = value`; blank lines and `#` comments are ignored.
    Keys are field names of BenchmarkSettings or OptimizerConfig;
    anything else is an error.
    """
    settings = settings if settings is not None else BenchmarkSettings()
    optimizer = optimizer if optimizer is not None else OptimizerConfig()
    bench_defaults = {f.name: getattr(settings, f.name) for f in fields(settings)}
    opt_defaults = {f.name: getattr(optimizer, f.name) for f in fields(optimizer)}

    bench_updates = {}
    opt_updates = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        key, sep, raw = body.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected `key = value`, got {line!r}")
        if key in bench_defaults:
            bench_updates[key] = _parse_value(key, raw, bench_defaults[key])
        elif key in opt_defaults:
            opt_updates[key] = _parse_value(key, raw, opt_defaults[key])
        else:
            raise ConfigError(f"line {lineno}: unknown option {key!r}")

    settings = replace(settings, **bench_updates).validate()
    optimizer = replace(optimizer, **opt_updates).validate()
    return settings, optimizer


def load_config(path=None):
    """Read a configuration file; None yields the defaults."""
    if path is None:
        return BenchmarkSettings(), OptimizerConfig()
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config_text(text)
