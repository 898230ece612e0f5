"""Pipeline settings with TOML loading."""

from __future__ import annotations

import sys
from dataclasses import dataclass, fields, replace

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class PipelineConfig:
    """Everything training needs beyond the corpus itself.

    C is the training-time box bound; clean_C is the deliberately
    harder bound used when ranking documents for label review.
    """

    df_threshold: int = 2
    weighting: str = "tfidf"
    C: float = 1.0
    clean_C: float = 10.0
    min_category_size: int = 100
    validation_fraction: float = 0.1
    solver_tol: float = 1e-4
    seed: int = 0
    backend: str | None = None
    bucket: str = "year"
    corpus: str | None = None
    stopwords: str | None = None
    phrases: str | None = None
    bundle: str | None = None

    def __post_init__(self) -> None:
        if self.df_threshold < 1:
            raise ConfigError("df_threshold must be >= 1")
        if self.weighting not in ("tf", "tfidf"):
            raise ConfigError(f"weighting must be tf or tfidf, got {self.weighting!r}")
        if not self.C > 0 or not self.clean_C > 0:
            raise ConfigError("C and clean_C must be positive")
        if self.min_category_size < 1:
            raise ConfigError("min_category_size must be >= 1")
        if not 0.0 <= self.validation_fraction < 0.5:
            raise ConfigError("validation_fraction must be in [0, 0.5)")
        if not self.solver_tol > 0:
            raise ConfigError("solver_tol must be positive")
        if self.bucket not in ("year", "month"):
            raise ConfigError(f"bucket must be year or month, got {self.bucket!r}")


def config_from_mapping(mapping: dict) -> PipelineConfig:
    known = {f.name for f in fields(PipelineConfig)}
    unknown = set(mapping) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        return PipelineConfig(**mapping)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str) -> PipelineConfig:
    """Read settings from TOML: top-level keys or a [textcat] table."""
    try:
        with open(path, "rb") as handle:
            raw = tomllib.load(handle)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    table = raw.get("textcat", raw)
    if not isinstance(table, dict):
        raise ConfigError(f"{path}: [textcat] must be a table")
    return config_from_mapping(table)


def override_config(config: PipelineConfig, **overrides) -> PipelineConfig:
    """Config with the given non-None fields replaced."""
    changes = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **changes) if changes else config
