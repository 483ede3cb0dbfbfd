"""Run configuration with environment overrides (ALGFUN_<FIELD>)."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction

ENV_PREFIX = "ALGFUN_"
METHODS = ("comparison", "integration", "both")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    working_precision: int = 1000
    precision_floor: int | None = None  # defaults to 90% of working precision
    guard_digits: int | None = None  # defaults to half the working precision
    base_terms: int = 1024
    comparison_terms: int = 128
    comparison_floor: int = 10
    nzm: int = 15
    perimeter_factor: Fraction = Fraction(1, 3)
    separation_factor: Fraction = Fraction(1, 10)
    comparison_margin: int = 7
    seed: int = 0
    method: str = "comparison"
    integration_digits: int = 40
    integration_escalate: int = 80
    samples_per_cell: int = 3
    orders_per_fit: int = 5
    threads: int | None = None

    @property
    def floor(self) -> int:
        if self.precision_floor is not None:
            return self.precision_floor
        return (9 * self.working_precision) // 10

    @property
    def guard(self) -> int:
        return self.guard_digits if self.guard_digits is not None else max(20, self.working_precision // 2)

    @property
    def internal_digits(self) -> int:
        """Arithmetic precision for expansions: working plus guard digits."""
        return self.working_precision + self.guard

    def validate(self) -> "RunConfig":
        if self.working_precision < 10:
            raise ConfigError("working precision must be at least 10 digits")
        if not 0 <= self.floor < self.working_precision:
            raise ConfigError("precision floor must lie in [0, working precision)")
        if not 0 < self.perimeter_factor < 1 or not 0 < self.separation_factor < 1:
            raise ConfigError("perimeter and separation factors must lie in (0, 1)")
        if self.base_terms < 1 or self.comparison_terms < 1 or self.nzm < 1:
            raise ConfigError("term counts and N_zm must be positive")
        if self.comparison_margin < 0:
            raise ConfigError("comparison margin must be non-negative")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {', '.join(METHODS)}")
        if self.guard < 0:
            raise ConfigError("guard digits must be non-negative")
        return self

    def with_overrides(self, **values) -> "RunConfig":
        return replace(self, **{k: v for k, v in values.items() if v is not None}).validate()


def _convert(name: str, text: str, default):
    kind = type(default)
    if name in ("precision_floor", "guard_digits", "threads"):
        kind = int
    try:
        if kind is Fraction:
            return Fraction(text)
        if kind is int:
            return int(text)
        return text
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad value for {ENV_PREFIX}{name.upper()}: {text!r}") from exc


def from_env(base: RunConfig | None = None, environ=None) -> RunConfig:
    """Apply ALGFUN_* environment variables on top of ``base``."""
    base = base or RunConfig()
    env = os.environ if environ is None else environ
    updates = {}
    for fd in fields(RunConfig):
        key = ENV_PREFIX + fd.name.upper()
        if key in env:
            updates[fd.name] = _convert(fd.name, env[key], getattr(base, fd.name))
    return replace(base, **updates).validate()
