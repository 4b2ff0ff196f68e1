"""Run configuration: a plain ``key = value`` file, overridden by command-line flags.

The file path comes from ``--config`` or, failing that, the environment
variable ``RANKONE_CONFIG``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .quadrature import QuadratureSpec

ENV_VAR = "RANKONE_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    tol: float | None = None  # replaces a verification suite's primary tolerance
    quad_tol: float = 1e-9
    quad_atol: float = 1e-15
    split: float = 0.5
    inner_nodes: int = 20
    outer_panel: float = 1.0
    max_tail_T: float = 1000.0
    out: str | None = None
    verbose: int = 0

    def __post_init__(self):
        for name in ("quad_tol", "split", "outer_panel", "max_tail_T"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.tol is not None and self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.quad_atol < 0:
            raise ConfigError("quad_atol must be nonnegative")
        if self.inner_nodes < 2:
            raise ConfigError("inner_nodes must be at least 2")

    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(
            split=self.split,
            inner_nodes=self.inner_nodes,
            outer_panel=self.outer_panel,
            max_tail_T=self.max_tail_T,
            tol=self.quad_tol,
            atol=self.quad_atol,
        )

    def merged(self, **overrides) -> "RunConfig":
        kw = {k: v for k, v in overrides.items() if v is not None}
        try:
            return replace(self, **kw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _convert(key, text):
    kind = _TYPES[key]
    if text.lower() in ("none", ""):
        return None
    if "int" in kind:
        return int(text)
    if "float" in kind:
        return float(text)
    return text


def parse_config(text: str) -> RunConfig:
    kw = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"line {n}: unknown key {key!r}")
        try:
            kw[key] = _convert(key, value)
        except ValueError:
            raise ConfigError(f"line {n}: bad value for {key}: {value!r}") from None
    return RunConfig(**kw)


def load_config(path: str | None = None) -> RunConfig:
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
