"""Run configuration: flat dotted keys loaded from JSON and ``--set`` flags."""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .core import ConfigError, SearchRegion
from .quad import QuadConfig
from .rng import DEFAULT_SEED

FORMATS = ("json", "csv")

_FLOAT_FIELDS = {"rel_tol", "abs_tol", "circle_ratio", "y_min", "y_max", "x_max", "x_center"}


@dataclass(frozen=True)
class RunConfig:
    quad: QuadConfig = field(default_factory=QuadConfig)
    region: SearchRegion = field(default_factory=SearchRegion)
    probe_levels: int = 16
    radii: int = 21
    output_path: Optional[str] = None
    output_format: str = "json"
    seed: int = DEFAULT_SEED
    jobs: int = 1

    def __post_init__(self):
        _check_int(self.probe_levels, "probe.levels", 4)
        _check_int(self.radii, "vanishing.radii", 6)
        _check_int(self.seed, "seed", 0)
        _check_int(self.jobs, "jobs", 1)
        if self.output_format not in FORMATS:
            raise ConfigError(f"output.format must be json or csv, got {self.output_format!r}", "output.format")
        if self.output_path is not None and not isinstance(self.output_path, str):
            raise ConfigError("output.path must be a string", "output.path")

    def echo(self) -> dict:
        """Flat dotted view, the same shape the loader accepts."""
        out = {f"quad.{k}": v for k, v in dataclasses.asdict(self.quad).items()}
        out.update({f"region.{k}": v for k, v in dataclasses.asdict(self.region).items()})
        out.update({
            "probe.levels": self.probe_levels,
            "vanishing.radii": self.radii,
            "output.path": self.output_path,
            "output.format": self.output_format,
            "seed": self.seed,
            "jobs": self.jobs,
        })
        return out


def _check_int(v, name, lo):
    if not (isinstance(v, int) and not isinstance(v, bool) and v >= lo):
        raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}", name)


def _coerce(key: str, leaf: str, v: Any):
    if leaf in _FLOAT_FIELDS:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ConfigError(f"{key} must be a number, got {v!r}", key)
        v = float(v)
        if math.isnan(v):
            raise ConfigError(f"{key} must not be NaN", key)
    return v


SIMPLE_KEYS = {
    "probe.levels": "probe_levels",
    "vanishing.radii": "radii",
    "output.path": "output_path",
    "output.format": "output_format",
    "seed": "seed",
    "jobs": "jobs",
}


def build_config(values: Mapping[str, Any]) -> RunConfig:
    """RunConfig from a flat dotted mapping; unknown keys are errors."""
    quad_fields = {f.name for f in dataclasses.fields(QuadConfig)}
    region_fields = {f.name for f in dataclasses.fields(SearchRegion)}
    quad, region, rest = {}, {}, {}
    for key, v in values.items():
        head, _, leaf = key.partition(".")
        if head == "quad" and leaf in quad_fields:
            quad[leaf] = _coerce(key, leaf, v)
        elif head == "region" and leaf in region_fields:
            region[leaf] = _coerce(key, leaf, v)
        elif key in SIMPLE_KEYS:
            rest[SIMPLE_KEYS[key]] = v
        else:
            raise ConfigError(f"unknown configuration key {key!r}", key)
    for name in ("y_grid", "x_grid"):
        if name in region:
            _check_int(region[name], f"region.{name}", 1)
    try:
        q = QuadConfig(**quad)
        r = SearchRegion(**region)
    except TypeError as exc:
        raise ConfigError(str(exc), "config") from None
    return RunConfig(quad=q, region=r, **rest)


def parse_assignment(text: str) -> tuple[str, Any]:
    """``key=value``; the value is read as JSON when possible, else kept as text."""
    key, sep, raw = text.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"expected key=value, got {text!r}", "set")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}", "config") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}", "config") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object of dotted keys", "config")
    return data
