"""Run configuration read from a flat TOML file with dotted keys.

Example::

    run.seed = 42
    run.samples = 50000
    vehicle.cd = 0.40
    fade.calendar_loss = 4.3e-5
    ranges.electricity_price = [0.07, 0.12]
    ranges.replacement_fraction = 0.3

Unknown sections or keys are errors.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields, replace

from .battery import FadeParams
from .economics import INTERVAL_FIELDS, ParameterRanges
from .powertrain import VehicleParams

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    ranges: ParameterRanges = field(default_factory=ParameterRanges)
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    fade: FadeParams = field(default_factory=FadeParams)
    seed: int = 0
    samples: int = 50_000
    grid_points: int = 11
    output_dir: str = "out"
    workers: int = 1

    def __post_init__(self):
        if self.samples <= 0:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.grid_points < 2:
            raise ConfigError(f"grid_points must be >= 2, got {self.grid_points}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")

    def to_dict(self) -> dict:
        d = {"run": {k: getattr(self, k) for k in _RUN_KEYS}}
        for section in ("ranges", "vehicle", "fade"):
            obj = getattr(self, section)
            d[section] = {
                f.name: (list(v) if isinstance(v := getattr(obj, f.name), tuple) else v)
                for f in fields(obj)
            }
        return d


_RUN_KEYS = ("seed", "samples", "grid_points", "output_dir", "workers")
_SECTIONS = {"ranges": ParameterRanges, "vehicle": VehicleParams, "fade": FadeParams}


def _coerce(section: str, key: str, value):
    if section == "ranges" and key in INTERVAL_FIELDS:
        if isinstance(value, list):
            if len(value) != 2:
                raise ConfigError(f"ranges.{key}: interval needs exactly 2 numbers")
            return tuple(float(x) for x in value)
        return float(value)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{section}.{key}: expected a number, got {value!r}")
    return float(value)


def parse_config(data: dict) -> RunConfig:
    cfg = RunConfig()
    for section, body in data.items():
        if not isinstance(body, dict):
            raise ConfigError(f"top-level key {section!r} must be a dotted section key")
        if section == "run":
            kw = {}
            for k, v in body.items():
                if k not in _RUN_KEYS:
                    raise ConfigError(f"unknown key run.{k}; valid keys: {', '.join(_RUN_KEYS)}")
                kw[k] = str(v) if k == "output_dir" else int(v)
            cfg = replace(cfg, **kw)
            continue
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section {section!r}; valid sections: run, {', '.join(_SECTIONS)}")
        valid = {f.name for f in fields(_SECTIONS[section])}
        kw = {}
        for k, v in body.items():
            if k not in valid:
                raise ConfigError(f"unknown key {section}.{k}; valid keys: {', '.join(sorted(valid))}")
            kw[k] = _coerce(section, k, v)
        try:
            cfg = replace(cfg, **{section: replace(getattr(cfg, section), **kw)})
        except ValueError as exc:
            raise ConfigError(f"{section}: {exc}") from exc
    return cfg


def load_config(path) -> RunConfig:
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)
