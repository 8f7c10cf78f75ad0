"""JSON run configuration: defaults, strict key checking, round-trip dump."""

from __future__ import annotations

import json
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .empirical import LinkConfig, MomentCoefficients, PerCoefficients
from .service_time import TimingConstants
from .traffic import OnOffTraffic, PeriodicTraffic, PoissonTraffic, TrafficSpec

__all__ = ["ConfigError", "RunConfig", "load_config", "dump_config", "default_config"]

DEFAULT_DELAY_GRID = tuple(float(d) for d in range(15, 95, 5))
DEFAULT_HORIZON = 20000


class ConfigError(Exception):
    """Invalid run configuration."""


@dataclass(frozen=True)
class ThetaGridSpec:
    min: float = 1e-5
    max: float = 1.0
    points: int = 60

    def __post_init__(self) -> None:
        if self.min <= 0.0 or self.max <= self.min:
            raise ValueError("theta grid needs 0 < min < max")
        if self.points < 2:
            raise ValueError("theta grid needs at least 2 points")

    def values(self) -> np.ndarray:
        return np.logspace(np.log10(self.min), np.log10(self.max), self.points)


@dataclass(frozen=True)
class RunConfig:
    link: LinkConfig
    timing: TimingConstants
    per_coeffs: PerCoefficients
    moment_coeffs: MomentCoefficients
    traffic: TrafficSpec
    seed: int
    delay_grid: tuple[float, ...]
    theta_grid: ThetaGridSpec
    mean_delay_tolerance: float
    output_path: str | None
    output_format: str


def default_config() -> RunConfig:
    return RunConfig(
        link=LinkConfig(),
        timing=TimingConstants(),
        per_coeffs=PerCoefficients(),
        moment_coeffs=MomentCoefficients(),
        traffic=PeriodicTraffic(t_pit=50.0, horizon=DEFAULT_HORIZON),
        seed=12345,
        delay_grid=DEFAULT_DELAY_GRID,
        theta_grid=ThetaGridSpec(),
        mean_delay_tolerance=0.25,
        output_path=None,
        output_format="csv",
    )


def _build_section(cls, data: dict, section: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key '{sorted(unknown)[0]}' in section '{section}' "
            f"(allowed: {sorted(allowed)})"
        )
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid section '{section}': {exc}") from exc


_TRAFFIC_CLASSES = {"periodic": PeriodicTraffic, "poisson": PoissonTraffic, "onoff": OnOffTraffic}


def _build_traffic(data: dict) -> TrafficSpec:
    if "kind" not in data:
        raise ConfigError("traffic section needs a 'kind' key (periodic|poisson|onoff)")
    kind = data["kind"]
    cls = _TRAFFIC_CLASSES.get(kind)
    if cls is None:
        raise ConfigError(f"unknown traffic kind '{kind}' (allowed: {sorted(_TRAFFIC_CLASSES)})")
    return _build_section(cls, {k: v for k, v in data.items() if k != "kind"}, "traffic")


_SECTIONS = ("link", "timing", "per_coeffs", "moment_coeffs", "traffic", "seed",
             "delay_grid", "theta_grid", "mean_delay_tolerance", "output")


def config_from_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a JSON object")
    unknown = set(raw) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown key '{sorted(unknown)[0]}' at top level (allowed: {sorted(_SECTIONS)})")
    base = default_config()
    link = _build_section(LinkConfig, raw.get("link", {}), "link") if "link" in raw else base.link
    timing = _build_section(TimingConstants, raw.get("timing", {}), "timing") if "timing" in raw else base.timing
    per_coeffs = (_build_section(PerCoefficients, raw["per_coeffs"], "per_coeffs")
                  if "per_coeffs" in raw else base.per_coeffs)
    moment_coeffs = (_build_section(MomentCoefficients, raw["moment_coeffs"], "moment_coeffs")
                     if "moment_coeffs" in raw else base.moment_coeffs)
    traffic = _build_traffic(raw["traffic"]) if "traffic" in raw else base.traffic

    seed = raw.get("seed", base.seed)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError(f"seed must be a non-negative integer, got {seed!r}")

    delay_grid = raw.get("delay_grid", base.delay_grid)
    try:
        delay_grid = tuple(float(d) for d in delay_grid)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"delay_grid must be a list of numbers: {exc}") from exc
    if not delay_grid or any(d <= 0 for d in delay_grid) or any(
        b <= a for a, b in zip(delay_grid, delay_grid[1:])
    ):
        raise ConfigError("delay_grid must be a strictly increasing list of positive ms values")

    theta_grid = (_build_section(ThetaGridSpec, raw["theta_grid"], "theta_grid")
                  if "theta_grid" in raw else base.theta_grid)

    tolerance = raw.get("mean_delay_tolerance", base.mean_delay_tolerance)
    if not isinstance(tolerance, (int, float)) or tolerance < 0.0:
        raise ConfigError(f"mean_delay_tolerance must be a number >= 0, got {tolerance!r}")

    output = raw.get("output", {})
    if not isinstance(output, dict):
        raise ConfigError("output section must be an object")
    unknown = set(output) - {"path", "format"}
    if unknown:
        raise ConfigError(f"unknown key '{sorted(unknown)[0]}' in section 'output'")
    output_path = output.get("path", base.output_path)
    output_format = output.get("format", base.output_format)
    if output_format not in ("csv", "json"):
        raise ConfigError(f"output format must be 'csv' or 'json', got {output_format!r}")

    return RunConfig(
        link=link,
        timing=timing,
        per_coeffs=per_coeffs,
        moment_coeffs=moment_coeffs,
        traffic=traffic,
        seed=seed,
        delay_grid=delay_grid,
        theta_grid=theta_grid,
        mean_delay_tolerance=float(tolerance),
        output_path=output_path,
        output_format=output_format,
    )


def load_config(path: str | Path) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(raw)


def _section_dict(obj) -> dict:
    return {f.name: getattr(obj, f.name) for f in fields(obj)}


def dump_config(cfg: RunConfig) -> dict:
    """JSON-ready dict that loads back to an identical RunConfig."""
    traffic = _section_dict(cfg.traffic)
    traffic["kind"] = {PeriodicTraffic: "periodic", PoissonTraffic: "poisson",
                       OnOffTraffic: "onoff"}[type(cfg.traffic)]
    out: dict = {
        "link": _section_dict(cfg.link),
        "timing": _section_dict(cfg.timing),
        "per_coeffs": _section_dict(cfg.per_coeffs),
        "moment_coeffs": _section_dict(cfg.moment_coeffs),
        "traffic": traffic,
        "seed": cfg.seed,
        "delay_grid": list(cfg.delay_grid),
        "theta_grid": _section_dict(cfg.theta_grid),
        "mean_delay_tolerance": cfg.mean_delay_tolerance,
    }
    output: dict = {"format": cfg.output_format}
    if cfg.output_path is not None:
        output["path"] = cfg.output_path
    out["output"] = output
    return out
