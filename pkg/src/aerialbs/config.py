"""Run configuration: one YAML or JSON file with env/scenario/planner/sweep/output sections."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from aerialbs.channel import EnvParams
from aerialbs.planners import PLANNERS, PlannerConfig
from aerialbs.scenarios import PROCESSES, ScenarioConfig

_SECTIONS = {"env", "scenario", "planner", "sweep", "output", "seed", "workers"}
_SWEEP_KEYS = {"planners", "side_lengths_m", "side_lengths_km", "processes", "trials", "paired"}
_OUTPUT_KEYS = {"path", "timing"}


class ConfigError(ValueError):
    pass


@dataclass
class SweepSpec:
    planners: list[str] = field(default_factory=lambda: ["cpt", "sd-km", "sd-kmvr"])
    side_lengths_m: Optional[list[float]] = None
    processes: Optional[list[str]] = None
    trials: int = 200
    paired: bool = True


@dataclass
class RunConfig:
    env: EnvParams = field(default_factory=EnvParams)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)
    planner: PlannerConfig = field(default_factory=PlannerConfig)
    sweep: SweepSpec = field(default_factory=SweepSpec)
    output_path: Optional[str] = None
    timing: bool = False
    seed: int = 0
    workers: int = 1


def _check_keys(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"section {where!r} must be a mapping")
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {where}: {sorted(unknown)}")


def parse_config(raw: Optional[dict]) -> RunConfig:
    raw = raw or {}
    _check_keys(raw, _SECTIONS, "config")
    try:
        env = EnvParams.from_dict(raw.get("env") or {})
        scenario = ScenarioConfig.from_dict(raw.get("scenario") or {})
        planner = PlannerConfig.from_dict(raw.get("planner") or {})
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    sw = raw.get("sweep") or {}
    _check_keys(sw, _SWEEP_KEYS, "sweep")
    sides = sw.get("side_lengths_m")
    if "side_lengths_km" in sw:
        if sides is not None:
            raise ConfigError("give side lengths in m or km, not both")
        sides = [1000.0 * float(v) for v in sw["side_lengths_km"]]
    sweep = SweepSpec(
        planners=list(sw.get("planners", SweepSpec().planners)),
        side_lengths_m=[float(v) for v in sides] if sides else None,
        processes=list(sw["processes"]) if sw.get("processes") else None,
        trials=int(sw.get("trials", 200)),
        paired=bool(sw.get("paired", True)),
    )
    bad = [p for p in sweep.planners if p not in PLANNERS]
    if bad:
        raise ConfigError(f"unknown planners {bad}; choose from {PLANNERS}")
    if sweep.processes and any(p not in PROCESSES for p in sweep.processes):
        raise ConfigError(f"processes must be among {PROCESSES}")
    if sweep.trials < 1:
        raise ConfigError("sweep.trials must be at least 1")
    if sweep.side_lengths_m and any(v <= 0 for v in sweep.side_lengths_m):
        raise ConfigError("side lengths must be positive")

    out = raw.get("output") or {}
    _check_keys(out, _OUTPUT_KEYS, "output")
    seed = int(raw.get("seed", 0))
    workers = int(raw.get("workers", 1))
    if seed < 0:
        raise ConfigError("seed must be nonnegative")
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    return RunConfig(env, scenario, planner, sweep, out.get("path"),
                     bool(out.get("timing", False)), seed, workers)


def load_config(path) -> RunConfig:
    """Read a ``.json`` or YAML config file; errors surface as :class:`ConfigError`."""
    text = Path(path).read_text()
    try:
        raw = json.loads(text) if str(path).endswith(".json") else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    return parse_config(raw)
