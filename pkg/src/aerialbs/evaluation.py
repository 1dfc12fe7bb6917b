"""Seeded Monte Carlo harness: coverage probability, power and counters per trial."""

from __future__ import annotations

import csv
import io
import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from typing import Iterable, Optional, Sequence

import numpy as np

from aerialbs.channel import EnvParams
from aerialbs.geometry import EPS
from aerialbs.planners import Deployment, PlannerConfig, plan
from aerialbs.scenarios import ScenarioConfig, generate_users

CSV_COLUMNS = (
    "planner", "seed", "ls_m", "process", "k_used", "users_total", "users_covered",
    "coverage_prob", "num_stations", "total_power_mw", "total_power_dbm",
    "n_it", "n_it_vr", "n_km", "wall_clock_ms",
)
_NUMERIC = CSV_COLUMNS[4:]


@dataclass
class TrialMetrics:
    planner: str
    seed: int
    ls_m: float
    process: str
    k_used: int
    users_total: int
    users_covered: int
    coverage_prob: float
    num_stations: int
    total_power_mw: float
    total_power_dbm: float
    n_it: int
    n_it_vr: int
    n_km: int
    wall_clock_ms: float

    def row(self, timing: bool = True) -> list:
        d = asdict(self)
        if not timing:
            d["wall_clock_ms"] = 0.0
        return [d[c] for c in CSV_COLUMNS]


def covered_mask(deployment: Deployment, users_true) -> np.ndarray:
    users = np.asarray(users_true, dtype=float).reshape(-1, 2)
    mask = np.zeros(len(users), dtype=bool)
    for s in deployment.stations:
        d = np.hypot(*(users - np.asarray(s.center)).T)
        mask |= d <= s.radius + EPS
    return mask


def coverage_probability(deployment: Deployment, users_true) -> float:
    """Fraction of users inside at least one footprint (0 with no users)."""
    mask = covered_mask(deployment, users_true)
    return float(mask.mean()) if len(mask) else 0.0


def run_trial(scenario: ScenarioConfig, planner: str, env: EnvParams,
              planner_config: Optional[PlannerConfig] = None, seed: int = 0,
              return_deployment: bool = False):
    """Generate users, plan on what the planner sees, score on true positions."""
    users = generate_users(scenario, seed)
    t0 = time.perf_counter()
    dep = plan(planner, users, scenario.side_m, env, planner_config, seed)
    elapsed = 1000.0 * (time.perf_counter() - t0)
    mask = covered_mask(dep, users.true_positions)
    mw, dbm = dep.total_power()
    m = TrialMetrics(
        planner=planner, seed=int(seed), ls_m=float(scenario.side_m),
        process=scenario.process, k_used=dep.k_used, users_total=len(users),
        users_covered=int(mask.sum()),
        coverage_prob=float(mask.mean()) if len(mask) else 0.0,
        num_stations=dep.k_used, total_power_mw=mw, total_power_dbm=dbm,
        n_it=int(dep.counters.get("n_it", 0)), n_it_vr=int(dep.counters.get("n_it_vr", 0)),
        n_km=int(dep.counters.get("n_km", 0)), wall_clock_ms=elapsed,
    )
    return (m, dep) if return_deployment else m


def trial_seed(master_seed: int, point: int, trial: int) -> int:
    """64-bit substream seed for one trial of one grid point."""
    ss = np.random.SeedSequence([int(master_seed) & 0xFFFFFFFFFFFFFFFF, point, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class GridPoint:
    scenario: ScenarioConfig
    planner: str


def expand_grid(base: ScenarioConfig, planners: Sequence[str],
                side_lengths_m: Optional[Sequence[float]] = None,
                processes: Optional[Sequence[str]] = None) -> list[GridPoint]:
    sides = list(side_lengths_m) if side_lengths_m else [base.side_m]
    procs = list(processes) if processes else [base.process]
    return [GridPoint(replace(base, side_m=float(L), process=p), name)
            for L, p, name in itertools.product(sides, procs, planners)]


def _run_job(job):
    point_idx, gp, env, pcfg, seed = job
    return point_idx, run_trial(gp.scenario, gp.planner, env, pcfg, seed)


def run_sweep(grid: Sequence[GridPoint], trials: int, master_seed: int,
              env: EnvParams, planner_config: Optional[PlannerConfig] = None,
              workers: int = 1, paired: bool = True):
    """Run ``trials`` trials per grid point.

    With ``paired`` (default) every planner at the same scenario sees the same user
    draws, which is what planner-vs-planner comparisons need.  Returns
    ``(metrics, aggregate)`` with metrics sorted by (grid point, trial).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    scen_ids: dict = {}
    jobs = []
    for p, gp in enumerate(grid):
        key = (gp.scenario.side_m, gp.scenario.process) if paired else p
        sid = scen_ids.setdefault(key, len(scen_ids))
        for t in range(trials):
            jobs.append((p, gp, env, planner_config, trial_seed(master_seed, sid, t)))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_job, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        results = [_run_job(j) for j in jobs]
    # map() keeps job order, which is already (grid point, trial).
    metrics = [m for _, m in results]
    return metrics, aggregate(metrics)


class _Welford:
    def __init__(self):
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0

    def add(self, x: float):
        self.n += 1
        d = x - self.mean
        self.mean += d / self.n
        self.m2 += d * (x - self.mean)

    @property
    def std(self) -> float:
        return math.sqrt(self.m2 / (self.n - 1)) if self.n > 1 else 0.0


def aggregate(metrics: Iterable[TrialMetrics]) -> list[dict]:
    """Mean and sample std of every numeric column per (planner, side, process)."""
    groups: dict = {}
    for m in metrics:
        key = (m.planner, m.ls_m, m.process)
        acc = groups.setdefault(key, {c: _Welford() for c in _NUMERIC})
        for c in _NUMERIC:
            v = float(getattr(m, c))
            if math.isfinite(v):
                acc[c].add(v)
    out = []
    for (planner, ls, proc), acc in groups.items():
        row = {"planner": planner, "ls_m": ls, "process": proc,
               "trials": max(a.n for a in acc.values())}
        for c in _NUMERIC:
            row[f"{c}_mean"] = acc[c].mean
            row[f"{c}_std"] = acc[c].std
        out.append(row)
    return out


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else ("-inf" if v < 0 else "nan")
    return str(v)


def to_csv(metrics: Sequence[TrialMetrics], agg: Sequence[dict], timing: bool = True) -> str:
    """Per-trial rows, a blank line, then an ``AGG`` block of means and stds."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for m in metrics:
        w.writerow([_fmt(v) for v in m.row(timing)])
    w.writerow([])
    w.writerow(["AGG", "planner", "stat", "ls_m", "process", "trials", *_NUMERIC])
    for row in agg:
        for stat in ("mean", "std"):
            vals = [row[f"{c}_{stat}"] for c in _NUMERIC]
            if not timing:
                vals[-1] = 0.0
            w.writerow(["AGG", row["planner"], stat, _fmt(row["ls_m"]), row["process"],
                        row["trials"], *[_fmt(v) for v in vals]])
    return buf.getvalue()
