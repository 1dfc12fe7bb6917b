"""Deployment strategies for a fleet of aerial base stations.

Every planner returns a :class:`Deployment` whose footprints never overlap:

* ``cpt``            user-agnostic square grid of radius-R disks
* ``sd-gr``          greedy station-by-station placement with relaxed separation
* ``sd-km``          K-means partition, one fixed-radius disk per Voronoi cell
* ``sd-kmvr``        SD-KM plus alternating coverage / radius shrinking per cell
* ``robust-sd-km``, ``robust-sd-kmvr``  relocation and radius margin for noisy
  user locations
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from aerialbs.channel import (
    EnvParams,
    altitude_for_radius,
    coverage_radius,
    total_power,
    transmit_power,
)
from aerialbs.coverage import eliminate_regions, iter_gr_regions, max_coverage_disk
from aerialbs.geometry import (
    EPS,
    ConvexRegion,
    Disk,
    chebyshev_disk,
    constrained_one_center,
    intersect_halfplanes,
    inward_offset,
    voronoi_cell,
)
from aerialbs.scenarios import UserSet, make_rng

SCHEMA_VERSION = 1
PLANNERS = ("cpt", "sd-gr", "sd-km", "sd-kmvr", "robust-sd-km", "robust-sd-kmvr")

# Center movement (m) below which Lloyd iterations are considered converged.
KMEANS_TOL = 1e-6
KMEANS_MAX_ITER = 300
# Radius change (m) treated as "unchanged" in the shrink loop.
VR_TOL = 1e-9


class PlannerError(ValueError):
    """A planner was applied to a deployment it cannot handle."""


@dataclass
class PlannerConfig:
    radius_m: Optional[float] = None        # default: from the env path-loss threshold
    r_min_frac: float = 0.5                 # R_min = r_min_frac * R
    min_center_sep_frac: float = 0.5       # K-means center separation = frac * R
    k_max: Optional[int] = None             # default: CPT station count
    uli_bound_m: Optional[float] = None     # default: 3 * scenario uli_sigma
    vr_max_iter: int = 50
    spill: bool = True                      # footprints may extend past the square edge

    def __post_init__(self):
        if self.radius_m is not None and not self.radius_m > 0:
            raise ValueError("radius_m must be positive")
        if not 0 < self.r_min_frac <= 1:
            raise ValueError("r_min_frac must lie in (0, 1]")
        if self.min_center_sep_frac < 0:
            raise ValueError("min_center_sep_frac must be nonnegative")
        if self.k_max is not None and self.k_max < 1:
            raise ValueError("k_max must be at least 1")
        if self.uli_bound_m is not None and self.uli_bound_m < 0:
            raise ValueError("uli_bound_m must be nonnegative")
        if self.vr_max_iter < 1:
            raise ValueError("vr_max_iter must be at least 1")

    @classmethod
    def from_dict(cls, d: dict) -> "PlannerConfig":
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown planner keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class AerialBS:
    center: tuple[float, float]
    radius: float
    altitude: float
    tx_power_dbm: float
    covered: np.ndarray
    cell: Optional[ConvexRegion] = None
    iterations: int = 0

    def to_dict(self) -> dict:
        return {
            "center": [self.center[0], self.center[1]],
            "radius": self.radius,
            "altitude": self.altitude,
            "tx_power_dbm": self.tx_power_dbm,
            "covered": [int(i) for i in self.covered],
            "cell": self.cell.to_dict() if self.cell is not None else None,
            "iterations": self.iterations,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AerialBS":
        cell = ConvexRegion.from_dict(d["cell"]) if d.get("cell") else None
        return cls((float(d["center"][0]), float(d["center"][1])), float(d["radius"]),
                   float(d["altitude"]), float(d["tx_power_dbm"]),
                   np.asarray(d["covered"], dtype=int), cell, int(d.get("iterations", 0)))


@dataclass
class Deployment:
    stations: list[AerialBS]
    planner: str
    side_m: float
    radius_m: float
    counters: dict = field(default_factory=lambda: {"n_it": 0, "n_it_vr": 0, "n_km": 0})
    config: dict = field(default_factory=dict)

    @property
    def k_used(self) -> int:
        return len(self.stations)

    def total_power(self) -> tuple[float, float]:
        """``(milliwatts, dBm)`` summed over stations."""
        return total_power(s.tx_power_dbm for s in self.stations)

    def centers(self) -> np.ndarray:
        return np.array([s.center for s in self.stations], dtype=float).reshape(-1, 2)

    def radii(self) -> np.ndarray:
        return np.array([s.radius for s in self.stations], dtype=float)

    def to_dict(self) -> dict:
        mw, dbm = self.total_power()
        return {
            "schema_version": SCHEMA_VERSION,
            "planner": self.planner,
            "side_m": self.side_m,
            "radius_m": self.radius_m,
            "counters": dict(self.counters),
            "config": self.config,
            "total_power_mw": mw,
            "total_power_dbm": dbm if math.isfinite(dbm) else None,
            "stations": [s.to_dict() for s in self.stations],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Deployment":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported deployment schema {d.get('schema_version')!r}")
        return cls([AerialBS.from_dict(s) for s in d["stations"]], d["planner"],
                   float(d["side_m"]), float(d["radius_m"]), dict(d["counters"]),
                   dict(d.get("config") or {}))

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def check(self, env: EnvParams, users=None, tol: float = 1e-6) -> list[str]:
        """Invariant violations (empty list when the deployment is valid)."""
        errs = []
        c = self.centers()
        r = self.radii()
        for i in range(len(c)):
            for j in range(i + 1, len(c)):
                gap = float(np.hypot(*(c[i] - c[j])))
                if gap < r[i] + r[j] - tol:
                    errs.append(f"stations {i} and {j} overlap (gap {gap:.6f} m)")
        for k, s in enumerate(self.stations):
            x, y = s.center
            if not (-tol <= x <= self.side_m + tol and -tol <= y <= self.side_m + tol):
                errs.append(f"station {k} center outside the target square")
            if abs(s.altitude - altitude_for_radius(s.radius, env)) > tol:
                errs.append(f"station {k} altitude does not match its radius")
            if s.radius > self.radius_m + tol:
                errs.append(f"station {k} radius exceeds R")
            if s.cell is not None:
                slack = s.cell.slack(s.center)[0]
                if np.min(slack) < s.radius - tol:
                    errs.append(f"station {k} footprint leaves its cell")
            if users is not None and len(s.covered):
                u = np.asarray(users, dtype=float)[s.covered]
                d = np.hypot(*(u - np.asarray(s.center)).T)
                if np.max(d) > s.radius + tol:
                    errs.append(f"station {k} lists a user outside its footprint")
        return errs


def _station(center, radius, covered, env, cell=None, iterations=0) -> AerialBS:
    return AerialBS((float(center[0]), float(center[1])), float(radius),
                    float(altitude_for_radius(radius, env)),
                    float(transmit_power(radius, env)),
                    np.asarray(covered, dtype=int), cell, iterations)


def _within(users: np.ndarray, center, radius: float) -> np.ndarray:
    if len(users) == 0:
        return np.zeros(0, dtype=int)
    d = np.hypot(*(users - np.asarray(center, dtype=float)).T)
    return np.flatnonzero(d <= radius + EPS)


def cpt_count(side: float, R: float) -> int:
    return math.ceil(side / (2 * R) - 1e-12) ** 2


def plan_cpt(side: float, R: float, env: EnvParams, users=None) -> Deployment:
    """Square grid of ``ceil(side / 2R)**2`` equal disks, centered in the area."""
    if not (side > 0 and R > 0):
        raise ValueError("side and R must be positive")
    n = math.isqrt(cpt_count(side, R))
    offs = side / 2 + (np.arange(n) - (n - 1) / 2) * 2 * R
    pts = np.zeros((0, 2)) if users is None else np.asarray(users, dtype=float).reshape(-1, 2)
    stations = [_station((x, y), R, _within(pts, (x, y), R), env)
                for y in offs for x in offs]
    return Deployment(stations, "cpt", side, R)


def plan_sd_gr(users, R: float, side: float, k_max: int, env: EnvParams) -> Deployment:
    """Greedy placement: each new disk covers the most still-uncovered users.

    Separation from earlier disks uses the four axis-aligned halfplanes per prior
    center, so every pair of centers is at least 2R apart.
    """
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    remaining = np.ones(len(users), dtype=bool)
    stations: list[AerialBS] = []
    n_regions = 0
    full = intersect_halfplanes([], side)
    for k in range(k_max):
        if k == 0:
            regions = [full]
        else:
            regions = eliminate_regions(iter_gr_regions(
                [s.center for s in stations], R, side))
        if not regions:
            break
        n_regions += len(regions)
        idx = np.flatnonzero(remaining)
        best = None
        for region in regions:
            sol = max_coverage_disk(users[idx], R, region)
            if best is None or sol.count > best.count:
                best = sol
        if best.count == 0:
            break  # nobody left within reach; another station would only cost power
        covered = idx[best.covered]
        remaining[covered] = False
        stations.append(_station(best.center, R, covered, env))
    dep = Deployment(stations, "sd-gr", side, R)
    dep.counters["n_it"] = n_regions
    return dep


def _lloyd(users, centers, max_iter):
    it = 0
    for it in range(1, max_iter + 1):
        d2 = ((users[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = np.argmin(d2, axis=1)  # lowest index wins ties
        new = centers.copy()
        for k in range(len(centers)):
            members = users[assign == k]
            if len(members):
                new[k] = members.mean(axis=0)
            else:
                # Re-seed an empty cluster at the user worst served by its center.
                far = np.argmax(d2[np.arange(len(users)), assign])
                new[k] = users[far]
        moved = float(np.max(np.hypot(*(new - centers).T)))
        centers = new
        if moved <= KMEANS_TOL:
            break
    d2 = ((users[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return centers, np.argmin(d2, axis=1), it


def kmeans_partition(users, k_max: int, min_center_sep: float, seed: int):
    """Lloyd's K-means with K reduced until centers are ``min_center_sep`` apart.

    Returns ``(centers, assignment, K, n_km, n_it)``; ``n_km`` counts K-means runs and
    ``n_it`` is the Lloyd iteration count of the final run.
    """
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    if len(users) == 0:
        raise ValueError("K-means needs at least one user")
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    rng = make_rng(seed, 2)
    distinct = np.unique(users, axis=0)
    K = min(k_max, len(distinct))
    n_km = 0
    while True:
        n_km += 1
        pick = rng.choice(len(distinct), size=K, replace=False)
        centers, assign, n_it = _lloyd(users, distinct[np.sort(pick)].copy(), KMEANS_MAX_ITER)
        if K == 1:
            break
        diff = centers[:, None, :] - centers[None, :, :]
        d = np.hypot(diff[..., 0], diff[..., 1])
        np.fill_diagonal(d, np.inf)
        if d.min() >= max(min_center_sep, EPS):
            break
        K -= 1
    return centers, assign, K, n_km, n_it


def _center_region(cell: ConvexRegion, r: float, fallback) -> ConvexRegion:
    """Centers whose radius-``r`` disk stays in ``cell``, limited to the target square."""
    shifted = inward_offset(cell, r).halfplanes
    region = intersect_halfplanes(shifted, cell.side)
    if region.is_empty:
        # r equals the inradius up to rounding: the inscribed center is the only choice.
        region = ConvexRegion(region.halfplanes, np.array([fallback], dtype=float),
                              cell.side)
    return region


@dataclass
class _Cell:
    region: ConvexRegion
    members: np.ndarray
    r_cap: float
    cheb_center: tuple[float, float]


def _partition(users, R, side, k_max, sep, seed, spill):
    centers, assign, K, n_km, n_it = kmeans_partition(users, k_max, sep, seed)
    square = intersect_halfplanes([], side)
    cells = []
    for k in range(K):
        # With spill the cell reaches R past the square so only the center is confined.
        region = voronoi_cell(centers, k, side, margin=R if spill else 0.0)
        cheb = chebyshev_disk(region, square)
        cells.append(_Cell(region, np.flatnonzero(assign == k), min(R, cheb.radius),
                           cheb.center))
    return cells, {"n_it": n_it, "n_it_vr": 0, "n_km": n_km}


def plan_sd_km(users, R: float, side: float, k_max: int, min_center_sep: float,
               seed: int, env: EnvParams, spill: bool = True) -> Deployment:
    """One disk of radius ``min(R, cell inradius)`` per Voronoi cell, placed optimally."""
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    if len(users) == 0:
        return Deployment([], "sd-km", side, R)
    cells, counters = _partition(users, R, side, k_max, min_center_sep, seed, spill)
    stations = []
    for cell in cells:
        region = _center_region(cell.region, cell.r_cap, cell.cheb_center)
        sol = max_coverage_disk(users[cell.members], cell.r_cap, region)
        stations.append(_station(sol.center, cell.r_cap, cell.members[sol.covered], env,
                                 cell.region))
    return Deployment(stations, "sd-km", side, R, counters)


def _shrink_loop(pts, cell: _Cell, r_min: float, max_iter: int):
    """Alternate max-coverage placement and radius shrinking until the radius settles.

    Returns ``(center, radius, covered, iterations)``.
    """
    r_hi = cell.r_cap
    r_lo = min(r_min, r_hi)
    r = r_hi
    center, covered = cell.cheb_center, np.zeros(0, int)
    it = 0
    while it < max_iter:
        it += 1
        r_it = r
        region = _center_region(cell.region, r_it, cell.cheb_center)
        sol = max_coverage_disk(pts, r_it, region)
        center, covered = sol.center, sol.covered
        if sol.count == 0:
            r = r_lo
            break
        far = float(np.max(np.hypot(*(pts[covered] - np.asarray(center)).T)))
        r = min(r_hi, max(r_lo, far))
        if abs(r - r_it) <= VR_TOL:
            r = min(r, r_it)
            break
    return center, r, covered, it


def plan_sd_kmvr(users, R: float, r_min: float, side: float, k_max: int,
                 min_center_sep: float, seed: int, env: EnvParams,
                 max_iter: int = 50, spill: bool = True) -> Deployment:
    if not 0 < r_min <= R:
        raise ValueError("need 0 < r_min <= R")
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    if len(users) == 0:
        return Deployment([], "sd-kmvr", side, R)
    cells, counters = _partition(users, R, side, k_max, min_center_sep, seed, spill)
    stations = []
    for cell in cells:
        pts = users[cell.members]
        center, r, covered, it = _shrink_loop(pts, cell, r_min, max_iter)
        stations.append(_station(center, r, cell.members[covered], env, cell.region, it))
    counters["n_it_vr"] = max((s.iterations for s in stations), default=0)
    counters["vr_cap_hit"] = sum(s.iterations >= max_iter for s in stations)
    return Deployment(stations, "sd-kmvr", side, R, counters)


def robustify(deployment: Deployment, users_estimated, d_th: float, R: float,
              env: EnvParams, r_min: float = 0.0) -> Deployment:
    """Relocate each station toward the minimax center of its users, then widen.

    The center may move by at most the clearance between its footprint and the cell
    boundary, so the footprint can afterwards grow to the distance from the new
    center to the cell boundary (capped at R).  The new radius is the worst-case
    user distance plus ``d_th``, capped there, and never below ``r_min`` when the
    cell allows it.
    """
    if d_th < 0:
        raise ValueError("d_th must be nonnegative")
    users = np.asarray(users_estimated, dtype=float).reshape(-1, 2)
    out = []
    for k, s in enumerate(deployment.stations):
        if s.cell is None:
            raise PlannerError(f"station {k} has no cell; robustify needs a Voronoi plan")
        c = np.asarray(s.center, dtype=float)
        to_edge = min(c[0], c[1], deployment.side_m - c[0], deployment.side_m - c[1])
        room = max(0.0, min(s.cell.boundary_distance(c) - s.radius, to_edge))
        pts = users[s.covered]
        new_c, d_k = constrained_one_center(pts, Disk(s.center, room))
        room_new = max(0.0, s.cell.boundary_distance(new_c) - s.radius)
        r_cap = min(R, s.radius + room_new)
        r_new = d_k + d_th if d_k + d_th <= r_cap else r_cap
        r_new = max(r_new, min(r_min, r_cap))
        inside = np.flatnonzero(s.cell.contains(users))
        covered = inside[_within(users[inside], new_c, r_new)]
        covered = np.union1d(covered, s.covered)
        out.append(_station(new_c, r_new, covered, env, s.cell, s.iterations))
    counters = dict(deployment.counters)
    return Deployment(out, "robust-" + deployment.planner, deployment.side_m, R,
                      counters, dict(deployment.config))


def robust_margin(station: AerialBS, users_estimated) -> float:
    """Smallest gap between the footprint edge and a covered (estimated) user."""
    if len(station.covered) == 0:
        return station.radius
    u = np.asarray(users_estimated, dtype=float)[station.covered]
    return station.radius - float(np.max(np.hypot(*(u - np.asarray(station.center)).T)))


def plan(planner: str, users: UserSet, side: float, env: EnvParams,
         config: Optional[PlannerConfig] = None, seed: int = 0) -> Deployment:
    """Run one named planner on the positions a planner is allowed to see."""
    if planner not in PLANNERS:
        raise ValueError(f"unknown planner {planner!r}; choose from {PLANNERS}")
    cfg = config or PlannerConfig()
    R = cfg.radius_m if cfg.radius_m is not None else coverage_radius(env.pl_threshold, env)
    k_max = cfg.k_max if cfg.k_max is not None else cpt_count(side, R)
    sep = cfg.min_center_sep_frac * R
    r_min = cfg.r_min_frac * R
    pts = users.planning_positions
    if planner == "cpt":
        dep = plan_cpt(side, R, env, pts)
    elif planner == "sd-gr":
        dep = plan_sd_gr(pts, R, side, k_max, env)
    elif planner in ("sd-km", "robust-sd-km"):
        dep = plan_sd_km(pts, R, side, k_max, sep, seed, env, cfg.spill)
    else:
        dep = plan_sd_kmvr(pts, R, r_min, side, k_max, sep, seed, env, cfg.vr_max_iter,
                           cfg.spill)
    if planner.startswith("robust-"):
        if cfg.uli_bound_m is not None:
            d_th = cfg.uli_bound_m
        else:
            sigma = users.config.uli_sigma_m if users.config is not None else 0.0
            d_th = 3.0 * sigma
        dep = robustify(dep, pts, d_th, R, env, r_min)
    dep.config = {"planner": cfg.to_dict(), "env": env.to_dict(), "seed": int(seed)}
    return dep
