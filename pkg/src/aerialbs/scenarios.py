"""User point sets from homogeneous, inhomogeneous and cluster Poisson processes.

Rates are given per km^2 (the IPP scale per km^4) and cluster spread in km; all
generated coordinates are meters in the square ``[0, side_m]^2``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

SCHEMA_VERSION = 1
PROCESSES = ("hpp", "ipp", "pcp")

# Resampling attempts for a cluster child that lands outside the square.
_MAX_RESAMPLE = 100


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for ``seed`` and an optional substream path."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, *map(int, stream)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class ScenarioConfig:
    side_m: float = 3000.0
    process: str = "pcp"
    lambda_s: float = 5.0          # users / km^2 (HPP)
    ipp_scale: float = 5.0         # c in c*(x^2 + y^2), x and y in km
    ipp_origin: str = "center"     # "center" or "corner"
    lambda_p: float = 1.0          # parents / km^2 (PCP)
    alpha: float = 0.9             # mean children per parent
    sigma_cluster_km: float = 0.02
    include_parents: bool = False
    uli_sigma_m: float = 0.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.process not in PROCESSES:
            raise ValueError(f"process must be one of {PROCESSES}, got {self.process!r}")
        if not self.side_m > 0:
            raise ValueError("side_m must be positive")
        for name in ("lambda_s", "ipp_scale", "lambda_p", "alpha",
                     "sigma_cluster_km", "uli_sigma_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.ipp_origin not in ("center", "corner"):
            raise ValueError("ipp_origin must be 'center' or 'corner'")

    @classmethod
    def from_dict(cls, d: dict) -> "ScenarioConfig":
        d = dict(d)
        if "side_km" in d:
            d["side_m"] = 1000.0 * float(d.pop("side_km"))
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown scenario keys: {sorted(unknown)}")
        return cls(**d)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class UserSet:
    true_positions: np.ndarray
    estimated_positions: Optional[np.ndarray] = None
    seed: int = 0
    config: Optional[ScenarioConfig] = None
    parent_ids: Optional[np.ndarray] = field(default=None, repr=False)
    n_parents: Optional[int] = field(default=None, repr=False)

    def __post_init__(self):
        self.true_positions = np.asarray(self.true_positions, dtype=float).reshape(-1, 2)
        if self.estimated_positions is not None:
            self.estimated_positions = np.asarray(
                self.estimated_positions, dtype=float).reshape(-1, 2)
            if self.estimated_positions.shape != self.true_positions.shape:
                raise ValueError("estimated positions must match true positions")

    def __len__(self):
        return len(self.true_positions)

    @property
    def planning_positions(self) -> np.ndarray:
        """What a planner sees: estimates when present, else the truth."""
        if self.estimated_positions is None:
            return self.true_positions
        return self.estimated_positions

    def to_dict(self) -> dict:
        est = self.planning_positions
        rows = np.hstack([self.true_positions, est]).tolist()
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": int(self.seed),
            "config": self.config.to_dict() if self.config else None,
            "has_estimates": self.estimated_positions is not None,
            "users": rows,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UserSet":
        if d.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported scenario schema {d.get('schema_version')!r}")
        rows = np.asarray(d["users"], dtype=float).reshape(-1, 4)
        cfg = ScenarioConfig.from_dict(d["config"]) if d.get("config") else None
        est = rows[:, 2:] if d.get("has_estimates", True) else None
        return cls(rows[:, :2], est, int(d["seed"]), cfg)

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"


def _uniform(rng, n, side):
    return rng.uniform(0.0, side, size=(n, 2))


def gen_hpp(config: ScenarioConfig, seed: int) -> UserSet:
    rng = make_rng(seed, 0)
    area_km2 = (config.side_m / 1000.0) ** 2
    n = rng.poisson(config.lambda_s * area_km2)
    return UserSet(_uniform(rng, n, config.side_m), seed=seed, config=config)


def ipp_intensity(pts_m, config: ScenarioConfig) -> np.ndarray:
    """Intensity (users / km^2) at meter coordinates."""
    pts = np.asarray(pts_m, dtype=float).reshape(-1, 2) / 1000.0
    if config.ipp_origin == "center":
        pts = pts - config.side_m / 2000.0
    return config.ipp_scale * np.sum(pts * pts, axis=1)


def ipp_expected_count(config: ScenarioConfig) -> float:
    L = config.side_m / 1000.0
    if config.ipp_origin == "center":
        # integral of x^2 + y^2 over [-L/2, L/2]^2
        return config.ipp_scale * L ** 4 / 6.0
    return config.ipp_scale * 2.0 * L ** 4 / 3.0


def gen_ipp(config: ScenarioConfig, seed: int) -> UserSet:
    """Thinning of a dominating homogeneous process."""
    rng = make_rng(seed, 0)
    L = config.side_m / 1000.0
    half = L / 2 if config.ipp_origin == "center" else L
    lam_max = config.ipp_scale * 2 * half * half
    n = rng.poisson(lam_max * L * L)
    pts = _uniform(rng, n, config.side_m)
    if lam_max == 0:
        return UserSet(np.zeros((0, 2)), seed=seed, config=config)
    keep = rng.uniform(size=n) < ipp_intensity(pts, config) / lam_max
    return UserSet(pts[keep], seed=seed, config=config)


def gen_pcp(config: ScenarioConfig, seed: int) -> UserSet:
    """Thomas-type cluster process: Gaussian children around HPP parents.

    Children falling outside the square are redrawn (bounded attempts, then clipped).
    """
    rng = make_rng(seed, 0)
    side = config.side_m
    area_km2 = (side / 1000.0) ** 2
    n_par = rng.poisson(config.lambda_p * area_km2)
    parents = _uniform(rng, n_par, side)
    counts = rng.poisson(config.alpha, size=n_par)
    sigma = config.sigma_cluster_km * 1000.0
    ids = np.repeat(np.arange(n_par), counts)
    kids = parents[ids] + rng.normal(0.0, sigma, size=(len(ids), 2))
    for _ in range(_MAX_RESAMPLE):
        out = np.flatnonzero(np.any((kids < 0) | (kids > side), axis=1))
        if len(out) == 0:
            break
        kids[out] = parents[ids[out]] + rng.normal(0.0, sigma, size=(len(out), 2))
    kids = np.clip(kids, 0.0, side)
    if config.include_parents:
        kids = np.vstack([parents, kids])
        ids = np.concatenate([np.arange(n_par), ids])
    return UserSet(kids, seed=seed, config=config, parent_ids=ids, n_parents=int(n_par))


def perturb_uli(users: UserSet, uli_sigma: float, seed: int) -> UserSet:
    """Attach Gaussian-perturbed location estimates; true positions are untouched."""
    if uli_sigma < 0:
        raise ValueError("uli_sigma must be nonnegative")
    true = users.true_positions
    if uli_sigma == 0:
        est = true.copy()
    else:
        rng = make_rng(seed, 1)
        est = true + rng.normal(0.0, uli_sigma, size=true.shape)
    return UserSet(true, est, users.seed, users.config, users.parent_ids, users.n_parents)


_GENERATORS = {"hpp": gen_hpp, "ipp": gen_ipp, "pcp": gen_pcp}


def generate_users(config: ScenarioConfig, seed: int) -> UserSet:
    """Draw users for ``config`` and, when configured, location estimates."""
    users = _GENERATORS[config.process](config, seed)
    if config.uli_sigma_m > 0:
        users = perturb_uli(users, config.uli_sigma_m, seed)
    return users
