"""Air-to-ground channel: LoS probability, mean path loss and the radius/altitude/power laws.

All angles are radians at the API boundary; the sigmoid itself works in degrees.
Distances are meters, powers dBm, losses dB.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Mapping

import numpy as np

# Smallest coverage radius accepted by transmit_power.
MIN_RADIUS = 1e-3

_CONFIG_KEYS = {
    "a": "a",
    "b": "b",
    "eta_los_db": "eta_los",
    "eta_nlos_db": "eta_nlos",
    "fc_hz": "f_c",
    "c_light_mps": "c_light",
    "theta_opt_deg": "theta_opt",
    "pl_threshold_db": "pl_threshold",
    "p_min_dbm": "p_min",
}


@dataclass(frozen=True)
class EnvParams:
    """Propagation environment constants (urban defaults)."""

    a: float = 9.61
    b: float = 0.16
    eta_los: float = 1.0
    eta_nlos: float = 20.0
    f_c: float = 2.5e9
    c_light: float = 3e8
    theta_opt: float = math.radians(42.44)
    pl_threshold: float = 100.0
    p_min: float = -70.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("sigmoid parameters a and b must be positive")
        if not (self.eta_nlos >= self.eta_los >= 0):
            raise ValueError("need eta_nlos >= eta_los >= 0")
        if not (0 < self.theta_opt < math.pi / 2):
            raise ValueError("theta_opt must lie in (0, pi/2)")
        if not (self.f_c > 0 and self.c_light > 0):
            raise ValueError("carrier frequency and light speed must be positive")

    @property
    def A(self) -> float:
        return self.eta_los - self.eta_nlos

    @property
    def B(self) -> float:
        return (20 * math.log10(4 * math.pi / self.c_light)
                + 20 * math.log10(self.f_c) + self.eta_nlos)

    @classmethod
    def from_dict(cls, d: Mapping) -> "EnvParams":
        unknown = set(d) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown env keys: {sorted(unknown)}")
        kw = {}
        for key, value in d.items():
            field = _CONFIG_KEYS[key]
            kw[field] = math.radians(value) if key == "theta_opt_deg" else float(value)
        return cls(**kw)

    def to_dict(self) -> dict:
        inv = {v: k for k, v in _CONFIG_KEYS.items()}
        out = {}
        for field, value in asdict(self).items():
            out[inv[field]] = math.degrees(value) if field == "theta_opt" else value
        return out


def _sigmoid_term(theta, env: EnvParams):
    return 1.0 / (1.0 + env.a * np.exp(-env.b * (np.degrees(theta) - env.a)))


def los_probability(theta, env: EnvParams):
    """Probability of a line-of-sight link at elevation angle ``theta`` (radians)."""
    t = np.asarray(theta, dtype=float)
    if np.any(~((t > 0) & (t <= math.pi / 2))):
        raise ValueError("elevation angle must lie in (0, pi/2]")
    p = _sigmoid_term(t, env)
    return float(p) if p.ndim == 0 else p


def path_loss_angle(theta, r, env: EnvParams):
    """Mean path loss in dB written in terms of elevation angle and ground distance."""
    theta = np.asarray(theta, dtype=float)
    r = np.asarray(r, dtype=float)
    pl = env.A * _sigmoid_term(theta, env) + 20 * np.log10(r / np.cos(theta)) + env.B
    return float(pl) if pl.ndim == 0 else pl


def path_loss(h, r, env: EnvParams):
    """Mean path loss in dB for altitude ``h`` and ground distance ``r``.

    ``r == 0`` is the user directly below the UAV: elevation pi/2, 3-D distance h.
    """
    h = np.asarray(h, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(h <= 0):
        raise ValueError("altitude must be positive")
    if np.any(r < 0):
        raise ValueError("ground distance must be nonnegative")
    h, r = np.broadcast_arrays(h, r)
    with np.errstate(divide="ignore"):
        theta = np.where(r > 0, np.arctan(h / np.where(r > 0, r, 1.0)), math.pi / 2)
    pl = env.A * _sigmoid_term(theta, env) + 10 * np.log10(h * h + r * r) + env.B
    return float(pl) if pl.ndim == 0 else pl


def _loss_at_opt_angle(env: EnvParams) -> float:
    return env.A * float(_sigmoid_term(env.theta_opt, env)) + env.B


def coverage_radius(pl_threshold: float, env: EnvParams) -> float:
    """Ground radius whose edge sees exactly ``pl_threshold`` dB at the optimal angle."""
    exponent = (pl_threshold - _loss_at_opt_angle(env)) / 20.0
    # 10**exponent is the slant range; the radius must come out positive and finite.
    if not math.isfinite(exponent):
        raise ValueError("path-loss threshold must be finite")
    return math.cos(env.theta_opt) * 10.0 ** exponent


def altitude_for_radius(r, env: EnvParams):
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be nonnegative")
    h = r * math.tan(env.theta_opt)
    return float(h) if h.ndim == 0 else h


def radius_path_loss(r, env: EnvParams):
    """Edge path loss of a footprint of radius ``r`` flown at the optimal angle."""
    r = np.asarray(r, dtype=float)
    pl = _loss_at_opt_angle(env) + 20 * np.log10(r / math.cos(env.theta_opt))
    return float(pl) if pl.ndim == 0 else pl


def transmit_power(r, env: EnvParams):
    """Transmit power (dBm) that just serves the footprint edge at radius ``r``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < MIN_RADIUS):
        raise ValueError(f"radius below the {MIN_RADIUS} m floor")
    p = env.p_min + radius_path_loss(r, env)
    return float(p) if np.ndim(p) == 0 else p


def dbm_to_mw(p_dbm):
    return 10.0 ** (np.asarray(p_dbm, dtype=float) / 10.0)


def mw_to_dbm(p_mw):
    p_mw = np.asarray(p_mw, dtype=float)
    with np.errstate(divide="ignore"):
        out = 10.0 * np.log10(p_mw)
    return float(out) if out.ndim == 0 else out


def total_power(powers_dbm: Iterable[float]) -> tuple[float, float]:
    """Sum per-station powers in milliwatts.

    Returns ``(total_mw, total_dbm)``; an empty fleet gives ``(0.0, -inf)``.
    """
    p = np.fromiter(powers_dbm, dtype=float)
    mw = float(np.sum(dbm_to_mw(p))) if p.size else 0.0
    return mw, mw_to_dbm(mw)
