"""Maximum-coverage placement of one fixed-radius disk inside a convex region.

The covered set is constant on the cells of the arrangement formed by the users'
radius-R circles and the region boundary, and every nonempty feasible set
``region ∩ disks(S)`` has a corner of that arrangement (or is a whole disk, whose
center is a user).  Enumerating those corners therefore finds the global optimum.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from aerialbs.geometry import (
    EPS,
    ConvexRegion,
    HalfPlane,
    circle_intersections,
    intersect_halfplanes,
)

NUDGE = 1e-7
_CHUNK = 4096


@dataclass
class CoverageSolution:
    center: tuple[float, float]
    covered: np.ndarray
    count: int
    candidates_evaluated: int


def _project_onto_region(pts: np.ndarray, region: ConvexRegion) -> np.ndarray:
    inside = region.contains(pts)
    out = pts.copy()
    if np.all(inside):
        return out
    edges = region.edges()
    outside = np.flatnonzero(~inside)
    q = pts[outside]
    if not edges:
        out[outside] = region.vertices[0]
        return out
    best_d = np.full(len(q), np.inf)
    best_p = np.zeros_like(q)
    for a, b in edges:
        ab = b - a
        L2 = float(ab @ ab)
        t = np.zeros(len(q)) if L2 == 0 else np.clip((q - a) @ ab / L2, 0.0, 1.0)
        p = a + t[:, None] * ab
        d = np.hypot(*(q - p).T)
        upd = d < best_d
        best_d[upd] = d[upd]
        best_p[upd] = p[upd]
    out[outside] = best_p
    return out


def _edge_circle_candidates(users: np.ndarray, radius: float, region: ConvexRegion):
    cands = []
    for a, b in region.edges():
        ab = b - a
        L2 = float(ab @ ab)
        if L2 == 0:
            continue
        L = np.sqrt(L2)
        u = ab / L
        # foot of the perpendicular from each user, as arc length along the edge
        s0 = (users - a) @ u
        perp = np.hypot(*(users - (a + s0[:, None] * u)).T)
        h2 = radius * radius - perp * perp
        ok = h2 >= 0
        h = np.sqrt(np.where(ok, h2, 0.0))
        for sign in (-1.0, 1.0):
            s = s0 + sign * h
            # nudge along the edge toward the foot so the user is strictly inside
            s = s - sign * np.minimum(NUDGE, h)
            keep = ok & (s >= -EPS) & (s <= L + EPS)
            s = np.clip(s[keep], 0.0, L)
            cands.append(a + s[:, None] * u)
    if not cands:
        return np.zeros((0, 2))
    return np.concatenate(cands)


def candidate_centers(users, radius: float, region: ConvexRegion) -> np.ndarray:
    """Every arrangement corner that can be the optimal center."""
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    parts = [region.vertices]
    if len(users):
        parts.append(_project_onto_region(users, region))
        pts, i, j = circle_intersections(users, radius)
        if len(pts):
            mid = 0.5 * (users[i] + users[j])
            step = mid - pts
            norm = np.hypot(step[:, 0], step[:, 1])
            scale = np.where(norm > 0, np.minimum(NUDGE, norm) / np.where(norm > 0, norm, 1), 0)
            pts = pts + step * scale[:, None]
            parts.append(pts[region.contains(pts)])
        parts.append(_edge_circle_candidates(users, radius, region))
    cand = np.concatenate(parts)
    return cand[region.contains(cand)] if len(cand) else cand


def max_coverage_disk(users, radius: float, region: ConvexRegion) -> CoverageSolution:
    """Center in ``region`` whose radius-``radius`` disk covers the most users.

    Ties go to the candidate with the smallest largest distance to the users it
    covers, then to the lexicographically smallest center.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    if region.is_empty:
        raise ValueError("cannot place a disk in an empty region")
    users = np.asarray(users, dtype=float).reshape(-1, 2)
    if len(users) == 0:
        c = region.vertices.mean(axis=0)
        return CoverageSolution((float(c[0]), float(c[1])), np.zeros(0, int), 0, 1)

    cand = candidate_centers(users, radius, region)
    lim = radius + EPS
    best_key = None
    best_c = None
    for start in range(0, len(cand), _CHUNK):
        c = cand[start:start + _CHUNK]
        d = np.hypot(c[:, None, 0] - users[None, :, 0], c[:, None, 1] - users[None, :, 1])
        cov = d <= lim
        counts = cov.sum(axis=1)
        top = counts.max()
        if best_key is not None and top < best_key[0]:
            continue
        rows = np.flatnonzero(counts == top)
        spread = np.where(cov[rows], d[rows], 0.0).max(axis=1)
        order = np.lexsort((c[rows, 1], c[rows, 0], spread))
        r = rows[order[0]]
        key = (int(top), -float(spread[order[0]]), -c[r, 0], -c[r, 1])
        if best_key is None or key > best_key:
            best_key = key
            best_c = c[r]
    d = np.hypot(*(users - best_c).T)
    covered = np.flatnonzero(d <= lim)
    return CoverageSolution((float(best_c[0]), float(best_c[1])), covered,
                            len(covered), len(cand))


def _separation_planes(center, R: float) -> list[HalfPlane]:
    x, y = float(center[0]), float(center[1])
    return [
        HalfPlane((-1.0, 0.0), -(x + 2 * R)),  # x >= x_j + 2R
        HalfPlane((1.0, 0.0), x - 2 * R),      # x <= x_j - 2R
        HalfPlane((0.0, -1.0), -(y + 2 * R)),  # y >= y_j + 2R
        HalfPlane((0.0, 1.0), y - 2 * R),      # y <= y_j - 2R
    ]


def gr_candidate_regions(prior_centers, R: float, side: float) -> list[ConvexRegion]:
    """All ``4**k`` intersections of one relaxed separation halfplane per prior center."""
    prior = np.asarray(prior_centers, dtype=float).reshape(-1, 2)
    if len(prior) == 0:
        raise ValueError("need at least one prior center")
    options = [_separation_planes(c, R) for c in prior]
    return [intersect_halfplanes(list(combo), side) for combo in itertools.product(*options)]


def iter_gr_regions(prior_centers, R: float, side: float):
    """Nonempty relaxed regions, built incrementally.

    Same nonempty set as :func:`gr_candidate_regions` (an empty partial intersection
    stays empty) without materializing ``4**k`` polygons.
    """
    prior = np.asarray(prior_centers, dtype=float).reshape(-1, 2)
    partial: list[list[HalfPlane]] = [[]]
    for c in prior:
        nxt = []
        for planes in partial:
            for hp in _separation_planes(c, R):
                trial = planes + [hp]
                if not intersect_halfplanes(trial, side).is_empty:
                    nxt.append(trial)
        partial = nxt
        if not partial:
            return []
    return [intersect_halfplanes(p, side) for p in partial]


def eliminate_regions(candidates: list[ConvexRegion]) -> list[ConvexRegion]:
    """Drop empty regions and regions contained in another candidate.

    Identical regions are contained in each other; the one created first survives.
    """
    live = [(i, r) for i, r in enumerate(candidates) if not r.is_empty]
    keep = []
    for i, r in live:
        dominated = False
        for j, q in live:
            if i == j or not r.is_subset_of(q):
                continue
            if not q.is_subset_of(r) or j < i:
                dominated = True
                break
        if not dominated:
            keep.append(r)
    return keep
