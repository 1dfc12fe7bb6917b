"""Planar geometry on convex regions.

A region is an intersection of halfplanes ``{p : n . p <= c}`` clipped to the square
``[0, L]^2``.  Points are plain ``(x, y)`` pairs or ``(n, 2)`` float arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

EPS = 1e-9


@dataclass(frozen=True)
class HalfPlane:
    """The set ``{p : normal . p <= offset}`` with a unit normal."""

    normal: tuple[float, float]
    offset: float

    @classmethod
    def from_coeffs(cls, nx: float, ny: float, c: float) -> "HalfPlane":
        norm = math.hypot(nx, ny)
        if norm == 0:
            raise ValueError("degenerate halfplane normal")
        return cls((nx / norm, ny / norm), c / norm)

    def slack(self, pts) -> np.ndarray:
        """Signed distance inside the halfplane (negative means outside)."""
        pts = np.asarray(pts, dtype=float)
        return self.offset - pts @ np.asarray(self.normal)

    def shifted(self, delta: float) -> "HalfPlane":
        return HalfPlane(self.normal, self.offset - delta)


def box_halfplanes(side: float, margin: float = 0.0) -> list[HalfPlane]:
    lo, hi = -float(margin), float(side) + float(margin)
    return [
        HalfPlane((-1.0, 0.0), -lo),
        HalfPlane((1.0, 0.0), hi),
        HalfPlane((0.0, -1.0), -lo),
        HalfPlane((0.0, 1.0), hi),
    ]


@dataclass
class ConvexRegion:
    """Convex polygon with its defining halfplanes (clip-box sides included).

    The clip box is ``[-margin, side + margin]^2``.  ``vertices`` is counterclockwise;
    an empty region has no vertices.  Degenerate regions (a segment or single point)
    keep their 1 or 2 distinct vertices.
    """

    halfplanes: list[HalfPlane]
    vertices: np.ndarray = field(repr=False)
    side: float = 0.0
    margin: float = 0.0

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))

    def normals(self) -> np.ndarray:
        return np.array([h.normal for h in self.halfplanes], dtype=float).reshape(-1, 2)

    def offsets(self) -> np.ndarray:
        return np.array([h.offset for h in self.halfplanes], dtype=float)

    def slack(self, pts) -> np.ndarray:
        """Per-halfplane slack, shape ``(len(pts), n_halfplanes)``."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.offsets()[None, :] - pts @ self.normals().T

    def contains(self, pts, tol: float = EPS) -> np.ndarray:
        if self.is_empty:
            return np.zeros(len(np.atleast_2d(pts)), dtype=bool)
        return np.all(self.slack(pts) >= -tol, axis=1)

    def boundary_distance(self, p) -> float:
        """Distance from an interior point to the nearest boundary line."""
        return float(np.min(self.slack(p)[0]))

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        if len(v) < 2:
            return []
        if len(v) == 2:
            return [(v[0], v[1])]
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def is_subset_of(self, other: "ConvexRegion", tol: float = EPS) -> bool:
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return bool(np.all(other.contains(self.vertices, tol)))

    def to_dict(self) -> dict:
        return {
            "halfplanes": [[h.normal[0], h.normal[1], h.offset] for h in self.halfplanes],
            "vertices": self.vertices.tolist(),
            "side": self.side,
            "margin": self.margin,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConvexRegion":
        hps = [HalfPlane((float(a), float(b)), float(c)) for a, b, c in d["halfplanes"]]
        verts = np.asarray(d["vertices"], dtype=float).reshape(-1, 2)
        return cls(hps, verts, float(d.get("side", 0.0)), float(d.get("margin", 0.0)))


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("disk radius must be nonnegative")


def _clip(poly: list[np.ndarray], hp: HalfPlane) -> list[np.ndarray]:
    # Sutherland-Hodgman step against one halfplane.
    if not poly:
        return poly
    n = np.asarray(hp.normal)
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        sp = hp.offset - float(n @ p)
        sq = hp.offset - float(n @ q)
        p_in, q_in = sp >= -EPS, sq >= -EPS
        if p_in:
            out.append(p)
        if p_in != q_in and m > 1:
            t = sp / (sp - sq)
            out.append(p + t * (q - p))
    return out


def _dedupe(poly: list[np.ndarray], tol: float = EPS) -> np.ndarray:
    pts: list[np.ndarray] = []
    for p in poly:
        if not pts or np.hypot(*(p - pts[-1])) > tol:
            pts.append(p)
    while len(pts) > 1 and np.hypot(*(pts[0] - pts[-1])) <= tol:
        pts.pop()
    return np.array(pts, dtype=float).reshape(-1, 2)


def intersect_halfplanes(planes: Sequence[HalfPlane], side: float,
                         margin: float = 0.0) -> ConvexRegion:
    """Intersect ``planes`` with the square ``[0, side]^2`` grown by ``margin``."""
    if side <= 0:
        raise ValueError("square side must be positive")
    if margin < 0:
        raise ValueError("margin must be nonnegative")
    box = box_halfplanes(side, margin)
    lo, hi = -margin, side + margin
    poly = [np.array(p, dtype=float) for p in ((lo, lo), (hi, lo), (hi, hi), (lo, hi))]
    for hp in planes:
        poly = _clip(poly, hp)
        poly = list(_dedupe(poly))
        if not poly:
            break
    verts = _dedupe(poly) if poly else np.zeros((0, 2))
    region = ConvexRegion(box + list(planes), verts, float(side), float(margin))
    if len(verts):
        # Clipping keeps points within EPS of each plane; drop regions that do not
        # actually satisfy every plane (contradictory constraints closed within EPS).
        if not np.all(region.contains(verts, tol=10 * EPS)):
            region.vertices = np.zeros((0, 2))
    return region


def bisector_halfplane(a, b) -> HalfPlane:
    """Points at least as close to ``a`` as to ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    n = b - a
    c = 0.5 * float(b @ b - a @ a)
    return HalfPlane.from_coeffs(float(n[0]), float(n[1]), c)


def voronoi_cell(centers, k: int, side: float, margin: float = 0.0) -> ConvexRegion:
    """Cell of ``centers[k]`` in the Voronoi diagram, clipped to the (grown) square."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    diffs = centers[:, None, :] - centers[None, :, :]
    d = np.hypot(diffs[..., 0], diffs[..., 1])
    np.fill_diagonal(d, np.inf)
    if np.any(d <= EPS):
        raise ValueError("Voronoi centers must be pairwise distinct")
    planes = [bisector_halfplane(centers[k], centers[j])
              for j in range(len(centers)) if j != k]
    return intersect_halfplanes(planes, side, margin)


def inward_offset(region: ConvexRegion, delta: float) -> ConvexRegion:
    """Shift every boundary line inward by ``delta`` along its normal."""
    if delta < 0:
        raise ValueError("offset must be nonnegative")
    shifted = [h.shifted(delta) for h in region.halfplanes]
    if region.is_empty:
        return ConvexRegion(shifted, np.zeros((0, 2)), region.side, region.margin)
    # The shifted box sides are part of the halfplane list, so the clip box can be
    # the original one.
    out = intersect_halfplanes(shifted, region.side, region.margin)
    out.halfplanes = shifted
    return out


def chebyshev_disk(region: ConvexRegion, center_within: ConvexRegion | None = None) -> Disk:
    """Largest disk inscribed in ``region``.

    ``center_within`` optionally restricts where the center may lie (without
    constraining the disk itself).  Ties in the center are broken toward the
    lexicographically smallest point.
    """
    if region.is_empty:
        raise ValueError("empty region has no inscribed disk")
    N = region.normals()
    c = region.offsets()
    # variables (x, y, r); n . p + r <= c
    A = np.hstack([N, np.ones((len(N), 1))])
    if center_within is not None:
        if center_within.is_empty:
            raise ValueError("empty center region")
        A = np.vstack([A, np.hstack([center_within.normals(),
                                     np.zeros((len(center_within.halfplanes), 1))])])
        c = np.concatenate([c, center_within.offsets()])
    lo = np.min(region.vertices, axis=0)
    hi = np.max(region.vertices, axis=0)
    bounds = [(lo[0], hi[0]), (lo[1], hi[1]), (0, None)]
    res = linprog([0, 0, -1], A_ub=A, b_ub=c, bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"inscribed-disk LP failed: {res.message}")
    r_star = max(float(res.x[2]), 0.0)
    x = res.x
    # Lexicographic tie-break: fix r, then minimize x, then y.
    A_eq_r = [(r_star - 1e-12 * max(1.0, r_star), None)]
    res_x = linprog([1, 0, 0], A_ub=A, b_ub=c, bounds=bounds[:2] + A_eq_r, method="highs")
    if res_x.status == 0:
        x = res_x.x
        bx = [(x[0], x[0] + 1e-12 * max(1.0, abs(x[0])))]
        res_y = linprog([0, 1, 0], A_ub=A, b_ub=c, bounds=bx + [bounds[1]] + A_eq_r,
                        method="highs")
        if res_y.status == 0:
            x = res_y.x
    center = (float(x[0]), float(x[1]))
    # Report the radius the center actually achieves.
    r = max(0.0, min(r_star, region.boundary_distance(center)))
    return Disk(center, r)


def _circle_from_two(a, b):
    c = (a + b) / 2
    return c, float(np.hypot(*(a - c)))


def _circle_from_three(a, b, c):
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    if d == 0:
        return None
    a2, b2, c2 = ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    center = np.array([ux, uy])
    r = max(float(np.hypot(*(center - p))) for p in (a, b, c))
    return center, r


def _inside(circle, p, tol):
    return float(np.hypot(*(p - circle[0]))) <= circle[1] + tol


def min_enclosing_disk(points) -> Disk:
    """Smallest disk containing all ``points`` (Welzl, iterative form).

    The input order is shuffled with a fixed seed so the expected running time is
    linear while results stay reproducible.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("no points to enclose")
    pts = np.unique(pts, axis=0)
    scale = max(1.0, float(np.max(np.abs(pts))))
    tol = 1e-12 * scale
    order = np.random.default_rng(0x5EC).permutation(len(pts))
    pts = pts[order]
    circle = (pts[0].copy(), 0.0)
    for i in range(1, len(pts)):
        p = pts[i]
        if _inside(circle, p, tol):
            continue
        circle = (p.copy(), 0.0)
        for j in range(i):
            q = pts[j]
            if _inside(circle, q, tol):
                continue
            circle = _circle_from_two(p, q)
            for k in range(j):
                s = pts[k]
                if _inside(circle, s, tol):
                    continue
                c3 = _circle_from_three(p, q, s)
                if c3 is None:
                    # Collinear: the enclosing circle spans the two farthest points.
                    trio = [p, q, s]
                    best = max(((u, v) for u in trio for v in trio),
                               key=lambda uv: float(np.hypot(*(uv[0] - uv[1]))))
                    c3 = _circle_from_two(*best)
                circle = c3
    center, _ = circle
    r = float(np.max(np.hypot(*(pts - center).T)))
    return Disk((float(center[0]), float(center[1])), r)


def disk_pair_intersections(d1: Disk, d2: Disk) -> list[tuple[float, float]]:
    """Intersection points of the two boundary circles (0, 1 or 2 of them)."""
    c1 = np.asarray(d1.center, dtype=float)
    c2 = np.asarray(d2.center, dtype=float)
    r1, r2 = d1.radius, d2.radius
    d = float(np.hypot(*(c2 - c1)))
    scale = max(1.0, r1, r2)
    if d <= EPS * scale:
        return []
    if d > r1 + r2 + EPS * scale or d < abs(r1 - r2) - EPS * scale:
        return []
    a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
    h2 = r1 * r1 - a * a
    u = (c2 - c1) / d
    base = c1 + a * u
    if h2 <= (EPS * scale) ** 2:
        return [(float(base[0]), float(base[1]))]
    h = math.sqrt(h2)
    perp = np.array([-u[1], u[0]])
    p1, p2 = base + h * perp, base - h * perp
    return [(float(p1[0]), float(p1[1])), (float(p2[0]), float(p2[1]))]


def circle_intersections(centers: np.ndarray, radius: float):
    """All pairwise intersection points of equal-radius circles, vectorized.

    Returns ``(points, i, j)`` where ``points[m]`` lies on circles ``i[m]`` and ``j[m]``.
    """
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    n = len(centers)
    if n < 2:
        return np.zeros((0, 2)), np.zeros(0, int), np.zeros(0, int)
    i, j = np.triu_indices(n, 1)
    diff = centers[j] - centers[i]
    d = np.hypot(diff[:, 0], diff[:, 1])
    ok = (d > EPS) & (d <= 2 * radius + EPS * max(1.0, radius))
    i, j, diff, d = i[ok], j[ok], diff[ok], d[ok]
    mid = centers[i] + diff / 2
    h = np.sqrt(np.maximum(radius * radius - (d / 2) ** 2, 0.0))
    perp = np.stack([-diff[:, 1], diff[:, 0]], axis=1) / d[:, None]
    pts = np.concatenate([mid + h[:, None] * perp, mid - h[:, None] * perp])
    return pts, np.concatenate([i, i]), np.concatenate([j, j])


def _feasible_point(centers: np.ndarray, radii: np.ndarray, tol: float):
    """A point common to all disks, or None.  Exact up to ``tol``.

    A nonempty intersection of disks has a corner where two boundary circles meet,
    unless it is one whole disk, in which case that disk's center is common.
    """
    cands = [centers]
    n = len(centers)
    if n >= 2:
        i, j = np.triu_indices(n, 1)
        c1, c2 = centers[i], centers[j]
        r1, r2 = radii[i], radii[j]
        diff = c2 - c1
        d = np.hypot(diff[:, 0], diff[:, 1])
        ok = (d > 0) & (d <= r1 + r2) & (d >= np.abs(r1 - r2))
        c1, r1, r2, diff, d = c1[ok], r1[ok], r2[ok], diff[ok], d[ok]
        a = (d * d + r1 * r1 - r2 * r2) / (2 * d)
        h = np.sqrt(np.maximum(r1 * r1 - a * a, 0.0))
        u = diff / d[:, None]
        base = c1 + a[:, None] * u
        perp = np.stack([-u[:, 1], u[:, 0]], axis=1)
        cands += [base + h[:, None] * perp, base - h[:, None] * perp]
    cand = np.concatenate(cands)
    dist = np.hypot(cand[:, None, 0] - centers[None, :, 0],
                    cand[:, None, 1] - centers[None, :, 1])
    viol = np.max(dist - radii[None, :], axis=1)
    best = int(np.argmin(viol))
    if viol[best] <= tol:
        return cand[best]
    return None


def constrained_one_center(points, bound: Disk, tol: float = 1e-7):
    """Point within ``bound`` minimizing the largest distance to ``points``.

    Returns ``((x, y), d)``.  Bisection on ``d`` with an exact disk-intersection
    feasibility test.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    b = np.asarray(bound.center, dtype=float)
    if len(pts) == 0:
        return (float(b[0]), float(b[1])), 0.0
    pts = np.unique(pts, axis=0)

    def objective(c):
        return float(np.max(np.hypot(*(pts - c).T)))

    if bound.radius <= 0:
        return (float(b[0]), float(b[1])), objective(b)
    mec = min_enclosing_disk(pts)
    mc = np.asarray(mec.center)
    if np.hypot(*(mc - b)) <= bound.radius:
        return (float(mc[0]), float(mc[1])), objective(mc)

    lo, hi = mec.radius, objective(b)
    best = b
    scale = max(1.0, hi)
    feas_tol = 1e-12 * scale
    centers = np.vstack([pts, b])
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        radii = np.concatenate([np.full(len(pts), mid), [bound.radius]])
        p = _feasible_point(centers, radii, feas_tol)
        if p is None:
            lo = mid
        else:
            hi = mid
            best = p
    # Pull the point back inside the bound if rounding pushed it out.
    off = best - b
    dist = float(np.hypot(*off))
    if dist > bound.radius:
        best = b + off * (bound.radius / dist)
    return (float(best[0]), float(best[1])), objective(best)
