import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aerialbs.geometry import (
    Disk, HalfPlane, chebyshev_disk, constrained_one_center, disk_pair_intersections,
    intersect_halfplanes, inward_offset, min_enclosing_disk, voronoi_cell,
)

points = st.lists(st.tuples(st.floats(0, 1000), st.floats(0, 1000)), min_size=1, max_size=25)


def test_square_and_halfplane_clip():
    sq = intersect_halfplanes([], 10.0)
    assert sq.area == pytest.approx(100.0)
    tri = intersect_halfplanes([HalfPlane.from_coeffs(1, 1, 10)], 10.0)
    assert tri.area == pytest.approx(50.0)
    empty = intersect_halfplanes([HalfPlane((1.0, 0.0), -1.0)], 10.0)
    assert empty.is_empty


def test_region_round_trip():
    r = intersect_halfplanes([HalfPlane.from_coeffs(1, 2, 12)], 10.0, margin=2.0)
    back = type(r).from_dict(r.to_dict())
    assert np.allclose(back.vertices, r.vertices) and back.margin == 2.0


def test_voronoi_cells_tile_the_square():
    rng = np.random.default_rng(1)
    c = rng.uniform(0, 100, size=(7, 2))
    cells = [voronoi_cell(c, k, 100.0) for k in range(7)]
    assert sum(cell.area for cell in cells) == pytest.approx(1e4)
    for k, cell in enumerate(cells):
        assert cell.contains(c[k])[0]
    with pytest.raises(ValueError):
        voronoi_cell(np.array([[1.0, 1.0], [1.0, 1.0]]), 0, 10.0)


def test_chebyshev_of_square_and_triangle():
    d = chebyshev_disk(intersect_halfplanes([], 10.0))
    assert d.radius == pytest.approx(5.0) and np.allclose(d.center, (5, 5))
    # right triangle with legs 3, 4: inradius 1
    tri = intersect_halfplanes([HalfPlane.from_coeffs(4, 3, 12)], 10.0)
    d = chebyshev_disk(tri)
    assert d.radius == pytest.approx(1.0, abs=1e-9)
    assert np.allclose(d.center, (1, 1), atol=1e-7)


def test_chebyshev_tie_break_is_lexicographic():
    # 10 x 4 rectangle: centers (2..8, 2) all give r = 2; the smallest x wins.
    rect = intersect_halfplanes([HalfPlane((0.0, 1.0), 4.0)], 10.0)
    d = chebyshev_disk(rect)
    assert d.radius == pytest.approx(2.0)
    assert d.center == pytest.approx((2.0, 2.0), abs=1e-6)


def test_inward_offset_shrinks_inradius():
    sq = intersect_halfplanes([], 10.0)
    assert inward_offset(sq, 2.0).area == pytest.approx(36.0)
    assert inward_offset(sq, 6.0).is_empty


def test_disk_pair_intersections():
    pts = disk_pair_intersections(Disk((0, 0), 5), Disk((8, 0), 5))
    assert sorted(pts) == pytest.approx([(4.0, -3.0), (4.0, 3.0)])
    assert disk_pair_intersections(Disk((0, 0), 1), Disk((5, 0), 1)) == []
    assert len(disk_pair_intersections(Disk((0, 0), 1), Disk((2, 0), 1))) == 1


def test_mec_small_cases():
    assert min_enclosing_disk([(3, 4)]).radius == 0.0
    d = min_enclosing_disk([(0, 0), (2, 0)])
    assert d.radius == pytest.approx(1.0) and np.allclose(d.center, (1, 0))
    d = min_enclosing_disk([(0, 0), (4, 0), (2, 1), (2, -1)])
    assert d.radius == pytest.approx(2.0)
    d = min_enclosing_disk([(0, 0), (1, 0), (2, 0), (3, 0)])
    assert d.radius == pytest.approx(1.5)


@given(points)
@settings(max_examples=60, deadline=None)
def test_mec_contains_and_is_supported(pts):
    pts = np.asarray(pts)
    d = min_enclosing_disk(pts)
    dist = np.hypot(*(pts - np.asarray(d.center)).T)
    assert np.all(dist <= d.radius + 1e-9)
    # optimality: the radius equals the farthest distance and is at least half the diameter
    diam = max(np.hypot(*(a - b)) for a in pts for b in pts)
    assert d.radius >= diam / 2 - 1e-9
    assert d.radius <= diam / math.sqrt(3) + 1e-6


def test_one_center_unconstrained_is_mec():
    pts = np.array([(0, 0), (10, 0), (5, 3)])
    c, d = constrained_one_center(pts, Disk((0, 0), 100))
    mec = min_enclosing_disk(pts)
    assert d == pytest.approx(mec.radius) and np.allclose(c, mec.center)


def test_one_center_constrained_matches_brute_force():
    pts = np.array([(0.0, 0.0), (10.0, 0.0), (5.0, 8.0)])
    bound = Disk((-3.0, -3.0), 2.0)
    c, d = constrained_one_center(pts, bound)
    ang = np.linspace(0, 2 * np.pi, 4000)
    rad = np.linspace(0, 2, 200)
    A, Rr = np.meshgrid(ang, rad)
    g = np.column_stack([-3 + (Rr * np.cos(A)).ravel(), -3 + (Rr * np.sin(A)).ravel()])
    f = np.max(np.hypot(g[:, None, 0] - pts[None, :, 0], g[:, None, 1] - pts[None, :, 1]), axis=1)
    assert d <= f.min() + 1e-6
    assert d >= f.min() - 1e-2
    assert math.hypot(c[0] + 3, c[1] + 3) <= 2.0 + 1e-9


def test_one_center_degenerate_bound():
    c, d = constrained_one_center([(3.0, 4.0)], Disk((0.0, 0.0), 0.0))
    assert c == (0.0, 0.0) and d == pytest.approx(5.0)
    c, d = constrained_one_center(np.zeros((0, 2)), Disk((1.0, 2.0), 3.0))
    assert c == (1.0, 2.0) and d == 0.0
