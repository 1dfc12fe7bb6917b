import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aerialbs.coverage import (
    candidate_centers, eliminate_regions, gr_candidate_regions, iter_gr_regions,
    max_coverage_disk,
)
from aerialbs.geometry import HalfPlane, intersect_halfplanes

SQUARE = intersect_halfplanes([], 100.0)


def test_all_users_in_reach():
    users = np.array([[40.0, 50.0], [60.0, 50.0], [50.0, 55.0]])
    sol = max_coverage_disk(users, 15.0, SQUARE)
    assert sol.count == 3
    assert np.all(np.hypot(*(users - sol.center).T) <= 15.0 + 1e-9)


def test_two_clusters_picks_larger():
    users = np.array([[10, 10], [12, 11], [90, 90], [91, 88], [89, 91]], float)
    sol = max_coverage_disk(users, 5.0, SQUARE)
    assert sorted(sol.covered.tolist()) == [2, 3, 4]


def test_region_restricts_center():
    # Center must stay in x >= 80; a user at x=60 is then out of reach with radius 10.
    region = intersect_halfplanes([HalfPlane((-1.0, 0.0), -80.0)], 100.0)
    users = np.array([[60.0, 50.0], [85.0, 50.0]])
    sol = max_coverage_disk(users, 10.0, region)
    assert sol.count == 1 and sol.covered.tolist() == [1]
    assert sol.center[0] >= 80.0 - 1e-9


def test_pair_exactly_2r_apart():
    users = np.array([[40.0, 50.0], [60.0, 50.0]])
    sol = max_coverage_disk(users, 10.0, SQUARE)
    assert sol.count == 2
    assert sol.center == pytest.approx((50.0, 50.0), abs=1e-6)


def test_empty_inputs():
    sol = max_coverage_disk(np.zeros((0, 2)), 5.0, SQUARE)
    assert sol.count == 0
    empty = intersect_halfplanes([HalfPlane((1.0, 0.0), -5.0)], 100.0)
    with pytest.raises(ValueError):
        max_coverage_disk(np.ones((1, 2)), 5.0, empty)
    with pytest.raises(ValueError):
        max_coverage_disk(np.ones((1, 2)), 0.0, SQUARE)


def test_candidates_lie_in_region():
    rng = np.random.default_rng(0)
    users = rng.uniform(0, 100, size=(10, 2))
    region = intersect_halfplanes([HalfPlane.from_coeffs(1, 1, 120)], 100.0)
    cand = candidate_centers(users, 20.0, region)
    assert len(cand) and np.all(region.contains(cand))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_not_beaten_by_random_centers(seed):
    rng = np.random.default_rng(seed)
    users = rng.uniform(0, 100, size=(rng.integers(1, 12), 2))
    r = float(rng.uniform(5, 40))
    sol = max_coverage_disk(users, r, SQUARE)
    probes = rng.uniform(0, 100, size=(3000, 2))
    d = np.hypot(probes[:, None, 0] - users[None, :, 0], probes[:, None, 1] - users[None, :, 1])
    assert sol.count >= int((d <= r).sum(axis=1).max())


def test_deterministic():
    rng = np.random.default_rng(5)
    users = rng.uniform(0, 100, size=(12, 2))
    a = max_coverage_disk(users, 20.0, SQUARE)
    b = max_coverage_disk(users, 20.0, SQUARE)
    assert a.center == b.center and np.array_equal(a.covered, b.covered)


def test_gr_regions_mid_square():
    regions = gr_candidate_regions([(1500.0, 1500.0)], 707.0, 3000.0)
    assert len(regions) == 4
    assert len(eliminate_regions(regions)) == 4
    # Prior in a corner: only two relaxed halfplanes meet the square.
    corner = eliminate_regions(gr_candidate_regions([(100.0, 100.0)], 707.0, 3000.0))
    assert len(corner) == 2


def test_incremental_enumeration_matches_full():
    rng = np.random.default_rng(3)
    for _ in range(20):
        prior = rng.uniform(0, 3000, size=(int(rng.integers(1, 4)), 2))
        full = [r for r in gr_candidate_regions(prior, 500.0, 3000.0) if not r.is_empty]
        inc = iter_gr_regions(prior, 500.0, 3000.0)
        assert len(full) == len(inc)
        for a, b in zip(full, inc):
            assert np.allclose(a.vertices, b.vertices)


def test_elimination_keeps_first_of_equals():
    a = intersect_halfplanes([HalfPlane((1.0, 0.0), 50.0)], 100.0)
    b = intersect_halfplanes([HalfPlane((1.0, 0.0), 50.0)], 100.0)
    c = intersect_halfplanes([HalfPlane((1.0, 0.0), 20.0)], 100.0)
    kept = eliminate_regions([a, b, c])
    assert len(kept) == 1 and kept[0] is a
