import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from aerialbs.channel import EnvParams, altitude_for_radius, coverage_radius
from aerialbs.planners import (
    PLANNERS, Deployment, PlannerConfig, PlannerError, cpt_count, kmeans_partition, plan,
    plan_cpt, plan_sd_km, plan_sd_kmvr, robust_margin, robustify,
)
from aerialbs.scenarios import ScenarioConfig, UserSet, generate_users

ENV = EnvParams(f_c=2.0e9)
R = coverage_radius(100.0, ENV)


def _users(process="pcp", side=3000.0, seed=1, **kw):
    return generate_users(ScenarioConfig(side_m=side, process=process, **kw), seed)


def test_cpt_grid():
    dep = plan_cpt(3000.0, R, ENV)
    assert dep.k_used == cpt_count(3000.0, R) == math.ceil(3000 / (2 * R)) ** 2
    assert dep.check(ENV) == []
    assert np.allclose(dep.radii(), R)


def test_kmeans_respects_separation_and_counts_runs():
    rng = np.random.default_rng(0)
    users = np.vstack([rng.normal((500, 500), 10, (20, 2)), rng.normal((520, 510), 10, (20, 2)),
                       rng.normal((2500, 2500), 10, (20, 2))])
    centers, assign, K, n_km, _ = kmeans_partition(users, 3, 300.0, seed=4)
    d = np.hypot(*(centers[:, None] - centers[None]).transpose(2, 0, 1))
    np.fill_diagonal(d, np.inf)
    assert K == 2 and n_km == 2 and d.min() >= 300.0
    assert len(np.unique(assign)) == 2


def test_kmeans_deterministic():
    u = _users("hpp", seed=9).true_positions
    a = kmeans_partition(u, 5, 100.0, 3)
    b = kmeans_partition(u, 5, 100.0, 3)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


@pytest.mark.parametrize("name", PLANNERS)
def test_every_planner_yields_valid_deployment(name):
    users = _users("pcp", uli_sigma_m=20.0 if name.startswith("robust") else 0.0)
    dep = plan(name, users, 3000.0, ENV, seed=5)
    assert dep.check(ENV, users.planning_positions) == []
    for s in dep.stations:
        assert s.altitude == pytest.approx(altitude_for_radius(s.radius, ENV))
    back = Deployment.from_dict(json.loads(dep.dumps()))
    assert back.dumps() == dep.dumps()


def test_kmvr_radii_within_bounds_and_cheaper():
    users = _users("pcp", seed=11)
    km = plan("sd-km", users, 3000.0, ENV, seed=2)
    vr = plan("sd-kmvr", users, 3000.0, ENV, seed=2)
    assert np.all(vr.radii() <= R + 1e-9)
    assert vr.total_power()[0] <= km.total_power()[0]
    assert vr.counters["n_it_vr"] >= 1


def test_kmvr_shrinks_to_enclosing_radius():
    # A tight cluster: the disk shrinks to r_min, never below.
    users = np.array([[1500.0, 1500.0], [1510.0, 1500.0], [1500.0, 1512.0]])
    dep = plan_sd_kmvr(users, R, 0.5 * R, 3000.0, 1, 0.0, 0, ENV)
    assert dep.stations[0].radius == pytest.approx(0.5 * R)
    # With a tiny r_min the radius follows the users' spread instead.
    dep = plan_sd_kmvr(users, R, 1.0, 3000.0, 1, 0.0, 0, ENV)
    assert dep.stations[0].radius < 20.0
    assert len(dep.stations[0].covered) == 3


def test_no_users():
    empty = UserSet(np.zeros((0, 2)))
    for name in PLANNERS:
        dep = plan(name, empty, 3000.0, ENV)
        assert dep.check(ENV) == []
        if name != "cpt":
            assert dep.k_used == 0


def test_robustify_requires_cells():
    with pytest.raises(PlannerError):
        robustify(plan_cpt(3000.0, R, ENV), np.zeros((0, 2)), 10.0, R, ENV)


def test_robust_margin_reaches_bound_when_room_allows():
    # A single small cluster in the middle: plenty of room, so the margin reaches d_th.
    users = np.array([[1500.0, 1500.0], [1540.0, 1500.0], [1520.0, 1530.0]])
    base = plan_sd_km(users, R, 3000.0, 1, 0.0, 0, ENV)
    small = plan_sd_kmvr(users, R, 1.0, 3000.0, 1, 0.0, 0, ENV)
    rob = robustify(small, users, 100.0, R, ENV)
    assert robust_margin(rob.stations[0], users) >= 100.0 - 1e-6
    assert rob.check(ENV, users) == []
    assert base.k_used == rob.k_used == 1


@given(st.integers(0, 2**32), st.sampled_from(["hpp", "ipp", "pcp"]),
       st.sampled_from(PLANNERS))
@settings(max_examples=30, deadline=None)
def test_invariants_property(seed, process, name):
    users = _users(process, side=2000.0, seed=seed, uli_sigma_m=25.0)
    dep = plan(name, users, 2000.0, ENV, PlannerConfig(k_max=4), seed)
    assert dep.check(ENV, users.planning_positions) == []
    assert dep.k_used <= max(4, cpt_count(2000.0, R))


def test_config_validation():
    with pytest.raises(ValueError):
        PlannerConfig(r_min_frac=0)
    with pytest.raises(ValueError):
        PlannerConfig.from_dict({"k": 3})
    with pytest.raises(ValueError):
        plan("greedy", UserSet(np.zeros((0, 2))), 3000.0, ENV)


def test_tight_cluster_terminates_in_two_iterations():
    users = np.array([[1500.0, 1500.0], [1510.0, 1500.0], [1500.0, 1512.0]])
    dep = plan_sd_kmvr(users, R, 0.5 * R, 3000.0, 1, 0.0, 0, ENV)
    assert dep.stations[0].iterations == 2


@pytest.mark.parametrize("process", ["pcp", "hpp"])
def test_kmvr_cell_coverage_not_below_km(process):
    from aerialbs.evaluation import trial_seed
    for t in range(25):
        seed = trial_seed(3, 0, t)
        users = _users(process, seed=seed)
        km = plan("sd-km", users, 3000.0, ENV, seed=seed)
        vr = plan("sd-kmvr", users, 3000.0, ENV, seed=seed)
        for a, b in zip(km.stations, vr.stations):
            assert len(b.covered) >= len(a.covered)
