import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aerialbs.channel import (
    EnvParams, altitude_for_radius, coverage_radius, dbm_to_mw, los_probability,
    mw_to_dbm, path_loss, path_loss_angle, radius_path_loss, total_power, transmit_power,
)

ENV = EnvParams()


def _oracle_radius(gamma, env):
    # Independent restatement: solve PL(theta_opt, r) = gamma by bisection on r.
    lo, hi = 1e-3, 1e6
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        if path_loss_angle(env.theta_opt, mid, env) < gamma:
            lo = mid
        else:
            hi = mid
    return lo


@pytest.mark.parametrize("fc", [2.0e9, 2.5e9, 5.8e9])
def test_radius_matches_root_finding_oracle(fc):
    env = EnvParams(f_c=fc)
    assert coverage_radius(100.0, env) == pytest.approx(_oracle_radius(100.0, env), rel=1e-9)


def test_known_values():
    assert coverage_radius(100, EnvParams(f_c=2.0e9)) == pytest.approx(707.04, abs=0.01)
    assert coverage_radius(100, ENV) == pytest.approx(565.63, abs=0.01)
    assert los_probability(math.radians(42.44), ENV) == pytest.approx(0.95212, abs=1e-5)
    assert altitude_for_radius(707.0, ENV) == pytest.approx(707.0 * math.tan(math.radians(42.44)))


def test_path_loss_forms_agree():
    r = np.array([10.0, 300.0, 900.0])
    h = np.array([50.0, 400.0, 200.0])
    theta = np.arctan(h / r)
    assert np.allclose(path_loss(h, r, ENV), path_loss_angle(theta, r, ENV))


def test_directly_below_uses_vertical_angle():
    pl0 = path_loss(100.0, 0.0, ENV)
    expected = ENV.A * los_probability(math.pi / 2, ENV) + 20 * math.log10(100.0) + ENV.B
    assert pl0 == pytest.approx(expected)


def test_edge_of_radius_is_threshold():
    R = coverage_radius(ENV.pl_threshold, ENV)
    h = altitude_for_radius(R, ENV)
    assert path_loss(h, R, ENV) == pytest.approx(ENV.pl_threshold, abs=1e-9)
    assert transmit_power(R, ENV) == pytest.approx(ENV.pl_threshold + ENV.p_min)


def test_domain_errors():
    with pytest.raises(ValueError):
        los_probability(0.0, ENV)
    with pytest.raises(ValueError):
        path_loss(-1.0, 10.0, ENV)
    with pytest.raises(ValueError):
        transmit_power(0.0, ENV)
    with pytest.raises(ValueError):
        EnvParams.from_dict({"fc_hz": 2e9, "bogus": 1})


def test_env_round_trip():
    env = EnvParams(f_c=2.0e9, eta_nlos=23.0)
    assert EnvParams.from_dict(env.to_dict()) == env


def test_total_power_sums_in_milliwatts():
    mw, dbm = total_power([30.0, 30.0])
    assert mw == pytest.approx(2000.0)
    assert dbm == pytest.approx(30.0 + 10 * math.log10(2))
    assert total_power([]) == (0.0, -math.inf)


@given(st.floats(1.0, 5000.0), st.floats(1.0, 5000.0))
def test_power_monotone_in_radius(r1, r2):
    lo, hi = sorted((r1, r2))
    assert transmit_power(lo, ENV) <= transmit_power(hi, ENV) + 1e-12
    assert radius_path_loss(lo, ENV) <= radius_path_loss(hi, ENV) + 1e-12


@given(st.floats(-60.0, 60.0))
def test_dbm_round_trip(p):
    assert mw_to_dbm(dbm_to_mw(p)) == pytest.approx(p, abs=1e-9)


@given(st.floats(0.01, math.pi / 2))
def test_los_probability_in_unit_interval(theta):
    assert 0.0 < los_probability(theta, ENV) < 1.0
