"""Smoke tests for the mgridsim extension module.

The scenario file path arrives through the MGRID_SCENARIO environment
variable (set by CTest); the module itself comes from PYTHONPATH.
"""

import os

import numpy as np
import pytest

import mgridsim as mg

SCENARIO = os.environ["MGRID_SCENARIO"]


@pytest.fixture(scope="module")
def cfg():
    return mg.parse_config(SCENARIO)


def test_incidence_matrix_columns_sum_to_zero(cfg):
    B = mg.incidence_matrix(cfg.topology)
    assert B.shape == (4, 4)
    assert np.all(B.sum(axis=0) == 0.0)


def test_forced_equilibrium_residual(cfg):
    B = mg.incidence_matrix(cfg.topology)
    u = np.full(4, 230.0 / 380.0)
    eq = mg.forced_equilibrium(u, cfg.params, B)
    dI, dV = mg.dynamics(eq, u, cfg.params, B)
    # dV terms are ~1e6 A/s in magnitude, so ~1e-9 absolute is rounding noise.
    assert np.linalg.norm(dI) < 1e-6
    assert np.linalg.norm(dV) < 1e-6


def test_effective_bounds_and_strict_solve():
    bounds = mg.effective_current_bounds(229.0, 231.0, 0.95 / 16.7,
                                         1.05 / 16.7, 13.0, 14.5)
    assert bounds.lo == pytest.approx(13.026946107784431, abs=1e-12)
    assert bounds.hi == 14.5

    np_ = mg.NodeParams()
    np_.V_s = 380.0
    np_.G = 1.0 / 16.7
    np_.G_l = 0.95 * np_.G
    np_.G_h = 1.05 * np_.G
    np_.v_l, np_.v_h = 229.0, 231.0
    np_.I_l, np_.I_h = 13.0, 14.5
    np_.eta_l, np_.eta_h = 0.5, 0.4
    obs = mg.NodeObservation(I=13.5, V=230.0)
    interval = mg.constraint_interval(obs, np_, mg.ControllerMode.Joint)
    d = mg.solve_strict(interval)
    assert 0.0 < d.a <= 1.0
    assert d.a == pytest.approx(0.604641, abs=1e-5)

    with pytest.raises(mg.InfeasibleError):
        mg.solve_strict((0.9, 0.5))


def test_validate_assumptions(cfg):
    assert mg.validate_assumptions(cfg.params).all_pass()
    bad = cfg.params
    v_h = np.asarray(bad.v_h).copy()
    v_h[0] = 500.0
    bad.v_h = v_h
    assert not mg.validate_assumptions(bad).all_pass()


def test_short_run_scenario():
    cfg = mg.parse_config(SCENARIO)  # fresh copy; other tests mutate params
    cfg.scenario.duration = 0.002
    cfg.scenario.events = []
    result = mg.run_scenario(cfg.scenario, cfg.params, cfg.topology)
    assert len(result.trace) == 201
    u = np.array([rec.u for rec in result.trace])
    assert np.all(u >= 0.0) and np.all(u <= 1.0)
    assert len(result.report.nodes) == 4


def test_config_round_trip():
    cfg = mg.parse_config(SCENARIO)
    back = mg.parse_config_text(mg.write_config(cfg))
    assert back.scenario.dt == cfg.scenario.dt
    assert np.array_equal(back.params.G, cfg.params.G)
