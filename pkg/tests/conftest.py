"""Shared fixtures: reference configurations and cached simulation runs."""

import math
import warnings

import pytest

import lookahead_guidance as lg

# Reference analysis configuration: V = 50 m/s, R_min = 100 m,
# look-ahead 50 -> 150 m over d_c = 30 m.
REF_LIMITS = lg.GuidanceLimits(V_u=50.0, R_min=100.0)
REF_CONST = lg.ConstantLookahead(L0=50.0)
REF_VAR = lg.VariableLookahead(L_min=50.0, L_max=150.0, d_c=30.0)


@pytest.fixture(scope="session")
def ref_limits():
    return REF_LIMITS


@pytest.fixture(scope="session")
def ref_profiles():
    return REF_CONST, REF_VAR


def _run_scenario(name):
    scenario = lg.preset_scenario(name)
    runs = {}
    for profile in scenario.profiles:
        label = "constant" if isinstance(profile, lg.ConstantLookahead) else "variable"
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            runs[label] = lg.run_simulation(
                scenario.path, profile, scenario.limits, scenario.init,
                scenario.sim,
            )
    return runs


@pytest.fixture(scope="session")
def line_runs():
    """Straight-line case study, one run per profile."""
    return _run_scenario("straight_line_table2")


@pytest.fixture(scope="session")
def ellipse_runs():
    """Elliptic case study, one run per profile."""
    return _run_scenario("ellipse_table2")


def _turnaround_run(profile):
    """Start on the path pointing exactly away from the virtual target."""
    path = lg.StraightLine(anchor=(0.0, 0.0), direction=(1.0, 0.0))
    init = lg.VehicleState(x=0.0, y=0.0, psi=math.pi)
    cfg = lg.SimConfig(t_f=20.0, dt=0.01)
    return lg.run_simulation(path, profile, REF_LIMITS, init, cfg)


@pytest.fixture(scope="session")
def turnaround_variable():
    return _turnaround_run(REF_VAR)


@pytest.fixture(scope="session")
def turnaround_constant():
    return _turnaround_run(REF_CONST)
