import math

import numpy as np
import pytest

from seasirs.core import switch_times
from seasirs.dynamics import (
    FlowSettings,
    advance,
    advance_constant,
    find_equilibria,
    iterate_period_map,
    period_map,
    r0_threshold,
    solve,
    solve_constant,
    solve_linear_auxiliary,
)
from seasirs.exceptions import DomainError, ValidationError
from seasirs.models import Season, State

from .common import p_star, random_params_list

E0 = State(100.0, 0.0, 0.0)


@pytest.mark.parametrize(
    "flow_settings",
    [
        FlowSettings(abs_tol=0.0),
        FlowSettings(rel_tol=0.1),
        FlowSettings(max_step=-1.0),
        FlowSettings(max_step=0.6),
        FlowSettings(method="Euler"),
    ],
)
def test_flow_settings_rejected(flow_settings):
    with pytest.raises(ValidationError):
        flow_settings.validate(p_star(theta=0.5, omega=1.0))


def test_flow_settings_defaults():
    params = p_star(theta=0.25, omega=4.0)
    assert FlowSettings().resolve_max_step(params) == 0.08
    assert FlowSettings(max_step=0.5).resolve_max_step(params) == 0.5
    assert FlowSettings().coarsened(1e-6).abs_tol == 1e-6
    assert FlowSettings.from_dict(FlowSettings(max_step=0.5).to_dict()) == FlowSettings(
        max_step=0.5
    )


def test_solve_disease_free_is_constant():
    trajectory = solve(p_star(beta2=0.006), E0, 5.0)
    assert np.all(trajectory.states == E0.as_array())


def test_solve_records_switch_times():
    params = p_star(beta1=0.002, beta2=0.006, theta=0.25, omega=4.0)
    trajectory = solve(params, (90.0, 5.0, 5.0), 20.0)
    times = list(trajectory.times)
    for t in switch_times(params, 20.0):
        assert t in times
    assert trajectory.times[0] == 0.0
    assert trajectory.times[-1] == 20.0
    assert np.all(np.diff(trajectory.times) > 0)
    # a sample at a switch belongs to the season it opens
    assert trajectory.seasons[times.index(3.0)].which == Season.HIGH
    assert trajectory.seasons[times.index(4.0)].which == Season.LOW


def test_solve_stride_grid():
    params = p_star(beta2=0.006, theta=0.5, omega=1.0)
    trajectory = solve(params, (90.0, 5.0, 5.0), 3.0, stride=0.125)
    assert len(trajectory) == 25
    assert np.all(np.diff(trajectory.times) == 0.125)
    assert trajectory.meta["stride"] == 0.125


@pytest.mark.parametrize(
    "p0,t_end,stride,error",
    [
        ((101.0, 0.0, 0.0), 1.0, None, DomainError),
        ((-1.0, 0.0, 0.0), 1.0, None, DomainError),
        ((90.0, 5.0, 5.0), 0.0, None, ValidationError),
        ((90.0, 5.0, 5.0), 1.0, 0.0, ValidationError),
    ],
)
def test_solve_rejects(p0, t_end, stride, error):
    with pytest.raises(error):
        solve(p_star(), p0, t_end, stride=stride)


def test_solve_autonomous_matches_single_season():
    params = p_star(theta=0.3, omega=2.0)
    t_end = 10 * params.omega
    composed = solve(params, (90.0, 5.0, 5.0), t_end).final_state
    single = solve_constant(params, (90.0, 5.0, 5.0), t_end, params.beta).final_state
    assert composed.distance(single) <= 1e-8 * params.N


def test_solve_converges_to_endemic_equilibrium():
    params = p_star(beta1=0.004, theta=0.5, omega=10.0)
    endemic = find_equilibria(params)[1].state
    assert endemic.S == pytest.approx(60.219, abs=1e-3)
    trajectory = solve(params, (90.0, 5.0, 5.0), 2000.0, stride=params.omega)
    assert trajectory.final_state.distance(endemic) <= 1e-4


def test_states_stay_in_domain():
    for params in random_params_list(seed=1, count=5):
        rng = np.random.default_rng(0)
        cuts = np.sort(rng.random(3))
        p0 = params.N * np.diff(cuts, prepend=0.0)
        states = solve(params, p0, 20 * params.omega).states
        tol = 1e-8 * params.N
        assert states.min() >= -tol
        assert states.sum(axis=1).max() <= params.N + tol


def test_refinement_changes_little():
    params = p_star(beta1=0.002, beta2=0.006, theta=0.5, omega=1.0)
    t_end = 10 * params.omega
    coarse = advance(params, (90.0, 5.0, 5.0), t_end, FlowSettings(max_step=0.02))
    fine = advance(params, (90.0, 5.0, 5.0), t_end, FlowSettings(max_step=0.01))
    assert coarse.distance(fine) <= 1e-8 * params.N


def test_advance_matches_solve():
    params = p_star(beta2=0.006)
    assert advance(params, (90.0, 5.0, 5.0), 3.5).distance(
        solve(params, (90.0, 5.0, 5.0), 3.5).final_state
    ) <= 1e-9 * params.N


def test_period_map_fixes_disease_free_state():
    assert period_map(p_star(beta2=0.006), E0).distance(E0) <= 1e-10


def test_period_map_autonomous():
    params = p_star(theta=0.5, omega=3.0)
    mapped = period_map(params, (90.0, 5.0, 5.0))
    flowed = advance_constant(params, (90.0, 5.0, 5.0), params.omega, params.beta)
    assert mapped.distance(flowed) <= 1e-9 * params.N


def test_period_map_composition():
    params = p_star(beta2=0.006, omega=2.0)
    twice = period_map(params, period_map(params, (90.0, 5.0, 5.0)))
    direct = solve(params, (90.0, 5.0, 5.0), 2 * params.omega).final_state
    assert twice.distance(direct) <= 1e-9 * params.N


def test_iterate_period_map_matches_solve():
    params = p_star(beta2=0.006)
    orbit = iterate_period_map(params, (90.0, 5.0, 5.0), 5)
    assert len(orbit) == 5
    direct = solve(params, (90.0, 5.0, 5.0), 5 * params.omega).final_state
    assert orbit[-1].distance(direct) <= 1e-8 * params.N


def test_iterate_period_map_disease_free():
    orbit = iterate_period_map(p_star(), E0, 3)
    assert all(state.distance(E0) <= 1e-10 for state in orbit)
    with pytest.raises(ValidationError):
        iterate_period_map(p_star(), E0, 0)


def test_iterate_period_map_subcritical_decay():
    params = p_star(beta1=0.001, beta2=0.003, theta=0.5, omega=10.0)
    rho, _ = r0_threshold(params)
    assert rho < 1
    k = int(math.ceil(math.log(1e-9 / params.N) / math.log(rho)))
    orbit = iterate_period_map(params, (90.0, 5.0, 5.0), k)
    assert orbit[-1].distance(E0) <= 1e-6


def test_iterate_period_map_supercritical_persists():
    params = p_star(beta1=0.004, beta2=0.006, theta=0.5, omega=10.0)
    orbit = iterate_period_map(params, (99.0, 0.5, 0.5), 40)
    lows = [min(state.I_a, state.I_s) for state in orbit[10:]]
    assert min(lows) > 1e-3


def test_linear_auxiliary_dominates():
    params = p_star(beta2=0.006)
    stride = params.omega / 20
    t_end = 10 * params.omega
    p0 = State(50.0, 10.0, 5.0)
    nonlinear = solve(params, p0, t_end, stride=stride)
    linear = solve_linear_auxiliary(params, (p0.I_a, p0.I_s), t_end, stride=stride)
    assert linear.columns == ("I_a", "I_s")
    assert np.array_equal(nonlinear.times, linear.times)
    tol = 1e-9 * params.N
    assert np.all(nonlinear.column("I_a") <= linear.column("I_a") + tol)
    assert np.all(nonlinear.column("I_s") <= linear.column("I_s") + tol)


def test_linear_auxiliary_rejects_negative():
    with pytest.raises(ValidationError):
        solve_linear_auxiliary(p_star(), (-1.0, 0.0), 1.0)


def test_trajectory_helpers():
    params = p_star(beta2=0.006)
    trajectory = solve(params, (50.0, 10.0, 5.0), 2.0, stride=0.5)
    rows = trajectory.to_rows(params.N)
    assert rows[0] == (0.0, 50.0, 10.0, 5.0, 35.0, "low")
    assert rows[1][-1] == "high"
    for t, S, I_a, I_s, R, _ in rows:
        assert S + I_a + I_s + R == pytest.approx(params.N)
    assert len(trajectory.window(1.0)) == 3
    assert trajectory.at(0.0).tolist() == [50.0, 10.0, 5.0]
    with pytest.raises(ValidationError):
        trajectory.at(0.25)
    t, state, label = trajectory.samples[0]
    assert isinstance(state, State)
    assert trajectory.to_dict()["seasons"][:2] == ["low", "high"]
