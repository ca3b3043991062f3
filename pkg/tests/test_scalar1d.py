"""Coupled (u, alpha, Theta) evolution for scalar 1D laws.

Pinned values were produced by this code at the stated configurations and
cross-checked against the exact references where one exists; they guard
against silent numerical drift.
"""

import math

import numpy as np
import pytest

from charax import scalar1d
from charax.errors import ConfigError, SolverAbort
from charax.grids import Grid1D, GridFunction, integrate
from charax.problems import burgers_dflux, burgers_flux, sine_u0
from charax.stepping import stable_dt


def sine_problem(n=512, eps=4e-3):
    return scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, sine_u0,
                                    Grid1D(n=n), eps)


def run_to(problem, t_end, upwind_weight=1.0):
    state = scalar1d.init_state(problem)
    dt0 = stable_dt(problem.grid, problem.speed_bound(-1.0, 1.0),
                    problem.eps, 0.4)
    steps = max(1, math.ceil(t_end / dt0 - 1e-12))
    dt = t_end / steps
    for _ in range(steps):
        state = scalar1d.advance(state, problem, dt,
                                 upwind_weight=upwind_weight)
    return state


def test_problem_validates_flux_derivative_pair():
    with pytest.raises(ConfigError):
        scalar1d.ScalarProblem1D(burgers_flux, lambda u: 2.0 * np.asarray(u),
                                 sine_u0, Grid1D(n=64), 1e-3)
    with pytest.raises(ConfigError):
        scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, sine_u0,
                                 Grid1D(n=64), 0.0)


def test_initial_state_fields():
    problem = sine_problem(n=64)
    state = scalar1d.init_state(problem)
    grid = problem.grid
    np.testing.assert_array_equal(state.u.values, sine_u0(grid.nodes()))
    np.testing.assert_array_equal(state.alpha.values, grid.nodes())
    assert np.all(state.theta.values == 1.0)
    assert state.t == 0.0


def test_state_rejects_nonpositive_theta_and_flat_alpha():
    grid = Grid1D(n=16)
    x = grid.nodes()
    ones = GridFunction.constant(grid, 1.0)
    with pytest.raises(SolverAbort):
        scalar1d.CoupledState1D(0.0, ones, GridFunction(grid, x),
                                GridFunction(grid, np.full(16, -0.5)))
    with pytest.raises(SolverAbort):
        scalar1d.CoupledState1D(0.0, ones,
                                GridFunction(grid, np.zeros(16)), ones)


def test_max_principle_and_theta_mass_over_run():
    problem = sine_problem()
    state = scalar1d.init_state(problem)
    dt = stable_dt(problem.grid, 1.0, problem.eps, 0.4)
    sup0 = float(np.max(np.abs(state.u.values)))
    for _ in range(200):
        state = scalar1d.advance(state, problem, dt)
        assert float(np.max(np.abs(state.u.values))) <= sup0 + 1e-8
        assert float(np.min(state.theta.values)) > 0.0
    # Theta's conservative form keeps its integral at length exactly.
    assert integrate(state.theta) == pytest.approx(1.0, abs=1e-12)
    assert integrate(state.u) == pytest.approx(0.0, abs=1e-12)


def test_alpha_envelope_holds_past_breaking():
    problem = sine_problem()
    state = run_to(problem, 0.3)
    report = scalar1d.check_alpha_bounds(state, problem)
    assert report.passed
    # The speed envelope is built over |u| <= max|u0| sampled on the grid,
    # and linspace endpoints are exact, so for f' = u the slopes equal the
    # discrete sup of the data (0.99998... at n=512, not 1.0) bitwise.
    m = problem.u0_inf_norm()
    assert report.m1 == -m
    assert report.m2 == m
    assert m == pytest.approx(1.0, abs=2e-5)


def test_consistency_of_alpha_x_and_theta_before_breaking():
    # alpha_x and Theta are evolved by different discrete operators; while
    # the solution is smooth the central difference of alpha tracks Theta.
    problem = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, sine_u0,
                                       Grid1D(n=1024), 2e-3)
    state = run_to(problem, 0.1)
    assert scalar1d.consistency_error(state) < 2e-4


@pytest.mark.xfail(strict=True,
                   reason="inside the viscous layer the centred difference "
                          "of alpha no longer resolves Theta; the fields "
                          "individually stay valid but their pointwise "
                          "agreement is lost after breaking")
def test_consistency_after_breaking_keeps_smooth_tolerance():
    problem = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, sine_u0,
                                       Grid1D(n=1024), 2e-3)
    state = run_to(problem, 0.4)
    assert scalar1d.consistency_error(state) < 2e-4


def test_initial_transformed_norms_match_calculus():
    # At t=0: U_alpha = u0' up to the central-difference sinc factor, so
    # |U_a|_L2 = 2 pi / sqrt(2) and the BV surrogate is |u0''|_L1 = 8 pi.
    problem = sine_problem(n=512)
    state = scalar1d.init_state(problem)
    assert scalar1d.transformed_lp_norm(state, 2) == pytest.approx(
        2 * math.pi / math.sqrt(2), rel=1e-4)
    assert scalar1d.transformed_lp_norm(state, math.inf) == pytest.approx(
        2 * math.pi, rel=1e-4)
    assert scalar1d.transformed_bv_of_deriv(state) == pytest.approx(
        8 * math.pi, rel=1e-4)
    with pytest.raises(ConfigError):
        scalar1d.transformed_lp_norm(state, 0.5)


def test_post_shock_pinned_values():
    # Burgers sine, n=1024, eps=4e-3, t=0.4 (well past breaking at 0.159):
    # transformed norms stay near their initial size while sup |u_x| has
    # grown by the 1/eps layer mechanism.
    problem = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, sine_u0,
                                       Grid1D(n=1024), 4e-3)
    state = run_to(problem, 0.4)
    assert float(np.max(np.abs(state.u.values))) == pytest.approx(
        0.79008298857, abs=1e-6)
    assert float(np.min(state.theta.values)) == pytest.approx(
        0.28658201813, abs=1e-6)
    assert scalar1d.transformed_lp_norm(state, 2) == pytest.approx(
        3.48431912128, abs=1e-6)
    assert scalar1d.transformed_bv_of_deriv(state) == pytest.approx(
        17.5981290441, abs=1e-5)
    from charax.grids import ddx
    ux = float(np.max(np.abs(ddx(state.u).values)))
    assert ux == pytest.approx(84.7327129322, abs=1e-4)
    assert problem.eps * ux > 0.3


def test_riemann_front_tracks_shock_speed():
    # uL=1, uR=0 from x=0.25: the viscous front's half-height point moves
    # at the Rankine-Hugoniot speed 1/2.
    grid = Grid1D(n=512, topology="line")

    def u0(x):
        return np.where(np.asarray(x) < 0.25, 1.0, 0.0)

    problem = scalar1d.ScalarProblem1D(burgers_flux, burgers_dflux, u0,
                                       grid, 4e-3)
    state = run_to(problem, 0.2)
    u = state.u.values
    x = grid.nodes()
    front = float(np.interp(0.5, u[::-1], x[::-1]))
    assert front == pytest.approx(0.25 + 0.5 * 0.2, abs=0.01)
    assert problem.far_field == (1.0, 0.0)


def test_reconstruct_profile_and_resample():
    problem = sine_problem()
    state = run_to(problem, 0.25)
    profile = scalar1d.reconstruct_profile(state)
    assert np.all(np.diff(profile.alphas) > 0.0)
    np.testing.assert_array_equal(profile.values, state.u.values)
    again = profile.resample(128)
    assert len(again.alphas) == 128
    assert np.min(again.values) >= np.min(profile.values) - 1e-12
    assert np.max(again.values) <= np.max(profile.values) + 1e-12


def test_transformed_norms_are_p_monotone_after_shock():
    problem = sine_problem()
    state = run_to(problem, 0.3)
    # On the length-1 alpha interval the L^p norms are nondecreasing in p.
    n1 = scalar1d.transformed_lp_norm(state, 1)
    n2 = scalar1d.transformed_lp_norm(state, 2)
    n4 = scalar1d.transformed_lp_norm(state, 4)
    ninf = scalar1d.transformed_lp_norm(state, math.inf)
    assert n1 <= n2 * (1 + 1e-12) <= n4 * (1 + 1e-12)
    assert n4 <= ninf * (1 + 1e-12)
