"""Stepping wrappers and kernel backends.

The compiled extension and the NumPy fallback must agree bitwise: both
orderings follow the same interface-flux arithmetic, and -ffp-contract=off
keeps the compiled path from fusing it differently.
"""

import numpy as np
import pytest

from charax._kernels import _numpy as np_impl
from charax.errors import CFLError, ConfigError
from charax.grids import Grid1D, GridFunction, TorusGrid2D, integrate
from charax.stepping import (advect_diffuse_step, conservative_step_2d,
                             flux_diffuse_step, flux_diffuse_step_2d,
                             stable_dt, stable_dt_2d)

try:
    from charax._kernels import _compiled as c_impl
except ImportError:
    c_impl = None

needs_compiled = pytest.mark.skipif(c_impl is None,
                                    reason="compiled backend not built")


def _fields_1d(n=128, seed=3):
    rng = np.random.default_rng(seed)
    q = rng.uniform(0.2, 1.0, n)
    s = rng.uniform(-1.0, 1.0, n)
    return np.ascontiguousarray(q), np.ascontiguousarray(s)


@needs_compiled
@pytest.mark.parametrize("weight", [0.0, 0.3, 1.0])
def test_backends_bitwise_equal_conservative_1d(weight):
    q, s = _fields_1d()
    eps, dx = 2e-2, 1.0 / 128
    dt = 0.4 * dx * dx / (2 * eps)
    a = np_impl.step_conservative_1d(q, s, eps, dt, dx, True, 0.0, 0.0, weight)
    b = c_impl.step_conservative_1d(q, s, eps, dt, dx, True, 0.0, 0.0, weight)
    assert np.array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("periodic", [True, False])
def test_backends_bitwise_equal_advective_1d(periodic):
    q, s = _fields_1d(seed=5)
    eps, dx = 1e-2, 1.0 / 128
    dt = 0.3 * dx * dx / (2 * eps)
    a = np_impl.step_advective_1d(q, s, eps, dt, dx, periodic, 0.25,
                                  q[0], q[-1])
    b = c_impl.step_advective_1d(q, s, eps, dt, dx, periodic, 0.25,
                                 q[0], q[-1])
    assert np.array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("weight", [0.0, 0.3, 1.0])
def test_backends_bitwise_equal_flux_form_1d(weight):
    q, s = _fields_1d(seed=7)
    fq = 0.5 * q * q
    eps, dx = 2e-2, 1.0 / 128
    dt = 0.4 * dx * dx / (2 * eps)
    a = np_impl.step_flux_form_1d(q, fq, s, eps, dt, dx, True,
                                  0.0, 0.0, 0.0, 0.0, weight)
    b = c_impl.step_flux_form_1d(q, fq, s, eps, dt, dx, True,
                                 0.0, 0.0, 0.0, 0.0, weight)
    assert np.array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("weight", [0.0, 1.0])
def test_backends_bitwise_equal_2d(weight):
    rng = np.random.default_rng(11)
    n = 32
    q = np.ascontiguousarray(rng.uniform(0.1, 1.0, (n, n)))
    s1 = np.ascontiguousarray(rng.uniform(-0.5, 0.5, (n, n)))
    s2 = np.ascontiguousarray(rng.uniform(-0.5, 0.5, (n, n)))
    fq = np.ascontiguousarray(0.5 * q * q)
    eps, dx = 2e-2, 1.0 / n
    dt = 0.2 * dx * dx / (4 * eps)
    a = np_impl.step_flux_form_2d(q, fq, fq, s1, s2, eps, dt, dx, dx, weight)
    b = c_impl.step_flux_form_2d(q, fq, fq, s1, s2, eps, dt, dx, dx, weight)
    assert np.array_equal(a, b)
    a = np_impl.step_conservative_2d(q, s1, s2, eps, dt, dx, dx, weight)
    b = c_impl.step_conservative_2d(q, s1, s2, eps, dt, dx, dx, weight)
    assert np.array_equal(a, b)


def test_stable_dt_formula_and_validation():
    grid = Grid1D(n=100)
    dx = 0.01
    assert stable_dt(grid, 2.0, 1e-3, safety=1.0) == pytest.approx(
        min(dx / 2.0, dx * dx / 2e-3))
    assert stable_dt(grid, 0.0, 1e-3, safety=1.0) == pytest.approx(
        dx * dx / 2e-3)
    with pytest.raises(ConfigError):
        stable_dt(grid, -1.0, 1e-3)
    with pytest.raises(ConfigError):
        stable_dt(grid, 1.0, 0.0)
    with pytest.raises(ConfigError):
        stable_dt(grid, 1.0, 1e-3, safety=0.0)


def test_cfl_violation_raises():
    grid = Grid1D(n=64)
    q = GridFunction(grid, np.zeros(64))
    s = GridFunction.constant(grid, 1.0)
    dt = 2.0 * stable_dt(grid, 1.0, 1e-3, safety=1.0)
    with pytest.raises(CFLError):
        advect_diffuse_step(q, s, 1e-3, dt)


def test_unstable_dt_actually_blows_up_without_the_guard():
    # Von Neumann witness: the guard protects against real instability.
    # Step the raw kernel at 4x the diffusive bound; the sawtooth mode
    # amplifies instead of decaying.
    n = 64
    sawtooth = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    q = np.ascontiguousarray(0.5 + 1e-3 * sawtooth)
    s = np.zeros(n)
    eps, dx = 1e-2, 1.0 / n
    dt = 4.0 * dx * dx / (2 * eps)
    for _ in range(10):
        q = np_impl.step_advective_1d(q, s, eps, dt, dx, True, 0.0, 0.0, 0.0)
    assert np.max(np.abs(q - 0.5)) > 1.0


def test_pure_diffusion_matches_discrete_fourier_factor():
    # speed = 0 reduces every form to explicit central diffusion, whose
    # exact action on the k=1 mode is multiplication by the symbol
    # g = 1 - (2 eps dt / dx^2) (1 - cos(2 pi dx)) each step.
    grid = Grid1D(n=64)
    x = grid.nodes()
    eps = 5e-3
    dt = stable_dt(grid, 0.0, eps, safety=0.8)
    g = 1.0 - (2.0 * eps * dt / grid.dx ** 2) * (1 - np.cos(2 * np.pi * grid.dx))
    q = GridFunction(grid, np.sin(2 * np.pi * x))
    zero = GridFunction.constant(grid, 0.0)
    for _ in range(50):
        q = advect_diffuse_step(q, zero, eps, dt)
    np.testing.assert_allclose(q.values, g ** 50 * np.sin(2 * np.pi * x),
                               rtol=0, atol=1e-12)


def test_flux_form_conserves_mass_periodic():
    grid = Grid1D(n=128)
    rng = np.random.default_rng(13)
    q = GridFunction(grid, rng.uniform(-1.0, 1.0, 128))
    fq = GridFunction(grid, 0.5 * q.values ** 2)
    s = GridFunction(grid, q.values.copy())
    eps = 5e-3
    dt = stable_dt(grid, 1.0, eps)
    before = integrate(q)
    out = flux_diffuse_step(q, fq, s, eps, dt)
    assert integrate(out) == pytest.approx(before, abs=1e-12)


def test_conservative_form_preserves_positivity():
    grid = Grid1D(n=128)
    rng = np.random.default_rng(17)
    q = GridFunction(grid, rng.uniform(0.05, 1.0, 128))
    s = GridFunction(grid, rng.uniform(-1.0, 1.0, 128))
    eps = 5e-3
    dt = stable_dt(grid, 1.0, eps)
    out = advect_diffuse_step(q, s, eps, dt, form="conservative")
    assert np.min(out.values) > 0.0


def test_constant_state_is_fixed_point_on_line_grid():
    grid = Grid1D(n=64, topology="line")
    q = GridFunction.constant(grid, 0.75)
    s = GridFunction.constant(grid, -0.6)
    eps = 5e-3
    dt = stable_dt(grid, 0.6, eps)
    out = advect_diffuse_step(q, s, eps, dt)
    assert np.array_equal(out.values, q.values)
    fq = GridFunction.constant(grid, 0.5 * 0.75 ** 2)
    out = flux_diffuse_step(q, fq, s, eps, dt)
    assert np.array_equal(out.values, q.values)


def test_peclet_guard_rejects_centred_flux_on_coarse_grid():
    grid = Grid1D(n=32)
    q, s = (GridFunction.constant(grid, 0.5),
            GridFunction.constant(grid, 1.0))
    eps = 1e-3  # Peclet = 1 * dx / (2 eps) ~ 15.6
    dt = stable_dt(grid, 1.0, eps)
    with pytest.raises(CFLError):
        advect_diffuse_step(q, s, eps, dt, form="conservative",
                            upwind_weight=0.0)


def test_form_and_weight_validation():
    grid = Grid1D(n=32)
    q = GridFunction.constant(grid, 1.0)
    s = GridFunction.constant(grid, 0.5)
    dt = stable_dt(grid, 0.5, 1e-2)
    with pytest.raises(ConfigError):
        advect_diffuse_step(q, s, 1e-2, dt, form="upstream")
    with pytest.raises(ConfigError):
        advect_diffuse_step(q, s, 1e-2, dt, upwind_weight=0.5)
    with pytest.raises(ConfigError):
        advect_diffuse_step(q, s, 1e-2, dt, form="conservative",
                            seam_jump=1.0)
    with pytest.raises(ConfigError):
        advect_diffuse_step(q, s, 1e-2, dt, form="conservative",
                            upwind_weight=1.5)


def test_2d_steps_preserve_constant_and_mass():
    grid = TorusGrid2D(n1=16, n2=16)
    rng = np.random.default_rng(19)
    dt = stable_dt_2d(grid, 1.0, 1.0, 1e-2)
    c = GridFunction.constant(grid, 0.3)
    s1 = GridFunction(grid, rng.uniform(-1, 1, (16, 16)))
    s2 = GridFunction(grid, rng.uniform(-1, 1, (16, 16)))
    fc = GridFunction.constant(grid, 0.5 * 0.3 ** 2)
    out = flux_diffuse_step_2d(c, fc, fc, s1, s2, 1e-2, dt)
    assert np.array_equal(out.values, c.values)

    q = GridFunction(grid, rng.uniform(0.5, 1.5, (16, 16)))
    out = conservative_step_2d(q, s1, s2, 1e-2, dt)
    assert integrate(out) == pytest.approx(integrate(q), abs=1e-13)
