"""Grid containers, derivative stencils, and integration."""

import numpy as np
import pytest

from charax.errors import GridError
from charax.grids import (Grid1D, GridFunction, TorusGrid2D, ddx, ddx_axis,
                          integrate)


def test_grid1d_nodes_are_cell_centers():
    grid = Grid1D(n=8)
    assert grid.dx == pytest.approx(0.125)
    assert grid.length == pytest.approx(1.0)
    np.testing.assert_allclose(grid.nodes(),
                               (np.arange(8) + 0.5) / 8.0)


def test_grid1d_rejects_tiny_grids():
    with pytest.raises(GridError):
        Grid1D(n=4)


def test_grid1d_line_topology_flag():
    assert Grid1D(n=16).periodic
    assert not Grid1D(n=16, topology="line").periodic


def test_grid1d_custom_interval():
    grid = Grid1D(n=10, x_min=-1.0, x_max=1.0)
    assert grid.length == pytest.approx(2.0)
    assert grid.dx == pytest.approx(0.2)
    assert grid.nodes()[0] == pytest.approx(-0.9)


def test_gridfunction_shape_validation():
    grid = Grid1D(n=16)
    with pytest.raises(GridError):
        GridFunction(grid, np.zeros(15))


def test_gridfunction_constant():
    f = GridFunction.constant(Grid1D(n=16), 2.5)
    assert np.all(f.values == 2.5)


def test_ddx_exact_for_linear_periodic_with_seam():
    # x itself is periodic only up to a jump of length at the seam; with the
    # seam jump declared, the central difference of x is exactly 1.
    grid = Grid1D(n=32)
    f = GridFunction(grid, grid.nodes().copy())
    d = ddx(f, seam_jump=grid.length)
    np.testing.assert_allclose(d.values, 1.0, rtol=0, atol=1e-12)


def test_ddx_spectral_accuracy_on_sine():
    grid = Grid1D(n=256)
    x = grid.nodes()
    f = GridFunction(grid, np.sin(2 * np.pi * x))
    d = ddx(f)
    exact = 2 * np.pi * np.cos(2 * np.pi * x)
    # Central differences are second order: error ~ (2 pi dx)^2 / 6 * |f'''|.
    assert np.max(np.abs(d.values - exact)) < 2 * np.pi * (2 * np.pi / 256) ** 2


def test_integrate_1d_mean_times_length():
    grid = Grid1D(n=64)
    f = GridFunction(grid, np.full(64, 3.0))
    assert integrate(f) == pytest.approx(3.0)
    g = GridFunction(grid, np.sin(2 * np.pi * grid.nodes()))
    assert integrate(g) == pytest.approx(0.0, abs=1e-14)


def test_torus_grid_and_axis_derivative():
    grid = TorusGrid2D(n1=32, n2=16)
    x1, x2 = grid.meshgrid()
    f = GridFunction(grid, np.sin(2 * np.pi * x1))
    d0 = ddx_axis(f, axis=0)
    exact = 2 * np.pi * np.cos(2 * np.pi * x1)
    assert np.max(np.abs(d0.values - exact)) < 0.1
    d1 = ddx_axis(f, axis=1)
    np.testing.assert_allclose(d1.values, 0.0, atol=1e-14)


def test_integrate_torus_is_mean():
    grid = TorusGrid2D(n1=16, n2=16)
    f = GridFunction(grid, np.full((16, 16), 0.25))
    assert integrate(f) == pytest.approx(0.25)
