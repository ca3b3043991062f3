"""Explicit advection-diffusion time stepping on grid functions.

Thin validated wrappers over the kernel backends: upwind advection (or
monotone flux-difference transport) plus central diffusion. Every step
enforces the joint CFL bound; callers pick dt via stable_dt.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import CFLError, ConfigError, GridError
from .grids import Grid1D, GridFunction, TorusGrid2D

# Slack on the hard CFL comparison so dt computed exactly at the bound passes.
_CFL_SLACK = 1.0 + 1e-12


def stable_dt(grid: Grid1D, max_speed: float, eps: float, safety: float = 0.4) -> float:
    """Largest stable explicit dt, scaled by the safety factor.

    Returns safety * min(dx / max_speed, dx^2 / (2 eps)); with max_speed = 0
    the advective bound is skipped.
    """
    if max_speed < 0.0:
        raise ConfigError(f"max_speed must be >= 0, got {max_speed}")
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    if not 0.0 < safety <= 1.0:
        raise ConfigError(f"safety must be in (0, 1], got {safety}")
    dx = grid.dx
    bound = dx * dx / (2.0 * eps)
    if max_speed > 0.0:
        bound = min(dx / max_speed, bound)
    return safety * bound


def stable_dt_2d(grid: TorusGrid2D, max_speed1: float, max_speed2: float,
                 eps: float, safety: float = 0.4) -> float:
    """2D analogue of stable_dt with per-axis advective bounds."""
    if max_speed1 < 0.0 or max_speed2 < 0.0:
        raise ConfigError("max speeds must be >= 0")
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    if not 0.0 < safety <= 1.0:
        raise ConfigError(f"safety must be in (0, 1], got {safety}")
    bound = 1.0 / (2.0 * eps * (1.0 / grid.dx1 ** 2 + 1.0 / grid.dx2 ** 2))
    if max_speed1 > 0.0:
        bound = min(bound, grid.dx1 / max_speed1)
    if max_speed2 > 0.0:
        bound = min(bound, grid.dx2 / max_speed2)
    return safety * bound


def _check_cfl_1d(dx: float, max_speed: float, eps: float, dt: float) -> None:
    bound = dx * dx / (2.0 * eps)
    if max_speed > 0.0:
        bound = min(dx / max_speed, bound)
    if dt > bound * _CFL_SLACK:
        raise CFLError(f"dt={dt:.3e} exceeds stability bound {bound:.3e} "
                       f"(max speed {max_speed:.3e}, eps {eps:.3e})")


def _check_cfl_2d(grid: TorusGrid2D, ms1: float, ms2: float, eps: float,
                  dt: float) -> None:
    bound = 1.0 / (2.0 * eps * (1.0 / grid.dx1 ** 2 + 1.0 / grid.dx2 ** 2))
    if ms1 > 0.0:
        bound = min(bound, grid.dx1 / ms1)
    if ms2 > 0.0:
        bound = min(bound, grid.dx2 / ms2)
    if dt > bound * _CFL_SLACK:
        raise CFLError(f"dt={dt:.3e} exceeds 2D stability bound {bound:.3e}")


def _require_same_1d_grid(*fs: GridFunction) -> Grid1D:
    grid = fs[0].grid
    if not isinstance(grid, Grid1D):
        raise GridError("expected fields on a 1D grid")
    for f in fs[1:]:
        if f.grid is not grid and f.grid != grid:
            raise GridError("fields live on different grids")
    return grid


def _check_upwind_weight(weight: float, max_speed: float, dx: float,
                         eps: float) -> None:
    """Reject weights outside [0, 1] and centred fluxes at cell Peclet > 1.

    With partial upwinding the scheme stays monotone only while
    (1 - weight) * |speed| dx / (2 eps) <= 1; full upwinding (weight 1) is
    monotone under the CFL bound alone.
    """
    if not 0.0 <= weight <= 1.0:
        raise ConfigError(f"upwind_weight must be in [0, 1], got {weight}")
    if weight == 1.0:
        return
    peclet = (1.0 - weight) * max_speed * dx / (2.0 * eps)
    if peclet > _CFL_SLACK:
        raise CFLError(
            f"cell Peclet number {peclet:.3f} exceeds 1 at upwind_weight="
            f"{weight}; the reduced-dissipation flux is not monotone here "
            f"(refine the grid or raise the weight)")


def advect_diffuse_step(q: GridFunction, speed: GridFunction, eps: float,
                        dt: float, form: str = "advective",
                        seam_jump: float = 0.0,
                        ghost_lo: float | None = None,
                        ghost_hi: float | None = None,
                        upwind_weight: float = 1.0) -> GridFunction:
    """One explicit step of q_t + speed q_x = eps q_xx ("advective") or
    q_t + (speed q)_x = eps q_xx ("conservative").

    seam_jump is the periodic-seam value jump for coordinate-like q. On line
    grids ghost_lo/ghost_hi are the far-field values (default: edge values).
    upwind_weight scales the conservative form's interface dissipation from
    fully upwinded (1) down to centred (0); weights below 1 require cell
    Peclet <= 1 and do not apply to the advective form.
    """
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    grid = _require_same_1d_grid(q, speed)
    sv = speed.values
    ms = float(np.max(np.abs(sv)))
    _check_cfl_1d(grid.dx, ms, eps, dt)
    gl = q.values[0] if ghost_lo is None else float(ghost_lo)
    gr = q.values[-1] if ghost_hi is None else float(ghost_hi)
    if form == "advective":
        if upwind_weight != 1.0:
            raise ConfigError("upwind_weight applies to the conservative form")
        out = _kernels.step_advective_1d(q.values, sv, eps, dt, grid.dx,
                                         periodic=grid.periodic,
                                         shift=seam_jump, gl=gl, gr=gr)
    elif form == "conservative":
        if seam_jump != 0.0:
            raise ConfigError("seam_jump only applies to the advective form")
        _check_upwind_weight(upwind_weight, ms, grid.dx, eps)
        out = _kernels.step_conservative_1d(q.values, sv, eps, dt, grid.dx,
                                            periodic=grid.periodic, gl=gl, gr=gr,
                                            upwind_weight=upwind_weight)
    else:
        raise ConfigError(f"unknown form {form!r}")
    return GridFunction(grid, out)


def flux_diffuse_step(q: GridFunction, flux_of_q: GridFunction,
                      speed: GridFunction, eps: float, dt: float,
                      ghost_lo: float | None = None,
                      ghost_hi: float | None = None,
                      flux_ghost_lo: float | None = None,
                      flux_ghost_hi: float | None = None,
                      upwind_weight: float = 1.0) -> GridFunction:
    """One explicit step of q_t + f(q)_x = eps q_xx in monotone flux form.

    flux_of_q holds f(q) at the nodes and speed holds f'(q); interface
    speeds come from divided flux differences (Rankine-Hugoniot), so the
    scheme conserves the integral of q exactly on periodic grids.
    """
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    grid = _require_same_1d_grid(q, flux_of_q, speed)
    sv = speed.values
    ms = float(np.max(np.abs(sv)))
    _check_cfl_1d(grid.dx, ms, eps, dt)
    _check_upwind_weight(upwind_weight, ms, grid.dx, eps)
    gl = q.values[0] if ghost_lo is None else float(ghost_lo)
    gr = q.values[-1] if ghost_hi is None else float(ghost_hi)
    fgl = flux_of_q.values[0] if flux_ghost_lo is None else float(flux_ghost_lo)
    fgr = flux_of_q.values[-1] if flux_ghost_hi is None else float(flux_ghost_hi)
    out = _kernels.step_flux_form_1d(q.values, flux_of_q.values, sv, eps, dt,
                                     grid.dx, periodic=grid.periodic,
                                     gl=gl, gr=gr, fgl=fgl, fgr=fgr,
                                     upwind_weight=upwind_weight)
    return GridFunction(grid, out)


def _check_upwind_weight_2d(weight: float, grid: TorusGrid2D, ms1: float,
                            ms2: float, eps: float) -> None:
    _check_upwind_weight(weight, ms1, grid.dx1, eps)
    _check_upwind_weight(weight, ms2, grid.dx2, eps)


def flux_diffuse_step_2d(q: GridFunction, flux1: GridFunction,
                         flux2: GridFunction, speed1: GridFunction,
                         speed2: GridFunction, eps: float, dt: float,
                         upwind_weight: float = 1.0) -> GridFunction:
    """One flux-form step of q_t + f1(q)_x1 + f2(q)_x2 = eps Lap(q) on the torus."""
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    grid = q.grid
    if not isinstance(grid, TorusGrid2D):
        raise GridError("expected fields on a torus grid")
    ms1 = float(np.max(np.abs(speed1.values)))
    ms2 = float(np.max(np.abs(speed2.values)))
    _check_cfl_2d(grid, ms1, ms2, eps, dt)
    _check_upwind_weight_2d(upwind_weight, grid, ms1, ms2, eps)
    out = _kernels.step_flux_form_2d(q.values, flux1.values, flux2.values,
                                     speed1.values, speed2.values, eps, dt,
                                     grid.dx1, grid.dx2,
                                     upwind_weight=upwind_weight)
    return GridFunction(grid, out)


def conservative_step_2d(q: GridFunction, speed1: GridFunction,
                         speed2: GridFunction, eps: float, dt: float,
                         upwind_weight: float = 1.0) -> GridFunction:
    """One step of q_t + div(speed q) = eps Lap(q) on the torus (positivity preserving)."""
    if eps <= 0.0:
        raise ConfigError(f"eps must be > 0, got {eps}")
    grid = q.grid
    if not isinstance(grid, TorusGrid2D):
        raise GridError("expected fields on a torus grid")
    ms1 = float(np.max(np.abs(speed1.values)))
    ms2 = float(np.max(np.abs(speed2.values)))
    _check_cfl_2d(grid, ms1, ms2, eps, dt)
    _check_upwind_weight_2d(upwind_weight, grid, ms1, ms2, eps)
    out = _kernels.step_conservative_2d(q.values, speed1.values, speed2.values,
                                        eps, dt, grid.dx1, grid.dx2,
                                        upwind_weight=upwind_weight)
    return GridFunction(grid, out)
