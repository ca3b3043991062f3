"""Coupled viscous evolution of (u, alpha, Theta) for a scalar 1D law.

u solves u_t + f(u)_x = eps u_xx; alongside it the generalized
characteristic coordinate alpha (advective equation, alpha(0,x) = x) and
its Jacobian weight Theta = alpha_x (conservative equation, Theta(0,x) = 1)
are evolved with the same frozen speed f'(u). The transformed profile
U(t, alpha), with u(t,x) = U(t, alpha(t,x)), is reconstructed from the
monotone graph (alpha_j, u_j) and keeps W^{1,p} bounds through shock
formation while u_x blows up like 1/eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigError, SolverAbort
from .grids import Grid1D, GridFunction, ddx
from .stepping import advect_diffuse_step, flux_diffuse_step

RealFn = Callable[[np.ndarray], np.ndarray]

# Sample count for scanning f' over a state interval when bounding speeds.
_SPEED_SAMPLES = 512


@dataclass(frozen=True)
class ScalarProblem1D:
    """Scalar conservation law u_t + f(u)_x = eps u_xx with initial data u0."""

    flux: RealFn
    dflux: RealFn
    u0: RealFn
    grid: Grid1D
    eps: float

    def __post_init__(self) -> None:
        if self.eps <= 0.0:
            raise ConfigError(f"eps must be > 0, got {self.eps}")
        u_nodes = np.asarray(self.u0(self.grid.nodes()), dtype=np.float64)
        if not np.all(np.isfinite(u_nodes)):
            raise ConfigError("u0 produces non-finite samples")
        lo = float(np.min(u_nodes))
        hi = float(np.max(u_nodes))
        if hi == lo:
            hi = lo + 1.0
        us = np.linspace(lo, hi, 100)
        h = 1e-5 * (1.0 + np.abs(us))
        fd = (np.asarray(self.flux(us + h)) - np.asarray(self.flux(us - h))) / (2.0 * h)
        resid = float(np.max(np.abs(fd - np.asarray(self.dflux(us)))))
        if resid >= 1e-6:
            raise ConfigError(
                f"dflux is not the derivative of flux (residual {resid:.3e})")

    @property
    def far_field(self) -> tuple[float, float]:
        """Constant far-field states for line topology (u0 at the endpoints)."""
        return (float(self.u0(np.float64(self.grid.x_min))),
                float(self.u0(np.float64(self.grid.x_max))))

    def u0_inf_norm(self) -> float:
        return float(np.max(np.abs(self.u0(self.grid.nodes()))))

    def speed_bound(self, lo: float, hi: float) -> float:
        """max |f'| over the state interval [lo, hi], by dense sampling."""
        us = np.linspace(lo, hi, _SPEED_SAMPLES)
        return float(np.max(np.abs(np.asarray(self.dflux(us)))))


@dataclass(frozen=True)
class CoupledState1D:
    """The triple (u, alpha, Theta) at one time level."""

    t: float
    u: GridFunction
    alpha: GridFunction
    theta: GridFunction

    def __post_init__(self) -> None:
        th = self.theta.values
        if float(np.min(th)) <= 0.0:
            raise SolverAbort(
                f"Theta lost positivity (min {float(np.min(th)):.3e}) at t={self.t}")
        if float(np.min(np.diff(self.alpha.values))) <= 0.0:
            raise SolverAbort(f"alpha is not strictly increasing at t={self.t}")


@dataclass(frozen=True)
class TransformedProfile:
    """Monotone graph samples (alpha_j, U_j, U_alpha,j) of U(t, .)."""

    alphas: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    def resample(self, m: int) -> "TransformedProfile":
        """Piecewise-linear resampling onto m uniform alpha nodes (plotting only)."""
        a = np.linspace(self.alphas[0], self.alphas[-1], m)
        return TransformedProfile(
            a, np.interp(a, self.alphas, self.values),
            np.interp(a, self.alphas, self.derivs))


def init_state(problem: ScalarProblem1D) -> CoupledState1D:
    """State at t=0: u = u0 samples, alpha = x, Theta = 1."""
    grid = problem.grid
    x = grid.nodes()
    u = GridFunction(grid, np.asarray(problem.u0(x), dtype=np.float64))
    return CoupledState1D(0.0, u, GridFunction(grid, x.copy()),
                          GridFunction.constant(grid, 1.0))


def advance(state: CoupledState1D, problem: ScalarProblem1D, dt: float,
            upwind_weight: float = 1.0) -> CoupledState1D:
    """One explicit step of the coupled system.

    The speed field f'(u) is frozen at the current time level for all three
    equations; u uses the monotone flux form of f(u)_x, alpha the advective
    form, Theta the conservative form. upwind_weight scales the interface
    dissipation of the u and Theta fluxes from fully upwinded (1, default)
    to centred (0); reduced weights require cell Peclet <= 1.
    """
    grid = problem.grid
    eps = problem.eps
    uv = state.u.values
    speed = GridFunction(grid, np.asarray(problem.dflux(uv), dtype=np.float64))
    fu = GridFunction(grid, np.asarray(problem.flux(uv), dtype=np.float64))

    if grid.periodic:
        u_new = flux_diffuse_step(state.u, fu, speed, eps, dt,
                                  upwind_weight=upwind_weight)
        alpha_new = advect_diffuse_step(state.alpha, speed, eps, dt,
                                        form="advective", seam_jump=grid.length)
        theta_new = advect_diffuse_step(state.theta, speed, eps, dt,
                                        form="conservative",
                                        upwind_weight=upwind_weight)
    else:
        far_lo, far_hi = problem.far_field
        u_new = flux_diffuse_step(
            state.u, fu, speed, eps, dt, ghost_lo=far_lo, ghost_hi=far_hi,
            flux_ghost_lo=float(problem.flux(np.float64(far_lo))),
            flux_ghost_hi=float(problem.flux(np.float64(far_hi))),
            upwind_weight=upwind_weight)
        av = state.alpha.values
        alpha_new = advect_diffuse_step(
            state.alpha, speed, eps, dt, form="advective",
            ghost_lo=av[0] - grid.dx, ghost_hi=av[-1] + grid.dx)
        theta_new = advect_diffuse_step(state.theta, speed, eps, dt,
                                        form="conservative",
                                        ghost_lo=1.0, ghost_hi=1.0,
                                        upwind_weight=upwind_weight)
    return CoupledState1D(state.t + dt, u_new, alpha_new, theta_new)


@dataclass(frozen=True)
class AlphaBoundReport:
    """Worst-case margins of x + M1 t <= alpha <= x + M2 t (slack tol)."""

    m1: float
    m2: float
    tol: float
    margin_lo: float
    margin_hi: float
    passed: bool
    alt_margin_lo: float | None = None
    alt_margin_hi: float | None = None


def check_alpha_bounds(state: CoupledState1D, problem: ScalarProblem1D,
                       tol: float | None = None) -> AlphaBoundReport:
    """Check the comparison-principle envelope for alpha.

    M1 = inf(-f') and M2 = sup(-f') over |u| <= max|u0|; the lines x + M_k t
    are sub/supersolutions of the alpha equation. Margins are the worst
    signed distances to the envelope (negative means violated beyond tol).
    If the check fails, margins for the opposite sign convention
    (x + inf(f') t <= alpha <= x + sup(f') t) are recorded too.
    """
    grid = problem.grid
    if tol is None:
        tol = 2.0 * grid.dx
    m = problem.u0_inf_norm()
    us = np.linspace(-m, m, _SPEED_SAMPLES)
    dfs = np.asarray(problem.dflux(us), dtype=np.float64)
    m1 = float(np.min(-dfs))
    m2 = float(np.max(-dfs))
    x = grid.nodes()
    a = state.alpha.values
    t = state.t
    margin_lo = float(np.min(a - (x + m1 * t)))
    margin_hi = float(np.min((x + m2 * t) - a))
    passed = margin_lo >= -tol and margin_hi >= -tol
    if passed:
        return AlphaBoundReport(m1, m2, tol, margin_lo, margin_hi, True)
    alt_lo = float(np.min(a - (x + float(np.min(dfs)) * t)))
    alt_hi = float(np.min((x + float(np.max(dfs)) * t) - a))
    return AlphaBoundReport(m1, m2, tol, margin_lo, margin_hi, False,
                            alt_margin_lo=alt_lo, alt_margin_hi=alt_hi)


def consistency_error(state: CoupledState1D) -> float:
    """max |ddx(alpha) - Theta|: mutual agreement of the two evolved fields."""
    grid = state.alpha.grid
    seam = grid.length if grid.periodic else 0.0
    da = ddx(state.alpha, seam_jump=seam)
    return float(np.max(np.abs(da.values - state.theta.values)))


def reconstruct_profile(state: CoupledState1D) -> TransformedProfile:
    """Sample U's graph: alphas = alpha_j, values = u_j, derivs = u_x/Theta."""
    grid = state.u.grid
    a = state.alpha.values
    if float(np.min(np.diff(a))) <= 0.0:
        raise SolverAbort("alpha samples are not strictly increasing")
    ux = ddx(state.u).values
    return TransformedProfile(a.copy(), state.u.values.copy(),
                              ux / state.theta.values)


def transformed_lp_norm(state: CoupledState1D, p: float) -> float:
    """L^p norm of U_alpha in the alpha variable.

    Computed without interpolation by the change of variables d(alpha) =
    Theta dx: (integral |u_x|^p Theta^{1-p} dx)^{1/p}; p = inf is the max
    of |u_x|/Theta at the nodes.
    """
    if p < 1:
        raise ConfigError(f"need p >= 1, got {p}")
    grid = state.u.grid
    ux = ddx(state.u).values
    ratio = np.abs(ux) / state.theta.values
    if math.isinf(p):
        return float(np.max(ratio))
    weighted = ratio ** p * state.theta.values
    return float(np.mean(weighted) * grid.length) ** (1.0 / p)


def transformed_bv_of_deriv(state: CoupledState1D) -> float:
    """Discrete total variation of U_alpha samples (surrogate for |U_aa|_L1)."""
    profile = reconstruct_profile(state)
    d = profile.derivs
    tv = float(np.sum(np.abs(np.diff(d))))
    grid = state.u.grid
    if grid.periodic:
        tv += float(np.abs(d[0] - d[-1]))
    return tv
