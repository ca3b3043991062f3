"""Exact and semi-exact reference solutions for validating the viscous solvers.

Two independent routes to the inviscid entropy solution: the method of
characteristics for smooth pre-shock data, and the convex-flux Riemann
solution for piecewise-constant data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import GridError, OracleError
from .grids import GridFunction, integrate

RealFn = Callable[[np.ndarray], np.ndarray]


def characteristics_solution(u0: RealFn, du0: RealFn, dflux: RealFn,
                             t: float, x, tol: float = 1e-12):
    """Classical pre-shock solution u(t,x) = u0(y) with x = y + f'(u0(y)) t.

    Solves the characteristic foot-point equation for y by a bracketed
    root finder to absolute tolerance tol. Only valid before characteristic
    crossing; a detected crossing (or failed bracketing) is an error.
    """
    if t < 0.0:
        raise OracleError(f"need t >= 0, got {t}")
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if t == 0.0:
        out = np.asarray(u0(xs), dtype=np.float64)
        return out if np.ndim(x) else float(out[0])

    # Sample the map y -> y + t f'(u0(y)) over the relevant foot-point range;
    # a non-increasing stretch means characteristics have crossed.
    speed_scale = float(np.max(np.abs(dflux(np.asarray(
        u0(np.linspace(np.min(xs) - 1.0, np.max(xs) + 1.0, 2049)))))))
    span = speed_scale * t + 1.0
    ys = np.linspace(np.min(xs) - span, np.max(xs) + span, 4097)
    chart = ys + t * np.asarray(dflux(np.asarray(u0(ys))), dtype=np.float64)
    slopes = np.diff(chart)
    if np.min(slopes) <= 0.0:
        raise OracleError(
            f"characteristics have crossed by t={t}; no single-valued solution")

    def g(y: float, target: float) -> float:
        return y + t * float(dflux(np.float64(u0(np.float64(y))))) - target

    out = np.empty_like(xs)
    for k, target in enumerate(xs):
        lo = target - span
        hi = target + span
        glo = g(lo, target)
        ghi = g(hi, target)
        if not (glo < 0.0 < ghi or glo == 0.0 or ghi == 0.0):
            raise OracleError(f"no root bracketing for x={target} at t={t}")
        y = brentq(g, lo, hi, args=(target,), xtol=tol, rtol=8.881784197001252e-16)
        out[k] = float(u0(np.float64(y)))
    return out if np.ndim(x) else float(out[0])


@dataclass(frozen=True)
class RiemannDatum:
    """Two-state initial datum for a convex-flux conservation law."""

    uL: float
    uR: float
    flux: RealFn
    dflux: RealFn

    def __post_init__(self) -> None:
        a, b = sorted((self.uL, self.uR))
        if a == b:
            return
        us = np.linspace(a, b, 100)
        ds = np.asarray(self.dflux(us), dtype=np.float64)
        if np.any(np.diff(ds) <= 0.0):
            raise OracleError("flux is not strictly convex between the states")

    @property
    def degenerate(self) -> bool:
        return self.uL == self.uR

    @property
    def is_shock(self) -> bool:
        return self.uL > self.uR

    @property
    def shock_speed(self) -> float:
        if not self.is_shock:
            raise OracleError("shock speed undefined for non-shock data")
        return ((float(self.flux(np.float64(self.uL)))
                 - float(self.flux(np.float64(self.uR))))
                / (self.uL - self.uR))


def riemann_solution(datum: RiemannDatum, xi):
    """Entropy solution of the Riemann problem evaluated at xi = x/t.

    uL > uR gives the Rankine-Hugoniot shock, uL < uR the rarefaction fan
    with interior values (f')^{-1}(xi).
    """
    xis = np.atleast_1d(np.asarray(xi, dtype=np.float64))
    out = np.empty_like(xis)
    if datum.degenerate:
        out[:] = datum.uL
        return out if np.ndim(xi) else float(out[0])
    if datum.is_shock:
        s = datum.shock_speed
        out[:] = np.where(xis < s, datum.uL, datum.uR)
        return out if np.ndim(xi) else float(out[0])
    sL = float(datum.dflux(np.float64(datum.uL)))
    sR = float(datum.dflux(np.float64(datum.uR)))

    def fan(z: float) -> float:
        return brentq(lambda u: float(datum.dflux(np.float64(u))) - z,
                      datum.uL, datum.uR, xtol=1e-14,
                      rtol=8.881784197001252e-16)

    for k, z in enumerate(xis):
        if z <= sL:
            out[k] = datum.uL
        elif z >= sR:
            out[k] = datum.uR
        else:
            out[k] = fan(float(z))
    return out if np.ndim(xi) else float(out[0])


def riemann_initial(datum: RiemannDatum, x, jump_at: float = 0.0):
    """The t=0 two-state profile with the jump at jump_at."""
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.where(xs < jump_at, datum.uL, datum.uR)
    return out if np.ndim(x) else float(out[0])


def riemann_at(datum: RiemannDatum, t: float, x, jump_at: float = 0.0):
    """Entropy solution at time t with the initial jump at jump_at."""
    if t <= 0.0:
        return riemann_initial(datum, x, jump_at)
    return riemann_solution(datum, (np.asarray(x, dtype=np.float64) - jump_at) / t)


def l1_distance(a: GridFunction, b: GridFunction) -> float:
    """Integral of |a - b| over the (shared) grid."""
    if a.grid != b.grid:
        raise GridError("grid mismatch in l1_distance")
    return integrate(GridFunction(a.grid, np.abs(a.values - b.values)))
