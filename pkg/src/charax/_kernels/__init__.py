"""Stepping kernels with a compiled fast path and a pure-NumPy fallback.

The compiled extension is preferred when importable; set the environment
variable CHARAX_PURE_PYTHON (to any nonempty value) before import to force
the NumPy backend. ``BACKEND`` records which one is active.
"""

from __future__ import annotations

import os

import numpy as np

from . import _numpy

DENOM_FLOOR = _numpy.DENOM_FLOOR

if os.environ.get("CHARAX_PURE_PYTHON"):
    _impl = _numpy
    BACKEND = "numpy"
else:
    try:
        from . import _compiled as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _numpy
        BACKEND = "numpy"


def _c64(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def step_advective_1d(q, speed, eps, dt, dx, periodic=True, shift=0.0,
                      gl=0.0, gr=0.0):
    """One explicit step of q_t + speed * q_x = eps * q_xx (upwind + central)."""
    return np.asarray(_impl.step_advective_1d(
        _c64(q), _c64(speed), float(eps), float(dt), float(dx),
        bool(periodic), float(shift), float(gl), float(gr)))


def step_conservative_1d(q, speed, eps, dt, dx, periodic=True, gl=0.0, gr=0.0,
                         upwind_weight=1.0):
    """One explicit step of q_t + (speed * q)_x = eps * q_xx (positivity preserving)."""
    return np.asarray(_impl.step_conservative_1d(
        _c64(q), _c64(speed), float(eps), float(dt), float(dx),
        bool(periodic), float(gl), float(gr), float(upwind_weight)))


def step_flux_form_1d(q, fq, speed, eps, dt, dx, periodic=True,
                      gl=0.0, gr=0.0, fgl=0.0, fgr=0.0, upwind_weight=1.0):
    """One explicit step of q_t + f(q)_x = eps * q_xx (monotone flux form)."""
    return np.asarray(_impl.step_flux_form_1d(
        _c64(q), _c64(fq), _c64(speed), float(eps), float(dt), float(dx),
        bool(periodic), float(gl), float(gr), float(fgl), float(fgr),
        float(upwind_weight)))


def step_flux_form_2d(q, f1q, f2q, speed1, speed2, eps, dt, dx1, dx2,
                      upwind_weight=1.0):
    """One flux-form step of q_t + f1(q)_x1 + f2(q)_x2 = eps * Lap(q), periodic."""
    return np.asarray(_impl.step_flux_form_2d(
        _c64(q), _c64(f1q), _c64(f2q), _c64(speed1), _c64(speed2),
        float(eps), float(dt), float(dx1), float(dx2), float(upwind_weight)))


def step_conservative_2d(q, speed1, speed2, eps, dt, dx1, dx2,
                         upwind_weight=1.0):
    """One step of q_t + div(speed * q) = eps * Lap(q) on the periodic 2D grid."""
    return np.asarray(_impl.step_conservative_2d(
        _c64(q), _c64(speed1), _c64(speed2), float(eps), float(dt),
        float(dx1), float(dx2), float(upwind_weight)))


__all__ = [
    "BACKEND",
    "DENOM_FLOOR",
    "step_advective_1d",
    "step_conservative_1d",
    "step_flux_form_1d",
    "step_flux_form_2d",
    "step_conservative_2d",
]
