"""Named fluxes, initial data, and the shipped run presets.

Presets are plain flat dicts so the CLI can serialize them as JSON and
apply --key=value overrides; experiment runners turn them into problem
objects. Every numeric choice here is a default, not a contract: runs may
override any key.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def burgers_flux(u):
    return 0.5 * u * u


def burgers_dflux(u):
    return np.asarray(u) + 0.0


def quartic_flux(u):
    return 0.25 * u ** 4


def quartic_dflux(u):
    return u ** 3


FLUXES = {
    "burgers": (burgers_flux, burgers_dflux),
    "quartic": (quartic_flux, quartic_dflux),
}


def sine_u0(x):
    return np.sin(2.0 * np.pi * x)


def diagonal_sine_u0(x):
    """Componentwise sine and cosine data for the decoupled 2x2 system."""
    return np.stack([0.5 + 0.3 * np.sin(2.0 * np.pi * x),
                     0.5 - 0.3 * np.cos(2.0 * np.pi * x)], axis=1)


def chromatography_wave_u0(x):
    """Shock-forming chromatography data, prescribed through the invariants.

    The genuinely nonlinear family carries a wide R1 = u + v wave (its
    speed 1/(1+R1)^2 spans enough range to steepen by t ~ 1), the contact
    family a mild R2 = u/v modulation; mapping through the invariant
    inverse keeps the states inside the box [0.1, 1]^2.
    """
    R1 = 0.9 + 0.6 * np.sin(2.0 * np.pi * x)
    R2 = 1.0 + 0.25 * np.sin(2.0 * np.pi * x + 1.0)
    v = R1 / (1.0 + R2)
    return np.stack([v * R2, v], axis=1)


def flux_pair(name: str):
    """(f, f') for a named convex flux."""
    try:
        return FLUXES[name]
    except KeyError:
        raise ConfigError(
            f"unknown flux {name!r}; available: {sorted(FLUXES)}") from None


# Post-shock snapshot time shared by the 1D Burgers-sine runs; breaking time
# for sin(2 pi x) is 1/(2 pi) ~ 0.159, so 0.4 sits well past formation.
_SINE_SNAPSHOT = 0.4

PRESETS: dict[str, dict] = {
    # Periodic Burgers with sine data: the generalized-persistence headline
    # run (transformed W^{1,p} norms stay bounded while u_x blows up). The
    # checkpoint pins a recorded row at the post-shock snapshot time.
    "burgers-sine": {
        "kind": "scalar1d",
        "flux": "burgers",
        "u0": "sine",
        "topology": "periodic",
        "n": 4096,
        "eps": 1e-3,
        "t_end": 0.5,
        "checkpoints": "0.4",
        "safety": 0.4,
        "upwind_weight": 1.0,
        "p_list": "1,2,4,inf",
        "record_every": 0,
    },
    # Single viscous shock on a line grid; also the base case the
    # vanishing-viscosity oracle comparison refines.
    "burgers-riemann": {
        "kind": "scalar1d",
        "flux": "burgers",
        "u0": "riemann",
        "topology": "line",
        "u_left": 1.0,
        "u_right": 0.0,
        "x_jump": 0.25,
        "n": 1024,
        "eps": 2e-3,
        "t_end": 0.3,
        "safety": 0.4,
        "upwind_weight": 1.0,
        "p_list": "1,2,4,inf",
        "record_every": 0,
    },
    # Diagonal Burgers on the unit torus: mass identity, ratio maximum
    # principle, weighted L^p energy balance, Holder ordering. The centred
    # flux (upwind_weight 0) is monotone here (cell Peclet 0.78) and keeps
    # the interface dissipation purely viscous.
    "torus-diagonal": {
        "kind": "scalar2d",
        "flux1": "burgers",
        "flux2": "burgers",
        "u0": "diagonal-sine",
        "n1": 128,
        "n2": 128,
        "eps": 5e-3,
        "t_end": 0.3,
        "safety": 0.4,
        "upwind_weight": 0.0,
        "p_list": "1,2,4",
        "axis": 0,
        "record_every": 1,
    },
    # Two decoupled Burgers equations written as a 2x2 system: every
    # eigenstructure residual vanishes identically, so this pins the
    # certification path and the Riemann-invariant maximum principle.
    "diag-temple": {
        "kind": "temple",
        "system": "diagonal",
        "u0": "diagonal-sine",
        "n": 1024,
        "eps": 1e-3,
        "t_end": 0.3,
        "safety": 0.4,
        "mode": "u",
        "record_every": 0,
    },
    # Langmuir two-component chromatography with a strong wave in the
    # genuinely nonlinear family; by t_end the viscous layer is formed, so
    # the eps-sweep of sup |u_x| probes the 1/eps gradient scaling.
    "chromatography": {
        "kind": "temple",
        "system": "chromatography",
        "u0": "chromatography-wave",
        "n": 4096,
        "eps": 1e-3,
        "t_end": 1.4,
        "safety": 0.4,
        "mode": "u",
        "record_every": 0,
    },
}


def preset_config(name: str) -> dict:
    """A fresh copy of a shipped preset configuration."""
    try:
        base = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
    cfg = dict(base)
    cfg["preset"] = name
    return cfg
