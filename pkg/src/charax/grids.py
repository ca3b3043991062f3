"""Uniform grids and the sampled fields that live on them.

Nodes are cell centers: x_j = x_min + (j + 1/2) dx, one value per cell.
Periodic topology identifies x_max with x_min; line topology treats the
field as a perturbation of constant far-field states outside the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GridError

Topology = str  # "periodic" | "line"

_TOPOLOGIES = ("periodic", "line")


@dataclass(frozen=True)
class Grid1D:
    """Uniform 1D grid of n cells on [x_min, x_max]."""

    n: int
    x_min: float = 0.0
    x_max: float = 1.0
    topology: Topology = "periodic"

    def __post_init__(self) -> None:
        if self.n < 8:
            raise GridError(f"need n >= 8 cells, got {self.n}")
        if not self.x_max > self.x_min:
            raise GridError(f"empty domain [{self.x_min}, {self.x_max}]")
        if self.topology not in _TOPOLOGIES:
            raise GridError(f"unknown topology {self.topology!r}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def periodic(self) -> bool:
        return self.topology == "periodic"

    def nodes(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n) + 0.5) * self.dx


@dataclass(frozen=True)
class TorusGrid2D:
    """Uniform periodic grid on the unit torus [0,1]^2, n1 x n2 cells."""

    n1: int
    n2: int

    def __post_init__(self) -> None:
        if self.n1 < 8 or self.n2 < 8:
            raise GridError(f"need n1, n2 >= 8 cells, got {self.n1} x {self.n2}")

    @property
    def dx1(self) -> float:
        return 1.0 / self.n1

    @property
    def dx2(self) -> float:
        return 1.0 / self.n2

    def nodes1(self) -> np.ndarray:
        return (np.arange(self.n1) + 0.5) * self.dx1

    def nodes2(self) -> np.ndarray:
        return (np.arange(self.n2) + 0.5) * self.dx2

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.nodes1(), self.nodes2(), indexing="ij")


@dataclass(frozen=True)
class GridFunction:
    """Float64 samples of a scalar field, one per grid cell."""

    grid: Grid1D | TorusGrid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if isinstance(self.grid, Grid1D):
            expected: tuple[int, ...] = (self.grid.n,)
        else:
            expected = (self.grid.n1, self.grid.n2)
        if vals.shape != expected:
            raise GridError(f"values shape {vals.shape} != grid shape {expected}")
        if not np.all(np.isfinite(vals)):
            raise GridError("non-finite values in grid function")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: Grid1D | TorusGrid2D,
                      fn: Callable[..., np.ndarray]) -> "GridFunction":
        if isinstance(grid, Grid1D):
            return cls(grid, np.asarray(fn(grid.nodes()), dtype=np.float64))
        x1, x2 = grid.meshgrid()
        return cls(grid, np.asarray(fn(x1, x2), dtype=np.float64))

    @classmethod
    def constant(cls, grid: Grid1D | TorusGrid2D, value: float) -> "GridFunction":
        if isinstance(grid, Grid1D):
            return cls(grid, np.full(grid.n, float(value)))
        return cls(grid, np.full((grid.n1, grid.n2), float(value)))


def ddx(f: GridFunction, seam_jump: float = 0.0) -> GridFunction:
    """Second-order central x-derivative on a 1D grid.

    seam_jump is the value jump across the periodic seam, nonzero only for
    coordinate-like fields with f(x + L) = f(x) + L. Line grids use one-sided
    differences at the two boundary cells.
    """
    grid = f.grid
    if not isinstance(grid, Grid1D):
        raise GridError("ddx needs a 1D grid; use ddx_axis on the torus")
    v = f.values
    dx = grid.dx
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * dx)
    if grid.periodic:
        out[0] = (v[1] - (v[-1] - seam_jump)) / (2.0 * dx)
        out[-1] = ((v[0] + seam_jump) - v[-2]) / (2.0 * dx)
    else:
        out[0] = (v[1] - v[0]) / dx
        out[-1] = (v[-1] - v[-2]) / dx
    return GridFunction(grid, out)


def ddx_axis(f: GridFunction, axis: int) -> GridFunction:
    """Second-order central derivative along one axis of the torus."""
    grid = f.grid
    if not isinstance(grid, TorusGrid2D):
        raise GridError("ddx_axis needs a torus grid")
    if axis not in (0, 1):
        raise GridError(f"axis must be 0 or 1, got {axis}")
    dx = grid.dx1 if axis == 0 else grid.dx2
    v = f.values
    out = (np.roll(v, -1, axis=axis) - np.roll(v, 1, axis=axis)) / (2.0 * dx)
    return GridFunction(grid, out)


def integrate(f: GridFunction) -> float:
    """Midpoint-rule integral over the domain (exact total area/length)."""
    if isinstance(f.grid, Grid1D):
        return float(np.mean(f.values)) * f.grid.length
    return float(np.mean(f.values))
