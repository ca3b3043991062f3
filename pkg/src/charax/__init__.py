"""Viscous conservation-law solvers that track the generalized-characteristic
coordinate transform and certify transformed-profile regularity."""

from ._kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
