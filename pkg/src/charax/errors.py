"""Exception types shared across the package."""


class CharaxError(Exception):
    """Base class for all package errors."""


class GridError(CharaxError):
    """Invalid grid geometry or a field/grid mismatch."""


class CFLError(CharaxError):
    """Requested time step exceeds the explicit stability bound."""


class SolverAbort(CharaxError):
    """The time stepper produced an unusable state (NaN, theta <= 0, ...)."""


class OracleError(CharaxError):
    """Reference solution is not applicable (e.g. past shock formation)."""


class ConfigError(CharaxError):
    """Experiment configuration failed validation."""
