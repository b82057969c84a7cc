"""Exception types shared across the solver."""


class CoupledFVError(Exception):
    """Base class for all solver errors."""


class DomainError(CoupledFVError):
    """A state left the physical domain (nonpositive density / internal energy)."""


class DegenerateInputError(CoupledFVError):
    """Inputs for which no valid dissipation speed / middle state exists."""


class TraceSolverError(CoupledFVError):
    """The interface trace solver failed; carries diagnostics in args."""


class SimulationError(CoupledFVError):
    """A time-marching run aborted (invalid state or persistent solver failure)."""


class ConfigError(CoupledFVError):
    """Malformed scenario configuration."""
