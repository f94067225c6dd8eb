"""Exception types shared across the package."""


class LassoMcError(Exception):
    """Base class for all package errors."""


class ParameterError(LassoMcError, ValueError):
    """A configuration value or argument is out of its valid range."""


class ShapeError(LassoMcError, ValueError):
    """Array dimensions do not match the operation's contract."""


class DegenerateInputError(LassoMcError, ValueError):
    """Too few samples for the requested statistic."""


class DomainError(LassoMcError, ValueError):
    """An input lies outside the function's domain."""


class CapacityError(LassoMcError, ValueError):
    """A requested object would exceed a configured size cap."""


class ConfigError(LassoMcError, ValueError):
    """An experiment configuration is invalid (unknown ids, bad combinations)."""


class ConvergenceError(LassoMcError, RuntimeError):
    """Iterative solver failed to converge; carries iteration diagnostics."""

    def __init__(self, message, iterations=None, last_change=None):
        super().__init__(message)
        self.iterations = iterations
        self.last_change = last_change


class IntegrationError(LassoMcError, RuntimeError):
    """ODE integration failed; carries the point of failure."""

    def __init__(self, message, t=None, step=None, n_steps=None):
        super().__init__(message)
        self.t = t
        self.step = step
        self.n_steps = n_steps


class TrainingError(LassoMcError, RuntimeError):
    """Surrogate training failed (wraps the underlying cause)."""
