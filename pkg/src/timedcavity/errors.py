"""Exception types raised by the simulator."""


class TimedCavityError(Exception):
    """Base class for all simulator errors."""


class ConfigError(TimedCavityError, ValueError):
    """Invalid configuration value or malformed config file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DivergenceError(TimedCavityError, ValueError):
    """A dipole-dipole coefficient is singular at the requested separation."""


class UnsupportedRegimeError(TimedCavityError, ValueError):
    """Closed-form dynamics requested outside the lossless equal-coupling regime."""


class DegenerateCouplingError(TimedCavityError, ValueError):
    """Cavity dark/bright states are undefined when g1 = g2 = 0."""


class IntegrationDiagnosticError(TimedCavityError, RuntimeError):
    """Density matrix left the physical set during integration."""

    def __init__(self, message, t):
        self.t = t
        super().__init__(f"t={t:.6g}: {message}")


class StepSizeError(TimedCavityError, RuntimeError):
    """Preflight run at half the step size disagreed with the requested step."""
