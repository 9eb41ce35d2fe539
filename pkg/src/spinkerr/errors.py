"""Exception hierarchy for spinkerr.

Every error raised by the package derives from :class:`SpinKerrError` so
callers (notably the CLI) can map failures onto exit categories.
"""


class SpinKerrError(Exception):
    """Base class for all package errors."""


class ParameterError(SpinKerrError):
    """Invalid physical parameters or non-finite derived rates."""


class ConfigError(SpinKerrError):
    """Malformed or inconsistent configuration input."""


class DimensionError(SpinKerrError):
    """Operator or state dimensions do not match."""


class SpaceError(SpinKerrError):
    """Invalid Fock-space truncation request."""


class SteadyStateError(SpinKerrError):
    """Steady-state solve failed to meet its residual tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateSteadyStateError(SteadyStateError):
    """The generator has more than one steady state."""


class EvolutionError(SpinKerrError):
    """Time evolution violated a conservation or convergence bound."""


class StepSizeUnderflowError(EvolutionError):
    """Adaptive integrator step size shrank below the resolvable limit."""


class UndefinedObservableError(SpinKerrError):
    """Observable has no meaningful value for this state or parameters.

    Distinct from the observable being zero: e.g. g2 of an empty mode, or
    the excitation spectrum at zero drive.
    """


class ResonantDegeneracyError(SpinKerrError):
    """Closed-form amplitude denominators vanish (resonant degeneracy)."""
