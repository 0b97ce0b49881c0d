"""Exception types raised by the library."""


class SemiImexError(Exception):
    """Base class for all library errors."""


class CatalogError(SemiImexError):
    """Unknown scheme identifier."""


class TableauError(SemiImexError):
    """A double tableau violates a structural invariant."""


class ParameterError(SemiImexError):
    """A parameter lies outside its admissible range."""


class PoleError(SemiImexError):
    """The stability function has a pole at the requested point."""
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class SingularMatrixError(SemiImexError):
    """A linear system has an exactly zero pivot after partial pivoting."""
    def __init__(self, message, stage=None):
        super().__init__(message)
        self.stage = stage


class DivergenceError(SemiImexError):
    """A stage value or state became non-finite."""
    def __init__(self, message, stage=None, step=None):
        super().__init__(message)
        self.stage = stage
        self.step = step


class StepError(SemiImexError):
    """A failure inside a full integration, annotated with the step number."""
    def __init__(self, message, step, cause=None):
        super().__init__(message)
        self.step = step
        self.cause = cause


class DegenerateStencilError(SemiImexError):
    """Finite-difference nodes are not distinct."""


class ConfigurationError(SemiImexError):
    """Invalid configuration or command-line input."""


class NewtonError(SemiImexError):
    """Newton iteration did not converge."""
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
