"""Exception hierarchy shared by all modules."""


class KleinianError(Exception):
    """Base class for errors raised by this package."""


class SceneError(KleinianError, ValueError):
    """Invalid scene configuration or command-line input."""


class NumericalError(KleinianError, ArithmeticError):
    """A computation could not produce a valid result."""


class ConvergenceError(NumericalError):
    """An iterative solver failed to converge.

    ``trail`` holds the iterates (or residual history) seen before giving up.
    """

    def __init__(self, message, trail=()):
        super().__init__(message)
        self.trail = list(trail)
