"""Exception types raised by the library."""


class GammaPoleError(ValueError):
    """Argument sits on a pole of Gamma or digamma (a non-positive integer)."""


class SeriesConvergenceError(ArithmeticError):
    """A convergent series hit its term cap before meeting the tolerance."""


class AccuracyFloorError(ArithmeticError):
    """An asymptotic expansion cannot reach the requested accuracy at this point."""


class AtPoleError(ArithmeticError):
    """The requested quantity is singular because E sits on a pole of S(E)."""


class UnwrapError(ArithmeticError):
    """Consecutive phase samples are too far apart to be unwrapped reliably."""
