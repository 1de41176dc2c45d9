"""Exception types raised across the package."""


class WavepackError(Exception):
    """Base class for all errors raised by wavepack."""


class InvalidInput(WavepackError, ValueError):
    """Arguments or configuration violate a documented precondition."""


class GridTooCoarse(InvalidInput):
    pass


class PacketOutOfDomain(InvalidInput):
    pass


class DomainError(InvalidInput):
    """A width-ODE quantity was evaluated at Y <= 0."""


class InvalidRegime(InvalidInput):
    pass


class NoSolution(InvalidInput):
    pass


class StepTooLarge(InvalidInput):
    pass


class NonFinite(WavepackError, FloatingPointError):
    """NaN or Inf appeared in a field, moment, or ODE state."""


class ConvergenceFailure(WavepackError, ArithmeticError):
    pass


class InsufficientData(WavepackError, ValueError):
    pass


class Ambiguous(WavepackError, ValueError):
    """No classification rule fired for a width trace."""


class NoOverlap(WavepackError, ValueError):
    pass
