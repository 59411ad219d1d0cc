"""Exception types raised by the library and mapped to CLI exit codes."""


class CrossedCRAError(Exception):
    """Base class for all library errors."""


class OutOfBand(CrossedCRAError, ValueError):
    """An energy lies outside the band required by the operation."""


class PoleAtBareAtom(CrossedCRAError, ZeroDivisionError):
    """The regularized scattering denominator vanishes (genuine pole)."""


class EmptyGrid(CrossedCRAError, ValueError):
    pass


class NoConvergence(CrossedCRAError, RuntimeError):
    pass


class NotResonant(CrossedCRAError, ValueError):
    """Two-photon resonance (omega_a == omega_b + eps_f) does not hold."""

    def __init__(self, message, suggested_omega_b=None):
        super().__init__(message)
        self.suggested_omega_b = suggested_omega_b


class InvalidSize(CrossedCRAError, ValueError):
    pass


class SingularSystem(CrossedCRAError, ArithmeticError):
    pass


class TailNotConverged(CrossedCRAError, RuntimeError):
    pass


class PacketLeavesBand(CrossedCRAError, ValueError):
    pass


class BoundaryContamination(CrossedCRAError, RuntimeError):
    pass


class ConfigError(CrossedCRAError, ValueError):
    pass


class ToleranceExceeded(CrossedCRAError, RuntimeError):
    pass
