"""
Exception hierarchy for the intermediate β-shift toolkit
"""


class BetaShiftError(Exception):
    """Base class for every error raised by the toolkit"""


class DomainError(BetaShiftError, ValueError):
    """Input outside the parameter space, the unit interval or a grammar"""


class WordSyntaxError(DomainError):
    """Malformed word literal"""


class ConfigError(BetaShiftError):
    """Invalid configuration value"""


class PrecisionExhausted(BetaShiftError, ArithmeticError):
    """A comparison could not be decided at the working precision"""

    def __init__(self, message: str, bits: int = 0):
        super().__init__(message)
        self.bits = bits


class EscalationFailed(BetaShiftError):
    """No finite-type certificate: zero entropy, or the memory search passed its cap"""


class AlreadyPeriodic(BetaShiftError):
    """Periodization requested for a word that is already purely periodic"""


class CallbackExhausted(BetaShiftError):
    """A digit callback could not supply the requested prefix"""


class ReductionFailed(BetaShiftError):
    """Kneading invariants recomputed at (b, a) were not detected periodic"""


class NoProgress(BetaShiftError):
    """The cut index passed its cap without meeting the tolerance"""


class InvariantViolation(BetaShiftError):
    """An internal consistency check failed"""
