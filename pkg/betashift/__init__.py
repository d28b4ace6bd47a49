"""
Intermediate β-shifts: expansions, kneading invariants, admissibility and SFT approximation
"""

# Only dependency-free modules are re-exported here; the rest import models.
from .errors import (
    AlreadyPeriodic,
    BetaShiftError,
    CallbackExhausted,
    ConfigError,
    DomainError,
    EscalationFailed,
    InvariantViolation,
    NoProgress,
    PrecisionExhausted,
    ReductionFailed,
    WordSyntaxError,
)
from .numeric import Computed, Expression, Real, parse_quantity, with_precision
from .words import EventuallyPeriodicWord, FiniteWord, Ordering, parse_word

__version__ = "1.0.0"

__all__ = [
    "AlreadyPeriodic",
    "BetaShiftError",
    "CallbackExhausted",
    "Computed",
    "ConfigError",
    "DomainError",
    "EscalationFailed",
    "EventuallyPeriodicWord",
    "Expression",
    "FiniteWord",
    "InvariantViolation",
    "NoProgress",
    "Ordering",
    "PrecisionExhausted",
    "Real",
    "ReductionFailed",
    "WordSyntaxError",
    "parse_quantity",
    "parse_word",
    "with_precision",
]
