"""
Finite type / sofic classification of Ω_{β,α}
"""

import logging

from models.shift_models import Params, ShiftClassification, ShiftStatus, Side

from .admissibility import is_admissible
from .dynamics import DEFAULT_BITS, DEFAULT_CAP, detect_kneading_period, detect_side
from .errors import InvariantViolation
from .subshift import build_automaton, forbidden_words

logger = logging.getLogger(__name__)


def _undetermined(criterion: str, max_len: int) -> ShiftClassification:
    return ShiftClassification(status=ShiftStatus.UNDETERMINED, criterion=criterion, prefix_len=max_len)


def _certified(criterion: str, lower, upper, bits: int) -> ShiftClassification:
    certificate = forbidden_words(build_automaton(lower, upper), bits)
    return ShiftClassification(
        status=ShiftStatus.FINITE_TYPE,
        criterion=criterion,
        certificate=certificate,
        pair=(lower, upper),
    )


def _classify_boundary(params: Params, max_len: int, bits: int, cap: int) -> ShiftClassification:
    """One invariant decides: τ− at α = 0, τ+ at α = 2 − β"""
    criterion = params.boundary
    deciding = Side.MINUS if criterion == "greedy" else Side.PLUS
    word = detect_side(params, deciding, max_len, bits, cap)
    if word is None:
        return _undetermined(criterion, max_len)
    other = detect_side(params, Side.PLUS if deciding is Side.MINUS else Side.MINUS, max_len, bits, cap)
    if other is None:
        return _undetermined(criterion, max_len)
    lower, upper = (word, other) if deciding is Side.MINUS else (other, word)
    if word.is_periodic:
        return _certified(criterion, lower, upper, bits)
    return ShiftClassification(status=ShiftStatus.SOFIC, criterion=criterion, pair=(lower, upper))


def classify_shift(
    params: Params,
    max_len: int = 512,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> ShiftClassification:
    """FiniteType with a certificate, Sofic with the pair, or Undetermined"""
    if not params.is_interior:
        result = _classify_boundary(params, max_len, bits, cap)
    else:
        pair = detect_kneading_period(params, max_len, bits, cap)
        if pair is None:
            result = _undetermined("intermediate", max_len)
        else:
            lower, upper = pair
            if lower.is_periodic and upper.is_periodic:
                if not is_admissible(lower, upper, bits).periodically_admissible:
                    raise InvariantViolation(f"detected periodic pair ({lower}, {upper}) is not admissible")
                result = _certified("intermediate", lower, upper, bits)
            else:
                result = ShiftClassification(status=ShiftStatus.SOFIC, criterion="intermediate", pair=pair)
    logger.info("%s classified as %s (%s)", params.describe(), result.status.value, result.criterion)
    return result
