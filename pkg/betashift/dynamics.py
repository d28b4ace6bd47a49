"""
Intermediate β-transformations T±(x) = βx + α mod 1 and their itineraries

All evaluation is done on interval enclosures. A point whose enclosure
straddles the critical point p is undecidable and raises PrecisionExhausted,
unless both enclosures are so tight that the point is identified with p.
"""

import bisect
import logging
from typing import List, Optional, Tuple, Union

from models.shift_models import KneadingPair, Params, Side

from .errors import DomainError, PrecisionExhausted
from .numeric import Quantity, Real, identification_tolerance, parse_quantity, with_precision, working_precision
from .words import EventuallyPeriodicWord, FiniteWord

logger = logging.getLogger(__name__)

Point = Union[Real, Quantity, str, int]

DEFAULT_BITS = 128
DEFAULT_CAP = 4096


def check_domain(params: Params, bits: int = DEFAULT_BITS) -> None:
    """Reject parameters that are certainly outside Δ"""
    beta, alpha = params.enclose(bits)
    with working_precision(bits):
        if not (beta.certainly_greater(1) and beta.certainly_less(2)):
            raise DomainError(f"β must lie in (1, 2), got {params.beta.describe()}")
        if alpha.certainly_less(0) or alpha.certainly_greater(2 - beta):
            raise DomainError(f"α must lie in [0, 2 - β], got {params.describe()}")


class IntervalMap:
    """T±_{β,α} evaluated at a fixed working precision"""

    def __init__(self, params: Params, bits: int = DEFAULT_BITS):
        check_domain(params, bits)
        self.params = params
        self.bits = bits
        self.beta, self.alpha = params.enclose(bits)
        with working_precision(bits):
            self.p = (1 - self.alpha) / self.beta
        self.tolerance = identification_tolerance(bits)

    def coerce(self, x: Point) -> Real:
        if isinstance(x, Real):
            value = x
        elif isinstance(x, Quantity):
            value = x.enclose(self.bits)
        else:
            value = parse_quantity(str(x)).enclose(self.bits)
        if value.certainly_less(0) or value.certainly_greater(1):
            raise DomainError(f"x must lie in [0, 1], got {value!r}")
        return value

    def identified(self, x: Real, y: Real) -> bool:
        return x.overlaps(y) and x.width + y.width <= self.tolerance

    def locate(self, x: Real) -> int:
        """-1 below p, 1 above p, 0 when x is identified with p"""
        if x.certainly_less(self.p):
            return -1
        if x.certainly_greater(self.p):
            return 1
        if self.identified(x, self.p):
            return 0
        raise PrecisionExhausted(f"cannot place {x!r} relative to p at {self.bits} bits", self.bits)

    def digit(self, x: Real, side: Side) -> int:
        position = self.locate(x)
        if position == 0:
            return 1 if side is Side.PLUS else 0
        return 0 if position < 0 else 1

    def step(self, x: Real, side: Side) -> Real:
        position = self.locate(x)
        if position == 0:
            return Real.exact(0 if side is Side.PLUS else 1)
        with working_precision(self.bits):
            image = self.beta * x + self.alpha
            return image if position < 0 else image - 1


def critical_point(params: Params, bits: int = DEFAULT_BITS) -> Real:
    """p = (1 − α)/β"""
    return IntervalMap(params, bits).p


def apply_map(params: Params, x: Point, side: Side, bits: int = DEFAULT_BITS) -> Real:
    fn = IntervalMap(params, bits)
    return fn.step(fn.coerce(x), Side(side))


def expand(params: Params, x: Point, n: int, side: Side, bits: int = DEFAULT_BITS) -> FiniteWord:
    """First n digits of τ±(x)"""
    if n < 1:
        raise DomainError("expansion length must be at least 1")
    side = Side(side)
    fn = IntervalMap(params, bits)
    point = fn.coerce(x)
    digits: List[int] = []
    for _ in range(n):
        digits.append(fn.digit(point, side))
        point = fn.step(point, side)
    return FiniteWord(digits)


def _geometric_value(beta: Real, word: EventuallyPeriodicWord) -> Real:
    """Σ_k w_k β^(−k) summed in closed form over preperiod and period"""
    m, size = len(word.preperiod), len(word.period)
    head = Real.exact(0)
    for k, letter in enumerate(word.preperiod, start=1):
        if letter:
            head = head + beta ** -k
    numerator = Real.exact(0)
    for k, letter in enumerate(word.period, start=1):
        if letter:
            numerator = numerator + beta ** (size - k)
    return head + (beta ** -m) * numerator / (beta ** size - 1)


def series_value(beta: Real, word: EventuallyPeriodicWord, bits: int = DEFAULT_BITS) -> Real:
    with working_precision(bits):
        return _geometric_value(beta, word)


def project(params: Params, word: EventuallyPeriodicWord, bits: int = DEFAULT_BITS) -> Real:
    """π(w) = α/(1 − β) + Σ w_k β^(−k)"""
    beta, alpha = params.enclose(bits)
    with working_precision(bits):
        return alpha / (1 - beta) + _geometric_value(beta, word)


def project_prefix(params: Params, word: FiniteWord, bits: int = DEFAULT_BITS) -> Real:
    """π of the finite word followed by zeros"""
    beta, alpha = params.enclose(bits)
    with working_precision(bits):
        total = alpha / (1 - beta)
        for k, letter in enumerate(word, start=1):
            if letter:
                total = total + beta ** -k
        return total


def kneading(params: Params, n: int, bits: int = DEFAULT_BITS) -> KneadingPair:
    """Length-n prefixes of ω = τ−(p) and ν = τ+(p)"""
    if n < 2:
        raise DomainError("kneading prefixes need n >= 2")
    fn = IntervalMap(params, bits)
    lower = expand(params, fn.p, n, Side.MINUS, bits)
    upper = expand(params, fn.p, n, Side.PLUS, bits)
    return KneadingPair(lower=lower, upper=upper, computed_length=n)


class _OrbitMemory:
    """Earlier orbit points, searchable by lower endpoint"""

    def __init__(self):
        self.lowers: List[Tuple[object, int]] = []
        self.points: List[Real] = []
        self.widest = 0

    def add(self, index: int, point: Real) -> None:
        bisect.insort(self.lowers, (point.lower, index))
        self.points.append(point)
        self.widest = max(self.widest, point.width)

    def overlapping(self, x: Real) -> List[int]:
        start = bisect.bisect_left(self.lowers, (x.lower - self.widest, -1))
        hits = []
        for lower, index in self.lowers[start:]:
            if lower > x.upper:
                break
            if self.points[index - 1].overlaps(x):
                hits.append(index)
        return sorted(hits)


def _orbit_word(fn: IntervalMap, side: Side, max_len: int) -> Optional[EventuallyPeriodicWord]:
    """Propose τ±(p) as an eventually periodic word from a revisit of its orbit"""
    digits = [1 if side is Side.PLUS else 0]
    point = fn.step(fn.p, side)
    memory = _OrbitMemory()
    with working_precision(fn.bits):
        for i in range(1, max_len):
            if fn.locate(point) == 0:
                return EventuallyPeriodicWord.periodic(digits[:i])
            for j in memory.overlapping(point):
                if fn.identified(memory.points[j - 1], point):
                    return EventuallyPeriodicWord(digits[:j], digits[j:i])
                raise PrecisionExhausted(f"orbit points {j} and {i} overlap at {fn.bits} bits", fn.bits)
            memory.add(i, point)
            digits.append(fn.digit(point, side))
            point = fn.step(point, side)
    return None


def _confirm(fn: IntervalMap, word: EventuallyPeriodicWord, side: Side) -> EventuallyPeriodicWord:
    projected = project(fn.params, word, fn.bits)
    if not projected.overlaps(fn.p):
        raise PrecisionExhausted(
            f"candidate {word} for τ{'+' if side is Side.PLUS else '−'}(p) does not project to p", fn.bits
        )
    return word


def detect_invariant(
    params: Params, side: Side, max_len: int = 512, bits: int = DEFAULT_BITS
) -> Optional[EventuallyPeriodicWord]:
    """τ±(p) as an eventually periodic word, or None when no revisit occurs within max_len"""
    side = Side(side)
    fn = IntervalMap(params, bits)
    word = _orbit_word(fn, side, max_len)
    if word is None:
        return None
    return _confirm(fn, word, side)


def _detect_pair(params: Params, max_len: int, bits: int) -> Optional[Tuple[EventuallyPeriodicWord, EventuallyPeriodicWord]]:
    lower = detect_invariant(params, Side.MINUS, max_len, bits)
    if lower is None:
        return None
    upper = detect_invariant(params, Side.PLUS, max_len, bits)
    if upper is None:
        return None
    if params.is_interior:
        from .admissibility import is_admissible

        if not is_admissible(lower, upper).admissible:
            raise PrecisionExhausted(f"detected pair ({lower}, {upper}) is not admissible", bits)
    logger.debug("kneading pair of %s detected at %d bits: (%s, %s)", params.describe(), bits, lower, upper)
    return lower, upper


def detect_kneading_period(
    params: Params,
    max_len: int = 512,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> Optional[Tuple[EventuallyPeriodicWord, EventuallyPeriodicWord]]:
    """Both kneading invariants as eventually periodic words, escalating precision as needed"""
    return with_precision(lambda b: _detect_pair(params, max_len, b), bits, cap)


def detect_side(
    params: Params,
    side: Side,
    max_len: int = 512,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> Optional[EventuallyPeriodicWord]:
    return with_precision(lambda b: detect_invariant(params, side, max_len, b), bits, cap)


def greedy_map(beta: Real, x: Real, bits: int = DEFAULT_BITS) -> Real:
    """G_β(x) = βx mod 1 on [0, 1)"""
    with working_precision(bits):
        image = beta * x
        if image.certainly_less(1):
            return image
        if image.certainly_greater(1):
            return image - 1
    raise PrecisionExhausted(f"βx straddles 1 at {bits} bits", bits)


def lazy_map(beta: Real, x: Real, bits: int = DEFAULT_BITS) -> Real:
    """L_β(x) = β(x − 1) mod 1 on (0, 1]"""
    with working_precision(bits):
        image = beta * (x - 1) + 1
        if image.certainly_greater(0):
            return image
        if image.certainly_less(0):
            return image + 1
    raise PrecisionExhausted(f"β(x − 1) straddles −1 at {bits} bits", bits)


def mirror_params(params: Params) -> Params:
    """(β, 2 − β − α); T−_{β,α}(x) = 1 − T+_{β,2−β−α}(1 − x)"""
    return params.mirror()

