"""
Finite and eventually periodic binary words

Words are immutable. Eventually periodic words are kept in canonical form
(primitive period, minimal preperiod) so equality and hashing are structural.
"""

import math
import re
from enum import IntEnum
from typing import Iterable, List, Optional, Tuple, Union

from .errors import WordSyntaxError

_FINITE = re.compile(r"^[01]+$")
_PERIODIC = re.compile(r"^([01]*)\(([01]+)\)$")


class Ordering(IntEnum):
    """Result of a lexicographic comparison"""

    LESS = -1
    EQUAL = 0
    GREATER = 1


class FiniteWord(tuple):
    """A finite word over {0, 1}"""

    def __new__(cls, letters: Iterable[int] = ()):
        word = super().__new__(cls, (int(letter) for letter in letters))
        if any(letter not in (0, 1) for letter in word):
            raise WordSyntaxError(f"letters must be 0 or 1, got {tuple(word)}")
        return word

    @classmethod
    def from_text(cls, text: str) -> "FiniteWord":
        if text == "":
            return cls()
        if not _FINITE.match(text):
            raise WordSyntaxError(f"not a finite binary word: {text!r}")
        return cls(int(ch) for ch in text)

    def __str__(self) -> str:
        return "".join("1" if letter else "0" for letter in self)

    def __repr__(self) -> str:
        return f"FiniteWord('{self}')"

    def __add__(self, other) -> "FiniteWord":
        return FiniteWord(tuple.__add__(self, tuple(other)))

    def __getitem__(self, item):
        value = tuple.__getitem__(self, item)
        if isinstance(item, slice):
            return FiniteWord(value)
        return value

    def complement(self) -> "FiniteWord":
        return FiniteWord(1 - letter for letter in self)


def _primitive_root(period: Tuple[int, ...]) -> Tuple[int, ...]:
    size = len(period)
    for d in range(1, size + 1):
        if size % d == 0 and period[:d] * (size // d) == period:
            return period[:d]
    return period


class EventuallyPeriodicWord:
    """The infinite word preperiod followed by period repeated forever"""

    __slots__ = ("preperiod", "period", "_hash", "_text")

    def __init__(self, preperiod: Iterable[int], period: Iterable[int]):
        pre = tuple(FiniteWord(preperiod))
        per = tuple(FiniteWord(period))
        if not per:
            raise WordSyntaxError("period must be nonempty")
        per = _primitive_root(per)
        # absorb trailing preperiod letters into a rotated period
        while pre and pre[-1] == per[-1]:
            per = per[-1:] + per[:-1]
            pre = pre[:-1]
        self.preperiod = FiniteWord(pre)
        self.period = FiniteWord(per)
        self._hash = hash((pre, per))
        self._text = f"{self.preperiod}({self.period})"

    @classmethod
    def periodic(cls, block: Iterable[int]) -> "EventuallyPeriodicWord":
        """The purely periodic word (block)^∞"""
        return cls((), block)

    @property
    def is_periodic(self) -> bool:
        return len(self.preperiod) == 0

    @property
    def orbit_size(self) -> int:
        """Number of distinct shifts"""
        return len(self.preperiod) + len(self.period)

    def letter(self, index: int) -> int:
        """Letter at 0-based position ``index``"""
        m = len(self.preperiod)
        if index < m:
            return self.preperiod[index]
        return self.period[(index - m) % len(self.period)]

    def prefix(self, n: int) -> FiniteWord:
        return FiniteWord(self.letter(i) for i in range(n))

    def prefix_text(self, n: int) -> str:
        m = len(self.preperiod)
        if n <= m:
            return self._text[:n]
        head = str(self.preperiod)
        body = str(self.period)
        reps = (n - m) // len(body) + 1
        return (head + body * reps)[:n]

    def shift(self, n: int = 1) -> "EventuallyPeriodicWord":
        m = len(self.preperiod)
        if n <= m:
            return EventuallyPeriodicWord(self.preperiod[n:], self.period)
        r = (n - m) % len(self.period)
        return EventuallyPeriodicWord((), self.period[r:] + self.period[:r])

    def orbit(self) -> List["EventuallyPeriodicWord"]:
        """Distinct shifts σ^0, ..., σ^(orbit_size - 1)"""
        return [self.shift(i) for i in range(self.orbit_size)]

    def complement(self) -> "EventuallyPeriodicWord":
        return EventuallyPeriodicWord(self.preperiod.complement(), self.period.complement())

    def compare(self, other: "EventuallyPeriodicWord") -> Ordering:
        bound = max(len(self.preperiod), len(other.preperiod)) + math.lcm(
            len(self.period), len(other.period)
        )
        a = self.prefix_text(bound)
        b = other.prefix_text(bound)
        if a < b:
            return Ordering.LESS
        if a > b:
            return Ordering.GREATER
        return Ordering.EQUAL

    def first_difference(self, other: "EventuallyPeriodicWord") -> Optional[int]:
        """1-based index of the first disagreeing letter, None when equal"""
        if self == other:
            return None
        bound = max(len(self.preperiod), len(other.preperiod)) + math.lcm(
            len(self.period), len(other.period)
        )
        a = self.prefix_text(bound)
        b = other.prefix_text(bound)
        for i, (x, y) in enumerate(zip(a, b)):
            if x != y:
                return i + 1
        return None

    def __lt__(self, other: "EventuallyPeriodicWord") -> bool:
        return self.compare(other) is Ordering.LESS

    def __le__(self, other: "EventuallyPeriodicWord") -> bool:
        return self.compare(other) is not Ordering.GREATER

    def __gt__(self, other: "EventuallyPeriodicWord") -> bool:
        return self.compare(other) is Ordering.GREATER

    def __ge__(self, other: "EventuallyPeriodicWord") -> bool:
        return self.compare(other) is not Ordering.LESS

    def __eq__(self, other) -> bool:
        if not isinstance(other, EventuallyPeriodicWord):
            return NotImplemented
        return self.preperiod == other.preperiod and self.period == other.period

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"EventuallyPeriodicWord('{self._text}')"


Word = Union[FiniteWord, EventuallyPeriodicWord]


def parse_word(text: str) -> EventuallyPeriodicWord:
    """Parse ``bits?(bits)`` into a canonical eventually periodic word"""
    match = _PERIODIC.match(text.strip())
    if not match:
        raise WordSyntaxError(f"expected an eventually periodic literal like '1(10)', got {text!r}")
    pre, per = match.groups()
    return EventuallyPeriodicWord((int(c) for c in pre), (int(c) for c in per))


def parse_finite_word(text: str) -> FiniteWord:
    return FiniteWord.from_text(text.strip())


def shift_word(w: EventuallyPeriodicWord, n: int) -> EventuallyPeriodicWord:
    if n < 0:
        raise ValueError("shift must be nonnegative")
    return w.shift(n)


def lex_compare(x: EventuallyPeriodicWord, y: EventuallyPeriodicWord) -> Ordering:
    return x.compare(y)


def word_metric(x: EventuallyPeriodicWord, y: EventuallyPeriodicWord) -> float:
    """D(x, y) = 2^(1 - m) with m the first disagreement, 0 when equal"""
    m = x.first_difference(y)
    if m is None:
        return 0.0
    return math.ldexp(1.0, 1 - m)


def complement(w: Word) -> Word:
    return w.complement()
