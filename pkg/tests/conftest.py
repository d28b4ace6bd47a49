"""
Shared fixtures: golden-ratio parameters, seeded parameter lists and word pairs
"""

import itertools
import random
from fractions import Fraction
from typing import List, Tuple

import pytest
from mpmath import mp

from betashift.admissibility import check_condition2, is_admissible
from betashift.classify import classify_shift
from betashift.density import recovered_params
from betashift.words import EventuallyPeriodicWord, parse_word
from models.shift_models import Params, ShiftStatus

PHI = "(1+sqrt(5))/2"
GOLDEN_ALPHA = "1 - (1+sqrt(5))/4"

Pair = Tuple[EventuallyPeriodicWord, EventuallyPeriodicWord]


@pytest.fixture
def golden() -> Params:
    """(φ, 1 − φ/2), where p = 1/2 and both invariants have period 3"""
    return Params.from_text(PHI, GOLDEN_ALPHA)


@pytest.fixture
def golden_greedy() -> Params:
    return Params.from_text(PHI, "0")


@pytest.fixture
def golden_pair():
    return parse_word("(011)"), parse_word("(100)")


@pytest.fixture
def full_shift_pair():
    return parse_word("0(1)"), parse_word("1(0)")


@pytest.fixture
def phi():
    with mp.workprec(256):
        return +mp.phi


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


def interior_params(rng: random.Random, count: int) -> List[Params]:
    """Rational interior parameters, α kept away from both boundary fibers"""
    result = []
    for _ in range(count):
        beta = Fraction(rng.randint(1050, 1950), 1000)
        alpha = (2 - beta) * Fraction(rng.randint(50, 950), 1000)
        result.append(Params.from_text(str(beta), str(alpha)))
    return result


@pytest.fixture
def random_params(rng) -> List[Params]:
    return interior_params(rng, 10)


@pytest.fixture
def make_params(rng):
    return lambda count: interior_params(rng, count)


def random_word(rng: random.Random, max_pre: int = 4, max_period: int = 5) -> EventuallyPeriodicWord:
    pre = [rng.randint(0, 1) for _ in range(rng.randint(0, max_pre))]
    period = [rng.randint(0, 1) for _ in range(rng.randint(1, max_period))]
    return EventuallyPeriodicWord(pre, period)


@pytest.fixture
def make_word(rng):
    return lambda: random_word(rng)


def _extremal_words(first: int, max_period: int) -> List[EventuallyPeriodicWord]:
    """Primitive periodic words that are the largest (first = 0) or smallest (first = 1)
    of their rotations starting with the same letter"""
    words = []
    for size in range(1, max_period + 1):
        for block in itertools.product((0, 1), repeat=size):
            if block[0] != first:
                continue
            word = EventuallyPeriodicWord.periodic(block)
            if len(word.period) != size:
                continue
            rotations = [r for r in word.orbit() if r.letter(0) == first]
            if word == (max(rotations) if first == 0 else min(rotations)):
                words.append(word)
    return words


@pytest.fixture(scope="session")
def candidate_pairs() -> List[Pair]:
    """Periodic pairs with periods ≤ 8 satisfying conditions (1) and (2), in seeded order"""
    pairs = [
        (lower, upper)
        for lower in _extremal_words(0, 8)
        for upper in _extremal_words(1, 8)
        if check_condition2(lower, upper)
    ]
    random.Random(8).shuffle(pairs)
    return pairs


@pytest.fixture(scope="session")
def admissible_pairs(candidate_pairs) -> List[Pair]:
    """Ten periodically admissible pairs, each read back as the kneading pair of its own (b, a)"""
    found: List[Pair] = []
    for lower, upper in candidate_pairs:
        if not is_admissible(lower, upper).periodically_admissible:
            continue
        result = classify_shift(recovered_params(lower, upper), max_len=64)
        if result.status is ShiftStatus.FINITE_TYPE:
            found.append(result.pair)
        if len(found) == 10:
            break
    return found
