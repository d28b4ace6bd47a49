"""
Admissibility of kneading pairs

A pair (ω, ν) is admissible when it satisfies four conditions: it starts with
the right letters, each word lies in its own Ω∓ set, the joint language grows
exponentially, and the pair is not a nontrivial two-block recoding of a
smaller admissible pair. Admissible pairs are exactly the kneading pairs of
intermediate β-shifts.
"""

import functools
import itertools
import logging
from typing import Iterator, List, Optional, Tuple

from models.shift_models import AdmissibilityReport, PrefixReport, Side

from .errors import DomainError
from .numeric import Real
from .subshift import build_automaton, entropy, has_positive_entropy
from .words import EventuallyPeriodicWord, FiniteWord

logger = logging.getLogger(__name__)

Witness = Tuple[FiniteWord, FiniteWord]


def member_omega(
    omega: EventuallyPeriodicWord,
    nu: EventuallyPeriodicWord,
    xi: EventuallyPeriodicWord,
    side: Side,
) -> bool:
    """Does every shift of ξ lie in the two-interval set Ω±(ω, ν)"""
    if not omega < nu:
        raise DomainError(f"Ω± needs ω ≺ ν, got ω={omega}, ν={nu}")
    side = Side(side)
    shifted_nu, shifted_omega = nu.shift(1), omega.shift(1)
    for eta in xi.orbit():
        if side is Side.PLUS:
            inside = (shifted_nu <= eta < omega) or (nu <= eta <= shifted_omega)
        else:
            inside = (shifted_nu <= eta <= omega) or (nu < eta <= shifted_omega)
        if not inside:
            return False
    return True


def check_condition1(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord) -> bool:
    return omega.letter(0) == 0 and nu.letter(0) == 1


def check_condition2(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord) -> bool:
    return member_omega(omega, nu, omega, Side.MINUS) and member_omega(omega, nu, nu, Side.PLUS)


def check_condition3(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, bits: int = 128) -> Tuple[bool, Real]:
    """Positive growth of |Ω(ω, ν)|_n, with the exact rate ln ρ"""
    aut = build_automaton(omega, nu)
    return has_positive_entropy(aut), entropy(aut, bits)


def _parses(word: EventuallyPeriodicWord, text: str, xi: str, zeta: str) -> bool:
    """Does ``word`` factor as an infinite concatenation of ξ and ζ blocks"""
    pre, per = len(word.preperiod), len(word.period)
    position = 0
    seen = set()
    while position not in seen:
        seen.add(position)
        block = xi if text[position] == "0" else zeta
        if text[position:position + len(block)] != block:
            return False
        position += len(block)
        if position >= pre:
            position = pre + (position - pre) % per
    return True


def _violates(
    omega: EventuallyPeriodicWord,
    nu: EventuallyPeriodicWord,
    texts: Tuple[str, str],
    xi: str,
    zeta: str,
) -> bool:
    if not (_parses(omega, texts[0], xi, zeta) and _parses(nu, texts[1], xi, zeta)):
        return False
    block_lower = EventuallyPeriodicWord.periodic(int(c) for c in xi)
    block_upper = EventuallyPeriodicWord.periodic(int(c) for c in zeta)
    if (block_lower, block_upper) == (omega, nu):
        return False
    if not block_lower < block_upper:
        return False
    return check_condition2(block_lower, block_upper)


def _block_bound(word: EventuallyPeriodicWord) -> int:
    return len(word.preperiod) + 2 * len(word.period)


def _length_pairs(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord) -> List[Tuple[int, int]]:
    pairs = itertools.product(range(3, _block_bound(omega) + 1), range(3, _block_bound(nu) + 1))
    return sorted(pairs, key=lambda lengths: (sum(lengths), lengths))


def _texts(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord) -> Tuple[str, str]:
    reach = max(_block_bound(omega), _block_bound(nu))
    return (
        omega.prefix_text(omega.orbit_size + reach),
        nu.prefix_text(nu.orbit_size + reach),
    )


def check_condition4(
    omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord
) -> Tuple[bool, Optional[Witness]]:
    """Search two-block recodings of (ω, ν) by blocks that are prefixes of ω and ν"""
    texts = _texts(omega, nu)
    for lx, lz in _length_pairs(omega, nu):
        xi, zeta = texts[0][:lx], texts[1][:lz]
        if not (xi.startswith("01") and zeta.startswith("10")):
            continue
        if _violates(omega, nu, texts, xi, zeta):
            logger.debug("condition (4) fails for (%s, %s) with blocks %s, %s", omega, nu, xi, zeta)
            return False, (FiniteWord.from_text(xi), FiniteWord.from_text(zeta))
    return True, None


def _all_blocks(head: str, length: int) -> Iterator[str]:
    for tail in itertools.product("01", repeat=length - 2):
        yield head + "".join(tail)


def check_condition4_exhaustive(
    omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord
) -> Tuple[bool, Optional[Witness]]:
    """Same decision over every block pair of bounded length; exponential"""
    texts = _texts(omega, nu)
    for lx, lz in _length_pairs(omega, nu):
        for xi in _all_blocks("01", lx):
            for zeta in _all_blocks("10", lz):
                if _violates(omega, nu, texts, xi, zeta):
                    return False, (FiniteWord.from_text(xi), FiniteWord.from_text(zeta))
    return True, None


@functools.lru_cache(maxsize=1024)
def is_admissible(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, bits: int = 128) -> AdmissibilityReport:
    """Evaluate all four conditions; later conditions need cond1"""
    cond1 = check_condition1(omega, nu)
    cond2 = cond3 = cond4 = False
    rate = Real.exact(0)
    witness = None
    if cond1:
        cond2 = check_condition2(omega, nu)
        cond3, rate = check_condition3(omega, nu, bits)
        cond4, witness = check_condition4(omega, nu)
    admissible = cond1 and cond2 and cond3 and cond4
    report = AdmissibilityReport(
        lower=omega,
        upper=nu,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        cond4=cond4,
        entropy=rate,
        witness=witness,
        admissible=admissible,
        periodically_admissible=admissible and omega.is_periodic and nu.is_periodic,
    )
    logger.debug("admissibility of (%s, %s): %s", omega, nu, [cond1, cond2, cond3, cond4])
    return report


def check_prefixes(lower: FiniteWord, upper: FiniteWord) -> PrefixReport:
    """Conditions (1) and (2) on finite prefixes; (2) can only be falsified"""
    if not lower or not upper:
        raise DomainError("prefixes must be nonempty")
    cond1 = lower[0] == 0 and upper[0] == 1
    length = min(len(lower), len(upper))
    if not cond1:
        return PrefixReport(length=length, cond1=False, cond2_not_falsified=False)
    low, up = str(lower), str(upper)

    def fits(segment: str) -> bool:
        if segment[0] == "0":
            floor, ceiling = up[1:], low
        else:
            floor, ceiling = up, low[1:]
        m = min(len(segment), len(floor))
        if segment[:m] < floor[:m]:
            return False
        m = min(len(segment), len(ceiling))
        return segment[:m] <= ceiling[:m]

    holds = all(fits(word[i:]) for word in (low, up) for i in range(len(word)))
    return PrefixReport(length=length, cond1=True, cond2_not_falsified=holds)
