"""
The language of Ω(ω, ν): counting, automata, entropy and forbidden words

Ω(ω, ν) = Ω+(ω, ν) ∪ Ω−(ω, ν) is cut out by lexicographic bounds on every
shift: a shift starting with 0 lies between σ(ν) and ω, a shift starting with
1 lies between ν and σ(ω). The automaton reads a word left to right and keeps
only the tightest pending upper and lower bound, which is a tail of ω or ν.
Both words are eventually periodic, so there are finitely many tails and the
automaton is finite.
"""

import logging
import math
from collections import deque
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple

import numpy as np
from mpmath import iv, mp

from models.shift_models import SftCertificate

from .errors import EscalationFailed, PrecisionExhausted
from .numeric import Real, working_precision
from .words import EventuallyPeriodicWord, FiniteWord

logger = logging.getLogger(__name__)

_DEAD = -1
_MAX_REFINE_STEPS = 64

State = Tuple[Optional[int], Optional[int]]


class TailTable:
    """Distinct shifts of a set of words, with successor links and lexicographic rank"""

    def __init__(self, words: Sequence[EventuallyPeriodicWord]):
        self.words: List[EventuallyPeriodicWord] = []
        self.index: Dict[EventuallyPeriodicWord, int] = {}
        for word in words:
            for tail in word.orbit():
                if tail not in self.index:
                    self.index[tail] = len(self.words)
                    self.words.append(tail)
        self.head = [t.letter(0) for t in self.words]
        self.next = [self.index[t.shift(1)] for t in self.words]
        bound = max(len(t.preperiod) for t in self.words) + math.lcm(*(len(t.period) for t in self.words))
        keys = [t.prefix_text(bound) for t in self.words]
        order = sorted(range(len(self.words)), key=keys.__getitem__)
        self.rank = [0] * len(self.words)
        for r, i in enumerate(order):
            self.rank[i] = r

    def __len__(self) -> int:
        return len(self.words)

    def id(self, word: EventuallyPeriodicWord) -> int:
        return self.index[word]

    def advance(self, tail: int, steps: int) -> int:
        for _ in range(steps):
            tail = self.next[tail]
        return tail

    def compare(self, a: int, b: int) -> int:
        return (self.rank[a] > self.rank[b]) - (self.rank[a] < self.rank[b])


class SubshiftAutomaton:
    """Deterministic, trimmed automaton for the factor language of Ω(ω, ν)

    Every state is live. Words of the language are exactly the labels of
    paths leaving ``initial``; since the language is factorial and the
    automaton deterministic, path counts from ``initial`` are word counts.
    """

    def __init__(
        self,
        pair: Tuple[EventuallyPeriodicWord, EventuallyPeriodicWord],
        labels: List[State],
        transitions: Dict[Tuple[int, int], int],
        initial: Optional[int],
    ):
        self.pair = pair
        self.labels = labels
        self.transitions = transitions
        self.initial = initial

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def is_empty(self) -> bool:
        return self.initial is None

    def successor(self, state: int, bit: int) -> Optional[int]:
        return self.transitions.get((state, bit))

    def successors(self, state: int) -> List[int]:
        return [t for t in (self.successor(state, 0), self.successor(state, 1)) if t is not None]

    @property
    def adjacency(self) -> np.ndarray:
        matrix = np.zeros((self.size, self.size), dtype=np.int64)
        for (source, _), target in self.transitions.items():
            matrix[source, target] += 1
        return matrix

    def accepts(self, word: Iterable[int]) -> bool:
        state = self.initial
        if state is None:
            return False
        for bit in word:
            state = self.successor(state, bit)
            if state is None:
                return False
        return True


def _trim(count: int, successors: Callable[[int], List[int]]) -> Set[int]:
    """States from which an infinite path starts"""
    preds: List[List[int]] = [[] for _ in range(count)]
    outdeg = [0] * count
    for s in range(count):
        targets = successors(s)
        outdeg[s] = len(targets)
        for t in targets:
            preds[t].append(s)
    queue = deque(s for s in range(count) if outdeg[s] == 0)
    dead = set(queue)
    while queue:
        s = queue.popleft()
        for p in preds[s]:
            outdeg[p] -= 1
            if outdeg[p] == 0 and p not in dead:
                dead.add(p)
                queue.append(p)
    return set(range(count)) - dead


def build_automaton(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord) -> SubshiftAutomaton:
    """Automaton for Ω(ω, ν) tracking the tightest pending bounds"""
    table = TailTable([omega, nu])
    # bounds opened by a letter: (upper, lower)
    fresh = {
        0: (table.id(omega), table.id(nu.shift(1))),
        1: (table.id(omega.shift(1)), table.id(nu)),
    }

    def advance(bound: Optional[int], bit: int, upper: bool) -> Optional[int]:
        if bound is None:
            return None
        head = table.head[bound]
        if bit == head:
            return table.next[bound]
        if (bit > head) == upper:
            return _DEAD
        return None

    def tighter(a: Optional[int], b: Optional[int], upper: bool) -> Optional[int]:
        if a is None:
            return b
        if b is None:
            return a
        if upper:
            return a if table.rank[a] <= table.rank[b] else b
        return a if table.rank[a] >= table.rank[b] else b

    def step(state: State, bit: int) -> Optional[State]:
        u, l = state
        fu, fl = fresh[bit]
        moved = (
            advance(u, bit, True),
            advance(l, bit, False),
            advance(fu, bit, True),
            advance(fl, bit, False),
        )
        if _DEAD in moved:
            return None
        return tighter(moved[0], moved[2], True), tighter(moved[1], moved[3], False)

    start: State = (None, None)
    labels: List[State] = [start]
    index: Dict[State, int] = {start: 0}
    raw: Dict[Tuple[int, int], int] = {}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for bit in (0, 1):
            target = step(state, bit)
            if target is None:
                continue
            if target not in index:
                index[target] = len(labels)
                labels.append(target)
                queue.append(target)
            raw[(index[state], bit)] = index[target]

    live = _trim(len(labels), lambda s: [raw[(s, b)] for b in (0, 1) if (s, b) in raw])
    if 0 not in live:
        logger.debug("Ω(%s, %s) is empty", omega, nu)
        return SubshiftAutomaton((omega, nu), [], {}, None)

    # renumber live states in breadth-first order from the start state
    order: List[int] = [0]
    seen = {0}
    for s in order:
        for bit in (0, 1):
            t = raw.get((s, bit))
            if t is not None and t in live and t not in seen:
                seen.add(t)
                order.append(t)
    renumber = {old: new for new, old in enumerate(order)}
    transitions = {
        (renumber[s], bit): renumber[t]
        for (s, bit), t in raw.items()
        if s in renumber and t in renumber
    }
    logger.debug("automaton for (%s, %s): %d states", omega, nu, len(order))
    return SubshiftAutomaton((omega, nu), [labels[s] for s in order], transitions, 0)


def count_words_matrix(aut: SubshiftAutomaton, n: int) -> int:
    """|Ω|_n as the number of length-n paths from the initial state"""
    if aut.is_empty:
        return 0
    counts = [1] * aut.size
    rows = [aut.successors(s) for s in range(aut.size)]
    for _ in range(n):
        counts = [sum(counts[t] for t in row) for row in rows]
    return counts[aut.initial]


class _LiteralLanguage:
    """Ω(ω, ν) decided straight from the two-interval definition of Ω±"""

    def __init__(self, omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, length: int):
        self.table = TailTable([omega, nu])
        t = self.table
        self.bounds = {
            "w": t.id(omega),
            "sw": t.id(omega.shift(1)),
            "n": t.id(nu),
            "sn": t.id(nu.shift(1)),
        }
        self.text = {key: t.words[i].prefix_text(length) for key, i in self.bounds.items()}
        self.shifted = {
            key: [t.advance(i, m) for m in range(length + 1)] for key, i in self.bounds.items()
        }
        self.tail_ok = {
            side: [self._tail_member(i, side) for i in range(len(t))] for side in ("plus", "minus")
        }

    @staticmethod
    def _inside(c: Dict[str, int], side: str) -> bool:
        if side == "plus":
            return (c["sn"] >= 0 and c["w"] < 0) or (c["n"] >= 0 and c["sw"] <= 0)
        return (c["sn"] >= 0 and c["w"] <= 0) or (c["n"] > 0 and c["sw"] <= 0)

    def _tail_member(self, tail: int, side: str) -> bool:
        seen = set()
        while tail not in seen:
            seen.add(tail)
            c = {key: self.table.compare(tail, i) for key, i in self.bounds.items()}
            if not self._inside(c, side):
                return False
            tail = self.table.next[tail]
        return True

    def _compare(self, segment: str, tail: int, key: str) -> int:
        bound = self.text[key][: len(segment)]
        if segment < bound:
            return -1
        if segment > bound:
            return 1
        return self.table.compare(tail, self.shifted[key][len(segment)])

    def member(self, word: str, tail: int, side: str) -> bool:
        """Is word·tail in Ω±"""
        if not self.tail_ok[side][tail]:
            return False
        for i in range(len(word)):
            segment = word[i:]
            c = {key: self._compare(segment, tail, key) for key in self.bounds}
            if not self._inside(c, side):
                return False
        return True

    def prefix_compatible(self, word: str) -> bool:
        """Necessary condition: every suffix fits a closed interval on its own length"""
        for i in range(len(word)):
            s = word[i:]
            m = len(s)
            low0, high0 = self.text["sn"][:m], self.text["w"][:m]
            low1, high1 = self.text["n"][:m], self.text["sw"][:m]
            if not (low0 <= s <= high0 or low1 <= s <= high1):
                return False
        return True

    def extendable(self, word: str) -> bool:
        return any(
            self.member(word, tail, side)
            for tail in range(len(self.table))
            for side in ("plus", "minus")
        )


def factors_bruteforce(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, n: int) -> List[str]:
    """All length-n factors of Ω(ω, ν), completed by tails of ω and ν"""
    if n == 0:
        return [""]
    language = _LiteralLanguage(omega, nu, n)
    found: List[str] = []
    stack = [""]
    while stack:
        word = stack.pop()
        if len(word) == n:
            if language.extendable(word):
                found.append(word)
            continue
        for bit in "10":
            candidate = word + bit
            if language.prefix_compatible(candidate):
                stack.append(candidate)
    return sorted(found)


def count_words_bruteforce(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, n: int) -> int:
    """Exponential reference count of |Ω(ω, ν)|_n"""
    return len(factors_bruteforce(omega, nu, n))


def strongly_connected_components(count: int, successors: Callable[[int], List[int]]) -> List[List[int]]:
    """Tarjan's algorithm, iterative"""
    index: Dict[int, int] = {}
    low: Dict[int, int] = {}
    on_stack: Set[int] = set()
    stack: List[int] = []
    components: List[List[int]] = []
    counter = 0
    for root in range(count):
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(successors(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))
    return components


def _perron_estimate(rows: List[List[int]]) -> Tuple[float, np.ndarray]:
    """Floating Perron root and a positive start vector"""
    size = len(rows)
    dense = np.zeros((size, size))
    for i, row in enumerate(rows):
        for j in row:
            dense[i, j] += 1.0
    values, vectors = np.linalg.eig(dense)
    k = int(np.argmax(values.real))
    guess = np.abs(vectors[:, k].real)
    if not np.all(np.isfinite(guess)) or guess.max() <= 0:
        guess = np.ones(size)
    guess = guess / guess.max()
    return float(values[k].real), np.maximum(guess, 1e-12)


def _ratio_spread(rows: List[List[int]], x: List) -> Optional[mp.mpf]:
    if min(x) <= 0:
        return None
    ratios = [mp.fsum(x[j] for j in row) / x[i] for i, row in enumerate(rows)]
    return max(ratios) - min(ratios)


def _component_radius(rows: List[List[int]], bits: int) -> Real:
    """Collatz–Wielandt enclosure of the Perron root of one irreducible block, width at most 2^-(bits/2)"""
    if all(len(row) == 1 for row in rows):
        return Real.exact(1)
    if len(rows) == 1:
        return Real.exact(len(rows[0]))
    value, guess = _perron_estimate(rows)
    size = len(rows)
    with working_precision(bits + 32):
        target = mp.ldexp(1, -(bits // 2) - 2)
        # inverse iteration with a fixed shift just above the floating root
        shifted = mp.zeros(size, size)
        for i, row in enumerate(rows):
            for j in row:
                shifted[i, j] += 1
            shifted[i, i] -= mp.mpf(value) * (1 + mp.ldexp(1, -30))
        try:
            lu, perm = mp.LU_decomp(shifted)
        except ZeroDivisionError as e:
            raise PrecisionExhausted(f"shifted matrix is singular at {bits} bits", bits) from e
        x = [mp.mpf(float(g)) for g in guess]
        for _ in range(_MAX_REFINE_STEPS):
            spread = _ratio_spread(rows, x)
            if spread is not None and spread <= target:
                break
            solved = mp.U_solve(lu, mp.L_solve(lu, mp.matrix(x), perm))
            y = [solved[i] for i in range(size)]
            top = max(y, key=abs)
            x = [v / top for v in y]
        else:
            raise PrecisionExhausted(
                f"Perron vector of a {size}-state block not resolved to 2^-{bits // 2} after {_MAX_REFINE_STEPS} steps",
                bits,
            )
        lows, highs = [], []
        for i, row in enumerate(rows):
            total = iv.mpf(0)
            for j in row:
                total = total + iv.mpf(x[j])
            ratio = Real(total / iv.mpf(x[i]))
            lows.append(ratio.lower)
            highs.append(ratio.upper)
        return Real.between(min(lows), max(highs))


def spectral_radius(aut: SubshiftAutomaton, bits: int = 128) -> Real:
    """Perron eigenvalue of the adjacency matrix as a rigorous enclosure"""
    if aut.is_empty:
        return Real.exact(0)
    best: Optional[Real] = None
    for component in strongly_connected_components(aut.size, aut.successors):
        local = {s: i for i, s in enumerate(component)}
        rows = [[local[t] for t in aut.successors(s) if t in local] for s in component]
        if not any(rows):
            continue
        radius = _component_radius(rows, bits)
        if best is None:
            best = radius
        else:
            best = Real.between(max(best.lower, radius.lower), max(best.upper, radius.upper))
    return best if best is not None else Real.exact(0)


def has_positive_entropy(aut: SubshiftAutomaton) -> bool:
    """Exact test: some strongly connected block is more than a single cycle"""
    if aut.is_empty:
        return False
    for component in strongly_connected_components(aut.size, aut.successors):
        members = set(component)
        rows = [[t for t in aut.successors(s) if t in members] for s in component]
        if any(rows) and not all(len(row) == 1 for row in rows):
            return True
    return False


def entropy(aut: SubshiftAutomaton, bits: int = 128) -> Real:
    """Topological entropy ln ρ, or exactly 0 when the language grows subexponentially"""
    if not has_positive_entropy(aut):
        return Real.exact(0)
    with working_precision(bits):
        return spectral_radius(aut, bits).ln()


def _candidate_forbidden(omega: EventuallyPeriodicWord, nu: EventuallyPeriodicWord, max_len: int) -> Set[FiniteWord]:
    """Words that break one bound exactly at their last letter"""
    rules = [
        (0, omega, True),
        (0, nu.shift(1), False),
        (1, nu, False),
        (1, omega.shift(1), True),
    ]
    found: Set[FiniteWord] = set()
    for start, bound, upper in rules:
        head = bound.letter(0)
        if (start > head) == upper and start != head:
            found.add(FiniteWord((start,)))
            continue
        if start != head:
            continue
        for length in range(1, max_len):
            nxt = bound.letter(length)
            if upper and nxt == 0:
                found.add(bound.prefix(length) + (1,))
            elif not upper and nxt == 1:
                found.add(bound.prefix(length) + (0,))
    return found


def minimal_forbidden_words(aut: SubshiftAutomaton, max_len: int) -> List[FiniteWord]:
    """Minimal forbidden words of length at most ``max_len``"""
    omega, nu = aut.pair
    forbidden = [
        w
        for w in _candidate_forbidden(omega, nu, max_len)
        if not aut.accepts(w) and aut.accepts(w[1:]) and aut.accepts(w[:-1])
    ]
    return sorted(forbidden, key=lambda w: (len(w), str(w)))


class _Avoider:
    """Aho–Corasick automaton for words avoiding a finite set"""

    def __init__(self, forbidden: Sequence[FiniteWord]):
        self.children: List[Dict[int, int]] = [{}]
        bad = [False]
        for word in forbidden:
            node = 0
            for bit in word:
                if bit not in self.children[node]:
                    self.children[node][bit] = len(self.children)
                    self.children.append({})
                    bad.append(False)
                node = self.children[node][bit]
            bad[node] = True
        size = len(self.children)
        self.delta = [[0, 0] for _ in range(size)]
        fail = [0] * size
        queue = deque()
        for bit in (0, 1):
            child = self.children[0].get(bit)
            if child is None:
                self.delta[0][bit] = 0
            else:
                self.delta[0][bit] = child
                queue.append(child)
        while queue:
            node = queue.popleft()
            bad[node] = bad[node] or bad[fail[node]]
            for bit in (0, 1):
                child = self.children[node].get(bit)
                if child is None:
                    self.delta[node][bit] = self.delta[fail[node]][bit]
                else:
                    fail[child] = self.delta[fail[node]][bit]
                    self.delta[node][bit] = child
                    queue.append(child)
        self.bad = bad
        good = [s for s in range(size) if not bad[s]]
        self.live = _trim(size, lambda s: [] if bad[s] else [t for t in self.delta[s] if not bad[t]])
        self.live &= set(good)

    def successor(self, node: int, bit: int) -> Optional[int]:
        target = self.delta[node][bit]
        return target if target in self.live else None


def verify_certificate(aut: SubshiftAutomaton, forbidden: Sequence[FiniteWord]) -> bool:
    """Exact equality of the factor languages of Ω(ω, ν) and of the shift avoiding ``forbidden``"""
    avoider = _Avoider(forbidden)
    if aut.is_empty or 0 not in avoider.live:
        return aut.is_empty and 0 not in avoider.live
    seen = {(aut.initial, 0)}
    queue = deque(seen)
    while queue:
        q, r = queue.popleft()
        for bit in (0, 1):
            a = aut.successor(q, bit)
            b = avoider.successor(r, bit)
            if (a is None) != (b is None):
                return False
            if a is not None and (a, b) not in seen:
                seen.add((a, b))
                queue.append((a, b))
    return True


def forbidden_words(aut: SubshiftAutomaton, bits: int = 128) -> SftCertificate:
    """Certificate of finite type: minimal forbidden words, memory and entropy

    The memory bound starts at one more than the longest orbit of the pair and
    grows until the forbidden words reproduce the language exactly.
    """
    omega, nu = aut.pair
    if not has_positive_entropy(aut):
        raise EscalationFailed(f"Ω({omega}, {nu}) has zero entropy and gets no certificate")
    p, q = omega.orbit_size, nu.orbit_size
    length = max(p, q) + 1
    cap = 4 * (p + q)
    while length <= cap:
        forbidden = minimal_forbidden_words(aut, length)
        if verify_certificate(aut, forbidden):
            memory = max((len(w) for w in forbidden), default=0)
            logger.info("Ω(%s, %s) is of finite type with %d forbidden words", omega, nu, len(forbidden))
            return SftCertificate(
                pair=(omega, nu),
                forbidden=forbidden,
                memory=memory,
                entropy=entropy(aut, bits),
            )
        length += 1
    raise EscalationFailed(f"no forbidden-word set of length <= {cap} describes Ω({omega}, {nu})")
