"""
Approximation of (β, α) by parameters whose intermediate β-shift is of finite type

The kneading invariants are cut at an index n and completed to periodic words
ω′ ⪰ ω and ν′ ⪯ ν. The pair (ω′, ν′) determines a parameter (b, a): b is the
exponential growth rate of Ω(ω′, ν′), and a solves π_{b,a}(ω′) = p. The
invariants are then recomputed at (b, a), which either confirms the pair or
replaces it by the pair that (b, a) actually has. Larger n gives closer
parameters.
"""

import logging
import math
from typing import Any, Callable, Dict, Optional, Tuple, Union

from mpmath import iv, mp

from models.shift_models import Params, PeriodizationTrace, SftApproximation, Side, ValidationOutcome

from .admissibility import is_admissible
from .config import Settings
from .dynamics import check_domain, critical_point, detect_side, detect_kneading_period, expand, series_value
from .errors import (
    AlreadyPeriodic,
    BetaShiftError,
    CallbackExhausted,
    DomainError,
    InvariantViolation,
    NoProgress,
    PrecisionExhausted,
    ReductionFailed,
)
from .numeric import Computed, Quantity, Real, parse_quantity, with_precision, working_precision
from .subshift import build_automaton, forbidden_words, spectral_radius
from .words import EventuallyPeriodicWord, FiniteWord

logger = logging.getLogger(__name__)

Extend = Callable[[int], FiniteWord]
Source = Union[FiniteWord, EventuallyPeriodicWord]

# enclosure used to bracket b before the root refinement
_ROUGH_BITS = 128
_SCREEN_BITS = 64


def _ensure(prefix: FiniteWord, length: int, extend: Optional[Extend]) -> FiniteWord:
    if len(prefix) >= length:
        return prefix
    if extend is None:
        raise CallbackExhausted(f"need {length} digits, only {len(prefix)} available")
    longer = FiniteWord(extend(length))
    if len(longer) < length:
        raise CallbackExhausted(f"digit source returned {len(longer)} of {length} digits")
    return longer


def periodize_lower(word: Source, n: int, extend: Optional[Extend] = None) -> PeriodizationTrace:
    """Cut ω at n (ω_n = 0) and close it up into the periodic word ω′ = (ω_1 … ω_k)"""
    limit = None
    if isinstance(word, EventuallyPeriodicWord):
        if word.is_periodic:
            raise AlreadyPeriodic(f"{word} is already periodic")
        extend = extend or word.prefix
        # past this index the search repeats with the period
        limit = n + word.orbit_size + len(word.period) + 1
        word = word.prefix(n)
    if n < 3:
        raise DomainError("the cut index must be at least 3")
    prefix = _ensure(FiniteWord(word), n, extend)
    if prefix[0] != 0:
        raise DomainError("a lower kneading word starts with 0")
    if prefix[n - 1] != 0:
        raise DomainError(f"the lower word needs a 0 at the cut index {n}")
    j = next(j for j in range(1, n) if prefix[j:n] == prefix[: n - j])
    k = n
    while True:
        if limit is not None and k > limit:
            raise DomainError(f"no extension index exists past {n}")
        prefix = _ensure(prefix, k + 1, extend)
        if prefix[k] == 0 and prefix[k - j] == 1:
            break
        k += 1
    return PeriodizationTrace(
        side=Side.MINUS,
        n=n,
        j=j,
        k=k,
        prefix=prefix[: k + 1],
        result=EventuallyPeriodicWord.periodic(prefix[:k]),
    )


def periodize_upper(word: Source, n: int, extend: Optional[Extend] = None) -> PeriodizationTrace:
    """Mirror image of periodize_lower for ν (ν_n = 1), giving ν′ ⪯ ν"""
    flipped_extend = None
    if extend is not None:
        flipped_extend = lambda length: FiniteWord(extend(length)).complement()  # noqa: E731
    trace = periodize_lower(word.complement(), n, flipped_extend)
    return PeriodizationTrace(
        side=Side.PLUS,
        n=trace.n,
        j=trace.j,
        k=trace.k,
        prefix=trace.prefix.complement(),
        result=trace.result.complement(),
    )


def _series_mp(x, word: EventuallyPeriodicWord):
    m, size = len(word.preperiod), len(word.period)
    head = mp.fsum(x ** -k for k, letter in enumerate(word.preperiod, start=1) if letter)
    body = mp.fsum(x ** (size - k) for k, letter in enumerate(word.period, start=1) if letter)
    return head + x ** -m * body / (x ** size - 1)


def _gap(lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord) -> Callable:
    """x ↦ Σ (ν_k − ω_k) x^(−k); b is a root when (ω, ν) is the kneading pair of (b, a)"""
    return lambda x: _series_mp(x, upper) - _series_mp(x, lower)


def _certified_gap(x: Real, lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord, bits: int) -> Real:
    return series_value(x, upper, bits) - series_value(x, lower, bits)


def _refine_root(
    lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord, rough: Real, bits: int
) -> Optional[Real]:
    if rough.width == 0:
        return rough
    gap = _gap(lower, upper)
    with working_precision(bits + 32):
        lo, hi = rough.lower, rough.upper
        if gap(lo) * gap(hi) > 0:
            return None
        try:
            root = mp.findroot(gap, (lo, hi), solver="anderson")
        except (ValueError, ZeroDivisionError) as e:
            logger.debug("root refinement failed: %s", e)
            return None
        delta = mp.ldexp(1, -bits)
        left = _certified_gap(Real(iv.mpf(root - delta)), lower, upper, bits + 32)
        right = _certified_gap(Real(iv.mpf(root + delta)), lower, upper, bits + 32)
        changes = (left.certainly_less(0) and right.certainly_greater(0)) or (
            left.certainly_greater(0) and right.certainly_less(0)
        )
        if not changes:
            return None
        return Real.between(max(root - delta, lo), min(root + delta, hi))


def recover_beta(lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord, bits: int = 128) -> Real:
    """b = exp(entropy of Ω(ω′, ν′)) as an enclosure"""
    aut = build_automaton(lower, upper)
    if aut.is_empty:
        raise DomainError(f"Ω({lower}, {upper}) is empty")
    rough = spectral_radius(aut, min(bits, _ROUGH_BITS))
    if is_admissible(lower, upper).admissible:
        refined = _refine_root(lower, upper, rough, bits)
        if refined is not None:
            return refined
    logger.debug("spectral enclosure for b of (%s, %s) at %d bits", lower, upper, 2 * bits)
    return spectral_radius(aut, 2 * bits)


def recover_alpha(b: Real, lower: EventuallyPeriodicWord, bits: int = 128) -> Real:
    """a = 1 − b + b(b − 1) Σ ω′_k b^(−k), the solution of π_{b,a}(ω′) = p"""
    with working_precision(bits):
        a = 1 - b + b * (b - 1) * series_value(b, lower, bits)
        if a.certainly_less(0) or a.certainly_greater(2 - b):
            logger.warning("a = %s recovered from %s lies outside Δ", a.to_decimal(), lower)
        return a


def recovered_params(lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord) -> Params:
    """(b, a) of a pair as quantities that can be re-enclosed at any precision"""
    beta = Computed(f"b({lower}, {upper})", lambda bits: recover_beta(lower, upper, bits))
    alpha = Computed(f"a({lower}, {upper})", lambda bits: recover_alpha(beta.enclose(bits), lower, bits))
    return Params(beta=beta, alpha=alpha)


def _as_quantity(value: Union[Quantity, Real], label: str) -> Quantity:
    if isinstance(value, Quantity):
        return value
    return Computed(label, lambda bits: value)


def validate_pair(
    b: Union[Quantity, Real],
    a: Union[Quantity, Real],
    lower: EventuallyPeriodicWord,
    upper: EventuallyPeriodicWord,
    max_len: int = 512,
    bits: int = 128,
    cap: int = 4096,
) -> ValidationOutcome:
    """Recompute the kneading invariants at (b, a): confirm the pair or replace it"""
    target = Params(beta=_as_quantity(b, "b"), alpha=_as_quantity(a, "a"))
    check_domain(target, bits)
    detected = detect_kneading_period(target, max_len, bits, cap)
    if detected is None or not (detected[0].is_periodic and detected[1].is_periodic):
        raise ReductionFailed(f"kneading invariants at {target.describe()} are not periodic within {max_len}")
    if detected == (lower, upper):
        return ValidationOutcome(
            status="confirmed", pair=detected, b=target.beta.enclose(bits), a=target.alpha.enclose(bits)
        )
    new_lower, new_upper = detected
    if not is_admissible(new_lower, new_upper, bits).periodically_admissible:
        raise ReductionFailed(f"recomputed pair ({new_lower}, {new_upper}) is not periodically admissible")
    new_b = recover_beta(new_lower, new_upper, bits)
    new_a = recover_alpha(new_b, new_lower, bits)
    logger.info("pair (%s, %s) reduced to (%s, %s)", lower, upper, new_lower, new_upper)
    return ValidationOutcome(status="reduced", pair=detected, b=new_b, a=new_a)


def error_bound(beta: Real, err_beta: Real, n: int, bits: int = 128) -> Real:
    """4(b − β)/(β − 1)² + 6/(β^n (β − 1))"""
    with working_precision(bits):
        return 4 * err_beta / (beta - 1) ** 2 + 6 / (beta ** n * (beta - 1))


class KneadingDigits:
    """Prefix of τ±(p), recomputed longer and at higher precision on demand"""

    def __init__(self, params: Params, side: Side, word: Optional[EventuallyPeriodicWord], settings: Settings):
        self.params = params
        self.side = side
        self.word = word
        self.settings = settings
        self.prefix = FiniteWord()
        self.log2_beta = math.log2(float(params.beta.enclose(64)))

    def __call__(self, length: int) -> FiniteWord:
        if self.word is not None:
            return self.word.prefix(length)
        if len(self.prefix) < length:
            target = max(length, 2 * len(self.prefix), 32)
            start = max(self.settings.bits, int(target * self.log2_beta) + 96)
            if start > self.settings.precision_cap:
                raise CallbackExhausted(f"{target} digits need more than {self.settings.precision_cap} bits")
            try:
                self.prefix = with_precision(self._compute(target), start, self.settings.precision_cap)
            except PrecisionExhausted as e:
                raise CallbackExhausted(f"cannot extend the kneading prefix to {target} digits") from e
        return self.prefix[:length]

    def _compute(self, length: int) -> Callable[[int], FiniteWord]:
        return lambda bits: expand(self.params, critical_point(self.params, bits), length, self.side, bits)

    def first_index(self, start: int, letter: int) -> int:
        """Smallest 1-based n ≥ start with digit n equal to ``letter``"""
        n = start
        while self(n)[n - 1] != letter:
            n += 1
        return n


def _screen_estimate(lower: EventuallyPeriodicWord, upper: EventuallyPeriodicWord, beta: float) -> Optional[Tuple[float, float]]:
    """Floating estimate of (b, a) by a secant search from β"""
    with working_precision(_SCREEN_BITS):
        try:
            root = mp.findroot(_gap(lower, upper), mp.mpf(beta), solver="secant")
        except (ValueError, ZeroDivisionError, TypeError):
            return None
        if not isinstance(root, mp.mpf) or not (1 < root < 2):
            return None
        a = 1 - root + root * (root - 1) * _series_mp(root, lower)
        return float(root), float(a)


class DensityPipeline:
    """Finds a finite-type parameter within ε of an interior (β, α)"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or Settings()

    def approximate(self, params: Params, epsilon: Union[str, Quantity]) -> SftApproximation:
        """Run the cut scan and return the first certified approximation"""
        eps = epsilon if isinstance(epsilon, Quantity) else parse_quantity(str(epsilon))
        state: Dict[str, Any] = {
            "params": params,
            "epsilon": eps,
            "words": {},
            "digits": {},
            "cut": 3,
            "tried": set(),
            "traces": {},
            "pair": None,
            "result": None,
        }

        try:
            # Step 1: Check the parameter and tolerance
            self._check_input(state)

            # Step 2: Detect periodic kneading invariants
            self._detect_invariants(state)
            if self._is_finite_type(state):
                return self._create_exact_result(state)

            # Step 3: Scan cut indices
            while state["cut"] <= self.settings.max_cut:
                # Step 4: Periodize the non-periodic invariants
                if self._periodize(state):
                    # Step 5: Cheap floating screen
                    if self._screen(state):
                        # Step 6: Certify (b, a), validate and build the certificate
                        if self._certify(state):
                            return state["result"]
                state["cut"] += 1

            raise NoProgress(f"no approximation within {eps.describe()} up to cut {self.settings.max_cut}")

        except BetaShiftError as e:
            logger.error("approximation of %s failed: %s", params.describe(), e)
            raise

    def _check_input(self, state: Dict[str, Any]):
        """Interior parameters and a positive tolerance only"""
        params = state["params"]
        check_domain(params, self.settings.bits)
        if not params.is_interior:
            raise DomainError(f"{params.describe()} lies on the boundary; classify it instead")
        eps = state["epsilon"].enclose(self.settings.bits)
        if not eps.certainly_greater(0):
            raise DomainError("the tolerance must be positive")
        state["eps"] = eps
        state["eps_float"] = float(eps)
        beta, alpha = params.enclose(self.settings.bits)
        state["beta_float"], state["alpha_float"] = float(beta), float(alpha)

    def _detect_invariants(self, state: Dict[str, Any]):
        """Periodic sides are kept as they are"""
        params, s = state["params"], self.settings
        for side in (Side.MINUS, Side.PLUS):
            word = detect_side(params, side, s.max_len, s.bits, s.precision_cap)
            state["words"][side] = word
            state["digits"][side] = KneadingDigits(params, side, word, s)
        logger.info("invariants of %s: lower %s, upper %s", params.describe(), *state["words"].values())

    def _is_finite_type(self, state: Dict[str, Any]) -> bool:
        lower, upper = state["words"][Side.MINUS], state["words"][Side.PLUS]
        if lower is None or upper is None or not (lower.is_periodic and upper.is_periodic):
            return False
        if not is_admissible(lower, upper, self.settings.bits).periodically_admissible:
            raise InvariantViolation(f"detected periodic pair ({lower}, {upper}) is not admissible")
        return True

    def _create_exact_result(self, state: Dict[str, Any]) -> SftApproximation:
        params, bits = state["params"], self.settings.bits
        lower, upper = state["words"][Side.MINUS], state["words"][Side.PLUS]
        beta, alpha = params.enclose(bits)
        return SftApproximation(
            source=params,
            epsilon=state["epsilon"].describe(),
            target_b=beta,
            target_a=alpha,
            pair=(lower, upper),
            certificate=forbidden_words(build_automaton(lower, upper), bits),
            err_beta=Real.exact(0),
            err_alpha=Real.exact(0),
            n_used=0,
        )

    def _periodize(self, state: Dict[str, Any]) -> bool:
        """Periodize at the first valid indices from the current cut; False for a repeated cut"""
        cut = state["cut"]
        traces: Dict[Side, Optional[PeriodizationTrace]] = {}
        for side in (Side.MINUS, Side.PLUS):
            word = state["words"][side]
            if word is not None and word.is_periodic:
                traces[side] = None
                continue
            digits = state["digits"][side]
            n = digits.first_index(cut, 0 if side is Side.MINUS else 1)
            source = word if word is not None else digits(n)
            periodize = periodize_lower if side is Side.MINUS else periodize_upper
            traces[side] = periodize(source, n, digits)
        key = tuple(t.n if t else None for t in traces.values())
        if key in state["tried"]:
            return False
        state["tried"].add(key)
        state["traces"] = traces
        state["pair"] = tuple(
            traces[side].result if traces[side] else state["words"][side] for side in (Side.MINUS, Side.PLUS)
        )
        return True

    def _screen(self, state: Dict[str, Any]) -> bool:
        lower, upper = state["pair"]
        estimate = _screen_estimate(lower, upper, state["beta_float"])
        if estimate is None:
            logger.debug("cut %d: no floating root for (%s, %s)", state["cut"], lower, upper)
            return False
        b, a = estimate
        eps = state["eps_float"]
        if abs(b - state["beta_float"]) < eps and abs(a - state["alpha_float"]) < eps:
            return True
        logger.debug("cut %d: estimate (%.6g, %.6g) outside tolerance", state["cut"], b, a)
        return False

    def _enclose_target(self, target: Params, eps: Real) -> Tuple[Real, Real, int]:
        """(b, a) at the first precision where both enclosures are narrower than ε/10"""
        bits = self.settings.bits
        while True:
            b, a = target.enclose(bits)
            limit = eps / 10
            if b.width < limit.lower and a.width < limit.lower:
                return b, a, bits
            if bits >= self.settings.precision_cap:
                raise PrecisionExhausted(f"(b, a) enclosures stay wider than ε/10 at {bits} bits", bits)
            bits = min(2 * bits, self.settings.precision_cap)

    def _certify(self, state: Dict[str, Any]) -> bool:
        params, s = state["params"], self.settings
        lower, upper = state["pair"]
        target = recovered_params(lower, upper)
        try:
            check_domain(target, s.bits)
        except DomainError as e:
            logger.debug("cut %d: recovered parameter rejected: %s", state["cut"], e)
            return False
        b, a = target.enclose(s.bits)
        with working_precision(s.bits):
            interior = a.certainly_greater(0) and a.certainly_less(2 - b)
        if not interior:
            logger.debug("cut %d: recovered a is not interior", state["cut"])
            return False
        b, a, bits = self._enclose_target(target, state["eps"])

        try:
            outcome = validate_pair(target.beta, target.alpha, lower, upper, s.max_len, bits, s.precision_cap)
        except ReductionFailed as e:
            logger.warning("cut %d: %s", state["cut"], e)
            return False
        if outcome.status == "reduced":
            lower, upper = outcome.pair
            b, a = outcome.b, outcome.a
        logger.info("cut %d: pair (%s, %s) %s", state["cut"], lower, upper, outcome.status)

        beta, alpha = params.enclose(bits)
        with working_precision(bits):
            err_beta = b - beta
            err_alpha = abs(a - alpha)
        if err_beta.certainly_less(0):
            raise InvariantViolation(f"b = {b!r} lies below β for the pair ({lower}, {upper})")
        if not (err_beta.certainly_less(state["eps"]) and err_alpha.certainly_less(state["eps"])):
            logger.debug("cut %d: errors %r, %r exceed the tolerance", state["cut"], err_beta, err_alpha)
            return False

        traces = state["traces"]
        n_used = min(t.n for t in traces.values() if t is not None)
        bound = error_bound(beta, Real.between(0, err_beta.upper), n_used, bits)
        if err_alpha.certainly_greater(bound):
            raise InvariantViolation(f"|α − a| = {err_alpha!r} exceeds the bound {bound!r} at n = {n_used}")

        state["result"] = SftApproximation(
            source=params,
            epsilon=state["epsilon"].describe(),
            target_b=b,
            target_a=a,
            pair=(lower, upper),
            certificate=forbidden_words(build_automaton(lower, upper), bits),
            err_beta=err_beta,
            err_alpha=err_alpha,
            error_bound=bound,
            n_used=n_used,
            reduced=outcome.status == "reduced",
            lower_trace=traces[Side.MINUS],
            upper_trace=traces[Side.PLUS],
        )
        logger.info("approximation found at n = %d: b = %s, a = %s", n_used, b.to_decimal(), a.to_decimal())
        return True


def approximate_sft(params: Params, epsilon: Union[str, Quantity], settings: Optional[Settings] = None) -> SftApproximation:
    return DensityPipeline(settings).approximate(params, epsilon)
