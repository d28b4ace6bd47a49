import math
from fractions import Fraction

import pytest
from mpmath import mp

import betashift.density as density
from betashift.admissibility import is_admissible
from betashift.classify import classify_shift
from betashift.config import Settings
from betashift.density import (
    KneadingDigits,
    approximate_sft,
    error_bound,
    periodize_lower,
    periodize_upper,
    recover_alpha,
    recover_beta,
    recovered_params,
    validate_pair,
)
from betashift.dynamics import detect_invariant
from betashift.errors import AlreadyPeriodic, CallbackExhausted, DomainError, NoProgress, ReductionFailed
from betashift.numeric import Real, working_precision
from betashift.words import EventuallyPeriodicWord, FiniteWord, parse_word
from models.shift_models import Params, ShiftStatus, Side


def test_periodize_lower_hand_example():
    trace = periodize_lower(FiniteWord.from_text("011011010"), 7)
    assert (trace.n, trace.j, trace.k) == (7, 3, 8)
    assert trace.result == parse_word("(01101101)")
    assert trace.side is Side.MINUS
    assert trace.verify()


def test_periodize_upper_is_the_mirror_image():
    trace = periodize_upper(FiniteWord.from_text("100100101"), 7)
    assert (trace.j, trace.k) == (3, 8)
    assert trace.result == parse_word("(10010010)")
    assert trace.verify()


def test_periodize_rejects_bad_input():
    with pytest.raises(AlreadyPeriodic):
        periodize_lower(parse_word("(011)"), 4)
    with pytest.raises(AlreadyPeriodic):
        periodize_upper(parse_word("(100)"), 4)
    with pytest.raises(DomainError):
        periodize_lower(FiniteWord.from_text("0110110"), 6)
    with pytest.raises(DomainError):
        periodize_lower(FiniteWord.from_text("0110110"), 2)
    with pytest.raises(DomainError):
        periodize_lower(FiniteWord.from_text("1010110"), 4)


def test_periodize_asks_for_more_digits():
    short = FiniteWord.from_text("0110110")
    with pytest.raises(CallbackExhausted):
        periodize_lower(short, 7)
    longer = FiniteWord.from_text("011011010")
    trace = periodize_lower(short, 7, extend=lambda length: longer[:length])
    assert trace.k == 8


def test_periodize_fuzzed_eventually_periodic_words(rng):
    checked = 0
    while checked < 100:
        pre = [0] + [rng.randint(0, 1) for _ in range(rng.randint(0, 5))]
        per = [rng.randint(0, 1) for _ in range(rng.randint(1, 6))]
        word = EventuallyPeriodicWord(pre, per)
        if word.is_periodic:
            continue
        n = next((i for i in range(3, 40) if word.letter(i - 1) == 0), None)
        if n is None:
            continue
        try:
            trace = periodize_lower(word, n)
        except DomainError:
            continue
        assert trace.verify()
        k = trace.k
        assert trace.result.prefix(k + 1) == word.prefix(k + 1)
        upper = periodize_upper(word.complement(), n)
        assert upper.result == trace.result.complement()
        checked += 1


def test_recover_golden_parameters(golden_pair, phi):
    b = recover_beta(*golden_pair, 128)
    assert b.contains(phi)
    assert b.width < mp.mpf("1e-30")
    a = recover_alpha(b, golden_pair[0], 128)
    assert abs(float(a) - (1 - (1 + math.sqrt(5)) / 4)) < 1e-12


def test_recover_full_shift(full_shift_pair):
    b = recover_beta(*full_shift_pair)
    assert b.lower == 2 and b.upper == 2


def test_recover_alpha_degenerate_word(caplog):
    with working_precision(128):
        b = Real.exact(3) / 2
        assert recover_alpha(b, parse_word("(0)")).overlaps(1 - b)
    assert "outside Δ" in caplog.text


def test_recovered_params_reenclose(golden_pair):
    target = recovered_params(*golden_pair)
    assert target.beta.enclose(256).width < target.beta.enclose(128).width
    assert "(011)" in target.describe()


def test_golden_pair_is_confirmed(golden, golden_pair):
    outcome = validate_pair(golden.beta, golden.alpha, *golden_pair, max_len=64)
    assert outcome.status == "confirmed"
    assert outcome.pair == golden_pair


def test_pair_confirms_at_its_recovered_parameter(golden_pair):
    target = recovered_params(*golden_pair)
    outcome = validate_pair(target.beta, target.alpha, *golden_pair, max_len=64)
    assert outcome.status == "confirmed"


def test_error_bound_formula():
    with working_precision(128):
        beta = Real.exact(3) / 2
        bound = error_bound(beta, Real.exact(0), 10)
        expected = 6 / (1.5 ** 10 * 0.5)
        assert abs(float(bound) - expected) < 1e-12
        assert error_bound(beta, Real.exact(1) / 100, 10).certainly_greater(bound)


def test_kneading_digits_grow_on_demand(golden):
    digits = KneadingDigits(golden, Side.MINUS, None, Settings())
    assert str(digits(9)) == "011011011"
    assert str(digits(40))[:12] == "011011011011"
    assert digits.first_index(5, 0) == 7


def test_finite_type_input_is_echoed(golden, golden_pair):
    result = approximate_sft(golden, "1/100", Settings(max_len=64))
    assert result.pair == golden_pair
    assert result.n_used == 0
    assert result.err_beta.upper == 0 and result.err_alpha.upper == 0
    assert [str(w) for w in result.certificate.forbidden] == ["000", "111"]


def test_boundary_and_tolerance_are_checked(golden_greedy, golden):
    with pytest.raises(DomainError):
        approximate_sft(golden_greedy, "1/100")
    with pytest.raises(DomainError):
        approximate_sft(golden, "0")


@pytest.mark.parametrize("epsilon", ["1/100", "1/1000"])
def test_interior_points_are_approximated(make_params, epsilon):
    eps = float(Fraction(epsilon))
    for params in make_params(25):
        result = approximate_sft(params, epsilon, Settings(max_len=256))
        lower, upper = result.pair
        assert lower.is_periodic and upper.is_periodic
        assert is_admissible(lower, upper).periodically_admissible
        assert not result.err_beta.certainly_less(0)
        assert float(result.err_beta) < eps
        assert float(result.err_alpha) < eps
        if result.error_bound is not None:
            assert not result.err_alpha.certainly_greater(result.error_bound)
        for trace in (result.lower_trace, result.upper_trace):
            if trace is not None:
                assert trace.verify()
        target = recovered_params(lower, upper)
        assert classify_shift(target, max_len=256).status is ShiftStatus.FINITE_TYPE, params.describe()


def test_redundant_pair_reduces_to_the_golden_pair(golden_pair, phi):
    lower, upper = parse_word("(011011100)"), parse_word("(100011100)")
    target = recovered_params(lower, upper)
    outcome = validate_pair(target.beta, target.alpha, lower, upper, max_len=64)
    assert outcome.status == "reduced"
    assert outcome.pair == golden_pair
    assert outcome.b.contains(phi)
    assert abs(float(outcome.a) - (1 - (1 + math.sqrt(5)) / 4)) < 1e-12


def test_non_periodic_invariants_fail_the_reduction(monkeypatch, golden, golden_pair):
    monkeypatch.setattr(density, "detect_kneading_period", lambda *args, **kwargs: None)
    with pytest.raises(ReductionFailed):
        validate_pair(golden.beta, golden.alpha, *golden_pair, max_len=64)


def test_failed_reduction_is_never_certified(monkeypatch, caplog):
    def refuse(*args, **kwargs):
        raise ReductionFailed("rejected")

    monkeypatch.setattr(density, "validate_pair", refuse)
    with pytest.raises(NoProgress):
        approximate_sft(Params.from_text("1.8", "0.1"), "1/100", Settings(max_len=256, max_cut=40))
    assert "rejected" in caplog.text


@pytest.mark.parametrize("side", [Side.MINUS, Side.PLUS])
def test_periodize_real_kneading_prefixes(make_params, rng, side):
    periodize = periodize_lower if side is Side.MINUS else periodize_upper
    letter = 0 if side is Side.MINUS else 1
    for params in make_params(25):
        if detect_invariant(params, side, 64) is not None:
            continue
        digits = KneadingDigits(params, side, None, Settings())
        for _ in range(2):
            n = digits.first_index(rng.randint(3, 40), letter)
            trace = periodize(digits(n), n, digits)
            assert trace.verify()
            assert trace.result.prefix(trace.k + 1) == digits(trace.k + 1)
            produced, source = trace.result.prefix_text(200), str(digits(200))
            if side is Side.MINUS:
                assert produced > source
            else:
                assert produced < source
