import math
from fractions import Fraction

import pytest
from mpmath import mp

from betashift.dynamics import (
    apply_map,
    critical_point,
    detect_invariant,
    detect_kneading_period,
    expand,
    greedy_map,
    kneading,
    lazy_map,
    mirror_params,
    project,
    project_prefix,
)
from betashift.errors import DomainError, PrecisionExhausted
from betashift.numeric import Real, working_precision
from betashift.words import parse_word
from models.shift_models import Params, Side

GRID = [Fraction(2 * j + 1, 128) for j in range(64)]


def test_golden_critical_point_is_one_half(golden):
    p = critical_point(golden, 256)
    assert p.contains(mp.mpf(0.5))
    assert p.width < mp.mpf("1e-70")


def test_critical_point_on_the_boundary_fibers():
    beta = Fraction(17, 10)
    greedy = critical_point(Params.from_text("17/10", "0"))
    lazy = critical_point(Params.from_text("17/10", "3/10"))
    with working_precision(128):
        assert greedy.overlaps(Real.exact(1 / beta))
        assert lazy.overlaps(Real.exact((beta - 1) / beta))


def test_map_values_at_and_near_p(golden):
    p = critical_point(golden)
    assert apply_map(golden, p, Side.PLUS).contains(0)
    assert apply_map(golden, p, Side.MINUS).contains(1)
    beta, alpha = golden.enclose(128)
    with working_precision(128):
        assert apply_map(golden, 1, Side.MINUS).overlaps(beta / 2)
    assert apply_map(golden, 0, Side.PLUS).overlaps(alpha)


def test_golden_expansions(golden):
    p = critical_point(golden)
    assert str(expand(golden, p, 6, Side.MINUS)) == "011011"
    assert str(expand(golden, p, 6, Side.PLUS)) == "100100"


def test_first_two_kneading_letters(random_params):
    for params in random_params:
        pair = kneading(params, 2)
        assert str(pair.lower) == "01"
        assert str(pair.upper) == "10"


def test_kneading_prefixes(golden):
    pair = kneading(golden, 9)
    assert str(pair.lower) == "011011011"
    assert str(pair.upper) == "100100100"
    assert pair.computed_length == 9
    assert not pair.is_detected


def test_domain_is_checked():
    with pytest.raises(DomainError):
        kneading(Params.from_text("5/2", "0"), 4)
    with pytest.raises(DomainError):
        kneading(Params.from_text("3/2", "3/5"), 4)
    with pytest.raises(DomainError):
        expand(Params.from_text("3/2", "1/4"), "3/2", 4, Side.MINUS)
    with pytest.raises(DomainError):
        expand(Params.from_text("3/2", "1/4"), "1/2", 0, Side.MINUS)


def test_projection_identities(golden):
    beta, alpha = golden.enclose(128)
    with working_precision(128):
        base = alpha / (1 - beta)
        assert project(golden, parse_word("(0)")).overlaps(base)
        assert project(golden, parse_word("(1)")).overlaps(base + 1 / (beta - 1))
    assert project(golden, parse_word("(011)")).contains(mp.mpf(0.5))
    assert project(golden, parse_word("(100)")).contains(mp.mpf(0.5))


def test_golden_invariants_are_detected(golden):
    assert detect_kneading_period(golden, 64, 256) == (parse_word("(011)"), parse_word("(100)"))


def test_greedy_golden_invariants(golden_greedy):
    assert detect_invariant(golden_greedy, Side.MINUS, 16) == parse_word("(01)")
    assert detect_invariant(golden_greedy, Side.PLUS, 16) == parse_word("1(0)")


def test_no_claim_without_a_revisit():
    params = Params.from_text("1.7234871", "0")
    assert detect_invariant(params, Side.MINUS, 64) is None


def _digits_or_skip(params, x, n, side, bits=128):
    try:
        return expand(params, x, n, side, bits)
    except PrecisionExhausted:
        return None


def test_shift_conjugacy(make_params):
    for params in make_params(50):
        for x in GRID:
            for side in (Side.PLUS, Side.MINUS):
                digits = _digits_or_skip(params, str(x), 32, side)
                if digits is None:
                    continue
                image = apply_map(params, str(x), side)
                assert expand(params, image, 31, side) == digits[1:]


def test_projection_inverts_expansion(make_params):
    tolerance = mp.mpf("1e-20")
    for i, params in enumerate(make_params(50)):
        beta = float(params.beta.enclose(64))
        n = math.ceil(math.log(2e20 / (beta - 1)) / math.log(beta))
        for j, x in enumerate(GRID):
            side = Side.MINUS if (i + j) % 2 else Side.PLUS
            digits = _digits_or_skip(params, str(x), n, side, 256)
            if digits is None:
                continue
            value = project_prefix(params, digits, 256)
            with working_precision(256):
                assert abs(value - Real.exact(x)).upper <= tolerance

def test_expansion_is_monotone(random_params):
    params = random_params[0]
    words = [_digits_or_skip(params, str(x), 24, Side.MINUS) for x in GRID]
    texts = [str(w) for w in words if w is not None]
    assert texts == sorted(texts)


def test_mirror_symmetry(random_params):
    for params in random_params[:5]:
        mirrored = mirror_params(params)
        for x in GRID[1:-1:3]:
            lower = _digits_or_skip(params, str(x), 24, Side.MINUS)
            upper = _digits_or_skip(mirrored, str(1 - x), 24, Side.PLUS)
            if lower is None or upper is None:
                continue
            assert lower == upper.complement()


def test_boundary_maps_agree_off_p():
    beta = Real.exact(Fraction(17, 10))
    greedy = Params.from_text("17/10", "0")
    lazy = Params.from_text("17/10", "3/10")
    for x in GRID[1:]:
        point = Real.exact(x)
        assert apply_map(greedy, point, Side.PLUS).overlaps(greedy_map(beta, point))
        assert apply_map(lazy, point, Side.MINUS).overlaps(lazy_map(beta, point))
