import math

import numpy as np
import pytest
from mpmath import mp

import betashift.subshift as subshift
from betashift.config import Settings
from betashift.density import approximate_sft
from betashift.errors import EscalationFailed, PrecisionExhausted
from betashift.subshift import (
    SubshiftAutomaton,
    TailTable,
    build_automaton,
    count_words_bruteforce,
    count_words_matrix,
    entropy,
    factors_bruteforce,
    forbidden_words,
    has_positive_entropy,
    minimal_forbidden_words,
    spectral_radius,
    strongly_connected_components,
    verify_certificate,
)
from betashift.words import FiniteWord, parse_word
from models.shift_models import Params

GOLDEN_COUNTS = [2, 4, 6, 10, 16, 26, 42, 68, 110, 178, 288, 466, 754, 1220]


def _words(*texts):
    return [FiniteWord.from_text(t) for t in texts]


def test_golden_counts(golden_pair):
    aut = build_automaton(*golden_pair)
    assert [count_words_matrix(aut, n) for n in range(1, 15)] == GOLDEN_COUNTS


def test_bruteforce_matches_the_automaton(golden_pair, admissible_pairs):
    greedy_pair = (parse_word("(01)"), parse_word("1(0)"))
    assert len(admissible_pairs) >= 10
    for pair in [golden_pair, greedy_pair, *admissible_pairs]:
        aut = build_automaton(*pair)
        for n in range(1, 13):
            assert count_words_matrix(aut, n) == count_words_bruteforce(*pair, n), (pair, n)


def test_bruteforce_factors_of_the_golden_shift(golden_pair):
    assert factors_bruteforce(*golden_pair, 3) == ["001", "010", "011", "100", "101", "110"]
    assert factors_bruteforce(*golden_pair, 0) == [""]


def test_greedy_golden_shift_counts_fibonacci():
    aut = build_automaton(parse_word("(01)"), parse_word("1(0)"))
    assert [count_words_matrix(aut, n) for n in range(1, 6)] == [2, 3, 5, 8, 13]


def test_counts_are_submultiplicative(golden_pair, admissible_pairs):
    for pair in [golden_pair, *admissible_pairs]:
        aut = build_automaton(*pair)
        counts = {n: count_words_matrix(aut, n) for n in range(1, 15)}
        for m in range(1, 14):
            for n in range(1, 15 - m):
                assert counts[m + n] <= counts[m] * counts[n], (pair, m, n)


def test_entropy_sandwich(golden_pair):
    aut = build_automaton(*golden_pair)
    rate = float(entropy(aut))
    per_letter = math.log(count_words_matrix(aut, 14)) / 14
    assert per_letter >= rate
    assert per_letter - rate < 0.05


def test_entropy_sandwich_on_admissible_pairs(admissible_pairs):
    for pair in admissible_pairs:
        aut = build_automaton(*pair)
        rate = float(entropy(aut))
        rates = [math.log(count_words_matrix(aut, n)) / n for n in (7, 14, 28, 56, 112, 224)]
        assert all(r >= rate - 1e-12 for r in rates), pair
        assert all(later <= earlier + 1e-12 for earlier, later in zip(rates, rates[1:])), pair
        assert rates[-1] - rate < 0.05, pair


def test_golden_spectral_radius(golden_pair, phi):
    radius = spectral_radius(build_automaton(*golden_pair), 128)
    assert radius.contains(phi)
    assert radius.width < mp.mpf("1e-15")
    assert abs(float(entropy(build_automaton(*golden_pair))) - math.log((1 + math.sqrt(5)) / 2)) < 1e-10


def test_radius_width_on_admissible_pairs(admissible_pairs):
    for pair in admissible_pairs:
        radius = spectral_radius(build_automaton(*pair), 128)
        assert radius.width <= mp.ldexp(1, -64), pair
        assert radius.lower > 1


def test_radius_width_on_a_large_block():
    result = approximate_sft(Params.from_text("1.05", "0.7125"), "1/100", Settings(bits=192))
    aut = build_automaton(*result.pair)
    assert aut.size > 20
    radius = spectral_radius(aut, 192)
    assert radius.width <= mp.ldexp(1, -96)
    assert radius.overlaps(result.target_b)


def test_unresolved_radius_is_not_returned(monkeypatch, golden_pair):
    monkeypatch.setattr(subshift, "_MAX_REFINE_STEPS", 0)
    with pytest.raises(PrecisionExhausted):
        spectral_radius(build_automaton(*golden_pair), 128)


def test_golden_forbidden_words(golden_pair):
    certificate = forbidden_words(build_automaton(*golden_pair))
    assert [str(w) for w in certificate.forbidden] == ["000", "111"]
    assert certificate.memory == 3
    assert certificate.pair == golden_pair


def test_full_shift(full_shift_pair):
    aut = build_automaton(*full_shift_pair)
    assert aut.size == 2
    assert [count_words_matrix(aut, n) for n in range(1, 9)] == [2 ** n for n in range(1, 9)]
    radius = spectral_radius(aut)
    assert radius.lower == 2 and radius.upper == 2
    certificate = forbidden_words(aut)
    assert certificate.forbidden == []
    assert certificate.memory == 0
    assert abs(float(certificate.entropy) - math.log(2)) < 1e-15


def test_fixed_point_pair_is_empty():
    aut = build_automaton(parse_word("(0)"), parse_word("(1)"))
    assert aut.is_empty
    assert count_words_matrix(aut, 4) == 0
    assert not has_positive_entropy(aut)
    assert not aut.accepts(FiniteWord.from_text("0"))


def test_zero_entropy_pair():
    aut = build_automaton(parse_word("(01)"), parse_word("(10)"))
    assert not has_positive_entropy(aut)
    assert entropy(aut).upper == 0
    assert [count_words_matrix(aut, n) for n in (1, 4, 9)] == [2, 2, 2]


def test_single_loop_has_radius_one():
    w = parse_word("(0)")
    aut = SubshiftAutomaton((w, w), [(None, None)], {(0, 0): 0}, 0)
    radius = spectral_radius(aut)
    assert radius.lower == 1 and radius.upper == 1
    assert not has_positive_entropy(aut)


def test_adjacency_counts_edges(golden_pair):
    aut = build_automaton(*golden_pair)
    matrix = aut.adjacency
    assert matrix.shape == (aut.size, aut.size)
    assert int(matrix.sum()) == len(aut.transitions)
    assert set(np.unique(matrix)) <= {0, 1, 2}


def test_accepts_exactly_the_factors(golden_pair):
    aut = build_automaton(*golden_pair)
    assert aut.accepts(FiniteWord.from_text("0011011001"))
    assert not aut.accepts(FiniteWord.from_text("01110"))
    assert not aut.accepts(FiniteWord.from_text("1000"))


def test_certificate_verification(golden_pair):
    aut = build_automaton(*golden_pair)
    assert verify_certificate(aut, _words("000", "111"))
    assert not verify_certificate(aut, _words("000"))
    assert not verify_certificate(aut, _words("000", "111", "0101"))
    assert minimal_forbidden_words(aut, 6) == _words("000", "111")


def test_zero_entropy_languages_get_no_certificate():
    aut = build_automaton(parse_word("(01)"), parse_word("(10)"))
    with pytest.raises(EscalationFailed):
        forbidden_words(aut)


def test_tail_table_ranks_lexicographically():
    table = TailTable([parse_word("(011)"), parse_word("(100)")])
    assert len(table) == 6
    ordered = sorted(range(len(table)), key=table.rank.__getitem__)
    assert [str(table.words[i]) for i in ordered] == ["(001)", "(010)", "(011)", "(100)", "(101)", "(110)"]
    a, b = table.id(parse_word("(010)")), table.id(parse_word("(101)"))
    assert table.compare(a, b) == -1
    assert table.advance(a, 3) == a


def test_strongly_connected_components():
    edges = {0: [1], 1: [2], 2: [0, 3], 3: [3], 4: [0]}
    components = strongly_connected_components(5, edges.__getitem__)
    assert sorted(components) == [[0, 1, 2], [3], [4]]
