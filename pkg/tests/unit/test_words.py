import json
import random
from fractions import Fraction

import numpy as np
import pytest

from semicon.errors import BudgetExceededError, InputError, SpecError
from semicon.words import (Alphabet, ConstraintSpec, ForbiddenWord, Mode, Tolerance, admissible_fraction,
                           check_budget, cyclic_frequency_ddim, cyclic_subword_frequency, dk_rll_spec, dump_spec, enumerate_count,
                           interference_spec, is_reduced, load_spec, make_spec, member, member_ddim,
                           parse_rational, rll_spec, spec_digest, spec_from_dict, spec_to_dict,
                           subword_count, subword_frequency)

from . import TABLE1_WORD, count_no_run, random_word


def w(text):
    return tuple(int(c) for c in text)


class TestRationals:
    """Exact parsing of caps and tolerances."""

    def test_fraction_string(self):
        assert parse_rational("3/40") == Fraction(3, 40)

    def test_decimals_keep_power_of_ten_denominator(self):
        assert parse_rational("0.05") == Fraction(1, 20)
        assert parse_rational(0.05) == Fraction(1, 20)

    def test_garbage_is_rejected(self):
        with pytest.raises(InputError):
            parse_rational("one half")
        with pytest.raises(InputError):
            parse_rational("1/0")


class TestSubwordFrequency:
    """Linear, cyclic and D-dimensional frequencies."""

    def test_pattern_longer_than_word(self):
        assert subword_frequency(w("11"), w("0")) == 0

    def test_reference_word_ones_over_ten_windows(self):
        assert subword_frequency(w("1"), TABLE1_WORD[:10]) == Fraction(5, 10)

    def test_all_windows_match(self):
        assert subword_frequency(w("00"), w("0000")) == 1

    def test_symbols_outside_alphabet(self):
        with pytest.raises(InputError):
            subword_frequency(w("12"), w("0101"), Alphabet(2))

    def test_cyclic_examples(self):
        assert cyclic_subword_frequency(w("11"), w("10")) == 0
        assert cyclic_subword_frequency(w("11"), w("11")) == 1
        assert cyclic_subword_frequency(w("110"), w("1101")) == Fraction(1, 4)

    def test_cyclic_needs_nonempty_word(self):
        with pytest.raises(InputError):
            cyclic_subword_frequency(w("1"), ())

    def test_cyclic_count_wraps(self):
        assert subword_count(w("01"), w("10"), cyclic=True) == 1

    def test_frequencies_of_all_k_tuples_sum_to_one(self):
        rng = random.Random(7)
        alphabet = Alphabet(2)
        for _ in range(20):
            omega = random_word(rng, rng.randint(3, 15))
            for k in (1, 2, 3):
                total = sum(subword_frequency(t, omega) for t in alphabet.words(k))
                assert total == 1
                total_cyclic = sum(cyclic_subword_frequency(t, omega) for t in alphabet.words(k))
                assert total_cyclic == 1

    def test_ddim_examples(self):
        assert cyclic_frequency_ddim(w("11"), np.zeros((2, 2), dtype=int), 2) == 0
        assert cyclic_frequency_ddim(w("11"), np.ones((2, 2), dtype=int), 2) == 2
        single = np.zeros((3, 3), dtype=int)
        single[1, 2] = 1
        assert cyclic_frequency_ddim(w("1"), single, 2) == Fraction(2, 9)

    def test_ddim_rejects_non_cubic_arrays(self):
        with pytest.raises(InputError):
            cyclic_frequency_ddim(w("1"), np.zeros((2, 3), dtype=int), 2)

    def test_ddim_membership(self):
        single = np.zeros((3, 3), dtype=int)
        single[0, 0] = 1
        assert member_ddim(single, w("1"), "2/9")
        assert not member_ddim(single, w("1"), "1/9")


class TestReducedSets:
    """Reducedness of forbidden sets."""

    def test_examples(self):
        assert is_reduced([w("11"), w("101")])
        assert not is_reduced([w("1"), w("100")])
        assert is_reduced([w("0000")])

    def test_spec_rejects_non_reduced_set(self):
        with pytest.raises(SpecError):
            make_spec(2, {"1": "1/2", "100": "1/4"})

    def test_spec_rejects_cap_outside_unit_interval(self):
        with pytest.raises(SpecError):
            make_spec(2, {"11": "3/2"})

    def test_spec_rejects_duplicates(self):
        entries = (ForbiddenWord(w("11"), Fraction(1, 2)), ForbiddenWord(w("11"), Fraction(1, 3)))
        with pytest.raises(SpecError):
            ConstraintSpec(Alphabet(2), entries)


class TestMembership:
    """Strict, weak and cyclic membership."""

    def test_no_forbidden_occurrence(self):
        assert member(w("0101"), make_spec(2, {"11": 0}))

    def test_boundary_equality_is_admitted(self):
        assert member(w("110"), make_spec(2, {"11": "1/2"}))

    def test_above_cap(self):
        assert not member(w("11"), make_spec(2, {"11": "1/2"}))

    def test_strict_implies_weak(self):
        rng = random.Random(3)
        spec = make_spec(2, {"11": "1/5", "000": "1/10"}, Tolerance("1/2", "1/3"))
        for _ in range(200):
            omega = random_word(rng, rng.randint(1, 14))
            if member(omega, spec, Mode.STRICT):
                assert member(omega, spec, Mode.WEAK)

    def test_weak_tolerance_admits_small_excess(self):
        spec = make_spec(2, {"11": 0}, Tolerance(1, 0))
        # one occurrence among 9 windows of a length-10 word: 1/9 <= 0 + 1/10 fails
        assert not member(w("1100000000"), spec, Mode.WEAK)
        spec = make_spec(2, {"11": 0}, Tolerance(2, 0))
        assert member(w("1100000000"), spec, Mode.WEAK)

    def test_default_tolerance(self):
        assert rll_spec(2, "1/20").tolerance == Tolerance(8, 0)

    def test_cyclic_mode_counts_wraparound(self):
        spec = make_spec(2, {"11": 0})
        assert member(w("1001"), spec, Mode.STRICT)
        assert not member(w("1001"), spec, Mode.CYCLIC)


class TestEnumeration:
    """Exhaustive counting oracle."""

    def test_fibonacci_count(self):
        assert enumerate_count(make_spec(2, {"11": 0}), 3) == 5

    def test_balanced_words_odd_length(self):
        spec = make_spec(2, {"0": "1/2", "1": "1/2"})
        assert enumerate_count(spec, 3) == 0

    def test_balanced_words_even_length(self):
        spec = make_spec(2, {"0": "1/2", "1": "1/2"})
        assert enumerate_count(spec, 4) == 6

    def test_fully_constrained_runs_match_transfer_recursion(self):
        for k in (1, 2):
            spec = rll_spec(k, 0)
            for n in range(1, 13):
                assert enumerate_count(spec, n) == count_no_run(n, k + 1)

    def test_weak_count_dominates_strict(self):
        spec = rll_spec(1, "1/8")
        for n in range(2, 11):
            assert enumerate_count(spec, n, Mode.WEAK) >= enumerate_count(spec, n, Mode.STRICT)

    def test_counting_sandwich_with_cyclic_words(self):
        for k in (1, 2):
            spec = rll_spec(k, "1/10")
            for n in range(k + 2, 12):
                cyclic = enumerate_count(spec, n, Mode.CYCLIC)
                assert enumerate_count(spec, n - 1) <= cyclic <= enumerate_count(spec, n + k)

    def test_admissible_fraction(self):
        assert admissible_fraction(make_spec(2, {"11": 0}), 3) == Fraction(5, 8)

    def test_budget_guard(self):
        check_budget(2, 26)
        with pytest.raises(BudgetExceededError):
            check_budget(2, 27)
        with pytest.raises(BudgetExceededError):
            enumerate_count(make_spec(3, {"11": 0}), 17)


class TestSpecFamilies:
    """Constructors and JSON form."""

    def test_rll_word(self):
        spec = rll_spec(3, "1/40")
        assert spec.words == [w("1111")]
        assert spec.caps == [Fraction(1, 40)]

    def test_dk_rll_words(self):
        spec = dk_rll_spec(2, 4, "1/100", "1/50")
        assert spec.words == [w("11"), w("101"), w("00000")]

    def test_interference_word(self):
        spec = interference_spec(4, "1/20")
        assert spec.words == [(3, 0, 3)]
        assert spec.alphabet.size == 4

    def test_json_round_trip(self, tmp_path):
        spec = make_spec(3, {"202": "1/7", "11": "1/3"}, Tolerance("1/2", "1/5"))
        path = tmp_path / "spec.json"
        dump_spec(spec, path)
        loaded = load_spec(path)
        assert loaded == spec
        assert spec_digest(loaded) == spec_digest(spec)

    def test_json_layout(self):
        data = spec_to_dict(rll_spec(1, "1/8"))
        assert data == {
            "alphabet_size": 2,
            "forbidden": [{"word": "11", "cap": "1/8"}],
            "tolerance": {"a": "4", "b": "0"},
        }

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(SpecError):
            load_spec(path)
        with pytest.raises(SpecError):
            spec_from_dict(json.loads('{"alphabet_size": 2}'))

    def test_digest_depends_on_caps(self):
        assert spec_digest(rll_spec(2, "1/20")) != spec_digest(rll_spec(2, "1/21"))
        assert len(spec_digest(rll_spec(2, "1/20"))) == 32
