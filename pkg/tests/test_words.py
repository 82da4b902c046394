"""Tests for words, run profiles and alternating segments."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from indel_entropy.words import (
    Word,
    alternating_profile,
    count_words_with_runs,
    enumerate_words,
    enumerate_words_with_runs,
    make_alternating,
    make_balanced,
    make_constant,
    make_skewed,
    permute_runs,
    run_count,
    run_length_profile,
    word_from_runs,
)


class TestWordParse:
    """Tests for the word text codec."""

    def test_parse_digits(self):
        """Test parsing a binary digit string."""
        word = Word.parse("0110")
        assert word.symbols == (0, 1, 1, 0)
        assert word.q == 2
        assert str(word) == "0110"

    def test_parse_base36_letters(self):
        """Test letters above 9 for larger alphabets."""
        word = Word.parse("a9", q=11)
        assert word.symbols == (10, 9)
        assert str(word) == "10,9"

    def test_parse_comma_separated(self):
        """Test comma-separated symbols for alphabets above 36."""
        word = Word.parse("11,3,0", q=40)
        assert word.symbols == (11, 3, 0)

    def test_parse_empty(self):
        """Test that the empty string is the empty word."""
        assert len(Word.parse("")) == 0

    def test_symbol_outside_alphabet(self):
        """Test that a symbol >= q is rejected."""
        with pytest.raises(ValueError, match="outside alphabet"):
            Word.parse("012", q=2)

    def test_malformed(self):
        """Test that non-alphanumeric characters are rejected."""
        with pytest.raises(ValueError, match="malformed word"):
            Word.parse("0-1")

    def test_large_alphabet_single_symbol(self):
        """Test that a bare number is a one-symbol word above ten symbols."""
        assert Word.parse("39", q=40).symbols == (39,)
        assert Word.parse("10", q=11).symbols == (10,)
        with pytest.raises(ValueError, match="comma-separated"):
            Word.parse("4x", q=40)

    @given(st.integers(2, 50).flatmap(lambda q: st.tuples(st.just(q), st.lists(st.integers(0, q - 1), max_size=12))))
    def test_text_form_parses_back(self, case):
        """Test that str() output parses to the same word for every alphabet size."""
        q, symbols = case
        word = Word(tuple(symbols), q)
        assert Word.parse(str(word), q) == word


class TestWordOperations:
    """Tests for ordering, slicing and concatenation."""

    def test_lexicographic_order(self):
        """Test that words sort by symbols."""
        words = [Word.parse(t) for t in ("10", "01", "00", "11")]
        assert [str(w) for w in sorted(words)] == ["00", "01", "10", "11"]

    def test_slice_and_concat(self):
        """Test that slices are words and concatenation joins them."""
        word = Word.parse("01101")
        assert word[1:3] == Word.parse("11")
        assert word[:2] + word[2:] == word
        assert word[0] == 0

    def test_concat_alphabet_mismatch(self):
        """Test that words over different alphabets do not concatenate."""
        with pytest.raises(ValueError, match="alphabet mismatch"):
            Word.parse("01") + Word.parse("01", q=3)

    def test_prepend(self):
        """Test prepending a symbol."""
        assert Word.parse("10").prepend(1) == Word.parse("110")


class TestRunProfile:
    """Tests for run-length decomposition."""

    def test_runs_and_symbols(self):
        """Test run lengths and run symbols of a mixed word."""
        profile = run_length_profile(Word.parse("0011101"))
        assert profile.runs == (2, 3, 1, 1)
        assert profile.symbols == (0, 1, 0, 1)
        assert profile.count == 4
        assert profile.to_word(2) == Word.parse("0011101")

    def test_empty_word(self):
        """Test that the empty word has no profile."""
        with pytest.raises(ValueError, match="empty word"):
            run_length_profile(Word(()))
        assert run_count(Word(())) == 0

    def test_word_from_runs_rejects_equal_neighbours(self):
        """Test that adjacent runs need different symbols."""
        with pytest.raises(ValueError, match="different symbols"):
            word_from_runs((1, 2), (0, 0), 2)

    def test_permute_runs(self):
        """Test that run lengths move while run symbols stay."""
        word = permute_runs(Word.parse("0011101"), [1, 0, 2, 3])
        assert word == Word.parse("0001101")

    def test_permute_runs_needs_permutation(self):
        """Test that a non-permutation order is rejected."""
        with pytest.raises(ValueError, match="permutation"):
            permute_runs(Word.parse("0110"), [0, 0, 1])


class TestAlternatingProfile:
    """Tests for maximal alternating segments."""

    def test_segments_and_indices(self):
        """Test segment lengths and forward/backward indices."""
        profile = alternating_profile(Word.parse("0101100"))
        assert profile.segments == (4, 2, 1)
        assert profile.forward == (2, 3, 3)
        assert profile.backward == (1, 1, 2)
        assert profile.to_word(2) == Word.parse("0101100")

    def test_constant_word(self):
        """Test that a constant word splits into single symbols."""
        profile = alternating_profile(make_constant(2, 4))
        assert profile.segments == (1, 1, 1, 1)
        assert profile.forward == (4, 4, 4, 4)
        assert profile.backward == (1, 1, 1, 1)

    def test_alternating_word(self):
        """Test that an alternating word is one segment."""
        profile = alternating_profile(make_alternating(2, 5))
        assert profile.segments == (5,)
        assert profile.second_symbols == (1,)

    def test_ternary_greedy_split(self):
        """Test that a third symbol starts a new segment."""
        profile = alternating_profile(Word.parse("0102", q=3))
        assert profile.segments == (3, 1)


class TestConstructors:
    """Tests for skewed, balanced and constant words."""

    def test_skewed(self):
        """Test one long run followed by single symbols."""
        assert make_skewed(2, 6, 3) == Word.parse("000010")

    def test_balanced(self):
        """Test longer runs first."""
        assert make_balanced(2, 7, 3) == Word.parse("0001100")

    def test_run_count_out_of_range(self):
        """Test that R must lie in [1, m]."""
        with pytest.raises(ValueError, match="run count"):
            make_balanced(2, 3, 4)

    def test_constant(self):
        """Test symbol^m."""
        assert make_constant(3, 3, 2) == Word.parse("222", q=3)


class TestEnumerators:
    """Tests for word enumeration."""

    def test_lexicographic(self):
        """Test that enumeration is lexicographic."""
        assert [str(w) for w in enumerate_words(2, 2)] == ["00", "01", "10", "11"]

    @pytest.mark.parametrize("q,m", [(2, 6), (3, 5), (4, 4)])
    def test_fixed_runs_matches_filter(self, q, m):
        """Test the pruned enumerator against filtering every word."""
        for runs in range(1, m + 1):
            expected = [w for w in enumerate_words(q, m) if run_count(w) == runs]
            found = list(enumerate_words_with_runs(q, m, runs))
            assert found == expected
            assert len(found) == count_words_with_runs(q, m, runs)


class TestWorkedExamples:
    """Tests for hand-checked profiles."""

    def test_quaternary_runs(self):
        """Test RL(311221110) over four symbols."""
        assert run_length_profile(Word.parse("311221110", q=4)).runs == (1, 2, 2, 3, 1)

    def test_alternating_segments(self):
        """Test the segments of 00110100."""
        assert alternating_profile(Word.parse("00110100")).segments == (1, 2, 4, 1)

    def test_forward_backward_indices(self):
        """Test f and b for 000101011."""
        profile = alternating_profile(Word.parse("000101011"))
        assert profile.segments == (1, 1, 6, 1)
        assert profile.forward == (3, 3, 4, 4)
        assert profile.backward == (1, 1, 1, 3)


def _check_segments_plus_runs(max_len: int):
    for length in range(1, max_len + 1):
        for word in enumerate_words(2, length):
            assert alternating_profile(word).count + run_count(word) == length + 1, str(word)


class TestProfileInvariants:
    """Tests for identities between words and their profiles."""

    def test_segments_plus_runs(self):
        """Test A + R = length + 1 for binary words up to length 10."""
        _check_segments_plus_runs(10)

    @pytest.mark.slow
    def test_segments_plus_runs_to_14(self):
        """Test A + R = length + 1 for binary words up to length 14."""
        _check_segments_plus_runs(14)

    @pytest.mark.parametrize("q,max_len", [(2, 10), (3, 7), (4, 5)])
    def test_run_profile_round_trip(self, q, max_len):
        """Test profile -> word -> profile for run-length profiles."""
        for length in range(1, max_len + 1):
            for word in enumerate_words(q, length):
                profile = run_length_profile(word)
                rebuilt = word_from_runs(profile.runs, profile.symbols, q)
                assert rebuilt == word
                assert run_length_profile(rebuilt) == profile

    @pytest.mark.parametrize("q,max_len", [(2, 10), (3, 7), (4, 5)])
    def test_alternating_profile_round_trip(self, q, max_len):
        """Test profile -> word -> profile for alternating profiles."""
        for length in range(1, max_len + 1):
            for word in enumerate_words(q, length):
                profile = alternating_profile(word)
                rebuilt = profile.to_word(q)
                assert rebuilt == word
                assert alternating_profile(rebuilt) == profile

    @pytest.mark.parametrize("q", [2, 3, 4, 7])
    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_run_counts_partition_words(self, q, m):
        """Test Σ_R count(q, m, R) = q^m."""
        assert sum(count_words_with_runs(q, m, runs) for runs in range(1, m + 1)) == q**m

    @given(st.lists(st.integers(0, 3), min_size=1, max_size=15), st.data())
    def test_permute_runs_keeps_length_and_runs(self, symbols, data):
        """Test that reordering runs keeps the length and the run count."""
        word = Word(tuple(symbols), 4)
        count = run_count(word)
        order = data.draw(st.permutations(range(count)))
        permuted = permute_runs(word, order)
        assert len(permuted) == len(word)
        assert run_count(permuted) == count
        assert sorted(run_length_profile(permuted).runs) == sorted(run_length_profile(word).runs)
