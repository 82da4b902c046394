"""Tests for extremal and average input entropies."""

import math

import pytest

from indel_entropy.config import BudgetExceededError
from indel_entropy.entropy import ChannelKind, ChannelSpec, input_entropy_enumerated
from indel_entropy.extremal import (
    Extremum,
    appendix_w_difference,
    average_input_entropy,
    average_input_entropy_enumerated,
    average_lower_bound,
    double_deletion_recursion_same,
    double_deletion_recursion_split,
    entropy_objective,
    enumerated_run_count_table,
    exhaustive_argopt,
    extremum_over_fixed_runs,
    figure_rows,
    fixed_runs_value,
    global_extremum,
    minimum_value,
    prefixed_weighted_log_sum,
    run_count_table,
    two_deletion_minimum_printed,
    two_deletion_minimum_reference,
)
from indel_entropy.words import Word, enumerate_words, make_constant, run_count
from tests.conftest import TEST_AVERAGE_N3_BITS, TEST_Q, TEST_TOLERANCE


def words(*texts: str, q: int = 2) -> tuple[Word, ...]:
    return tuple(Word.parse(t, q) for t in texts)


class TestGlobalExtremes:
    """Tests for closed-form global extremes and their witnesses."""

    def test_1del_minimum(self, one_deletion):
        """Test the constant-word minimum at m=4."""
        result = global_extremum(TEST_Q, 4, one_deletion, Extremum.MIN)
        assert result.value_bits == pytest.approx(math.log2(10) - math.log2(5) / 2)
        assert result.witnesses == words("0000", "1111")

    def test_1del_maximum(self, one_deletion):
        """Test the alternating maximum at m=4."""
        result = global_extremum(TEST_Q, 4, one_deletion, Extremum.MAX)
        assert result.value_bits == pytest.approx(math.log2(10) - 8 / 10)
        assert result.witnesses == words("0101", "1010")

    def test_1ins_extremes(self, one_insertion):
        """Test 0 and log2(m) for the single-insertion channel."""
        assert global_extremum(TEST_Q, 5, one_insertion, Extremum.MIN).value_bits == 0.0
        assert global_extremum(TEST_Q, 5, one_insertion, Extremum.MAX).value_bits == pytest.approx(
            math.log2(5)
        )

    def test_ternary_maximum_witnesses(self):
        """Test that every word without repeated neighbours maximizes 1-Del."""
        channel = ChannelSpec(ChannelKind.DELETION, 1, 3)
        result = global_extremum(3, 3, channel, Extremum.MAX)
        assert len(result.witnesses) == 3 * 2 * 2

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    def test_2del_minimum(self, m):
        """Test the 2-Del minimum against the constant word and its closed form."""
        channel = ChannelSpec(ChannelKind.DELETION, 2, 2)
        result = global_extremum(2, m, channel, Extremum.MIN)
        enumerated = input_entropy_enumerated(make_constant(2, m), channel).entropy_bits
        assert result.value_bits == pytest.approx(enumerated, abs=TEST_TOLERANCE)
        assert result.value_bits == pytest.approx(two_deletion_minimum_reference(m), abs=TEST_TOLERANCE)

    def test_2del_minimum_values(self):
        """Test spot values of the 2-Del minimum."""
        assert two_deletion_minimum_reference(2) == pytest.approx(3.14624, abs=1e-5)
        assert two_deletion_minimum_reference(3) == pytest.approx(3.4914461, abs=1e-6)

    def test_2del_printed_form_differs(self):
        """Test that the printed closed form is reported but does not match enumeration."""
        channel = ChannelSpec(ChannelKind.DELETION, 2, 2)
        result = global_extremum(2, 2, channel, Extremum.MIN)
        assert result.printed_bits == pytest.approx(two_deletion_minimum_printed(2))
        assert result.printed_bits == pytest.approx(1.20752, abs=1e-5)
        assert abs(result.printed_bits - result.value_bits) > 1.0

    def test_unsupported(self):
        """Test that uncharacterized extremes ask for a scan."""
        with pytest.raises(ValueError, match="not characterized"):
            minimum_value(2, 4, ChannelSpec(ChannelKind.DELETION, 3, 2))
        with pytest.raises(ValueError, match="not characterized"):
            global_extremum(2, 4, ChannelSpec(ChannelKind.DELETION, 2, 2), Extremum.MAX)

    def test_insertion_output_too_short(self, one_insertion):
        """Test that k-Ins outputs must be longer than k."""
        with pytest.raises(ValueError, match="longer than"):
            global_extremum(TEST_Q, 1, one_insertion, Extremum.MIN)


class TestFixedRuns:
    """Tests for extremes among words with a fixed run count."""

    def test_skewed_witnesses(self, one_deletion):
        """Test every rotation of the skewed profile (4, 1, 1)."""
        result = extremum_over_fixed_runs(TEST_Q, 6, 3, one_deletion, Extremum.MIN)
        assert result.witnesses == words("000010", "010000", "011110", "100001", "101111", "111101")

    @pytest.mark.parametrize("kind", [ChannelKind.DELETION, ChannelKind.INSERTION])
    def test_matches_scan(self, kind):
        """Test per-R extremes against scanning words with R runs."""
        channel = ChannelSpec(kind, 1, TEST_Q)
        objective = entropy_objective(channel)
        m = 7
        for runs in range(1, m + 1):
            values = [objective(w) for w in enumerate_words(TEST_Q, m) if run_count(w) == runs]
            assert fixed_runs_value(TEST_Q, m, runs, channel, Extremum.MIN) == pytest.approx(min(values))
            assert fixed_runs_value(TEST_Q, m, runs, channel, Extremum.MAX) == pytest.approx(max(values))

    def test_minimum_nondecreasing_in_runs(self, one_deletion, one_insertion):
        """Test that more runs never lower the per-R minimum."""
        for channel in (one_deletion, one_insertion):
            minima = [fixed_runs_value(3, 9, r, channel, Extremum.MIN) for r in range(1, 10)]
            assert minima == sorted(minima)


class TestExhaustiveScan:
    """Tests for the exhaustive argmin/argmax oracle."""

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_matches_closed_form(self, one_deletion, m):
        """Test both 1-Del extremes and witness sets."""
        for which in Extremum:
            expected = global_extremum(TEST_Q, m, one_deletion, which)
            found = exhaustive_argopt(TEST_Q, m, entropy_objective(one_deletion), which)
            assert found.value_bits == pytest.approx(expected.value_bits, abs=TEST_TOLERANCE)
            assert found.witnesses == expected.witnesses

    def test_independent_of_workers(self):
        """Test that the worker count does not change the result."""
        objective = entropy_objective(ChannelSpec(ChannelKind.INSERTION, 1, 3))
        single = exhaustive_argopt(3, 5, objective, Extremum.MAX, max_workers=1)
        pooled = exhaustive_argopt(3, 5, objective, Extremum.MAX, max_workers=4)
        assert single == pooled
        assert single.value_bits == pytest.approx(math.log2(5), abs=TEST_TOLERANCE)

    def test_objective_alphabet_must_match(self, one_insertion):
        """Test that a binary objective cannot scan ternary words."""
        with pytest.raises(ValueError, match="uses q=2, scan uses q=3"):
            exhaustive_argopt(3, 5, entropy_objective(one_insertion), Extremum.MAX)

    def test_plain_callable_objective(self):
        """Test that objectives without a channel are scanned as given."""
        found = exhaustive_argopt(3, 2, lambda word: float(sum(word.symbols)), Extremum.MAX)
        assert found.value_bits == 4.0
        assert found.witnesses == words("22", q=3)

    def test_objective_keeps_channel(self, one_deletion):
        """Test that built objectives expose their channel and evaluate words."""
        objective = entropy_objective(one_deletion)
        assert objective.channel == one_deletion
        assert objective(Word.parse("0000")) == pytest.approx(
            input_entropy_enumerated(Word.parse("0000"), one_deletion).entropy_bits,
            abs=TEST_TOLERANCE,
        )

    def test_progress_callback(self, one_deletion):
        """Test that the callback sees every scanned word."""
        seen = []
        exhaustive_argopt(TEST_Q, 5, entropy_objective(one_deletion), Extremum.MIN, on_progress=seen.append)
        assert sum(seen) == 2**5

    def test_budget(self, one_deletion):
        """Test that oversized scans name the flag and variable."""
        with pytest.raises(BudgetExceededError, match="--budget.*INDEL_ENTROPY_BUDGET"):
            exhaustive_argopt(TEST_Q, 12, entropy_objective(one_deletion), Extremum.MIN, budget=100)


class TestAverages:
    """Tests for run counting and average input entropies."""

    @pytest.mark.parametrize("q", [2, 3])
    def test_run_count_table(self, q):
        """Test the closed-form run counts against enumeration."""
        for n in range(1, 7):
            table = run_count_table(n, q)
            assert table == enumerated_run_count_table(n, q)
            assert table.positions() == n * q**n

    def test_run_count_index(self):
        """Test 1-based access and bounds."""
        table = run_count_table(3, 2)
        assert table[3] == 2
        with pytest.raises(IndexError):
            table[4]

    def test_average_at_n3(self, one_deletion):
        """Test the 1-Del average at n=3, q=2."""
        average = average_input_entropy(3, TEST_Q, one_deletion)
        assert average == pytest.approx(TEST_AVERAGE_N3_BITS, abs=1e-6)
        assert average == pytest.approx(
            average_input_entropy_enumerated(3, TEST_Q, one_deletion), abs=TEST_TOLERANCE
        )

    @pytest.mark.parametrize("q,max_n", [(2, 8), (3, 5)])
    def test_formula_matches_mean(self, q, max_n):
        """Test both averages against the direct mean."""
        for kind in ChannelKind:
            channel = ChannelSpec(kind, 1, q)
            for n in range(2, max_n + 1):
                assert average_input_entropy(n, q, channel) == pytest.approx(
                    average_input_entropy_enumerated(n, q, channel), abs=TEST_TOLERANCE
                )

    def test_derived_bound_below_average(self, one_deletion, one_insertion):
        """Test that the derived bound never exceeds the average."""
        for channel in (one_deletion, one_insertion):
            for n in range(2, 30):
                bounds = average_lower_bound(n, TEST_Q, channel)
                assert bounds.derived_bits <= average_input_entropy(n, TEST_Q, channel)

    def test_printed_bound_exceeds_average(self, one_deletion):
        """Test the recorded deviation of the printed 1-Del bound at n=3."""
        bounds = average_lower_bound(3, TEST_Q, one_deletion)
        assert bounds.derived_bits == pytest.approx(1.75163, abs=1e-5)
        assert bounds.printed_bits == pytest.approx(1.87663, abs=1e-5)
        assert bounds.printed_bits > average_input_entropy(3, TEST_Q, one_deletion)

    def test_enumerated_average_budget(self, one_insertion):
        """Test the budget on the direct mean."""
        with pytest.raises(BudgetExceededError):
            average_input_entropy_enumerated(10, TEST_Q, one_insertion, budget=1000)


class TestRecursions:
    """Tests for the weighted log-sum recursions."""

    def test_split_example(self):
        """Test both sides at y = 01."""
        left, right = double_deletion_recursion_split(Word.parse("01"))
        assert left == pytest.approx(right, abs=TEST_TOLERANCE)
        assert left == pytest.approx(26.265, abs=1e-3)

    def test_same_example(self):
        """Test both sides at y = 00."""
        left, right = double_deletion_recursion_same(Word.parse("00"))
        assert left == pytest.approx(right, abs=TEST_TOLERANCE)
        assert left == pytest.approx(4.755, abs=1e-3)

    @pytest.mark.parametrize("length", [2, 3, 4, 5, 6])
    def test_all_words(self, length):
        """Test the matching identity for every binary word."""
        for y in enumerate_words(2, length):
            if y[0] != y[1]:
                left, right = double_deletion_recursion_split(y)
            else:
                left, right = double_deletion_recursion_same(y)
            assert left == pytest.approx(right, abs=TEST_TOLERANCE)

    def test_prefixed_log_sum(self):
        """Test W over prefixed words: ω_1(101) = 2, ω_1(111) = 3."""
        value = prefixed_weighted_log_sum((1,), words("01", "11"), Word.parse("1"))
        assert value == pytest.approx(2 * 1 + 3 * math.log2(3), abs=TEST_TOLERANCE)

    def test_prefixed_log_sum_skips_zero_counts(self):
        """Test that hosts without an embedding contribute nothing."""
        assert prefixed_weighted_log_sum((0,), words("0", "1"), Word.parse("11")) == 0.0

    def test_prefixed_log_sum_alphabet_mismatch(self):
        """Test that words and target must share an alphabet."""
        with pytest.raises(ValueError, match="alphabet"):
            prefixed_weighted_log_sum((0,), words("01"), Word.parse("0", q=3))

    def test_wrong_identity(self):
        """Test that each identity checks its precondition."""
        with pytest.raises(ValueError, match="must differ"):
            double_deletion_recursion_split(Word.parse("00"))
        with pytest.raises(ValueError, match="must be equal"):
            double_deletion_recursion_same(Word.parse("01"))

    def test_appendix_values(self):
        """Test that 00 beats 01 at m=2."""
        assert appendix_w_difference(Word.parse("00")) == pytest.approx(27.444, abs=1e-3)
        assert appendix_w_difference(Word.parse("01")) == pytest.approx(24.265, abs=1e-3)

    @pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
    def test_appendix_maximizers(self, m):
        """Test that only constant words maximize the difference."""
        result = exhaustive_argopt(2, m, appendix_w_difference, Extremum.MAX)
        assert result.witnesses == (make_constant(2, m, 0), make_constant(2, m, 1))


class TestFigureRows:
    """Tests for min/max/average/bound rows."""

    def test_ordering(self, one_deletion, one_insertion):
        """Test min <= bound <= avg <= max on every row."""
        for channel in (one_deletion, one_insertion):
            for row in figure_rows(channel, range(4, 21)):
                assert row.min_bits <= row.avg_bits <= row.max_bits
                assert row.bound_bits <= row.avg_bits

    def test_spot_value(self, one_deletion):
        """Test the n=5 minimum against the constant word."""
        (row,) = figure_rows(one_deletion, [5])
        assert row.min_bits == pytest.approx(math.log2(10) - math.log2(5) / 2)

    def test_deterministic_across_workers(self, one_deletion):
        """Test identical rows for one and several workers."""
        assert figure_rows(one_deletion, range(4, 16), max_workers=1) == figure_rows(
            one_deletion, range(4, 16), max_workers=4
        )

    def test_printed_bound(self, one_deletion):
        """Test that the printed bound fills the bound column when requested."""
        (row,) = figure_rows(one_deletion, [3], bound="printed")
        assert row.bound_bits == pytest.approx(average_lower_bound(3, TEST_Q, one_deletion).printed_bits)

    def test_needs_single_edit(self):
        """Test that only k = 1 channels are tabulated."""
        with pytest.raises(ValueError, match="k=1"):
            figure_rows(ChannelSpec(ChannelKind.DELETION, 2, 2), [4])


def _extremal_words(scored: list[tuple[float, Word]], which: Extremum) -> tuple[float, set[Word]]:
    pick = min if which is Extremum.MIN else max
    best = pick(value for value, _ in scored)
    return best, {word for value, word in scored if abs(value - best) <= TEST_TOLERANCE}


@pytest.mark.slow
class TestSingleEditExtremizerGrid:
    """Single-edit extremes against full scans at acceptance size."""

    @pytest.mark.parametrize("q,max_m", [(2, 12), (3, 7)])
    @pytest.mark.parametrize("kind", [ChannelKind.DELETION, ChannelKind.INSERTION])
    def test_global_and_fixed_runs(self, q, max_m, kind):
        """Test every value and witness set, globally and per run count."""
        channel = ChannelSpec(kind, 1, q)
        objective = entropy_objective(channel)
        for m in range(2 if kind is ChannelKind.INSERTION else 1, max_m + 1):
            scored = [(objective(word), word) for word in enumerate_words(q, m)]
            for which in Extremum:
                expected = global_extremum(q, m, channel, which)
                value, witnesses = _extremal_words(scored, which)
                assert value == pytest.approx(expected.value_bits, abs=TEST_TOLERANCE), (m, which)
                assert witnesses == set(expected.witnesses), (m, which)
                for runs in range(1, m + 1):
                    fixed = extremum_over_fixed_runs(q, m, runs, channel, which)
                    subset = [(v, w) for v, w in scored if run_count(w) == runs]
                    value, witnesses = _extremal_words(subset, which)
                    assert value == pytest.approx(fixed.value_bits, abs=TEST_TOLERANCE), (m, runs, which)
                    assert witnesses == set(fixed.witnesses), (m, runs, which)
