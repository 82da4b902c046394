"""Tests for transition matrices, Blahut-Arimoto and the mixture bound."""

import numpy as np
import pytest

from indel_entropy.capacity import (
    blahut_arimoto,
    bound_curve,
    capacity_table,
    mixture_upper_bound,
    mutual_information,
    transition_matrix,
    trivial_capacity_bound,
    uniform_mutual_information,
)
from indel_entropy.config import BudgetExceededError
from indel_entropy.entropy import ChannelKind, ChannelSpec
from tests.conftest import TEST_Q


def deletion(k: int, q: int = TEST_Q) -> ChannelSpec:
    return ChannelSpec(ChannelKind.DELETION, k, q)


def insertion(k: int, q: int = TEST_Q) -> ChannelSpec:
    return ChannelSpec(ChannelKind.INSERTION, k, q)


class TestTransitionMatrix:
    """Tests for dense channel laws."""

    @pytest.mark.parametrize("channel", [deletion(1), deletion(2), insertion(1), insertion(2)])
    def test_rows_are_distributions(self, channel):
        """Test that every row sums to one."""
        matrix = transition_matrix(channel, 4)
        assert np.allclose(matrix.probabilities.sum(axis=1), 1.0, atol=1e-12)
        assert matrix.probabilities.shape == (len(matrix.inputs), len(matrix.outputs))

    def test_single_deletion_row(self):
        """Test the law of 01 through one deletion."""
        matrix = transition_matrix(deletion(1), 2)
        assert str(matrix.inputs[1]) == "01"
        row = matrix.probabilities[1]
        assert row.tolist() == [0.5, 0.5]

    def test_workers_do_not_change_rows(self):
        """Test identical matrices for one and several workers."""
        single = transition_matrix(insertion(1), 3, max_workers=1)
        pooled = transition_matrix(insertion(1), 3, max_workers=3)
        assert np.array_equal(single.probabilities, pooled.probabilities)

    def test_budget(self):
        """Test that oversized matrices name the matrix budget variable."""
        with pytest.raises(BudgetExceededError, match="INDEL_ENTROPY_MATRIX_BUDGET"):
            transition_matrix(deletion(1), 6, budget=100)

    def test_too_many_deletions(self):
        """Test that k > n is rejected."""
        with pytest.raises(ValueError, match="cannot delete"):
            transition_matrix(deletion(3), 2)


class TestBlahutArimoto:
    """Tests for capacity iteration."""

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_noiseless_channel(self, n):
        """Test that zero deletions carry n bits."""
        result = blahut_arimoto(transition_matrix(deletion(0), n))
        assert result.capacity_bits == pytest.approx(n, abs=1e-9)
        assert result.converged

    def test_single_deletion_at_n2(self):
        """Test that one deletion out of two binary symbols leaves one bit."""
        result = blahut_arimoto(transition_matrix(deletion(1), 2))
        assert result.capacity_bits == pytest.approx(1.0, abs=1e-6)

    def test_delete_everything(self):
        """Test that deleting every symbol carries nothing."""
        result = blahut_arimoto(transition_matrix(deletion(3), 3))
        assert result.capacity_bits == pytest.approx(0.0, abs=1e-12)

    def test_lower_estimate_monotone(self):
        """Test that the lower estimate never decreases."""
        result = blahut_arimoto(transition_matrix(deletion(1), 4), max_iterations=200)
        history = np.array(result.lower_history)
        assert np.all(np.diff(history) >= -1e-12)
        assert result.capacity_bits <= result.upper_bits + 1e-12

    def test_iteration_cap(self):
        """Test that hitting the cap is reported."""
        result = blahut_arimoto(transition_matrix(deletion(1), 5), tolerance=0.0, max_iterations=3)
        assert result.iterations == 3
        assert not result.converged

    def test_rejects_non_stochastic(self):
        """Test that rows must sum to one."""
        matrix = transition_matrix(deletion(1), 2)
        broken = matrix.__class__(
            channel=matrix.channel,
            n=matrix.n,
            inputs=matrix.inputs,
            outputs=matrix.outputs,
            probabilities=matrix.probabilities * 0.5,
        )
        with pytest.raises(ValueError, match="sum to 1"):
            blahut_arimoto(broken)

    @pytest.mark.parametrize("channel", [deletion(1), deletion(2), insertion(1), insertion(2)])
    @pytest.mark.parametrize("n", [2, 3, 4, *(pytest.param(n, marks=pytest.mark.slow) for n in range(5, 9))])
    def test_capacity_above_uniform_information(self, channel, n):
        """Test capacity >= I(X;Y) under uniform input."""
        if channel.kind is ChannelKind.DELETION and channel.k > n:
            pytest.skip("more deletions than symbols")
        matrix = transition_matrix(channel, n)
        uniform = uniform_mutual_information(channel, n)
        flat = np.full(len(matrix.inputs), 1.0 / len(matrix.inputs))
        assert mutual_information(matrix, flat) == pytest.approx(uniform, abs=1e-9)
        result = blahut_arimoto(matrix, max_iterations=50)
        assert result.capacity_bits >= uniform - 1e-12


class TestCapacityTable:
    """Tests for per-k capacity tables."""

    def test_endpoints(self):
        """Test C_0 = n and C_n = 0."""
        rows = capacity_table(3)
        assert [row.k for row in rows] == [0, 1, 2, 3]
        assert rows[0].capacity_bits == pytest.approx(3.0, abs=1e-9)
        assert rows[-1].capacity_bits == pytest.approx(0.0, abs=1e-9)

    def test_over_budget_rows(self):
        """Test that orders beyond the budget are flagged, not fatal."""
        rows = capacity_table(4, budget=2**4 * 2**2)
        assert rows[0].capacity_bits is None
        assert rows[1].capacity_bits is None
        assert rows[2].capacity_bits is not None


class TestMixtureBound:
    """Tests for the binomial mixture upper bound."""

    def test_endpoints(self):
        """Test p=0 gives C_0 and p=1 gives C_n."""
        capacities = [3.0, 1.5, 0.8, 0.0]
        assert mixture_upper_bound(3, 0.0, capacities) == pytest.approx(3.0)
        assert mixture_upper_bound(3, 1.0, capacities) == pytest.approx(0.0)

    def test_per_symbol(self):
        """Test division by n."""
        capacities = [4.0, 2.0, 1.0, 0.5, 0.0]
        block = mixture_upper_bound(4, 0.3, capacities)
        assert mixture_upper_bound(4, 0.3, capacities, per_symbol=True) == pytest.approx(block / 4)

    def test_missing_capacity_uses_trivial_bound(self, capsys):
        """Test the substitution and its warning."""
        value = mixture_upper_bound(2, 0.5, [2.0, None, 0.0])
        assert value == pytest.approx(0.25 * 2.0 + 0.5 * trivial_capacity_bound(2, 1))
        assert "Warning: capacity for k=1 unavailable" in capsys.readouterr().err

    def test_invalid_probability(self):
        """Test that p must lie in [0, 1]."""
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            mixture_upper_bound(2, 1.5, [2.0, 1.0, 0.0])

    def test_wrong_length(self):
        """Test that one capacity per k is required."""
        with pytest.raises(ValueError, match="need 3 capacities"):
            mixture_upper_bound(2, 0.5, [2.0, 1.0])

    def test_curve(self):
        """Test the grid and its endpoints."""
        curve = bound_curve(2, [2.0, 1.0, 0.0], 4)
        assert [p for p, _, _ in curve] == [0.0, 0.25, 0.5, 0.75, 1.0]
        assert curve[0][1] == pytest.approx(2.0)
        assert curve[0][2] == pytest.approx(1.0)
        assert curve[-1][1] == pytest.approx(0.0)

    def test_trivial_bound(self):
        """Test (n-k) log2 q."""
        assert trivial_capacity_bound(5, 2, 4) == pytest.approx(6.0)
        assert trivial_capacity_bound(2, 3) == 0.0
