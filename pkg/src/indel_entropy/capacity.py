"""Small-n capacities of the k-deletion and k-insertion channels."""

import math
import sys
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass
from math import comb

import numpy as np

from . import config
from .embedding import deletion_ball, insertion_ball
from .entropy import ChannelKind, ChannelSpec, output_entropy_enumerated
from .parallel import map_ordered
from .words import Word, enumerate_words


@dataclass(frozen=True)
class TransitionMatrix:
    """Dense channel law: probabilities[i, j] = Pr(outputs[j] | inputs[i])."""

    channel: ChannelSpec
    n: int
    inputs: tuple[Word, ...]
    outputs: tuple[Word, ...]
    probabilities: np.ndarray


@dataclass(frozen=True)
class CapacityResult:
    capacity_bits: float
    upper_bits: float
    optimal_input_distribution: np.ndarray
    iterations: int
    converged: bool
    lower_history: tuple[float, ...]


@dataclass(frozen=True)
class CapacityRow:
    """One order k of a capacity table; capacity_bits is None when over budget."""

    k: int
    capacity_bits: float | None
    converged: bool | None


def _output_length(channel: ChannelSpec, n: int) -> int:
    if n < 0:
        raise ValueError(f"block length must be nonnegative, got {n}")
    if channel.kind is ChannelKind.DELETION:
        if channel.k > n:
            raise ValueError(f"cannot delete {channel.k} symbols from length {n}")
        return n - channel.k
    return n + channel.k


def transition_matrix(
    channel: ChannelSpec,
    n: int,
    *,
    budget: int = config.DEFAULT_MATRIX_BUDGET,
    max_workers: int = 1,
    show_progress: bool = False,
) -> TransitionMatrix:
    """
    Build the dense transition matrix of a channel on inputs of length n.

    Args:
        channel: k-Del or k-Ins channel over Σ_q
        n: Input length
        budget: Maximum number of matrix cells (default: 2^26)
        max_workers: Number of worker threads for row construction
        show_progress: Whether to show a progress bar on stderr

    Returns:
        TransitionMatrix with inputs and outputs in lexicographic order

    Raises:
        BudgetExceededError: If q^n · q^(n±k) exceeds the budget
    """
    q, k = channel.q, channel.k
    out_length = _output_length(channel, n)
    config.check_budget(
        q**n * q**out_length,
        budget,
        what=f"a {channel.label} matrix at n={n}",
        env_var=config.MATRIX_BUDGET_ENV,
    )
    inputs = tuple(enumerate_words(q, n))
    outputs = tuple(enumerate_words(q, out_length))
    column = {word: j for j, word in enumerate(outputs)}
    if channel.kind is ChannelKind.DELETION:
        normalizer = comb(n, k)
    else:
        normalizer = comb(n + k, k) * q**k

    def row(x: Word) -> np.ndarray:
        ball = deletion_ball(x, k) if channel.kind is ChannelKind.DELETION else insertion_ball(x, k)
        values = np.zeros(len(outputs))
        for word, count in ball.entries.items():
            values[column[word]] = count / normalizer
        return values

    rows = map_ordered(
        row,
        inputs,
        max_workers=max_workers,
        show_progress=show_progress,
        description="Building rows",
    )
    return TransitionMatrix(
        channel=channel,
        n=n,
        inputs=inputs,
        outputs=outputs,
        probabilities=np.vstack(rows),
    )


def _divergences(law: np.ndarray, log_law: np.ndarray, positive: np.ndarray, distribution: np.ndarray) -> np.ndarray:
    output = distribution @ law
    log_output = np.zeros_like(output)
    seen = output > 0
    log_output[seen] = np.log2(output[seen])
    return np.where(positive, law * (log_law - log_output), 0.0).sum(axis=1)


def _log_law(law: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    positive = law > 0
    log_law = np.zeros_like(law)
    log_law[positive] = np.log2(law[positive])
    return log_law, positive


def mutual_information(matrix: TransitionMatrix, distribution: np.ndarray) -> float:
    """I(X;Y) in bits for the given input distribution."""
    law = matrix.probabilities
    log_law, positive = _log_law(law)
    return float(distribution @ _divergences(law, log_law, positive, distribution))


def blahut_arimoto(
    matrix: TransitionMatrix,
    tolerance: float = config.DEFAULT_TOLERANCE,
    max_iterations: int = 100_000,
) -> CapacityResult:
    """
    Channel capacity by Blahut–Arimoto iteration from the uniform input.

    Each iteration computes c(x) = 2^D(W(.|x) || pW) and brackets the capacity
    between log2 Σ p(x)c(x) and log2 max c(x); it stops once the bracket is
    narrower than the tolerance.

    Args:
        matrix: Row-stochastic transition matrix
        tolerance: Bracket width at which to stop, in bits (default: 1e-9)
        max_iterations: Iteration cap (default: 100000)

    Returns:
        CapacityResult with the lower estimate as capacity_bits; converged is
        False when the cap is reached first
    """
    law = matrix.probabilities
    if law.ndim != 2 or law.shape[0] == 0:
        raise ValueError("transition matrix must be a nonempty 2-D array")
    if not np.allclose(law.sum(axis=1), 1.0, rtol=0.0, atol=1e-12):
        raise ValueError("transition matrix rows must sum to 1")
    if max_iterations < 1:
        raise ValueError(f"max_iterations must be at least 1, got {max_iterations}")

    log_law, positive = _log_law(law)
    distribution = np.full(law.shape[0], 1.0 / law.shape[0])
    history: list[float] = []
    converged = False
    lower = upper = 0.0

    for iteration in range(1, max_iterations + 1):
        divergence = _divergences(law, log_law, positive, distribution)
        weights = np.exp2(divergence)
        total = float(distribution @ weights)
        lower = math.log2(total)
        upper = float(divergence.max())
        history.append(lower)
        if upper - lower < tolerance:
            converged = True
            break
        distribution = distribution * weights / total

    return CapacityResult(
        capacity_bits=lower,
        upper_bits=upper,
        optimal_input_distribution=distribution,
        iterations=iteration,
        converged=converged,
        lower_history=tuple(history),
    )


def uniform_mutual_information(channel: ChannelSpec, n: int) -> float:
    """
    I(X;Y) under uniform input, computed as H(Y) - mean_x H(Y|x).

    Uses the output entropies of the entropy module and the weighted balls
    directly, without building a transition matrix.
    """
    q, k = channel.q, channel.k
    _output_length(channel, n)
    inputs = list(enumerate_words(q, n))
    if channel.kind is ChannelKind.DELETION:
        normalizer = comb(n, k)
    else:
        normalizer = comb(n + k, k) * q**k

    output_mass: defaultdict[Word, int] = defaultdict(int)
    conditional = []
    for x in inputs:
        ball = deletion_ball(x, k) if channel.kind is ChannelKind.DELETION else insertion_ball(x, k)
        for word, count in ball.entries.items():
            output_mass[word] += count
        conditional.append(output_entropy_enumerated(x, channel).entropy_bits)

    mass = np.array(list(output_mass.values()), dtype=np.float64)
    probabilities = mass / (normalizer * len(inputs))
    output_entropy = float(-np.sum(probabilities * np.log2(probabilities)))
    return output_entropy - math.fsum(conditional) / len(inputs)


def trivial_capacity_bound(n: int, k: int, q: int = 2) -> float:
    """(n-k)·log2(q): the capacity can never exceed the output alphabet size."""
    return max(0, n - k) * math.log2(q)


def capacity_table(
    n: int,
    q: int = 2,
    kind: ChannelKind = ChannelKind.DELETION,
    *,
    tolerance: float = config.DEFAULT_TOLERANCE,
    max_iterations: int = 100_000,
    budget: int = config.DEFAULT_MATRIX_BUDGET,
    max_workers: int = 1,
) -> list[CapacityRow]:
    """
    Capacities for k = 0..n at block length n.

    Orders whose matrix exceeds the budget are returned with capacity_bits=None.
    """
    rows = []
    for k in range(n + 1):
        channel = ChannelSpec(ChannelKind(kind), k, q)
        try:
            matrix = transition_matrix(channel, n, budget=budget, max_workers=max_workers)
        except config.BudgetExceededError:
            rows.append(CapacityRow(k=k, capacity_bits=None, converged=None))
            continue
        result = blahut_arimoto(matrix, tolerance, max_iterations)
        rows.append(CapacityRow(k=k, capacity_bits=result.capacity_bits, converged=result.converged))
    return rows


def _fill_capacities(
    n: int, capacities: Sequence[float | None], q: int
) -> list[float]:
    if len(capacities) != n + 1:
        raise ValueError(f"need {n + 1} capacities, got {len(capacities)}")
    filled = []
    for k, capacity in enumerate(capacities):
        if capacity is None:
            print(
                f"Warning: capacity for k={k} unavailable, using trivial bound",
                file=sys.stderr,
            )
            capacity = trivial_capacity_bound(n, k, q)
        filled.append(capacity)
    return filled


def mixture_upper_bound(
    n: int,
    p: float,
    capacities: Sequence[float | None],
    *,
    q: int = 2,
    per_symbol: bool = False,
) -> float:
    """
    Upper bound Σ_k C(n,k)·p^k·(1-p)^(n-k)·C_k on the deletion-channel capacity.

    Args:
        n: Block length
        p: Deletion probability in [0, 1]
        capacities: C_k for k = 0..n; None entries use the trivial bound (n-k)·log2(q)
        q: Alphabet size for the trivial bound
        per_symbol: Divide the bound by n

    Returns:
        The bound in bits (per block, or per symbol)

    Raises:
        ValueError: If p is outside [0, 1] or capacities has the wrong length
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"deletion probability must lie in [0, 1], got {p}")
    filled = _fill_capacities(n, capacities, q)
    bound = math.fsum(
        comb(n, k) * p**k * (1 - p) ** (n - k) * capacity
        for k, capacity in enumerate(filled)
    )
    if per_symbol:
        return bound / n if n else 0.0
    return bound


def bound_curve(
    n: int, capacities: Sequence[float | None], steps: int, *, q: int = 2
) -> list[tuple[float, float, float]]:
    """(p, bound_bits, bound_bits_per_symbol) for p on an even grid over [0, 1]."""
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    filled = _fill_capacities(n, capacities, q)
    curve = []
    for p in np.linspace(0.0, 1.0, steps + 1):
        bound = mixture_upper_bound(n, float(p), filled, q=q)
        curve.append((float(p), bound, bound / n if n else 0.0))
    return curve
