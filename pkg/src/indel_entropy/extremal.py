"""Extremal and average input entropies, with exhaustive-search oracles."""

import itertools
import math
from collections import Counter
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from enum import Enum
from math import comb

from . import config
from .embedding import (
    WeightedBall,
    counts_log_sum,
    deletion_ball,
    embedding_number,
    insertion_ball,
    segment_extension_embedding,
    weighted_log_sum,
    xlog2x,
)
from .entropy import (
    ChannelKind,
    ChannelSpec,
    closed_form,
    has_closed_form,
    input_entropy_enumerated,
)
from .parallel import map_ordered
from .words import (
    Word,
    enumerate_words,
    enumerate_words_with_runs,
    make_balanced,
    make_constant,
    make_skewed,
    run_length_profile,
)

Objective = Callable[[Word], float]


class Extremum(str, Enum):
    MIN = "min"
    MAX = "max"


@dataclass(frozen=True)
class ExtremumResult:
    """Optimal value and every word attaining it.

    ``printed_bits`` carries a second, printed closed form when it differs
    from the value computed here (reported, never substituted).
    """

    value_bits: float
    witnesses: tuple[Word, ...]
    q: int
    m: int
    runs: int | None
    objective: str
    printed_bits: float | None = None


@dataclass(frozen=True)
class RunCountTable:
    """N(n, r, q): number of runs of length r summed over all words of Σ_q^n."""

    n: int
    q: int
    counts: tuple[int, ...]

    def __getitem__(self, r: int) -> int:
        if not 1 <= r <= self.n:
            raise IndexError(f"run length {r} outside [1, {self.n}]")
        return self.counts[r - 1]

    def positions(self) -> int:
        """Σ r·N(n, r, q); equals n·q^n."""
        return sum(r * c for r, c in enumerate(self.counts, start=1))


@dataclass(frozen=True)
class AverageBounds:
    """Lower bounds on an average input entropy.

    ``derived_bits`` follows from log2(r+1) <= r (resp. log2(r) <= r-1) and is
    always below the average; ``printed_bits`` is the printed closed form.
    """

    derived_bits: float
    printed_bits: float


@dataclass(frozen=True)
class FigureRow:
    n: int
    min_bits: float
    max_bits: float
    avg_bits: float
    bound_bits: float


def _require_single(channel: ChannelSpec):
    if channel.k != 1:
        raise ValueError(f"closed-form extremes need k=1, got {channel.label}")


def _output_length_check(channel: ChannelSpec, m: int):
    if m < 1:
        raise ValueError(f"output length must be at least 1, got {m}")
    if channel.kind is ChannelKind.INSERTION and m <= channel.k:
        raise ValueError(
            f"{channel.label} outputs must be longer than {channel.k}, got {m}"
        )


def _sorted_profile(word: Word) -> tuple[int, ...]:
    return tuple(sorted(run_length_profile(word).runs))


def fixed_runs_value(q: int, m: int, runs: int, channel: ChannelSpec, which: Extremum) -> float:
    """
    Extremal input entropy among outputs of length m with exactly R runs.

    Minima are attained by skewed profiles (m-R+1, 1, ..., 1), maxima by
    balanced profiles.

    Args:
        q: Alphabet size
        m: Output length
        runs: Run count R, 1 <= R <= m
        channel: 1-Del or 1-Ins channel
        which: min or max

    Returns:
        The extremal entropy in bits
    """
    _require_single(channel)
    _output_length_check(channel, m)
    if not 1 <= runs <= m:
        raise ValueError(f"run count must lie in [1, {m}], got {runs}")
    which = Extremum(which)
    deletion = channel.kind is ChannelKind.DELETION
    shift = 1 if deletion else 0
    normalizer = (m + 1) * q if deletion else m

    if which is Extremum.MIN:
        log_sum = xlog2x(m - runs + 1 + shift) + (runs - 1) * xlog2x(1 + shift)
    else:
        short, extra = divmod(m, runs)
        log_sum = extra * xlog2x(short + 1 + shift) + (runs - extra) * xlog2x(
            short + shift
        )
    return max(0.0, math.log2(normalizer) - log_sum / normalizer)


def extremum_over_fixed_runs(
    q: int, m: int, runs: int, channel: ChannelSpec, which: Extremum
) -> ExtremumResult:
    """
    Extremal input entropy and all extremizers among words with R runs.

    Args:
        q: Alphabet size
        m: Output length
        runs: Run count R, 1 <= R <= m
        channel: 1-Del or 1-Ins channel over Σ_q
        which: min (skewed witnesses) or max (balanced witnesses)

    Returns:
        ExtremumResult whose witnesses are every word in Σ_{q,R}^m with the
        extremal run-length multiset, in lexicographic order

    Raises:
        ValueError: If R is out of range or the channel is not k=1
    """
    which = Extremum(which)
    value = fixed_runs_value(q, m, runs, channel, which)
    shape = make_skewed(q, m, runs) if which is Extremum.MIN else make_balanced(q, m, runs)
    target = _sorted_profile(shape)
    witnesses = tuple(
        word
        for word in enumerate_words_with_runs(q, m, runs)
        if _sorted_profile(word) == target
    )
    return ExtremumResult(
        value_bits=value,
        witnesses=witnesses,
        q=q,
        m=m,
        runs=runs,
        objective=f"{which.value} H_in {channel.label}",
    )


def two_deletion_minimum_reference(m: int) -> float:
    """2 + (3/4)·log2 C(n,2) - (1/2)·log2(n-1) with n = m + 2: the constant-word value."""
    if m < 1:
        raise ValueError(f"output length must be at least 1, got {m}")
    n = m + 2
    return 2 + 0.75 * math.log2(comb(n, 2)) - 0.5 * math.log2(n - 1)


def two_deletion_minimum_printed(m: int) -> float:
    """The printed form 2 + (3/4)·log2 C(m,2) - (1/2)·log2(m+1), indexed by m."""
    if m < 2:
        raise ValueError(f"printed form needs m >= 2, got {m}")
    return 2 + 0.75 * math.log2(comb(m, 2)) - 0.5 * math.log2(m + 1)


def _unsupported(channel: ChannelSpec, which: Extremum) -> ValueError:
    return ValueError(
        f"{which.value} of {channel.label} over q={channel.q} is not characterized "
        "in closed form; use an exhaustive scan"
    )


def minimum_value(q: int, m: int, channel: ChannelSpec) -> float:
    """Global minimum input entropy over Σ_q^m, without building witnesses."""
    _output_length_check(channel, m)
    if channel.kind is ChannelKind.INSERTION and channel.k >= 1:
        return 0.0
    if channel.k == 1:
        n = m + 1
        return math.log2(n * q) - math.log2(n) / q
    if channel.k == 2 and q == 2:
        return input_entropy_enumerated(make_constant(2, m), channel).entropy_bits
    raise _unsupported(channel, Extremum.MIN)


def maximum_value(q: int, m: int, channel: ChannelSpec) -> float:
    """Global maximum input entropy over Σ_q^m, without building witnesses."""
    _output_length_check(channel, m)
    if channel.k != 1:
        raise _unsupported(channel, Extremum.MAX)
    if channel.kind is ChannelKind.DELETION:
        n = m + 1
        return math.log2(n * q) - 2 * m / (n * q)
    return math.log2(m)


def global_extremum(q: int, m: int, channel: ChannelSpec, which: Extremum) -> ExtremumResult:
    """
    Global extremal input entropy over Σ_q^m with the full witness set.

    Supported: k=1 minima and maxima for any q; the 2-Del minimum for q=2;
    k-Ins minima for every k.

    Args:
        q: Alphabet size (must match channel.q)
        m: Output length
        channel: Channel specification
        which: min or max

    Returns:
        ExtremumResult with constant words for minima and all words with m
        runs for maxima

    Raises:
        ValueError: If the combination is not characterized in closed form
    """
    which = Extremum(which)
    if channel.q != q:
        raise ValueError(f"channel alphabet q={channel.q} differs from q={q}")
    objective = f"{which.value} H_in {channel.label}"
    printed = None

    if which is Extremum.MIN:
        value = minimum_value(q, m, channel)
        witnesses = tuple(make_constant(q, m, s) for s in range(q))
        if channel.kind is ChannelKind.DELETION and channel.k == 2 and m >= 2:
            printed = two_deletion_minimum_printed(m)
    else:
        value = maximum_value(q, m, channel)
        witnesses = tuple(enumerate_words_with_runs(q, m, m))

    return ExtremumResult(
        value_bits=value,
        witnesses=witnesses,
        q=q,
        m=m,
        runs=None,
        objective=objective,
        printed_bits=printed,
    )


@dataclass(frozen=True)
class ChannelObjective:
    """A word -> bits objective bound to one channel, so scans can check q."""

    channel: ChannelSpec
    measure: Callable[[Word, ChannelSpec], float]

    def __call__(self, word: Word) -> float:
        return self.measure(word, self.channel)


def _closed_entropy(word: Word, channel: ChannelSpec) -> float:
    return closed_form(word, channel).entropy_bits


def _enumerated_entropy(word: Word, channel: ChannelSpec) -> float:
    return input_entropy_enumerated(word, channel).entropy_bits


def _insertion_log_sum(word: Word, channel: ChannelSpec) -> float:
    return weighted_log_sum(insertion_ball(word, channel.k))


def _deletion_log_sum(word: Word, channel: ChannelSpec) -> float:
    return weighted_log_sum(deletion_ball(word, channel.k))


def entropy_objective(channel: ChannelSpec) -> ChannelObjective:
    """Input entropy as a function of the output word (closed form when one exists)."""
    if has_closed_form(channel):
        return ChannelObjective(channel, _closed_entropy)
    return ChannelObjective(channel, _enumerated_entropy)


def log_sum_objective(channel: ChannelSpec) -> ChannelObjective:
    """W of the ball the input entropy is built from: I_k(y) for k-Del, D_k(y) for k-Ins."""
    if channel.kind is ChannelKind.DELETION:
        return ChannelObjective(channel, _insertion_log_sum)
    return ChannelObjective(channel, _deletion_log_sum)


def _scan_prefix(
    prefix: tuple[int, ...],
    q: int,
    m: int,
    objective: Objective,
    sign: int,
    tolerance: float,
) -> tuple[float, list[tuple[float, Word]]]:
    best = math.inf
    near: list[tuple[float, Word]] = []
    for tail in itertools.product(range(q), repeat=m - len(prefix)):
        word = Word._trusted(prefix + tail, q)
        score = sign * objective(word)
        if score < best:
            best = score
            near = [(s, w) for s, w in near if s <= best + tolerance]
        if score <= best + tolerance:
            near.append((score, word))
    return best, near


def exhaustive_argopt(
    q: int,
    m: int,
    objective: Objective,
    which: Extremum,
    *,
    budget: int = config.DEFAULT_BUDGET,
    max_workers: int = 1,
    show_progress: bool = False,
    on_progress: Callable[[int], None] | None = None,
    tolerance: float = config.DEFAULT_TOLERANCE,
    label: str = "objective",
) -> ExtremumResult:
    """
    Scan every word of Σ_q^m and return the optimum with all its witnesses.

    The word space is split by prefix across workers; the merged value and
    witness set do not depend on the split or the worker count.

    Args:
        q: Alphabet size
        m: Word length
        objective: Function word -> bits; a ChannelObjective must use alphabet q
        which: min or max
        budget: Maximum number of words to scan (default: 2·10^7)
        max_workers: Number of worker threads; results are identical for any
            count, and the scan is CPU-bound so threads do not speed it up
        show_progress: Whether to show a progress bar on stderr
        on_progress: Optional callback receiving the number of words just scanned
        tolerance: Words within this many bits of the optimum count as witnesses
        label: Objective description stored in the result

    Returns:
        ExtremumResult with witnesses in lexicographic order

    Raises:
        ValueError: If the objective's channel uses another alphabet
        BudgetExceededError: If q^m exceeds the budget
    """
    which = Extremum(which)
    if q < 2:
        raise ValueError(f"alphabet size must be at least 2, got {q}")
    if isinstance(objective, ChannelObjective) and objective.channel.q != q:
        raise ValueError(
            f"objective channel {objective.channel.label} uses q={objective.channel.q}, "
            f"scan uses q={q}"
        )
    if m < 0:
        raise ValueError(f"word length must be nonnegative, got {m}")
    size = q**m
    config.check_budget(size, budget, what=f"scanning {q}^{m} words")

    sign = 1 if which is Extremum.MIN else -1
    depth = min(m, 2)
    prefixes = list(itertools.product(range(q), repeat=depth))
    chunk = q ** (m - depth)

    def scan(prefix: tuple[int, ...]) -> tuple[float, list[tuple[float, Word]]]:
        return _scan_prefix(prefix, q, m, objective, sign, tolerance)

    def done(_index: int):
        if on_progress is not None:
            on_progress(chunk)

    partial = map_ordered(
        scan,
        prefixes,
        max_workers=max_workers,
        show_progress=show_progress,
        description=f"Scanning {q}^{m} words",
        on_done=done,
    )
    best = min(score for score, _ in partial)
    witnesses = sorted(
        word
        for _, near in partial
        for score, word in near
        if score <= best + tolerance
    )
    return ExtremumResult(
        value_bits=sign * best,
        witnesses=tuple(witnesses),
        q=q,
        m=m,
        runs=None,
        objective=f"{which.value} {label}",
    )


def run_count_table(n: int, q: int) -> RunCountTable:
    """
    Count runs of each length over all words of Σ_q^n.

    Args:
        n: Word length, n >= 1
        q: Alphabet size

    Returns:
        RunCountTable with N(n,n,q) = q, N(n,n-1,q) = 2q(q-1) and
        N(n,r,q) = (q-1)·q^(n-r-1)·((q-1)(n-r+1) + 2) otherwise
    """
    if n < 1:
        raise ValueError(f"word length must be at least 1, got {n}")
    if q < 2:
        raise ValueError(f"alphabet size must be at least 2, got {q}")
    counts = []
    for r in range(1, n + 1):
        if r == n:
            counts.append(q)
        elif r == n - 1:
            counts.append(2 * q * (q - 1))
        else:
            counts.append((q - 1) * q ** (n - r - 1) * ((q - 1) * (n - r + 1) + 2))
    return RunCountTable(n=n, q=q, counts=tuple(counts))


def enumerated_run_count_table(n: int, q: int) -> RunCountTable:
    """RunCountTable built by summing run-length histograms of every word."""
    histogram: Counter[int] = Counter()
    for word in enumerate_words(q, n):
        histogram.update(run_length_profile(word).runs)
    return RunCountTable(n=n, q=q, counts=tuple(histogram[r] for r in range(1, n + 1)))


def _average_output_length(n: int, channel: ChannelSpec) -> int:
    _require_single(channel)
    if n < 2:
        raise ValueError(f"input length must be at least 2, got {n}")
    return n - 1 if channel.kind is ChannelKind.DELETION else n + 1


def average_input_entropy(n: int, q: int, channel: ChannelSpec) -> float:
    """
    Mean input entropy over all outputs, from the run-count table.

    Args:
        n: Input length, n >= 2
        q: Alphabet size
        channel: 1-Del (outputs of length n-1) or 1-Ins (outputs of length n+1)

    Returns:
        The average in bits
    """
    m = _average_output_length(n, channel)
    table = run_count_table(m, q)
    if channel.kind is ChannelKind.DELETION:
        log_sum = math.fsum(table[r] * xlog2x(r + 1) for r in range(1, m + 1))
        return math.log2(n * q) - log_sum / (n * q**n)
    log_sum = math.fsum(table[r] * xlog2x(r) for r in range(1, m + 1))
    return math.log2(m) - log_sum / (m * q**m)


def average_input_entropy_enumerated(
    n: int, q: int, channel: ChannelSpec, *, budget: int = config.DEFAULT_BUDGET
) -> float:
    """Mean of the enumerated input entropy over every output word."""
    m = _average_output_length(n, channel)
    config.check_budget(q**m, budget, what=f"averaging over {q}^{m} words")
    spec = ChannelSpec(channel.kind, channel.k, q)
    values = [
        input_entropy_enumerated(word, spec).entropy_bits
        for word in enumerate_words(q, m)
    ]
    return math.fsum(values) / len(values)


def average_lower_bound(n: int, q: int, channel: ChannelSpec) -> AverageBounds:
    """
    Lower bounds on the average input entropy.

    Args:
        n: Input length, n >= 2
        q: Alphabet size
        channel: 1-Del or 1-Ins

    Returns:
        AverageBounds with the derived bound and the printed closed form
    """
    m = _average_output_length(n, channel)
    table = run_count_table(m, q)
    if channel.kind is ChannelKind.DELETION:
        slack = math.fsum(table[r] * r * (r + 1) for r in range(1, m + 1))
        derived = math.log2(n * q) - slack / (n * q**n)
        printed = math.log2(n * q) - (
            2 * n / (q - 1)
            - (n * n - n) / q ** (n + 1)
            + (2 * q * q - 2 * q ** (n + 2)) / ((q - 1) ** 2 * q ** (n + 1))
        ) / n
    else:
        slack = math.fsum(table[r] * r * (r - 1) for r in range(1, m + 1))
        derived = math.log2(m) - slack / (m * q**m)
        printed = math.log2(n * q) + (
            n * n / q ** (n + 2)
            - n * (2 * q ** (n + 2) - q + 1) / ((q - 1) * q ** (n + 2))
            + 2 * (q**n - 1) / ((q - 1) ** 2 * q**n)
        ) / (n + 1)
    return AverageBounds(derived_bits=derived, printed_bits=printed)


def prefixed_weighted_log_sum(
    prefix: Sequence[int], words: Iterable[Word], target: Word
) -> float:
    """W over {prefix·x : x in words} of the embedding counts of target."""
    head = Word(tuple(prefix), target.q)
    counts = (embedding_number(target, head + word) for word in words)
    return counts_log_sum(c for c in counts if c > 0)


def _recursion_input(y: Word):
    if y.q != 2:
        raise ValueError(f"binary word required, got alphabet size {y.q}")
    if len(y) < 2:
        raise ValueError(f"need a word of length at least 2, got {len(y)}")


def double_deletion_recursion_split(y: Word) -> tuple[float, float]:
    """
    Both sides of the W-recursion for binary y with y1 != y2.

    With t = y without its first symbol and u = t without its first symbol:
    left is W over y1·I_2(t) of ω_y; right is 3·log2(3) - 2 + 4|y|
    + 2·W(I_1(t)) + F(θ+1) - F(θ) + W over y2·I_2(u) of ω_t, where θ is the
    count of t in its first special supersequence.

    Returns:
        (left, right), each computed from its own ball enumeration
    """
    _recursion_input(y)
    if y[0] == y[1]:
        raise ValueError("first two symbols must differ")
    tail = y[1:]
    ball: WeightedBall = insertion_ball(tail, 2)
    left = prefixed_weighted_log_sum((y[0],), ball.entries, y)
    theta = segment_extension_embedding(tail, 1)
    right = (
        3 * math.log2(3)
        - 2
        + 4 * len(y)
        + 2 * weighted_log_sum(insertion_ball(tail, 1))
        + xlog2x(theta + 1)
        - xlog2x(theta)
        + prefixed_weighted_log_sum((y[1],), insertion_ball(y[2:], 2).entries, tail)
    )
    return left, right


def double_deletion_recursion_same(y: Word) -> tuple[float, float]:
    """
    Both sides of the W-recursion for binary y with y1 = y2.

    With t = y without its first symbol: left is W over y1·ȳ2·I_1(t) of ω_y;
    right is F(r1+2) - F(r1+1) + W(I_1(t)) with r1 the first run length of t.

    Returns:
        (left, right), each computed from its own ball enumeration
    """
    _recursion_input(y)
    if y[0] != y[1]:
        raise ValueError("first two symbols must be equal")
    tail = y[1:]
    first_run = run_length_profile(tail).runs[0]
    left = prefixed_weighted_log_sum(
        (y[0], 1 - y[1]), insertion_ball(tail, 1).entries, y
    )
    right = (
        xlog2x(first_run + 2)
        - xlog2x(first_run + 1)
        + weighted_log_sum(insertion_ball(tail, 1))
    )
    return left, right


def appendix_w_difference(y: Word) -> float:
    """
    W over y1·y1·I_2(t) of ω_{y1·y}, minus W over y1·I_2(t) of ω_y, t = y without y1.

    Over binary words of a fixed length this is largest exactly at the two
    constant words.
    """
    if y.q != 2:
        raise ValueError(f"binary word required, got alphabet size {y.q}")
    if len(y) == 0:
        raise ValueError("need a nonempty word")
    head = y[0]
    ball = insertion_ball(y[1:], 2)
    longer = prefixed_weighted_log_sum((head, head), ball.entries, y.prepend(head))
    shorter = prefixed_weighted_log_sum((head,), ball.entries, y)
    return longer - shorter


def figure_rows(
    channel: ChannelSpec,
    n_values: Sequence[int],
    *,
    bound: str = "derived",
    max_workers: int = 1,
    show_progress: bool = False,
) -> list[FigureRow]:
    """
    Minimum, maximum, average and a lower bound of the input entropy per n.

    Args:
        channel: 1-Del or 1-Ins channel
        n_values: Input lengths, each >= 2
        bound: 'derived' or 'printed' lower bound in the bound column
        max_workers: Number of worker threads
        show_progress: Whether to show a progress bar on stderr

    Returns:
        One FigureRow per n, in the order of n_values
    """
    _require_single(channel)
    if bound not in ("derived", "printed"):
        raise ValueError(f"Unknown bound type: {bound}")
    q = channel.q

    def row(n: int) -> FigureRow:
        m = _average_output_length(n, channel)
        bounds = average_lower_bound(n, q, channel)
        return FigureRow(
            n=n,
            min_bits=minimum_value(q, m, channel),
            max_bits=maximum_value(q, m, channel),
            avg_bits=average_input_entropy(n, q, channel),
            bound_bits=bounds.derived_bits if bound == "derived" else bounds.printed_bits,
        )

    return map_ordered(
        row,
        list(n_values),
        max_workers=max_workers,
        show_progress=show_progress,
        description="Computing rows",
    )
