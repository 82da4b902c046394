"""Embedding numbers, weighted insertion/deletion balls and the weighted log-sum W."""

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from enum import Enum
from math import comb

import numpy as np

from .words import Word, alternating_profile, run_length_profile

U128_MAX = (1 << 128) - 1


class EmbeddingOverflowError(OverflowError):
    """An embedding count left the unsigned 128-bit range."""


class BallKind(str, Enum):
    INSERTION = "insertion"
    DELETION = "deletion"


def _check_same_alphabet(y: Word, x: Word):
    if y.q != x.q:
        raise ValueError(f"alphabet mismatch: q={y.q} and q={x.q}")


def _check_binary(word: Word):
    if word.q != 2:
        raise ValueError(f"binary word required, got alphabet size {word.q}")


def _check_range(value: int) -> int:
    if value > U128_MAX:
        raise EmbeddingOverflowError(f"embedding count {value} exceeds 128 bits")
    return value


def _count_embeddings(y: tuple[int, ...], x: tuple[int, ...]) -> int:
    m = len(y)
    if m > len(x):
        return 0
    # counts[j] = embeddings of y[:j] in the prefix of x read so far
    counts = [1] + [0] * m
    for symbol in x:
        for j in range(m, 0, -1):
            if y[j - 1] == symbol:
                counts[j] += counts[j - 1]
    return counts[m]


def embedding_number(y: Word, x: Word) -> int:
    """
    Count the index sets at which y occurs as a subsequence of x.

    Args:
        y: The embedded word (may be empty, which embeds exactly once)
        x: The host word

    Returns:
        ω_y(x), zero when y is longer than x

    Raises:
        ValueError: If the words use different alphabets
        EmbeddingOverflowError: If the count exceeds 128 bits
    """
    _check_same_alphabet(y, x)
    return _check_range(_count_embeddings(y.symbols, x.symbols))


def xlog2x(a: float) -> float:
    """F(a) = a·log2(a), with F(0) = F(1) = 0."""
    return a * math.log2(a) if a > 1 else 0.0


@dataclass(frozen=True)
class WeightedBall:
    """All k-supersequences (or k-subsequences) of a center word with their counts.

    For insertion balls an entry maps x to ω_center(x); for deletion balls it
    maps a subsequence z to ω_z(center). Only nonzero counts are stored.
    """

    center: Word
    radius: int
    kind: BallKind
    entries: Mapping[Word, int]

    def __len__(self) -> int:
        return len(self.entries)

    def total(self) -> int:
        return sum(self.entries.values())

    def expected_total(self) -> int:
        """Normalization the counts must sum to."""
        n, k = len(self.center), self.radius
        if self.kind is BallKind.INSERTION:
            return comb(n + k, k) * self.center.q**k
        return comb(n, k)

    def spectrum(self) -> dict[int, int]:
        """Map embedding count -> number of words carrying it, by increasing count."""
        return dict(sorted(Counter(self.entries.values()).items()))

    def to_csv_rows(self) -> list[tuple[str, int]]:
        return [(str(word), count) for word, count in sorted(self.entries.items())]


def _insertion_candidates(
    symbols: tuple[int, ...], q: int, k: int
) -> set[tuple[int, ...]]:
    level = {symbols}
    for _ in range(k):
        level = {
            word[:p] + (s,) + word[p:]
            for word in level
            for p in range(len(word) + 1)
            for s in range(q)
        }
    return level


def insertion_ball(y: Word, k: int) -> WeightedBall:
    """
    Build the weighted k-insertion ball I_k(y).

    Args:
        y: Center word (may be empty)
        k: Number of insertions, k >= 0

    Returns:
        WeightedBall mapping every k-supersequence x of y to ω_y(x)
    """
    if k < 0:
        raise ValueError(f"radius must be nonnegative, got {k}")
    candidates = _insertion_candidates(y.symbols, y.q, k)
    entries = {
        Word._trusted(x, y.q): _check_range(_count_embeddings(y.symbols, x))
        for x in sorted(candidates)
    }
    return WeightedBall(center=y, radius=k, kind=BallKind.INSERTION, entries=entries)


def deletion_ball(y: Word, k: int) -> WeightedBall:
    """
    Build the weighted k-deletion ball D_k(y).

    Args:
        y: Center word
        k: Number of deletions, 0 <= k <= |y|

    Returns:
        WeightedBall mapping every k-subsequence z of y to ω_z(y)

    Raises:
        ValueError: If k is negative or exceeds the length of y
    """
    if not 0 <= k <= len(y):
        raise ValueError(f"cannot delete {k} symbols from a word of length {len(y)}")
    kept = len(y) - k
    candidates = {
        tuple(y.symbols[i] for i in positions)
        for positions in itertools.combinations(range(len(y)), kept)
    }
    entries = {
        Word._trusted(z, y.q): _check_range(_count_embeddings(z, y.symbols))
        for z in sorted(candidates)
    }
    return WeightedBall(center=y, radius=k, kind=BallKind.DELETION, entries=entries)


def full_scan_ball(y: Word, k: int, kind: BallKind) -> WeightedBall:
    """Reference ball built by scanning every word of length |y|±k."""
    if kind is BallKind.INSERTION:
        length = len(y) + k
    else:
        if not 0 <= k <= len(y):
            raise ValueError(
                f"cannot delete {k} symbols from a word of length {len(y)}"
            )
        length = len(y) - k
    entries: dict[Word, int] = {}
    for symbols in itertools.product(range(y.q), repeat=length):
        if kind is BallKind.INSERTION:
            count = _count_embeddings(y.symbols, symbols)
        else:
            count = _count_embeddings(symbols, y.symbols)
        if count:
            entries[Word._trusted(symbols, y.q)] = count
    return WeightedBall(center=y, radius=k, kind=kind, entries=entries)


def counts_log_sum(counts: Iterable[int]) -> float:
    """Σ c·log2(c) over counts, accumulated with numpy's pairwise summation."""
    values = np.fromiter(counts, dtype=np.float64)
    if values.size == 0:
        return 0.0
    return float(np.sum(values * np.log2(values)))


def weighted_log_sum(ball: WeightedBall) -> float:
    """
    Weighted log-sum W of a ball: Σ ω·log2(ω) over its entries.

    Args:
        ball: Weighted insertion or deletion ball

    Returns:
        W in bits·count units (0 when every count is 1)
    """
    return counts_log_sum(ball.entries.values())


def segment_extension_embedding(y: Word, i: int) -> int:
    """
    Embedding count of y in the word whose i-th alternating segment is two longer.

    Closed form 1 + Σ_{j=b_i}^{f_i} a_j - (a_{b_i}-1)[b_i≠i] - (a_{f_i}-1)[f_i≠i].

    Args:
        y: Nonempty binary word
        i: 1-based alternating segment index

    Returns:
        ω_y(extend_segment(y, i))

    Raises:
        ValueError: If y is not binary or i is out of range
    """
    _check_binary(y)
    profile = alternating_profile(y)
    if not 1 <= i <= profile.count:
        raise ValueError(f"segment index {i} outside [1, {profile.count}]")
    segments = profile.segments
    before, after = profile.backward[i - 1], profile.forward[i - 1]
    value = 1 + sum(segments[before - 1 : after])
    if before != i:
        value -= segments[before - 1] - 1
    if after != i:
        value -= segments[after - 1] - 1
    return value


def extend_segment(y: Word, i: int) -> Word:
    """Lengthen the i-th maximal alternating segment of a binary word by two symbols."""
    _check_binary(y)
    profile = alternating_profile(y)
    if not 1 <= i <= profile.count:
        raise ValueError(f"segment index {i} outside [1, {profile.count}]")
    start = sum(profile.segments[: i - 1])
    length = profile.segments[i - 1]
    first = profile.first_symbols[i - 1]
    extended = tuple(first if t % 2 == 0 else 1 - first for t in range(length + 2))
    return Word(y.symbols[:start] + extended + y.symbols[start + length :], 2)


def special_supersequences(y: Word) -> tuple[Word, Word, Word]:
    """The supersequences y1·ȳ1·y, ȳ1·ȳ1·y and ȳ1·y1·y of a nonempty binary word."""
    _check_binary(y)
    if len(y) == 0:
        raise ValueError("special supersequences need a nonempty word")
    head = y[0]
    flipped = 1 - head
    return (
        Word((head, flipped) + y.symbols, 2),
        Word((flipped, flipped) + y.symbols, 2),
        Word((flipped, head) + y.symbols, 2),
    )


def special_supersequence_embeddings(y: Word) -> tuple[int, int, int]:
    """Closed-form embedding counts of y in its three special supersequences."""
    _check_binary(y)
    if len(y) == 0:
        raise ValueError("special supersequences need a nonempty word")
    beta = segment_extension_embedding(y, 1)
    delta = run_length_profile(y).runs[0] + 1
    return beta, 1, delta


def prefix_recursion(y: Word, x: Word, alpha: int) -> int:
    """
    Right-hand side of the prefix recursion for ω_{α·y}(α·x).

    Evaluates ω_y(x) + Σ_i [x_i = α]·ω_y(x[i+1:]) over every position i of x;
    terms whose suffix is shorter than y vanish.

    Args:
        y: Embedded word
        x: Host word over the same alphabet
        alpha: Symbol prepended to both words

    Returns:
        The recursion value, equal to embedding_number(α·y, α·x)
    """
    _check_same_alphabet(y, x)
    if not 0 <= alpha < y.q:
        raise ValueError(f"symbol {alpha} outside alphabet of size {y.q}")
    total = _count_embeddings(y.symbols, x.symbols)
    for i, symbol in enumerate(x.symbols):
        if symbol == alpha:
            total += _count_embeddings(y.symbols, x.symbols[i + 1 :])
    return _check_range(total)


def prefixed_case_embedding(y: Word, x: Word, alpha: int) -> int | None:
    """
    Three-case formula for ω_{α·y}(α·x) when x has length |y| + 2.

    Returns None for the uncovered case α = y1 = x1.

    Args:
        y: Nonempty binary word
        x: Binary word of length |y| + 2
        alpha: Prepended symbol

    Returns:
        ω_y(x) + [x = x_β] if α ≠ y1 = x1; 2·ω_y(x) + [x = x_γ] if α ≠ y1 ≠ x1;
        ω_y(x) + [x = x_δ] if α = y1 ≠ x1
    """
    _check_binary(y)
    _check_same_alphabet(y, x)
    if len(y) == 0 or len(x) != len(y) + 2:
        raise ValueError("need a nonempty y and x two symbols longer than y")
    x_beta, x_gamma, x_delta = special_supersequences(y)
    base = _count_embeddings(y.symbols, x.symbols)
    head = y[0]
    if alpha != head and x[0] == head:
        return base + (x == x_beta)
    if alpha != head:
        return 2 * base + (x == x_gamma)
    if x[0] != head:
        return base + (x == x_delta)
    return None
