"""Input and output entropies of the k-deletion and k-insertion channels.

All entropies are in bits and assume uniform transmission over Σ_q^n.
"""

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from math import comb
from typing import Any

import numpy as np

from .embedding import (
    BallKind,
    counts_log_sum,
    deletion_ball,
    insertion_ball,
    segment_extension_embedding,
    xlog2x,
)
from .words import Word, alternating_profile, run_length_profile


class ChannelKind(str, Enum):
    DELETION = "deletion"
    INSERTION = "insertion"

    @classmethod
    def parse(cls, text: str) -> "ChannelKind":
        """Accept 'del'/'deletion' and 'ins'/'insertion'."""
        aliases = {"del": cls.DELETION, "ins": cls.INSERTION}
        key = text.strip().lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown channel '{text}', use del or ins") from None


class Direction(str, Enum):
    INPUT = "input"
    OUTPUT = "output"


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    ENUMERATION = "enumeration"


@dataclass(frozen=True)
class ChannelSpec:
    """A channel deleting or inserting exactly k symbols over Σ_q."""

    kind: ChannelKind
    k: int
    q: int = 2

    def __post_init__(self):
        object.__setattr__(self, "kind", ChannelKind(self.kind))
        if self.k < 0:
            raise ValueError(f"k must be nonnegative, got {self.k}")
        if self.q < 2:
            raise ValueError(f"alphabet size must be at least 2, got {self.q}")

    @property
    def label(self) -> str:
        suffix = "Del" if self.kind is ChannelKind.DELETION else "Ins"
        return f"{self.k}-{suffix}"

    def dual(self) -> "ChannelSpec":
        """The channel of the other kind with the same k and q."""
        other = (
            ChannelKind.INSERTION
            if self.kind is ChannelKind.DELETION
            else ChannelKind.DELETION
        )
        return ChannelSpec(other, self.k, self.q)


@dataclass(frozen=True)
class EntropyReport:
    channel: ChannelSpec
    word: Word
    direction: Direction
    method: Method
    entropy_bits: float
    spectrum: tuple[tuple[int, int], ...] | None = None

    def as_record(self) -> dict[str, Any]:
        """Flat record used by the csv and json output formats."""
        return {
            "kind": self.channel.kind.value,
            "k": self.channel.k,
            "q": self.channel.q,
            "word": str(self.word),
            "direction": self.direction.value,
            "method": self.method.value,
            "entropy_bits": self.entropy_bits,
            "spectrum": [list(pair) for pair in self.spectrum or ()],
        }


@dataclass(frozen=True)
class SpectrumEntry:
    case: int
    value: int
    multiplicity: int


@dataclass(frozen=True)
class SpectrumByCase:
    """Embedding counts of a 2-ball grouped by the case that produces them."""

    kind: BallKind
    word: Word
    entries: tuple[SpectrumEntry, ...]

    def total(self) -> int:
        return sum(e.value * e.multiplicity for e in self.entries)

    def size(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def weighted_log_sum(self) -> float:
        if not self.entries:
            return 0.0
        values = np.array([e.value for e in self.entries], dtype=np.float64)
        weights = np.array([e.multiplicity for e in self.entries], dtype=np.float64)
        return float(np.sum(weights * values * np.log2(values)))

    def as_multiset(self) -> dict[int, int]:
        merged: Counter[int] = Counter()
        for e in self.entries:
            merged[e.value] += e.multiplicity
        return dict(sorted(merged.items()))


def _entropy(normalizer: int, log_sum: float) -> float:
    # log2(T) - W/T, clamped at 0 against rounding on deterministic posteriors
    return max(0.0, math.log2(normalizer) - log_sum / normalizer)


def _distribution_entropy(counts: list[int], total: int) -> float:
    probabilities = np.array(counts, dtype=np.float64) / total
    return max(0.0, float(-np.sum(probabilities * np.log2(probabilities))))


def _check_channel_alphabet(word: Word, channel: ChannelSpec):
    if word.q != channel.q:
        raise ValueError(
            f"word alphabet q={word.q} does not match channel q={channel.q}"
        )


def _check_binary(word: Word):
    if word.q != 2:
        raise ValueError(f"binary word required, got alphabet size {word.q}")


def _spectrum_pairs(counts: Counter[int] | dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(counts.items()))


def input_entropy_enumerated(y: Word, channel: ChannelSpec) -> EntropyReport:
    """
    Input entropy of an output y, computed from its weighted ball.

    Args:
        y: Channel output
        channel: Deletion (inputs of length |y|+k) or insertion (inputs of length |y|-k)

    Returns:
        EntropyReport with method=enumeration and the embedding-count spectrum

    Raises:
        ValueError: For insertion when |y| <= k, or on alphabet mismatch
    """
    _check_channel_alphabet(y, channel)
    k = channel.k
    if channel.kind is ChannelKind.DELETION:
        ball = insertion_ball(y, k)
        normalizer = comb(len(y) + k, k) * channel.q**k
    else:
        if len(y) <= k:
            raise ValueError(
                f"no valid input length: output of length {len(y)} "
                f"cannot come from {k} insertions"
            )
        ball = deletion_ball(y, k)
        normalizer = comb(len(y), k)
    return EntropyReport(
        channel=channel,
        word=y,
        direction=Direction.INPUT,
        method=Method.ENUMERATION,
        entropy_bits=_entropy(normalizer, counts_log_sum(ball.entries.values())),
        spectrum=_spectrum_pairs(ball.spectrum()),
    )


def output_entropy_enumerated(x: Word, channel: ChannelSpec) -> EntropyReport:
    """
    Output entropy of an input x: entropy of the channel's output distribution.

    Args:
        x: Channel input
        channel: Deletion (k <= |x|) or insertion channel

    Returns:
        EntropyReport with direction=output and method=enumeration

    Raises:
        ValueError: For deletion when k > |x|, or on alphabet mismatch
    """
    _check_channel_alphabet(x, channel)
    k = channel.k
    if channel.kind is ChannelKind.DELETION:
        ball = deletion_ball(x, k)
        total = comb(len(x), k)
    else:
        ball = insertion_ball(x, k)
        total = comb(len(x) + k, k) * channel.q**k
    return EntropyReport(
        channel=channel,
        word=x,
        direction=Direction.OUTPUT,
        method=Method.ENUMERATION,
        entropy_bits=_distribution_entropy(list(ball.entries.values()), total),
        spectrum=_spectrum_pairs(ball.spectrum()),
    )


def closed_form_1del(y: Word) -> EntropyReport:
    """
    Input entropy of the single-deletion channel from the run profile of y.

    log2(nq) - Σ (r_i+1)·log2(r_i+1) / (nq), with n = |y| + 1.

    Args:
        y: Nonempty channel output

    Returns:
        EntropyReport with method=closed_form
    """
    if len(y) == 0:
        raise ValueError("1-Del closed form needs a nonempty output")
    q = y.q
    n = len(y) + 1
    runs = run_length_profile(y).runs
    log_sum = math.fsum(xlog2x(r + 1) for r in runs)
    # runs contribute r_i+1; every other supersequence embeds y once
    spectrum = Counter(r + 1 for r in runs)
    spectrum[1] += q + len(y) * (q - 1) - len(runs)
    return EntropyReport(
        channel=ChannelSpec(ChannelKind.DELETION, 1, q),
        word=y,
        direction=Direction.INPUT,
        method=Method.CLOSED_FORM,
        entropy_bits=_entropy(n * q, log_sum),
        spectrum=_spectrum_pairs(+spectrum),
    )


def closed_form_1ins(y: Word) -> EntropyReport:
    """
    Input entropy of the single-insertion channel from the run profile of y.

    log2(n+1) - Σ r_i·log2(r_i) / (n+1), with n + 1 = |y|.

    Args:
        y: Channel output of length at least 2

    Returns:
        EntropyReport with method=closed_form
    """
    if len(y) < 2:
        raise ValueError("1-Ins closed form needs an output of length at least 2")
    runs = run_length_profile(y).runs
    log_sum = math.fsum(xlog2x(r) for r in runs)
    return EntropyReport(
        channel=ChannelSpec(ChannelKind.INSERTION, 1, y.q),
        word=y,
        direction=Direction.INPUT,
        method=Method.CLOSED_FORM,
        entropy_bits=_entropy(len(y), log_sum),
        spectrum=_spectrum_pairs(Counter(runs)),
    )


def _case_entries(case: int, values: Counter[int]) -> list[SpectrumEntry]:
    return [
        SpectrumEntry(case, value, multiplicity)
        for value, multiplicity in sorted(values.items())
        if multiplicity > 0
    ]


def i2_spectrum(y: Word) -> SpectrumByCase:
    """
    Embedding counts of y over its 2-insertion ball, by construction case.

    Cases: 1 prolong a run by two; 2 prolong two runs by one each; 3 prolong a
    run and insert a new run elsewhere; 4 lengthen an alternating segment by
    two; 5 insert two runs that change the structure (count 1 each).

    Args:
        y: Nonempty binary word

    Returns:
        SpectrumByCase whose values sum to C(|y|+2, 2)·4
    """
    _check_binary(y)
    if len(y) == 0:
        raise ValueError("2-insertion spectrum needs a nonempty word")
    runs = run_length_profile(y).runs
    count = len(runs)
    n = len(y) + 2
    entries: list[SpectrumEntry] = []

    entries += _case_entries(1, Counter(comb(r + 2, 2) for r in runs))
    entries += _case_entries(
        2, Counter((a + 1) * (b + 1) for a, b in combinations(runs, 2))
    )
    third: Counter[int] = Counter()
    for r in runs:
        third[r + 1] += n + 1 - count - r
    entries += _case_entries(3, third)
    segments = alternating_profile(y).count
    entries += _case_entries(
        4,
        Counter(segment_extension_embedding(y, i) for i in range(1, segments + 1)),
    )
    adjusted = [
        r - 1 + (i == 0) + (i == count - 1) for i, r in enumerate(runs)
    ]
    singles = sum(a * b for a, b in combinations(adjusted, 2)) + sum(
        comb(a + 1, 2) for a in adjusted
    )
    entries += _case_entries(5, Counter({1: singles}))
    return SpectrumByCase(BallKind.INSERTION, y, tuple(entries))


def d2_spectrum(y: Word) -> SpectrumByCase:
    """
    Embedding counts of the 2-subsequences of y in y, by construction case.

    Cases: 1 shorten one run by two; 2 shorten two non-adjacent runs by one;
    3 shorten an alternating segment by two (removing it when its length is 2).

    Args:
        y: Binary word of length at least 3

    Returns:
        SpectrumByCase whose values sum to C(|y|, 2)
    """
    _check_binary(y)
    if len(y) < 3:
        raise ValueError("2-deletion spectrum needs a word of length at least 3")
    runs = run_length_profile(y).runs
    profile = alternating_profile(y)
    entries: list[SpectrumEntry] = []

    entries += _case_entries(1, Counter(comb(r, 2) for r in runs if r >= 2))
    entries += _case_entries(
        2,
        Counter(
            runs[i] * runs[j]
            for i, j in combinations(range(len(runs)), 2)
            if i < j - 1
        ),
    )
    third: Counter[int] = Counter()
    for i, length in enumerate(profile.segments, start=1):
        if length > 2:
            third[segment_extension_embedding(y, i) - 2] += 1
        elif length == 2:
            before, after = profile.backward[i - 1], profile.forward[i - 1]
            third[(i - before + 1) * (after - i + 1)] += 1
    entries += _case_entries(3, third)
    return SpectrumByCase(BallKind.DELETION, y, tuple(entries))


def closed_form_2del(y: Word) -> EntropyReport:
    """Input entropy of the 2-deletion channel for a nonempty binary output."""
    spectrum = i2_spectrum(y)
    n = len(y) + 2
    return EntropyReport(
        channel=ChannelSpec(ChannelKind.DELETION, 2, 2),
        word=y,
        direction=Direction.INPUT,
        method=Method.CLOSED_FORM,
        entropy_bits=_entropy(2 * n * (n - 1), spectrum.weighted_log_sum()),
        spectrum=_spectrum_pairs(spectrum.as_multiset()),
    )


def closed_form_2ins(y: Word) -> EntropyReport:
    """Input entropy of the 2-insertion channel for a binary output of length >= 3."""
    spectrum = d2_spectrum(y)
    return EntropyReport(
        channel=ChannelSpec(ChannelKind.INSERTION, 2, 2),
        word=y,
        direction=Direction.INPUT,
        method=Method.CLOSED_FORM,
        entropy_bits=_entropy(comb(len(y), 2), spectrum.weighted_log_sum()),
        spectrum=_spectrum_pairs(spectrum.as_multiset()),
    )


def has_closed_form(channel: ChannelSpec) -> bool:
    """Whether closed_form covers the channel (k <= 1 for any q, k = 2 for binary)."""
    return channel.k <= 1 or (channel.k == 2 and channel.q == 2)


def _closed_input(word: Word, channel: ChannelSpec) -> EntropyReport:
    _check_channel_alphabet(word, channel)
    if channel.k == 0:
        if channel.kind is ChannelKind.INSERTION and len(word) == 0:
            raise ValueError("no valid input length for an empty output")
        return EntropyReport(
            channel, word, Direction.INPUT, Method.CLOSED_FORM, 0.0, ((1, 1),)
        )
    if channel.k == 1:
        if channel.kind is ChannelKind.DELETION:
            return closed_form_1del(word)
        return closed_form_1ins(word)
    if channel.k == 2 and channel.q == 2:
        if channel.kind is ChannelKind.DELETION:
            return closed_form_2del(word)
        return closed_form_2ins(word)
    raise ValueError(
        f"no closed form for {channel.label} over q={channel.q}; use enumeration"
    )


def closed_form(
    word: Word, channel: ChannelSpec, direction: Direction = Direction.INPUT
) -> EntropyReport:
    """
    Closed-form entropy of a word.

    Output entropies use uniform-transmission duality: the output entropy of x
    under k-Del equals the input entropy of x under k-Ins, and vice versa.

    Args:
        word: Channel output (direction=input) or input (direction=output)
        channel: Channel specification
        direction: Which conditional entropy to compute

    Returns:
        EntropyReport with method=closed_form

    Raises:
        ValueError: If no closed form covers the channel or the word is out of range
    """
    direction = Direction(direction)
    if direction is Direction.INPUT:
        return _closed_input(word, channel)
    dual = _closed_input(word, channel.dual())
    return EntropyReport(
        channel=channel,
        word=word,
        direction=Direction.OUTPUT,
        method=Method.CLOSED_FORM,
        entropy_bits=dual.entropy_bits,
        spectrum=dual.spectrum,
    )


def entropy_report(
    word: Word,
    channel: ChannelSpec,
    direction: Direction = Direction.INPUT,
    method: Method = Method.ENUMERATION,
) -> EntropyReport:
    """Dispatch to the closed form or the enumeration for either direction."""
    if Method(method) is Method.CLOSED_FORM:
        return closed_form(word, channel, direction)
    if Direction(direction) is Direction.INPUT:
        return input_entropy_enumerated(word, channel)
    return output_entropy_enumerated(word, channel)


def input_entropy(
    word: Word, channel: ChannelSpec, method: Method | None = None
) -> EntropyReport:
    """Input entropy of an output word; closed form when one exists unless a method is forced."""
    if method is None:
        method = Method.CLOSED_FORM if has_closed_form(channel) else Method.ENUMERATION
    return entropy_report(word, channel, Direction.INPUT, method)
