"""Words over a finite alphabet and their run and alternating-segment structure."""

import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from math import comb

MAX_TEXT_ALPHABET = 36
DIGIT_ALPHABET = 10


def _check_alphabet(q: int):
    if q < 2:
        raise ValueError(f"alphabet size must be at least 2, got {q}")


@dataclass(frozen=True, order=True)
class Word:
    """A finite sequence over the alphabet {0, ..., q-1}.

    Words compare lexicographically by symbols, which is the order every
    enumerator in this package emits.
    """

    symbols: tuple[int, ...]
    q: int = 2

    def __post_init__(self):
        _check_alphabet(self.q)
        symbols = tuple(int(s) for s in self.symbols)
        for s in symbols:
            if not 0 <= s < self.q:
                raise ValueError(f"symbol {s} outside alphabet of size {self.q}")
        object.__setattr__(self, "symbols", symbols)

    @classmethod
    def _trusted(cls, symbols: tuple[int, ...], q: int) -> "Word":
        """Build a word from symbols already known to be valid."""
        word = object.__new__(cls)
        object.__setattr__(word, "symbols", symbols)
        object.__setattr__(word, "q", q)
        return word

    @classmethod
    def parse(cls, text: str, q: int = 2) -> "Word":
        """Parse a word from its text form.

        Accepts digit strings ("0110"), base-36 letters for q up to 36 ("a9"),
        or comma-separated integers ("11,3,0") for any alphabet size. For
        q > 10 a bare decimal number is a single symbol, matching str().

        Args:
            text: Text form of the word (may be empty for the empty word)
            q: Alphabet size

        Returns:
            The parsed Word

        Raises:
            ValueError: If a symbol is malformed or outside the alphabet
        """
        _check_alphabet(q)
        text = text.strip()
        if not text:
            return cls((), q)
        if "," in text:
            try:
                symbols = tuple(int(part) for part in text.split(","))
            except ValueError:
                raise ValueError(f"malformed word '{text}'") from None
            return cls(symbols, q)
        if q > DIGIT_ALPHABET and text.isdecimal():
            # Above ten symbols a bare number is a one-symbol word
            return cls((int(text),), q)
        if q > MAX_TEXT_ALPHABET:
            raise ValueError(
                f"alphabet size {q} needs comma-separated symbols, got '{text}'"
            )
        try:
            symbols = tuple(int(ch, MAX_TEXT_ALPHABET) for ch in text)
        except ValueError:
            raise ValueError(f"malformed word '{text}'") from None
        return cls(symbols, q)

    def __str__(self) -> str:
        if self.q <= DIGIT_ALPHABET:
            return "".join(str(s) for s in self.symbols)
        return ",".join(str(s) for s in self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[int]:
        return iter(self.symbols)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return Word._trusted(self.symbols[index], self.q)
        return self.symbols[index]

    def __add__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if other.q != self.q:
            raise ValueError(f"alphabet mismatch: q={self.q} and q={other.q}")
        return Word._trusted(self.symbols + other.symbols, self.q)

    def prepend(self, symbol: int) -> "Word":
        """Return symbol followed by this word."""
        return Word((symbol, *self.symbols), self.q)


@dataclass(frozen=True)
class RunLengthProfile:
    """Run lengths (r_1, ..., r_R) and the symbol of each run."""

    runs: tuple[int, ...]
    symbols: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.runs)

    def to_word(self, q: int) -> Word:
        return word_from_runs(self.runs, self.symbols, q)


@dataclass(frozen=True)
class AlternatingProfile:
    """Maximal alternating segments with their forward and backward indices.

    Indices in ``forward`` and ``backward`` are 1-based segment numbers:
    f_i is the first segment after i longer than one symbol (A if none) and
    b_i the last such segment before i (1 if none).
    ``second_symbols`` holds None for single-symbol segments.
    """

    segments: tuple[int, ...]
    forward: tuple[int, ...]
    backward: tuple[int, ...]
    first_symbols: tuple[int, ...]
    second_symbols: tuple[int | None, ...]

    @property
    def count(self) -> int:
        return len(self.segments)

    def to_word(self, q: int) -> Word:
        symbols: list[int] = []
        for length, first, second in zip(
            self.segments, self.first_symbols, self.second_symbols, strict=True
        ):
            pair = (first, first if second is None else second)
            symbols.extend(pair[t % 2] for t in range(length))
        return Word(tuple(symbols), q)


def _run_lengths(symbols: Sequence[int]) -> tuple[list[int], list[int]]:
    runs: list[int] = []
    run_symbols: list[int] = []
    for s in symbols:
        if run_symbols and run_symbols[-1] == s:
            runs[-1] += 1
        else:
            runs.append(1)
            run_symbols.append(s)
    return runs, run_symbols


def run_count(word: Word) -> int:
    """Number of runs of a word (0 for the empty word)."""
    return len(_run_lengths(word.symbols)[0])


def run_length_profile(word: Word) -> RunLengthProfile:
    """
    Decompose a word into its runs.

    Args:
        word: Nonempty word

    Returns:
        RunLengthProfile with run lengths and run symbols

    Raises:
        ValueError: If the word is empty
    """
    if len(word) == 0:
        raise ValueError("empty word has no profile")
    runs, symbols = _run_lengths(word.symbols)
    return RunLengthProfile(tuple(runs), tuple(symbols))


def word_from_runs(runs: Sequence[int], symbols: Sequence[int], q: int) -> Word:
    """Rebuild a word from run lengths and run symbols."""
    if len(runs) != len(symbols):
        raise ValueError("runs and run symbols differ in length")
    out: list[int] = []
    for index, (length, symbol) in enumerate(zip(runs, symbols, strict=True)):
        if length < 1:
            raise ValueError(f"run lengths must be positive, got {length}")
        if index and symbols[index - 1] == symbol:
            raise ValueError("consecutive runs must use different symbols")
        out.extend([symbol] * length)
    return Word(tuple(out), q)


def permute_runs(word: Word, order: Sequence[int]) -> Word:
    """Reorder the run lengths of a word, keeping its sequence of run symbols.

    Args:
        word: Nonempty word
        order: Permutation of range(R) giving the new position of each run length

    Returns:
        Word with run lengths (r_order[0], r_order[1], ...) and the original run symbols
    """
    profile = run_length_profile(word)
    if sorted(order) != list(range(profile.count)):
        raise ValueError(f"order must be a permutation of range({profile.count})")
    runs = tuple(profile.runs[j] for j in order)
    return word_from_runs(runs, profile.symbols, word.q)


def _alternating_segments(symbols: Sequence[int]) -> list[int]:
    # Greedy left-to-right partition; for binary words this splits exactly at
    # equal adjacent symbols.
    segments: list[int] = []
    start = 0
    for t in range(1, len(symbols)):
        length = t - start
        if symbols[t] == symbols[t - 1] or (
            length >= 2 and symbols[t] != symbols[t - 2]
        ):
            segments.append(length)
            start = t
    segments.append(len(symbols) - start)
    return segments


def alternating_profile(word: Word) -> AlternatingProfile:
    """
    Decompose a word into maximal alternating segments.

    Args:
        word: Nonempty word

    Returns:
        AlternatingProfile with segment lengths and f/b indices

    Raises:
        ValueError: If the word is empty
    """
    if len(word) == 0:
        raise ValueError("empty word has no profile")
    segments = _alternating_segments(word.symbols)
    count = len(segments)

    forward = [count] * count
    following = count
    for i in range(count, 0, -1):
        if i < count:
            forward[i - 1] = following
        if segments[i - 1] > 1:
            following = i

    backward = [1] * count
    preceding = 1
    for i in range(1, count + 1):
        backward[i - 1] = preceding
        if segments[i - 1] > 1:
            preceding = i

    firsts: list[int] = []
    seconds: list[int | None] = []
    position = 0
    for length in segments:
        firsts.append(word.symbols[position])
        seconds.append(word.symbols[position + 1] if length > 1 else None)
        position += length

    return AlternatingProfile(
        segments=tuple(segments),
        forward=tuple(forward),
        backward=tuple(backward),
        first_symbols=tuple(firsts),
        second_symbols=tuple(seconds),
    )


def _check_runs(m: int, runs: int):
    if m < 1:
        raise ValueError(f"word length must be at least 1, got {m}")
    if not 1 <= runs <= m:
        raise ValueError(f"run count must lie in [1, {m}], got {runs}")


def _alternating_run_symbols(count: int) -> tuple[int, ...]:
    return tuple(t % 2 for t in range(count))


def make_constant(q: int, m: int, symbol: int = 0) -> Word:
    """The word symbol^m."""
    return Word((symbol,) * m, q)


def make_alternating(q: int, m: int, sym_a: int = 0, sym_b: int = 1) -> Word:
    """The word sym_a sym_b sym_a ... of length m."""
    if sym_a == sym_b:
        raise ValueError("alternating symbols must differ")
    return Word(tuple(sym_a if t % 2 == 0 else sym_b for t in range(m)), q)


def make_skewed(q: int, m: int, runs: int) -> Word:
    """Word with one long run of length m-R+1 followed by R-1 runs of length one."""
    _check_alphabet(q)
    _check_runs(m, runs)
    lengths = (m - runs + 1,) + (1,) * (runs - 1)
    return word_from_runs(lengths, _alternating_run_symbols(runs), q)


def make_balanced(q: int, m: int, runs: int) -> Word:
    """Word with (m mod R) runs of length ceil(m/R) first, then runs of floor(m/R)."""
    _check_alphabet(q)
    _check_runs(m, runs)
    short, extra = divmod(m, runs)
    lengths = (short + 1,) * extra + (short,) * (runs - extra)
    return word_from_runs(lengths, _alternating_run_symbols(runs), q)


def enumerate_words(q: int, m: int) -> Iterator[Word]:
    """Yield every word of length m over Σ_q in lexicographic order."""
    _check_alphabet(q)
    if m < 0:
        raise ValueError(f"word length must be nonnegative, got {m}")
    for symbols in itertools.product(range(q), repeat=m):
        yield Word._trusted(symbols, q)


def enumerate_words_with_runs(q: int, m: int, runs: int) -> Iterator[Word]:
    """Yield every word of length m with exactly R runs, in lexicographic order."""
    _check_alphabet(q)
    _check_runs(m, runs)

    def extend(prefix: tuple[int, ...], so_far: int) -> Iterator[tuple[int, ...]]:
        position = len(prefix)
        if position == m:
            yield prefix
            return
        remaining = m - position - 1
        for s in range(q):
            count = so_far + (1 if position == 0 or s != prefix[-1] else 0)
            if count <= runs <= count + remaining:
                yield from extend(prefix + (s,), count)

    for symbols in extend((), 0):
        yield Word._trusted(symbols, q)


def count_words_with_runs(q: int, m: int, runs: int) -> int:
    """Closed-form count C(m-1, R-1) * q * (q-1)^(R-1) of words with R runs."""
    _check_alphabet(q)
    _check_runs(m, runs)
    return comb(m - 1, runs - 1) * q * (q - 1) ** (runs - 1)
