"""Named invariant suites checking every closed form against brute-force oracles."""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from math import comb

import numpy as np

from . import config
from .embedding import (
    BallKind,
    deletion_ball,
    embedding_number,
    extend_segment,
    full_scan_ball,
    insertion_ball,
    prefix_recursion,
    prefixed_case_embedding,
    segment_extension_embedding,
    special_supersequence_embeddings,
    special_supersequences,
)
from .entropy import (
    ChannelKind,
    ChannelSpec,
    closed_form,
    input_entropy_enumerated,
    output_entropy_enumerated,
)
from .extremal import (
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
    fixed_runs_value,
    global_extremum,
    log_sum_objective,
    maximum_value,
    minimum_value,
    run_count_table,
)
from .parallel import map_ordered
from .words import (
    Word,
    alternating_profile,
    enumerate_words,
    enumerate_words_with_runs,
    make_constant,
    run_length_profile,
)

# Exhaustive case-recursion checks grow as 2^m·m^2; longer words add nothing new
CASE_RECURSION_MAX_LEN = 8
FULL_SCAN_LIMIT = 4096

Check = tuple[bool, str, str]


@dataclass(frozen=True)
class SuiteOptions:
    q: int = 2
    max_len: int = 8
    tolerance: float = config.DEFAULT_TOLERANCE
    samples: int = 10_000
    seed: int = 0
    max_workers: int = 1
    show_progress: bool = False
    budget: int = config.DEFAULT_BUDGET


@dataclass
class SuiteResult:
    """Pass/fail counts of a suite and the first failing word."""

    name: str
    checked: int = 0
    failures: int = 0
    counterexample: str | None = None
    detail: str | None = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, witness: str, detail: str = ""):
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness
                self.detail = detail

    def extend(self, checks: Iterable[Check]):
        for ok, witness, detail in checks:
            self.record(ok, witness, detail)


def _close(a: float, b: float, tolerance: float) -> bool:
    return abs(a - b) <= tolerance


def _per_length(
    options: SuiteOptions,
    lengths: Sequence[int],
    check: Callable[[int], list[Check]],
    result: SuiteResult,
) -> SuiteResult:
    batches = map_ordered(
        check,
        list(lengths),
        max_workers=options.max_workers,
        show_progress=options.show_progress,
        description=f"Suite {result.name}",
    )
    for batch in batches:
        result.extend(batch)
    return result


def _require_binary(options: SuiteOptions, name: str):
    if options.q != 2:
        raise ValueError(f"suite '{name}' is defined for binary words only (--q 2)")


def closed_vs_enum(options: SuiteOptions) -> SuiteResult:
    """Closed forms against ball enumeration: k=1 for any q, k=2 for q=2."""
    q, tol = options.q, options.tolerance
    channels = [ChannelSpec(ChannelKind.DELETION, 1, q), ChannelSpec(ChannelKind.INSERTION, 1, q)]
    if q == 2:
        channels += [ChannelSpec(ChannelKind.DELETION, 2, 2), ChannelSpec(ChannelKind.INSERTION, 2, 2)]

    def check(length: int) -> list[Check]:
        checks = []
        for y in enumerate_words(q, length):
            for channel in channels:
                if channel.kind is ChannelKind.INSERTION and length <= channel.k:
                    continue
                closed = closed_form(y, channel).entropy_bits
                enumerated = input_entropy_enumerated(y, channel).entropy_bits
                checks.append(
                    (
                        _close(closed, enumerated, tol),
                        str(y),
                        f"{channel.label}: closed {closed!r} vs enumeration {enumerated!r}",
                    )
                )
        return checks

    return _per_length(options, range(1, options.max_len + 1), check, SuiteResult("closed-vs-enum"))


def _extremal_set(values: list[tuple[float, Word]], which: Extremum, tol: float) -> set[Word]:
    pick = min if which is Extremum.MIN else max
    best = pick(v for v, _ in values)
    return {w for v, w in values if abs(v - best) <= tol}


def duality(options: SuiteOptions) -> SuiteResult:
    """Input entropy of one channel equals output entropy of the dual channel.

    Also checks that the extremizers of the input entropy are the opposite
    extremizers of the weighted log-sum of the underlying ball.
    """
    q, tol = options.q, options.tolerance

    def check(length: int) -> list[Check]:
        checks = []
        for k in (1, 2):
            deletion = ChannelSpec(ChannelKind.DELETION, k, q)
            insertion = ChannelSpec(ChannelKind.INSERTION, k, q)
            for channel in (deletion, insertion):
                if channel.kind is ChannelKind.INSERTION and length <= k:
                    continue
                entropies, log_sums = [], []
                objective = log_sum_objective(channel)
                for y in enumerate_words(q, length):
                    h_in = input_entropy_enumerated(y, channel).entropy_bits
                    h_out = output_entropy_enumerated(y, channel.dual()).entropy_bits
                    checks.append(
                        (
                            _close(h_in, h_out, tol),
                            str(y),
                            f"H_in {channel.label} {h_in!r} vs H_out {channel.dual().label} {h_out!r}",
                        )
                    )
                    entropies.append((h_in, y))
                    log_sums.append((objective(y), y))
                for which, opposite in ((Extremum.MIN, Extremum.MAX), (Extremum.MAX, Extremum.MIN)):
                    by_entropy = _extremal_set(entropies, which, tol)
                    by_log_sum = _extremal_set(log_sums, opposite, tol)
                    checks.append(
                        (
                            by_entropy == by_log_sum,
                            str(min(by_entropy ^ by_log_sum, default=Word((), q))),
                            f"arg{which.value} H_in {channel.label} differs from arg{opposite.value} W",
                        )
                    )
        return checks

    return _per_length(options, range(1, options.max_len + 1), check, SuiteResult("duality"))


def _witness_check(expected, found, tol: float, context: str) -> Check:
    same = set(expected.witnesses) == set(found.witnesses)
    close = _close(expected.value_bits, found.value_bits, tol)
    difference = set(expected.witnesses) ^ set(found.witnesses)
    witness = str(min(difference)) if difference else str(found.witnesses[0])
    return (
        same and close,
        witness,
        f"{context}: expected {expected.value_bits!r}, scan {found.value_bits!r}",
    )


def _scan_fixed_runs(q: int, m: int, runs: int, channel: ChannelSpec, which: Extremum, tol: float) -> tuple[float, set[Word]]:
    objective = entropy_objective(channel)
    values = [(objective(w), w) for w in enumerate_words_with_runs(q, m, runs)]
    found = _extremal_set(values, which, tol)
    pick = min if which is Extremum.MIN else max
    return pick(v for v, _ in values), found


def extremizers(options: SuiteOptions) -> SuiteResult:
    """Exhaustive scans reproduce every characterized extremum and witness set."""
    q, tol = options.q, options.tolerance
    single = [ChannelSpec(ChannelKind.DELETION, 1, q), ChannelSpec(ChannelKind.INSERTION, 1, q)]

    def check(m: int) -> list[Check]:
        checks = []
        for channel in single:
            if channel.kind is ChannelKind.INSERTION and m < 2:
                continue
            objective = entropy_objective(channel)
            for which in Extremum:
                expected = global_extremum(q, m, channel, which)
                found = exhaustive_argopt(
                    q, m, objective, which, budget=options.budget, tolerance=tol
                )
                checks.append(_witness_check(expected, found, tol, f"{which.value} {channel.label} m={m}"))
                for runs in range(1, m + 1):
                    fixed = extremum_over_fixed_runs(q, m, runs, channel, which)
                    value, witnesses = _scan_fixed_runs(q, m, runs, channel, which, tol)
                    differs = set(fixed.witnesses) ^ witnesses
                    checks.append(
                        (
                            not differs and _close(fixed.value_bits, value, tol),
                            str(min(differs)) if differs else str(fixed.witnesses[0]),
                            f"{which.value} {channel.label} m={m} R={runs}",
                        )
                    )
            minima = [fixed_runs_value(q, m, r, channel, Extremum.MIN) for r in range(1, m + 1)]
            monotone = all(a <= b + tol for a, b in zip(minima, minima[1:], strict=False))
            checks.append((monotone, str(make_constant(q, m)), f"per-R minimum of {channel.label} not monotone at m={m}"))
        if q == 2:
            extra = [ChannelSpec(ChannelKind.DELETION, 2, 2)]
            extra += [ChannelSpec(ChannelKind.INSERTION, k, 2) for k in (2, 3) if m > k]
            for channel in extra:
                expected = global_extremum(2, m, channel, Extremum.MIN)
                found = exhaustive_argopt(
                    2, m, entropy_objective(channel), Extremum.MIN,
                    budget=options.budget, tolerance=tol,
                )
                checks.append(_witness_check(expected, found, tol, f"min {channel.label} m={m}"))
        return checks

    return _per_length(options, range(1, options.max_len + 1), check, SuiteResult("extremizers"))


def averages(options: SuiteOptions) -> SuiteResult:
    """Run-count averages against direct means, with bounds and orderings."""
    q, tol = options.q, options.tolerance

    def check(n: int) -> list[Check]:
        checks = []
        witness = str(make_constant(q, n))
        table = run_count_table(n, q)
        checks.append((table == enumerated_run_count_table(n, q), witness, f"run-count table n={n}"))
        checks.append((table.positions() == n * q**n, witness, f"run-count positions n={n}"))
        if n < 2:
            return checks
        for kind in ChannelKind:
            channel = ChannelSpec(kind, 1, q)
            m = n - 1 if kind is ChannelKind.DELETION else n + 1
            average = average_input_entropy(n, q, channel)
            direct = average_input_entropy_enumerated(n, q, channel, budget=options.budget)
            bounds = average_lower_bound(n, q, channel)
            low, high = minimum_value(q, m, channel), maximum_value(q, m, channel)
            label = f"{channel.label} n={n}"
            checks.append((_close(average, direct, tol), witness, f"{label}: formula {average!r} vs mean {direct!r}"))
            checks.append((bounds.derived_bits <= average + tol, witness, f"{label}: derived bound above average"))
            checks.append((low - tol <= average <= high + tol, witness, f"{label}: average outside [min, max]"))
        return checks

    result = SuiteResult("averages")
    _per_length(options, range(1, options.max_len + 1), check, result)
    return result


def lemma_alpha(options: SuiteOptions) -> SuiteResult:
    """Prefix recursion for ω_{α·y}(α·x) on random pairs."""
    q = options.q
    rng = np.random.default_rng(options.seed)
    result = SuiteResult("lemma-alpha")
    for _ in range(options.samples):
        x_length = int(rng.integers(0, options.max_len + 1))
        x = Word(tuple(int(s) for s in rng.integers(0, q, size=x_length)), q)
        if rng.random() < 0.5 and x_length:
            y_length = int(rng.integers(0, x_length + 1))
            keep = np.sort(rng.choice(x_length, size=y_length, replace=False))
            y = Word(tuple(x.symbols[i] for i in keep), q)
        else:
            y_length = int(rng.integers(0, x_length + 1))
            y = Word(tuple(int(s) for s in rng.integers(0, q, size=y_length)), q)
        alpha = int(rng.integers(0, q))
        expected = embedding_number(y.prepend(alpha), x.prepend(alpha))
        value = prefix_recursion(y, x, alpha)
        result.record(value == expected, f"{y}|{x}|{alpha}", f"recursion {value} vs count {expected}")
    return result


def correction_lemma(options: SuiteOptions) -> SuiteResult:
    """Segment-extension counts, special supersequences and the case recursion."""
    _require_binary(options, "correction-lemma")

    def check(length: int) -> list[Check]:
        checks = []
        for y in enumerate_words(2, length):
            profile = alternating_profile(y)
            for i in range(1, profile.count + 1):
                x = extend_segment(y, i)
                value = segment_extension_embedding(y, i)
                expected = embedding_number(y, x)
                lengths = list(profile.segments)
                lengths[i - 1] += 2
                checks.append(
                    (
                        value == expected and alternating_profile(x).segments == tuple(lengths),
                        str(y),
                        f"segment {i}: formula {value} vs count {expected}",
                    )
                )
            runs = run_length_profile(y).runs
            shapes = ((1, 1, *runs), (2, *runs), (1, runs[0] + 1, *runs[1:]))
            for x, value, shape in zip(
                special_supersequences(y), special_supersequence_embeddings(y), shapes, strict=True
            ):
                checks.append(
                    (
                        value == embedding_number(y, x) and run_length_profile(x).runs == shape,
                        str(y),
                        f"special supersequence {x}",
                    )
                )
            if length <= CASE_RECURSION_MAX_LEN:
                for x in insertion_ball(y, 2).entries:
                    for alpha in (0, 1):
                        value = prefixed_case_embedding(y, x, alpha)
                        if value is None:
                            continue
                        expected = embedding_number(y.prepend(alpha), x.prepend(alpha))
                        checks.append((value == expected, str(y), f"case recursion x={x} alpha={alpha}"))
        return checks

    return _per_length(options, range(1, options.max_len + 1), check, SuiteResult("correction-lemma"))


def w_recursions(options: SuiteOptions) -> SuiteResult:
    """Both W-recursion identities, each side from its own ball enumeration."""
    _require_binary(options, "w-recursions")
    tol = options.tolerance

    def check(length: int) -> list[Check]:
        checks = []
        for y in enumerate_words(2, length):
            if y[0] != y[1]:
                left, right = double_deletion_recursion_split(y)
            else:
                left, right = double_deletion_recursion_same(y)
            checks.append((_close(left, right, tol), str(y), f"left {left!r} vs right {right!r}"))
        return checks

    return _per_length(options, range(2, options.max_len + 1), check, SuiteResult("w-recursions"))


def appendix_claim(options: SuiteOptions) -> SuiteResult:
    """The W-difference over binary words of length m peaks only at 0^m and 1^m."""
    _require_binary(options, "appendix-claim")
    result = SuiteResult("appendix-claim")
    for m in range(1, options.max_len + 1):
        found = exhaustive_argopt(
            2,
            m,
            appendix_w_difference,
            Extremum.MAX,
            budget=options.budget,
            max_workers=options.max_workers,
            tolerance=options.tolerance,
            label="W-difference",
        )
        expected = {make_constant(2, m, 0), make_constant(2, m, 1)}
        differs = expected ^ set(found.witnesses)
        result.record(not differs, str(min(differs)) if differs else str(found.witnesses[0]), f"m={m}")
    return result


def normalization(options: SuiteOptions) -> SuiteResult:
    """Ball totals, 1-ball sizes and agreement with full-scan construction."""
    q = options.q

    def check(length: int) -> list[Check]:
        checks = []
        for x in enumerate_words(q, length):
            for k in range(min(3, length) + 1):
                ball = deletion_ball(x, k)
                keys_ok = all(len(w) == length - k for w in ball.entries)
                checks.append((keys_ok and ball.total() == comb(length, k), str(x), f"deletion k={k}"))
                if q ** (length - k) <= FULL_SCAN_LIMIT:
                    scan = full_scan_ball(x, k, BallKind.DELETION)
                    checks.append((dict(scan.entries) == dict(ball.entries), str(x), f"deletion scan k={k}"))
            for k in range(3):
                ball = insertion_ball(x, k)
                keys_ok = all(len(w) == length + k for w in ball.entries)
                total = comb(length + k, k) * q**k
                checks.append((keys_ok and ball.total() == total, str(x), f"insertion k={k}"))
                if k == 1:
                    checks.append((len(ball) == q + length * (q - 1), str(x), "1-insertion ball size"))
                if q ** (length + k) <= FULL_SCAN_LIMIT:
                    scan = full_scan_ball(x, k, BallKind.INSERTION)
                    checks.append((dict(scan.entries) == dict(ball.entries), str(x), f"insertion scan k={k}"))
        return checks

    return _per_length(options, range(0, options.max_len + 1), check, SuiteResult("normalization"))


SUITES: dict[str, Callable[[SuiteOptions], SuiteResult]] = {
    "closed-vs-enum": closed_vs_enum,
    "duality": duality,
    "extremizers": extremizers,
    "averages": averages,
    "lemma-alpha": lemma_alpha,
    "correction-lemma": correction_lemma,
    "w-recursions": w_recursions,
    "appendix-claim": appendix_claim,
    "normalization": normalization,
}


def run_suite(name: str, q: int = 2, max_len: int = 8, **settings) -> SuiteResult:
    """
    Run a named invariant suite.

    Args:
        name: One of SUITES
        q: Alphabet size
        max_len: Longest word length checked
        **settings: Remaining SuiteOptions fields (tolerance, samples, seed,
            max_workers, show_progress, budget)

    Returns:
        SuiteResult with counts and the first counterexample

    Raises:
        ValueError: If the suite name is unknown or the alphabet is unsupported
    """
    if name not in SUITES:
        raise ValueError(f"Unknown suite '{name}', choose from {', '.join(SUITES)}")
    options = SuiteOptions(q=q, max_len=max_len, **settings)
    if options.max_len < 1:
        raise ValueError(f"max length must be at least 1, got {options.max_len}")
    return SUITES[name](options)


def suite_summary(result: SuiteResult) -> str:
    """One-line PASS/FAIL summary."""
    status = "PASS" if result.passed else "FAIL"
    line = f"{status} suite={result.name} checked={result.checked} failed={result.failures}"
    if not result.passed:
        line += f" counterexample={result.counterexample}"
    return line
