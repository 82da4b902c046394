"""Main CLI interface using Click."""

import sys
from collections.abc import Sequence

import click
from dotenv import load_dotenv

from . import capacity as capacity_lib
from . import config, formatters
from . import verify as verify_lib
from .embedding import BallKind, deletion_ball, embedding_number, insertion_ball
from .entropy import (
    ChannelKind,
    ChannelSpec,
    Direction,
    Method,
    closed_form,
    d2_spectrum,
    entropy_report,
    has_closed_form,
    i2_spectrum,
)
from .extremal import (
    Extremum,
    average_input_entropy,
    average_input_entropy_enumerated,
    average_lower_bound,
    entropy_objective,
    exhaustive_argopt,
    extremum_over_fixed_runs,
    figure_rows,
    global_extremum,
)
from .words import Word

EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_BUDGET = 3

CHANNEL_CHOICE = click.Choice(["del", "ins"])
FORMAT_CHOICE = click.Choice(["csv", "json", "pretty"])


class EntropyGroup(click.Group):
    """Click group mapping usage errors to exit status 1 instead of click's 2."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(
                args, prog_name, complete_var, standalone_mode=False, **extra
            )
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(e.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        if not standalone_mode:
            return rv
        sys.exit(rv if isinstance(rv, int) else 0)


def _fail(e: Exception):
    """Report a library error on stderr and exit with its status."""
    click.echo(f"Error: {e}", err=True)
    if isinstance(e, config.BudgetExceededError):
        sys.exit(EXIT_BUDGET)
    sys.exit(EXIT_USAGE)


def _parse_word(text: str, q: int, flag: str) -> Word:
    try:
        return Word.parse(text, q)
    except ValueError as e:
        raise click.BadParameter(
            str(e), ctx=click.get_current_context(), param_hint=f"'{flag}'"
        ) from None


def _channel(kind: str, k: int, q: int) -> ChannelSpec:
    try:
        return ChannelSpec(ChannelKind.parse(kind), k, q)
    except ValueError as e:
        raise click.UsageError(str(e), ctx=click.get_current_context()) from None


def _parse_range(ctx, param, value: str | None) -> list[int] | None:
    """Parse 'A:B' (inclusive) or a single integer."""
    if value is None:
        return None
    try:
        if ":" in value:
            start, stop = (int(part) for part in value.split(":", 1))
        else:
            start = stop = int(value)
    except ValueError:
        raise click.BadParameter(f"expected A:B or an integer, got '{value}'") from None
    if start > stop:
        raise click.BadParameter(f"empty range '{value}'")
    return list(range(start, stop + 1))


def _jobs(jobs: int | None) -> int:
    return jobs if jobs is not None else config.get_default_jobs()


def _tolerance(tolerance: float | None) -> float:
    return tolerance if tolerance is not None else config.get_tolerance()


def _format(format_type: str | None) -> str:
    return format_type or config.get_default_format()


@click.group(cls=EntropyGroup)
def main():
    """Indel Entropy - exact entropies of deletion and insertion channels.

    Computes embedding numbers, insertion and deletion balls, input and output
    entropies of the k-deletion and k-insertion channels under uniform
    transmission, their extremes and averages, and small-n capacities.

    \b
    WORDS:
      Words are digit strings over {0, ..., q-1} (e.g. 0110). For q up to 36
      base-36 letters are accepted; any q accepts comma-separated symbols.

    \b
    COMMON COMMANDS:
      indel-entropy embed --y 120 --x 11220 --q 3            # embedding number
      indel-entropy ball --word 01 --k 1 --kind insertion    # weighted ball as CSV
      indel-entropy entropy --channel del --word 0000        # closed-form entropy
      indel-entropy extremes --channel del --m 6 --which max # extremal words
      indel-entropy average --channel del --n 3              # average entropy
      indel-entropy verify --suite closed-vs-enum --max-len 8
      indel-entropy capacity --channel del --n 4 --table
      indel-entropy figure --channel del --n 4:40 --out fig.csv

    \b
    CONFIGURATION:
      indel-entropy config show                  # View current configuration
      indel-entropy config set budget 50000000   # Raise the scan budget

    \b
    EXIT STATUS:
      0 success, 1 usage error, 2 verification failure, 3 budget exceeded
    """
    load_dotenv()


@main.command()
@click.option("--y", "y_text", required=True, metavar="WORD", help="Subsequence y")
@click.option("--x", "x_text", required=True, metavar="WORD", help="Supersequence x")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
def embed(y_text, x_text, q):
    """Print the embedding number of y in x.

    \b
    EXAMPLES:
      indel-entropy embed --y 120 --x 11220 --q 3   # prints 4
    """
    y = _parse_word(y_text, q, "--y")
    x = _parse_word(x_text, q, "--x")
    try:
        click.echo(embedding_number(y, x))
    except (ValueError, OverflowError) as e:
        _fail(e)


@main.command()
@click.option("--word", "word_text", required=True, metavar="WORD", help="Center of the ball")
@click.option("--k", default=1, show_default=True, type=click.IntRange(min=0), help="Radius")
@click.option(
    "--kind",
    type=click.Choice(["insertion", "deletion"]),
    default="insertion",
    show_default=True,
    help="Ball of supersequences (insertion) or subsequences (deletion)",
)
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--out", default="-", show_default=True, metavar="PATH", help="Output path, - for stdout")
def ball(word_text, k, kind, q, out):
    """Write a weighted insertion or deletion ball as CSV (word,count).

    \b
    EXAMPLES:
      indel-entropy ball --word 01 --k 1 --kind insertion
      indel-entropy ball --word 0110 --k 2 --kind deletion --out d2.csv
    """
    word = _parse_word(word_text, q, "--word")
    try:
        weighted = insertion_ball(word, k) if kind == "insertion" else deletion_ball(word, k)
    except ValueError as e:
        _fail(e)
    formatters.write_csv(["word", "count"], weighted.to_csv_rows(), out)


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, required=True, help="Deletion or insertion channel")
@click.option("--k", default=1, show_default=True, type=click.IntRange(min=0), help="Symbols deleted or inserted")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--word", "word_text", required=True, metavar="WORD", help="Output word (input direction) or input word (output direction)")
@click.option(
    "--direction",
    type=click.Choice(["input", "output"]),
    default="input",
    show_default=True,
    help="Input entropy H(X|y) or output entropy H(Y|x)",
)
@click.option(
    "--method",
    type=click.Choice(["closed", "enum", "both"]),
    help="Closed form, ball enumeration, or both (default: closed when available)",
)
@click.option("--format", "format_type", type=FORMAT_CHOICE, help="Output format (default from config)")
@click.option("--tolerance", type=float, help="Allowed disagreement for --method both, in bits")
def entropy(channel, k, q, word_text, direction, method, format_type, tolerance):
    """Compute the input or output entropy of a word.

    With --method both, prints both values and their difference and exits
    with status 2 when they disagree beyond the tolerance.

    \b
    EXAMPLES:
      indel-entropy entropy --channel del --k 1 --word 0000
      indel-entropy entropy --channel del --word 01 --method both
      indel-entropy entropy --channel ins --k 2 --word 0110 --format json
    """
    spec = _channel(channel, k, q)
    word = _parse_word(word_text, q, "--word")
    direction = Direction(direction)
    if method is None:
        method = "closed" if has_closed_form(spec) else "enum"

    try:
        if method == "both":
            closed = closed_form(word, spec, direction).entropy_bits
            enumerated = entropy_report(word, spec, direction, Method.ENUMERATION).entropy_bits
        elif method == "closed":
            report = closed_form(word, spec, direction)
        else:
            report = entropy_report(word, spec, direction, Method.ENUMERATION)
    except (ValueError, OverflowError) as e:
        _fail(e)

    if method != "both":
        formatters.print_report(report, _format(format_type))
        return

    difference = abs(closed - enumerated)
    click.echo(f"closed_form: {formatters.format_bits(closed)}")
    click.echo(f"enumeration: {formatters.format_bits(enumerated)}")
    click.echo(f"difference: {difference:.3e}")
    if difference > _tolerance(tolerance):
        click.echo(
            f"Error: closed form and enumeration disagree for {spec.label} at {word}",
            err=True,
        )
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, required=True, help="del: I_2(y) spectrum; ins: D_2(y) spectrum")
@click.option("--word", "word_text", required=True, metavar="WORD", help="Binary word y")
@click.option("--format", "format_type", type=FORMAT_CHOICE, default="csv", show_default=True, help="Output format")
@click.option("--out", default="-", show_default=True, metavar="PATH", help="Output path, - for stdout")
def spectrum(channel, word_text, format_type, out):
    """Embedding-count spectrum of a binary word's 2-ball, by case.

    \b
    EXAMPLES:
      indel-entropy spectrum --channel del --word 00110
      indel-entropy spectrum --channel ins --word 0110 --format pretty
    """
    word = _parse_word(word_text, 2, "--word")
    try:
        by_case = i2_spectrum(word) if channel == "del" else d2_spectrum(word)
    except ValueError as e:
        _fail(e)
    rows = [(entry.case, entry.value, entry.multiplicity) for entry in by_case.entries]
    formatters.emit_rows(
        ["case", "value", "multiplicity"],
        rows,
        format_type=format_type,
        out=out,
        title=f"{'I_2' if by_case.kind is BallKind.INSERTION else 'D_2'}({word})",
    )


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, required=True, help="Deletion or insertion channel")
@click.option("--k", default=1, show_default=True, type=click.IntRange(min=1), help="Symbols deleted or inserted")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--m", required=True, type=click.IntRange(min=1), help="Output length")
@click.option("--which", type=click.Choice(["min", "max"]), default="min", show_default=True, help="Minimum or maximum")
@click.option("--runs", type=click.IntRange(min=1), help="Restrict to words with exactly R runs (k=1)")
@click.option("--scan", is_flag=True, help="Exhaustively scan all q^m words instead of the closed form")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker threads for --scan, scheduling only; output is identical for any count (default from config)")
@click.option("--budget", type=click.IntRange(min=1), help="Maximum words to scan (default from config or env)")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
@click.option("--format", "format_type", type=FORMAT_CHOICE, default="csv", show_default=True, help="Output format")
@click.option("--out", default="-", show_default=True, metavar="PATH", help="Output path, - for stdout")
def extremes(channel, k, q, m, which, runs, scan, jobs, budget, progress, format_type, out):
    """Extremal input entropy over words of length m and every extremizing word.

    Output has one row per witness. For the 2-deletion minimum the printed
    closed form is reported next to the computed value.

    \b
    EXAMPLES:
      indel-entropy extremes --channel del --q 2 --m 6 --which max
      indel-entropy extremes --channel ins --m 8 --runs 3
      indel-entropy extremes --channel del --k 2 --m 9 --scan --jobs 4 --progress
    """
    if scan and runs is not None:
        raise click.UsageError("--scan cannot be combined with --runs")
    spec = _channel(channel, k, q)
    extremum = Extremum(which)
    try:
        if scan:
            result = exhaustive_argopt(
                q,
                m,
                entropy_objective(spec),
                extremum,
                budget=budget if budget is not None else config.get_budget(),
                max_workers=_jobs(jobs),
                show_progress=progress,
                tolerance=config.get_tolerance(),
                label=f"H_in {spec.label}",
            )
        elif runs is not None:
            result = extremum_over_fixed_runs(q, m, runs, spec, extremum)
        else:
            result = global_extremum(q, m, spec, extremum)
    except (ValueError, OverflowError) as e:
        _fail(e)

    rows = [
        (which, m, result.runs, result.value_bits, result.printed_bits, str(word))
        for word in result.witnesses
    ]
    formatters.emit_rows(
        ["which", "m", "runs", "value_bits", "printed_bits", "witness"],
        rows,
        format_type=format_type,
        out=out,
        title=result.objective,
    )


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, required=True, help="1-deletion or 1-insertion channel")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--n", required=True, type=click.IntRange(min=2), help="Channel input length")
@click.option("--enumerate", "enumerate_words", is_flag=True, help="Also compute the direct mean over all words")
@click.option("--budget", type=click.IntRange(min=1), help="Maximum words for --enumerate")
@click.option("--format", "format_type", type=FORMAT_CHOICE, default="csv", show_default=True, help="Output format")
def average(channel, q, n, enumerate_words, budget, format_type):
    """Average input entropy of the 1-deletion or 1-insertion channel.

    Reports the run-count formula together with the derived and the printed
    lower bounds.

    \b
    EXAMPLES:
      indel-entropy average --channel del --n 3            # 1.855388... bits
      indel-entropy average --channel ins --q 3 --n 5 --enumerate
    """
    spec = _channel(channel, 1, q)
    header = ["channel", "q", "n", "avg_bits", "derived_bound_bits", "printed_bound_bits"]
    try:
        bounds = average_lower_bound(n, q, spec)
        row = [spec.label, q, n, average_input_entropy(n, q, spec), bounds.derived_bits, bounds.printed_bits]
        if enumerate_words:
            header.append("enumerated_bits")
            row.append(
                average_input_entropy_enumerated(
                    n, q, spec, budget=budget if budget is not None else config.get_budget()
                )
            )
    except ValueError as e:
        _fail(e)
    formatters.emit_rows(header, [row], format_type=format_type, title="Average input entropy")


@main.command()
@click.option("--suite", type=click.Choice(list(verify_lib.SUITES)), required=True, help="Named invariant suite")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--max-len", default=8, show_default=True, type=click.IntRange(min=1), help="Longest word length checked")
@click.option("--samples", default=10_000, show_default=True, type=click.IntRange(min=1), help="Random pairs for lemma-alpha")
@click.option("--seed", default=0, show_default=True, type=int, help="Seed for lemma-alpha")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker threads, scheduling only; output is identical for any count (default from config)")
@click.option("--tolerance", type=float, help="Comparison tolerance in bits (default from config)")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
def verify(suite, q, max_len, samples, seed, jobs, tolerance, progress):
    """Run a named invariant suite and report pass/fail counts.

    \b
    SUITES:
      closed-vs-enum     closed forms against ball enumeration
      duality            input entropy vs output entropy of the dual channel
      extremizers        exhaustive scans against extremal characterizations
      averages           run-count averages, bounds and orderings
      lemma-alpha        prefix recursion of the embedding number (random pairs)
      correction-lemma   segment extensions and case recursion (binary)
      w-recursions       weighted log-sum recursions (binary)
      appendix-claim     W-difference maximized only by constant words (binary)
      normalization      ball totals and sizes

    \b
    EXAMPLES:
      indel-entropy verify --suite closed-vs-enum --q 2 --max-len 8
      indel-entropy verify --suite lemma-alpha --max-len 20 --samples 10000
    """
    try:
        result = verify_lib.run_suite(
            suite,
            q=q,
            max_len=max_len,
            tolerance=_tolerance(tolerance),
            samples=samples,
            seed=seed,
            max_workers=_jobs(jobs),
            show_progress=progress,
            budget=config.get_budget(),
        )
    except (ValueError, OverflowError) as e:
        _fail(e)

    click.echo(verify_lib.suite_summary(result))
    if not result.passed:
        click.echo(f"Error: {result.detail}", err=True)
        sys.exit(EXIT_VERIFY)


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, default="del", show_default=True, help="Deletion or insertion channel")
@click.option("--k", type=click.IntRange(min=0), help="Channel order for a single capacity")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--n", required=True, type=click.IntRange(min=0), help="Block length")
@click.option("--table", is_flag=True, help="Capacities for every k = 0..n")
@click.option("--bound-steps", type=click.IntRange(min=1), help="Emit the mixture upper bound on a grid of p")
@click.option("--tolerance", type=float, help="Blahut-Arimoto stopping bracket in bits")
@click.option("--max-iterations", default=100_000, show_default=True, type=click.IntRange(min=1), help="Blahut-Arimoto iteration cap")
@click.option("--budget", type=click.IntRange(min=1), help="Maximum transition-matrix cells")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker threads for matrix rows, scheduling only; output is identical for any count")
@click.option("--out", default="-", show_default=True, metavar="PATH", help="Output path, - for stdout")
def capacity(channel, k, q, n, table, bound_steps, tolerance, max_iterations, budget, jobs, out):
    """Small-n capacities by Blahut-Arimoto, and the mixture upper bound.

    \b
    MODES:
      --k K              one capacity, CSV k,capacity_bits
      --table            every k = 0..n, CSV k,capacity_bits (blank when over budget)
      --bound-steps S    deletion only, CSV p,bound_bits,bound_bits_per_symbol

    \b
    EXAMPLES:
      indel-entropy capacity --channel del --n 2 --k 1
      indel-entropy capacity --channel del --n 6 --table
      indel-entropy capacity --n 6 --bound-steps 20 --out bound.csv
    """
    modes = sum([k is not None, table, bound_steps is not None])
    if modes != 1:
        raise click.UsageError("choose exactly one of --k, --table or --bound-steps")
    kind = ChannelKind.parse(channel)
    if bound_steps is not None and kind is not ChannelKind.DELETION:
        raise click.UsageError("--bound-steps applies to the deletion channel only")
    tolerance = _tolerance(tolerance)
    budget = budget if budget is not None else config.get_matrix_budget()

    try:
        if k is not None:
            spec = _channel(channel, k, q)
            matrix = capacity_lib.transition_matrix(spec, n, budget=budget, max_workers=_jobs(jobs))
            result = capacity_lib.blahut_arimoto(matrix, tolerance, max_iterations)
            if not result.converged:
                click.echo(
                    f"Warning: not converged after {result.iterations} iterations, "
                    f"bracket [{result.capacity_bits:.12f}, {result.upper_bits:.12f}]",
                    err=True,
                )
            formatters.write_csv(["k", "capacity_bits"], [(k, result.capacity_bits)], out)
            return

        rows = capacity_lib.capacity_table(
            n,
            q,
            kind,
            tolerance=tolerance,
            max_iterations=max_iterations,
            budget=budget,
            max_workers=_jobs(jobs),
        )
    except (ValueError, OverflowError) as e:
        _fail(e)

    for row in rows:
        if row.converged is False:
            click.echo(f"Warning: capacity for k={row.k} did not converge", err=True)
    if table:
        formatters.write_csv(["k", "capacity_bits"], [(row.k, row.capacity_bits) for row in rows], out)
        return
    curve = capacity_lib.bound_curve(n, [row.capacity_bits for row in rows], bound_steps, q=q)
    formatters.write_csv(["p", "bound_bits", "bound_bits_per_symbol"], curve, out)


@main.command()
@click.option("--channel", type=CHANNEL_CHOICE, required=True, help="1-deletion or 1-insertion channel")
@click.option("--k", default=1, show_default=True, type=click.IntRange(1, 1), help="Channel order (only 1)")
@click.option("--q", default=2, show_default=True, type=click.IntRange(min=2), help="Alphabet size")
@click.option("--n", "n_values", required=True, callback=_parse_range, metavar="A:B", help="Input lengths, inclusive")
@click.option("--bound", type=click.Choice(["derived", "printed"]), default="derived", show_default=True, help="Lower bound column")
@click.option("--jobs", type=click.IntRange(min=1), help="Worker threads, scheduling only; output is identical for any count (default from config)")
@click.option("--progress", is_flag=True, help="Show a progress bar on stderr")
@click.option("--out", default="-", show_default=True, metavar="PATH", help="Output path, - for stdout")
def figure(channel, k, q, n_values, bound, jobs, progress, out):
    """Minimum, maximum, average and lower bound of the input entropy per n.

    \b
    EXAMPLES:
      indel-entropy figure --channel del --k 1 --q 2 --n 4:40 --out fig.csv
    """
    spec = _channel(channel, k, q)
    try:
        rows = figure_rows(
            spec, n_values, bound=bound, max_workers=_jobs(jobs), show_progress=progress
        )
    except ValueError as e:
        _fail(e)
    formatters.write_csv(
        ["n", "min_bits", "max_bits", "avg_bits", "bound_bits"],
        [(r.n, r.min_bits, r.max_bits, r.avg_bits, r.bound_bits) for r in rows],
        out,
    )


@main.group()
def config_cmd():
    """Manage configuration settings.

    Configuration is stored in ~/.indel-entropy/config.yaml and can be edited
    directly. Environment variables take priority over the file for budgets.

    \b
    AVAILABLE SETTINGS:
      budget          Maximum words scanned by exhaustive search (INDEL_ENTROPY_BUDGET)
      matrix-budget   Maximum transition-matrix cells (INDEL_ENTROPY_MATRIX_BUDGET)
      jobs            Default worker threads
      tolerance       Comparison tolerance in bits
      default-format  Default output format (csv, json, or pretty)

    \b
    EXAMPLES:
      indel-entropy config show
      indel-entropy config set jobs 4
    """
    pass


@config_cmd.command("show")
def config_show():
    """Show current configuration.

    \b
    EXAMPLE:
      indel-entropy config show
    """
    try:
        cfg = config.load_config()
        if not cfg:
            click.echo("No configuration found")
            click.echo(f"Config file location: {config.CONFIG_FILE}")
            return

        click.echo("Current configuration:")
        click.echo(f"Location: {config.CONFIG_FILE}\n")
        for key, value in cfg.items():
            click.echo(f"  {key}: {value}")
    except Exception as e:
        click.echo(f"Error loading config: {e}", err=True)
        sys.exit(EXIT_USAGE)


@config_cmd.command("set")
@click.argument("key")
@click.argument("value")
def config_set(key, value):
    """Store a configuration value.

    \b
    EXAMPLES:
      indel-entropy config set budget 50000000
      indel-entropy config set default-format csv
    """
    normalized = key.replace("_", "-")
    if normalized not in config.KNOWN_KEYS:
        raise click.BadParameter(
            f"unknown key '{key}', choose from {', '.join(config.KNOWN_KEYS)}",
            param_hint="'KEY'",
        )
    try:
        config.set_config_value(key, config.coerce_value(normalized, value))
    except ValueError as e:
        _fail(e)
    click.echo(f"Set {normalized} = {value}")


main.add_command(config_cmd, name="config")


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit status instead of exiting."""
    try:
        main.main(args=list(argv) if argv is not None else None, prog_name="indel-entropy")
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    return 0


if __name__ == "__main__":
    main()
