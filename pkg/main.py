import json
import logging
import sys

import click

from engine_config import load_settings
from oracle_engine.errors import EngineError
from oracle_engine.evaluator import Budget, delta
from oracle_engine.reducibility import decide_via_reduction
from oracle_engine.registry import (
    ENUMERATED,
    ENUMERATORS,
    MANYONE_MAPS,
    PREDICATES,
    REDUCTION_KINDS,
    TREES,
    build_reduction,
    builtin_enumerator,
    builtin_tree,
    deficiency_oracle,
    load_truth_table,
    oracle_decider,
    resolve_oracle,
)
from oracle_engine.selftest import SUITES, plot_summary, run_suites, summarize
from oracle_engine.tree_core import enumerate_transcripts
from oracle_engine.truthtable import tt_to_turing

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"

EXIT_CODES = {"out": 0, "timeout": 2, "ask": 3}
EXIT_ERROR = 1
EXIT_SELFTEST_FAILED = 4


class EngineGroup(click.Group):
    """Runs commands without click's standalone handling so that every error exits with 1."""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            code = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_ERROR)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_ERROR)
        except EngineError as e:
            click.echo(f"Error: {e}", err=True)
            sys.exit(EXIT_ERROR)
        sys.exit(code or 0)


def parse_range(ctx, param, value):
    """A..B, both ends included."""
    if value is None:
        return None
    try:
        low, high = (int(part) for part in value.split(".."))
    except ValueError:
        raise click.BadParameter(f"expected A..B, got {value!r}")
    if low > high:
        raise click.BadParameter(f"empty range {value!r}")
    return range(low, high + 1)


def emit(record):
    click.echo(json.dumps(record))


def budget_from(ctx, qfuel, sfuel):
    settings = ctx.obj
    return Budget(settings.question_fuel if qfuel is None else qfuel, settings.step_fuel if sfuel is None else sfuel)


def fuel_options(command):
    command = click.option("--sfuel", type=click.IntRange(min=0), default=None, help="Step fuel for every partial evaluation.")(command)
    return click.option("--qfuel", type=click.IntRange(min=0), default=None, help="Maximum number of oracle questions.")(command)


@click.group(cls=EngineGroup)
@click.option("--verbose", is_flag=True, help="Log progress at INFO level on stderr.")
@click.pass_context
def cli(ctx, verbose):
    """Runs computation trees against oracles and executes oracle reductions."""
    try:
        settings = load_settings()
    except ValueError as e:
        raise click.ClickException(str(e))
    level = logging.INFO if verbose else settings.log_level
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)
    ctx.obj = settings


@cli.command()
@click.argument("tree_name", type=click.Choice(sorted(TREES)))
@click.option("--input", "input_value", type=int, required=True, help="Input fed to the tree.")
@click.option("--oracle", required=True, help="Built-in oracle name or path to a JSON oracle table.")
@click.option("--transcripts", is_flag=True, help="First print every valid transcript of at most --qfuel questions.")
@fuel_options
@click.pass_context
def run(ctx, tree_name, input_value, oracle, transcripts, qfuel, sfuel):
    """Evaluate a built-in tree against an oracle and print the outcome."""
    budget = budget_from(ctx, qfuel, sfuel)
    sigma = builtin_tree(tree_name).at(input_value)
    f = resolve_oracle(oracle)
    if transcripts:
        for transcript_run in enumerate_transcripts(sigma, f, budget.questions, budget.steps):
            emit(transcript_run.to_record())
    logging.info(f"Running {tree_name} at {input_value} against {oracle} with {budget}")
    outcome = delta(sigma, f, budget)
    emit(outcome.to_record(budget))
    ctx.exit(EXIT_CODES[outcome.kind])


def emit_verdicts(reduction, decider, xs, budget, expected=None):
    for x, verdict in decide_via_reduction(reduction, decider, xs, budget):
        record = {"x": x, "verdict": verdict.value}
        if expected is not None:
            record["expected"] = bool(expected(x))
        emit(record)


@cli.command()
@click.argument("kind", type=click.Choice(REDUCTION_KINDS))
@click.option("--range", "xs", callback=parse_range, required=True, help="Inputs A..B to decide.")
@click.option("--oracle", default="evens", show_default=True, help="Decidable oracle predicate, built-in name or table file.")
@click.option("--table", type=click.Path(), default=None, help="Truth table file for the tt reduction.")
@click.option("--enum", "enum_name", type=click.Choice(sorted(ENUMERATORS)), default=None, help="Enumerator for the deficiency reduction.")
@click.option("--p", "p_name", default=None, help="Predicate for the pt reduction: 'oracle' or a built-in predicate.")
@click.option("--map", "manyone_map", type=click.Choice(sorted(MANYONE_MAPS)), default="succ", show_default=True, help="Map for the manyone reduction.")
@fuel_options
@click.pass_context
def reduce(ctx, kind, xs, oracle, table, enum_name, p_name, manyone_map, qfuel, sfuel):
    """Decide inputs through a reduction to the oracle predicate; one JSON line per input."""
    budget = budget_from(ctx, qfuel, sfuel)
    reduction = build_reduction(kind, table=table, enum=enum_name, p=p_name, manyone_map=manyone_map)
    if kind == "deficiency":
        decider = deficiency_oracle(builtin_enumerator(enum_name))
    else:
        decider = oracle_decider(oracle)
    logging.info(f"Deciding {xs.start}..{xs.stop - 1} via {reduction.name} with {budget}")
    emit_verdicts(reduction, decider, xs, budget)


@cli.command()
@click.option("--p", "p_name", required=True, help="'oracle' or a built-in predicate.")
@click.option("--range", "xs", callback=parse_range, required=True, help="Inputs A..B to decide.")
@click.option("--oracle", default="all-false", show_default=True, help="Oracle predicate consulted by the semi-deciders.")
@click.option("--padding", type=click.IntRange(min=0), default=0, show_default=True, help="Extra steps for the complement semi-decider.")
@fuel_options
@click.pass_context
def pt(ctx, p_name, xs, oracle, padding, qfuel, sfuel):
    """Decide p by dovetailing semi-deciders for p and its complement."""
    budget = budget_from(ctx, qfuel, sfuel)
    decider = oracle_decider(oracle)
    reduction = build_reduction("pt", p=p_name, padding=padding)
    expected = decider if p_name == "oracle" else PREDICATES.get(p_name)
    emit_verdicts(reduction, decider, xs, budget, expected)


@cli.command()
@click.option("--table", type=click.Path(), required=True, help='Truth table file {"offsets": [...], "table": [...]}.')
@click.option("--range", "xs", callback=parse_range, required=True, help="Inputs A..B to decide.")
@click.option("--oracle", default="evens", show_default=True, help="Decidable oracle predicate, built-in name or table file.")
@fuel_options
@click.pass_context
def tt(ctx, table, xs, oracle, qfuel, sfuel):
    """Compare a truth table's direct evaluation with its Turing reduction."""
    budget = budget_from(ctx, qfuel, sfuel)
    truth_table = load_truth_table(table)
    decider = oracle_decider(oracle)
    verdicts = dict(decide_via_reduction(tt_to_turing(truth_table), decider, xs, budget))
    for x in xs:
        queries = truth_table.queries(x)
        answers = [bool(decider(q)) for q in queries]
        emit({
            "x": x,
            "queries": queries,
            "answers": answers,
            "direct": truth_table.verdict(x, answers),
            "verdict": verdicts[x].value,
        })


@cli.command("demo-hypersimple")
@click.option("--enum", "enum_name", type=click.Choice(sorted(ENUMERATORS)), default="double", show_default=True)
@click.option("--range", "xs", callback=parse_range, default="0..50", show_default=True, help="Inputs A..B to decide.")
@fuel_options
@click.pass_context
def demo_hypersimple(ctx, enum_name, xs, qfuel, sfuel):
    """Decide the enumerated predicate from its deficiency predicate."""
    budget = budget_from(ctx, qfuel, sfuel)
    logging.info(f"Deciding range({enum_name}) from its deficiency oracle")
    emit_verdicts(build_reduction("deficiency", enum=enum_name), deficiency_oracle(builtin_enumerator(enum_name)), xs, budget, ENUMERATED[enum_name])
    logging.info("Hypersimple Demo Completed!")


@cli.command()
@click.option("--seed", type=int, default=None, help="PRNG seed.")
@click.option("--cases", type=click.IntRange(min=0), default=None, help="Corpus size per suite.")
@click.option("--break-tt", is_flag=True, help="Evaluate truth tables little-endian; the suites must then fail.")
@click.option("--plot", "plot_path", type=click.Path(), default=None, help="Save a bar chart of the suite summary.")
@click.option("--suite", "suites", type=click.Choice([name for name, _ in SUITES]), multiple=True, help="Run only these suites.")
@click.pass_context
def selftest(ctx, seed, cases, break_tt, plot_path, suites):
    """Run every property suite; exit 4 on any failure."""
    settings = ctx.obj
    seed = settings.seed if seed is None else seed
    cases = settings.cases if cases is None else cases
    logging.info(f"Starting the self test with seed {seed} and {cases} cases")

    results = run_suites(seed, cases, break_tt=break_tt, only=suites or None)
    summary = summarize(results)
    for result in results:
        emit({"suite": result.suite, "cases": result.cases, "failures": result.failures})
    click.echo(summary.to_string(index=False), err=True)

    if plot_path:
        logging.info("Plotting Suite Summary...")
        plot_summary(summary, plot_path)

    failed = [result for result in results if not result.passed]
    for result in failed:
        click.echo(f"{result.suite}: minimal counterexample: {result.counterexample}", err=True)
    ctx.exit(EXIT_SELFTEST_FAILED if failed else 0)


if __name__ == "__main__":
    cli()
