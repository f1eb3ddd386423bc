"""
Command-line front end.

Every command prints a human-readable report whose last line is
`VERDICT: <word>` and exits 0 (success, holds, conforming), 1 (fails,
non-conforming, unreachable, ill-formed) or 2 (usage, parse or I/O error).
"""

import functools
import logging
from pathlib import Path
from typing import Optional, Tuple

import click

from . import __version__, configure_logging, load_config
from .catalog import init_example as copy_example
from .cli_utils import CommandResult, handles_errors, read_text, write_text
from .conformance import all_conform, check_trace, check_traces, summarize
from .constants import (
    EXAMPLE_FILES,
    EXIT_ERROR,
    EXIT_SUCCESS,
    VERDICT_ERROR,
    VERDICT_EXPORTED,
    VERDICT_INITIALIZED,
    VERDICT_SIMULATED,
)
from .dot_export import export_dot
from .exceptions import ConfigurationError
from .dsl import parse_model
from .ltl import check_atoms, eval as eval_formula
from .ltl_parser import format_formula, parse_formula
from .models import ProcessModel
from .progress_tracker import ProgressTracker, create_echo_callback
from .reporting import ReportRenderer, verdict_line
from .search import count_traces, enumerate_traces, reach
from .simulator import Eager, UniformRandom, simulate
from .trace_format import parse_trace, serialize_trace
from .validation import validate

logger = logging.getLogger(__name__)

MODEL_FILE = click.Path(dir_okay=False)
TRACE_FILE = click.Path(dir_okay=False)


def load_model(path: str) -> ProcessModel:
    return parse_model(read_text(path), filename=path)


def load_valid_model(path: str) -> ProcessModel:
    """Parse and validate; ill-formed models end the command with exit 1."""
    model = load_model(path)
    report = validate(model)
    if not report.is_well_formed:
        CommandResult.failure(ReportRenderer(path).render_validation(report)).emit()
    return model


@click.group()
@click.version_option(__version__, prog_name="procverify")
@click.option(
    "--log-level",
    default=None,
    help="Logging level for diagnostics on stderr (default from PROCVERIFY_LOG_LEVEL).",
)
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]):
    """Verify ML development process models and their instances."""
    overrides = {"LOG_LEVEL": log_level} if log_level else None
    try:
        config = load_config(overrides)
    except ConfigurationError as error:
        click.echo(f"error: {error}", err=True)
        click.echo(verdict_line(VERDICT_ERROR))
        raise click.exceptions.Exit(EXIT_ERROR)
    configure_logging(config["LOG_LEVEL"])
    ctx.obj = config


@cli.command("validate")
@click.argument("model_file", type=MODEL_FILE)
@handles_errors
def validate_command(model_file: str):
    """Check the well-formedness rules W1-W7."""
    report = validate(load_model(model_file))
    text = ReportRenderer(model_file).render_validation(report)
    CommandResult.from_outcome(text, report.is_well_formed).emit()


@cli.command("export-dot")
@click.argument("model_file", type=MODEL_FILE)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the graph to this file.")
@handles_errors
def export_dot_command(model_file: str, output: Optional[str]):
    """Export a validated model as a Graphviz dot graph."""
    dot = export_dot(load_valid_model(model_file))
    if output:
        write_text(output, dot)
        CommandResult.success(f"wrote {output}\n{verdict_line(VERDICT_EXPORTED)}").emit()
    CommandResult.success(dot + verdict_line(VERDICT_EXPORTED)).emit()


@cli.command("simulate")
@click.argument("model_file", type=MODEL_FILE)
@click.option("--policy", type=click.Choice(["eager", "random"]), default="eager", show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--steps", type=click.IntRange(min=1), default=None, help="Number of steps (default from config).")
@click.option("--dwell", type=click.IntRange(min=1), default=None, help="Eager: steps an element stays active.")
@click.option("--feedback-rounds", type=click.IntRange(min=0), default=0, show_default=True,
              help="Eager: times each feedback loop fires.")
@click.option("--feedback-rate", type=click.FloatRange(0.0, 1.0), default=None,
              help="Random: per-step probability that a feedback loop fires.")
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the trace to this file.")
@click.pass_obj
@handles_errors
def simulate_command(config, model_file, policy, seed, steps, dwell, feedback_rounds, feedback_rate, output):
    """Simulate an instance with a deterministic policy."""
    model = load_valid_model(model_file)
    if policy == "eager":
        chosen = Eager(dwell=dwell or config["DEFAULT_DWELL"], feedback_rounds=feedback_rounds)
    else:
        rate = config["RANDOM_FEEDBACK_RATE"] if feedback_rate is None else feedback_rate
        chosen = UniformRandom(seed=seed, feedback_rate=rate)
    trace = simulate(model, chosen, steps or config["DEFAULT_STEPS"])
    text = serialize_trace(trace)
    if output:
        write_text(output, text)
        CommandResult.success(
            f"wrote {trace.steps} step(s) to {output}\n{verdict_line(VERDICT_SIMULATED)}"
        ).emit()
    CommandResult.success(text + verdict_line(VERDICT_SIMULATED)).emit()


@cli.command("check-trace")
@click.argument("model_file", type=MODEL_FILE)
@click.argument("trace_file", type=TRACE_FILE)
@handles_errors
def check_trace_command(model_file: str, trace_file: str):
    """Check one trace against its model (rules R1-R6)."""
    model = load_valid_model(model_file)
    trace = parse_trace(read_text(trace_file), model=model, strict=False, filename=trace_file)
    report = check_trace(model, trace)
    text = ReportRenderer(trace_file).render_conformance(report, trace)
    CommandResult.from_outcome(text, report.is_conforming).emit()


@cli.command("check-traces")
@click.argument("model_file", type=MODEL_FILE)
@click.argument("trace_files", type=TRACE_FILE, nargs=-1, required=True)
@handles_errors
def check_traces_command(model_file: str, trace_files: Tuple[str, ...]):
    """Check a batch of traces; succeeds only if all conform."""
    model = load_valid_model(model_file)
    traces = {
        path: parse_trace(read_text(path), model=model, strict=False, filename=path)
        for path in trace_files
    }
    reports = check_traces(model, traces)
    text = ReportRenderer(model_file).render_batch(reports)
    CommandResult.from_outcome(text, all_conform(reports.values())).emit()


@cli.command("check-ltl")
@click.argument("model_file", type=MODEL_FILE)
@click.argument("trace_file", type=TRACE_FILE)
@click.option("--formula", "formula_text", help="Formula text.")
@click.option("--formula-file", type=click.Path(dir_okay=False), help="File holding the formula.")
@handles_errors
def check_ltl_command(model_file: str, trace_file: str, formula_text: Optional[str], formula_file: Optional[str]):
    """Evaluate a temporal formula on a trace."""
    if (formula_text is None) == (formula_file is None):
        raise click.UsageError("give exactly one of --formula or --formula-file")
    if formula_file:
        formula_text = read_text(formula_file).strip()
    model = load_valid_model(model_file)
    formula = parse_formula(formula_text)
    check_atoms(formula, model)
    trace = parse_trace(read_text(trace_file), model=model, filename=trace_file)
    holds = eval_formula(formula, trace)
    text = ReportRenderer(trace_file).render_ltl(format_formula(formula), holds, trace, check_trace(model, trace))
    CommandResult.from_outcome(text, holds).emit()


@cli.command("reach")
@click.argument("model_file", type=MODEL_FILE)
@click.option("--goal", required=True, help="State predicate, e.g. 'done(factory_quality_seal)'.")
@click.option("--depth", type=click.IntRange(min=0), required=True, help="Maximum witness length in steps.")
@click.option("--exhaustive", is_flag=True, help="Search all legal moves (small models only).")
@click.option("--force", is_flag=True, help="Lift the element limit of --exhaustive.")
@click.option("--progress", is_flag=True, help="Print one line per search layer on stderr.")
@handles_errors
def reach_command(model_file: str, goal: str, depth: int, exhaustive: bool, force: bool, progress: bool):
    """Find a shortest legal evolution reaching a goal state."""
    model = load_valid_model(model_file)
    formula = parse_formula(goal)
    tracker = ProgressTracker(create_echo_callback(functools.partial(click.echo, err=True))) if progress else None
    witness = reach(model, formula, depth, exhaustive=exhaustive, force=force, tracker=tracker)
    text = ReportRenderer(model_file).render_reach(
        format_formula(formula), depth, witness, serialize_trace(witness) if witness else ""
    )
    CommandResult.from_outcome(text, witness is not None).emit()


@cli.command("enumerate")
@click.argument("model_file", type=MODEL_FILE)
@click.option("--depth", type=click.IntRange(min=0), required=True, help="Number of steps per trace.")
@click.option("--count-only", is_flag=True, help="Only print the number of traces.")
@click.option("--force", is_flag=True, help="Lift the element-count guard.")
@click.pass_obj
@handles_errors
def enumerate_command(config, model_file: str, depth: int, count_only: bool, force: bool):
    """Enumerate every conforming trace with a fixed number of steps."""
    model = load_valid_model(model_file)
    limit = config["ENUMERATE_MAX_ELEMENTS"]
    renderer = ReportRenderer(model_file)
    if count_only:
        total = count_traces(model, depth, force=force, max_elements=limit)
        CommandResult.success(renderer.render_enumeration(depth, total)).emit()
    listing = []
    for index, trace in enumerate(enumerate_traces(model, depth, force=force, max_elements=limit)):
        listing.append(f"# trace {index}\n{serialize_trace(trace)}")
    CommandResult.success(renderer.render_enumeration(depth, len(listing), "".join(listing))).emit()


@cli.command("summary")
@click.argument("model_file", type=MODEL_FILE)
@click.argument("trace_file", type=TRACE_FILE)
@handles_errors
def summary_command(model_file: str, trace_file: str):
    """Per-element activity of one trace (first active/done, rework)."""
    model = load_valid_model(model_file)
    trace = parse_trace(read_text(trace_file), model=model, filename=trace_file)
    CommandResult.success(ReportRenderer(trace_file).render_summary(summarize(trace))).emit()


@cli.command("init-example")
@click.argument("example", type=click.Choice(sorted(EXAMPLE_FILES)))
@click.option("--dest", type=click.Path(file_okay=False), default="fixtures", show_default=True)
@handles_errors
def init_example_command(example: str, dest: str):
    """Copy a shipped example model and its traces."""
    written = copy_example(example, Path(dest))
    lines = [f"wrote {path}" for path in written]
    lines.append(verdict_line(VERDICT_INITIALIZED))
    CommandResult.success("\n".join(lines)).emit()


def main(argv=None) -> int:
    """Run the CLI and return its exit status instead of exiting."""
    try:
        result = cli.main(args=argv, prog_name="procverify", standalone_mode=False)
    except click.ClickException as error:
        error.show()
        click.echo(verdict_line(VERDICT_ERROR))
        return EXIT_ERROR
    except click.exceptions.Abort:
        return EXIT_ERROR
    return result if isinstance(result, int) else EXIT_SUCCESS


if __name__ == "__main__":
    raise SystemExit(main())
