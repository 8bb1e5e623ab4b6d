"""Operator and author command line.

Reports print as JSON on stdout; domain failures print {code, message} on
stderr and exit with the error's documented exit code.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import psychometrics
from .config import load_config
from .content import load_course
from .errors import EngineError
from .instrument import default_instrument, load_instrument, sheets_from_csv
from .sim import load_sim_config, run_sim, transcript_text
from .store import EngineStore
from .vocab import InstrumentKind


def _emit(document: dict) -> None:
    click.echo(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False))


def _fail(error: EngineError) -> None:
    click.echo(
        json.dumps({"code": error.code, "message": str(error)}), err=True
    )
    sys.exit(error.exit_code)


@click.group()
def main():
    """Adaptive course engine: authoring, analytics and simulation."""


@main.group()
def instrument():
    """Questionnaire instrument commands."""


@instrument.command("validate")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def instrument_validate(file: str):
    """Validate an instrument file and summarize it."""
    try:
        loaded = load_instrument(file)
    except EngineError as error:
        _fail(error)
    _emit(
        {
            "instrument_id": loaded.instrument_id,
            "questions": len(loaded.questions),
            "dimensions": {
                dim.value: len(loaded.questions_for(dim))
                for dim in loaded.dimension_poles
            },
            "valid": True,
        }
    )


@main.group()
def course():
    """Course package commands."""


@course.command("ingest")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--store", "store_dir", required=True, type=click.Path(file_okay=False),
              help="Store directory to write the validated course into.")
def course_ingest(file: str, store_dir: str):
    """Validate a course package and store it."""
    try:
        graph = load_course(file)
        EngineStore(store_dir).put_course(graph)
    except EngineError as error:
        _fail(error)
    _emit(
        {
            "course_id": graph.course_id,
            "concepts": len(graph.concepts),
            "objectives": len(graph.objectives),
            "fragments": len(graph.fragments),
            "tests": len(graph.tests),
            "stored": True,
        }
    )


@main.group()
def cohort():
    """Cohort analytics over stored learners or exported responses."""


@cohort.command("alpha")
@click.argument("responses", type=click.Path(exists=True, dir_okay=False))
@click.option("--kind", type=click.Choice([k.value for k in InstrumentKind]),
              default=InstrumentKind.PREFERENCE.value, show_default=True,
              help="What the questionnaire measures; decides the threshold.")
@click.option("--sample-variance", is_flag=True,
              help="Use sample (n-1) variances instead of population (n).")
@click.option("--per-dimension", is_flag=True,
              help="Also report alpha over each dimension's own items.")
@click.option("--instrument", "instrument_file", type=click.Path(exists=True, dir_okay=False),
              default=None,
              help="Instrument file used to group columns for --per-dimension; "
                   "defaults to the built-in one.")
def cohort_alpha(responses: str, kind: str, sample_variance: bool,
                 per_dimension: bool, instrument_file: str | None):
    """Reliability report over a responses CSV (header q1..q44, rows a/b)."""
    population = not sample_variance
    try:
        matrix = psychometrics.matrix_from_csv(responses)
        report = psychometrics.reliability_report(
            matrix, InstrumentKind(kind), population=population
        )
        document = psychometrics.reliability_report_document(report)
        if per_dimension:
            inst = load_instrument(instrument_file) if instrument_file else default_instrument()
            sheets = sheets_from_csv(responses, inst)
            document["per_dimension_alpha"] = {
                dim.value: alpha
                for dim, alpha in psychometrics.dimension_alphas(
                    sheets, inst, population=population
                ).items()
            }
    except EngineError as error:
        _fail(error)
    _emit(document)


@cohort.command("styles")
@click.argument("store_dir", type=click.Path(exists=True, file_okay=False))
def cohort_styles(store_dir: str):
    """Style histogram and modal style over a store's learners."""
    try:
        store = EngineStore(store_dir)
        histogram = psychometrics.style_distribution(
            record.style for record in store.learners() if record.style is not None
        )
    except EngineError as error:
        _fail(error)
    _emit(psychometrics.style_histogram_document(histogram))


@main.group()
def sim():
    """Synthetic-learner simulation."""


@sim.command("run")
@click.argument("simconfig", type=click.Path(exists=True, dir_okay=False))
def sim_run(simconfig: str):
    """Run the full engine loop for a synthetic cohort; print transcript."""
    try:
        config = load_sim_config(simconfig)
        transcript = run_sim(config)
    except EngineError as error:
        _fail(error)
    click.echo(transcript_text(transcript), nl=False)


@main.command("serve")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="Config file; defaults to $ADAPT_CONFIG.")
def serve(config_path: str | None):
    """Start the HTTP service."""
    from .service import run

    try:
        config = load_config(config_path)
    except EngineError as error:
        _fail(error)
    run(config)


if __name__ == "__main__":
    main()
