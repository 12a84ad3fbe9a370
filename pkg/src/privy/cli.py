"""Operator command line: serve the API, run pipelines headlessly, export
worksheets and reports, and score rubric responses.

Exit codes: 0 success, 1 validation failure, 2 LLM/backend failure.
Data goes to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .config import AppConfig, bundled_mock_dir, load_config
from .errors import PrivyError
from .gateway import GatewayConfig, LlmGateway
from .report import export_worksheet, render_html, render_markdown, render_report
from .rubric import aggregate, load_rubric, response_from_dict, validate_response
from .session import ProductConcept, session_from_dict, snapshot
from .suggestions import SuggestionEngine
from .taxonomy import load_taxonomy

_BACKEND_CODES = {"backend_error", "auth_error", "missing_fixture",
                  "llm_output_invalid", "config_error"}


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PrivyError as exc:
            click.echo(f"error ({exc.code}): {exc.message}", err=True)
            sys.exit(2 if exc.code in _BACKEND_CODES else 1)

    return wrapper


def _load_session_file(path: str):
    bundle = load_taxonomy()
    raw = json.loads(Path(path).read_text("utf-8"))
    return session_from_dict(raw, bundle), bundle


def _gateway_config(mock: bool) -> GatewayConfig:
    config = GatewayConfig.from_env()
    if mock and not config.mock_dir:
        config.mock_dir = bundled_mock_dir()
    return config


@click.group()
def main():
    """Privacy impact assessment workbench."""


@main.command()
@click.option("--port", type=int, default=None, help="Port to listen on.")
@click.option("--data-dir", type=click.Path(), default=None, help="Data directory.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file.")
@click.option("--mock", is_flag=True, help="Use the bundled mock LLM fixtures.")
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Static UI assets to serve at /.")
@_cli_errors
def serve(port, data_dir, config_path, mock, ui_dir):
    """Run the HTTP API service."""
    import uvicorn

    from .api import create_app

    config = load_config(config_path)
    if port is not None:
        config.port = port
    if data_dir is not None:
        config.data_dir = data_dir
    if ui_dir is not None:
        config.ui_dir = ui_dir
    if mock and not config.llm.mock_dir:
        config.llm.mock_dir = bundled_mock_dir()
    uvicorn.run(create_app(config), host="0.0.0.0", port=config.port)


@main.command("export-worksheet")
@click.option("--concept", "concept_path", type=click.Path(exists=True), default=None,
              help="Concept JSON file to pre-fill Product Information.")
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Write to a file instead of stdout.")
@_cli_errors
def export_worksheet_cmd(concept_path, output):
    """Export the static worksheet as Markdown."""
    bundle = load_taxonomy()
    concept = None
    if concept_path:
        raw = json.loads(Path(concept_path).read_text("utf-8"))
        concept = ProductConcept(
            name=raw.get("name", ""), purpose=raw.get("purpose", ""),
            data_description=raw.get("data_description", ""),
            example_use_case=raw.get("example_use_case", ""),
        )
    text = export_worksheet(bundle, concept)
    if output:
        Path(output).write_text(text, "utf-8")
        click.echo(f"wrote {output}", err=True)
    else:
        click.echo(text)


@main.command()
@click.option("--session", "session_path", type=click.Path(exists=True), required=True,
              help="Session JSON file.")
@click.option("-o", "--output", type=click.Path(), default=None,
              help="Write to a file instead of stdout.")
@click.option("--html", "as_html", is_flag=True, help="Render HTML instead of Markdown.")
@_cli_errors
def report(session_path, output, as_html):
    """Render the three-section PIA report for a session."""
    session, bundle = _load_session_file(session_path)
    rendered = render_report(snapshot(session), bundle)
    text = render_html(rendered) if as_html else render_markdown(rendered)
    if output:
        Path(output).write_text(text, "utf-8")
        click.echo(f"wrote {output}", err=True)
    else:
        click.echo(text)


@main.command()
@click.option("--session", "session_path", type=click.Path(exists=True), required=True,
              help="Session JSON file.")
@click.option("--kind", type=click.Choice(["use-cases", "capabilities", "risks",
                                           "provocations"]), required=True)
@click.option("--assessment", "assessment_id", default=None,
              help="Assessment id (for --kind provocations).")
@click.option("--mock", is_flag=True, help="Use the bundled mock LLM fixtures.")
@_cli_errors
def suggest(session_path, kind, assessment_id, mock):
    """Run one suggestion pipeline and print the JSON result."""
    session, bundle = _load_session_file(session_path)
    engine = SuggestionEngine(LlmGateway(_gateway_config(mock)), bundle)
    snap = snapshot(session)
    if kind == "use-cases":
        items = engine.suggest_use_cases(snap)
        payload = [{"kind": s.kind.value, "stakes": s.stakes.value,
                    "description": s.description, "party": s.party} for s in items]
    elif kind == "capabilities":
        summary = engine.summarize_capabilities(snap)
        payload = {
            "text": summary.text,
            "pairs": [
                {"capability": p.capability,
                 "requirements": [{"dimension": r.dimension.value, "text": r.text}
                                  for r in p.requirements],
                 "derived_from_use_cases": list(p.derived_from_use_cases)}
                for p in summary.pairs
            ],
        }
    elif kind == "risks":
        items = engine.suggest_risks(snap)
        payload = [{"risk_type": s.risk_type, "manifestation": s.manifestation,
                    "impacted_stakeholders": s.impacted_stakeholders} for s in items]
    else:
        if not assessment_id:
            click.echo("error (validation_error): --assessment is required for "
                       "provocations", err=True)
            sys.exit(1)
        items = engine.suggest_provocations(snap, assessment_id)
        payload = [{"barrier": p.barrier.value, "question": p.question,
                    "seed_feature": p.seed_feature} for p in items]
    click.echo(json.dumps(payload, indent=2, ensure_ascii=False))


@main.group()
def taxonomy():
    """Taxonomy inspection commands."""


@taxonomy.command("list")
@_cli_errors
def taxonomy_list():
    """Print the 12 risk types, one per line."""
    bundle = load_taxonomy()
    for risk in bundle.risks:
        click.echo(f"{risk.id}\t{risk.category}\t{risk.display_name}")


@main.group()
def rubric():
    """Rubric validation and aggregation."""


@rubric.command("validate")
@click.option("--report", "report_path", type=click.Path(exists=True), required=True,
              help="Report JSON file.")
@click.option("--response", "response_path", type=click.Path(exists=True), required=True,
              help="Rubric response JSON file.")
@_cli_errors
def rubric_validate(report_path, response_path):
    """Check a rubric response for completeness and range."""
    from .report import report_from_dict

    report_obj = report_from_dict(json.loads(Path(report_path).read_text("utf-8")))
    response = response_from_dict(json.loads(Path(response_path).read_text("utf-8")))
    problems = validate_response(report_obj, response, load_rubric())
    if problems:
        click.echo(json.dumps(problems, indent=2))
        sys.exit(1)
    click.echo("ok")


@rubric.command("aggregate")
@click.option("--responses", "responses_path", type=click.Path(exists=True),
              required=True, help="JSON file with a list of rubric responses.")
@click.option("--measure", required=True, help="Measure slug to aggregate.")
@_cli_errors
def rubric_aggregate(responses_path, measure):
    """Print mean, sample SD, and n for one measure across responses."""
    raw = json.loads(Path(responses_path).read_text("utf-8"))
    responses = [response_from_dict(r) for r in raw]
    result = aggregate(responses, measure)
    click.echo(json.dumps({"measure": measure, "mean": result.mean,
                           "sd": result.sd, "n": result.n}))


if __name__ == "__main__":
    main()
