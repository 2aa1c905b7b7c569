"""Operator CLI: run queries, serve the API, run the mock Jira, run evaluations."""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from jiragpt.evalharness import (
    default_corpus,
    emit_report,
    format_summary,
    load_corpus,
    run_ablation,
    run_temperature_sweep,
    scripted_backend,
)
from jiragpt.llm.gateway import ENV_BASE_URL, HttpBackend
from jiragpt.mockjira.fixture import default_fixture, load_fixture
from jiragpt.pipeline import JqlGenerationFailed, Pipeline, QueryMode, QuerySpec
from jiragpt.prompts import VARIANT_NAMES
from jiragpt.service.app import build_issue_source, build_llm_backend, create_app, result_to_json
from jiragpt.service.config import AppConfig, load_config


@click.group()
def main():
    """Natural-language Jira assistant."""


def _build_backend(spec: str, corpus, seed: int = 0):
    if spec == "live":
        if not os.environ.get(ENV_BASE_URL):
            raise click.ClickException(
                f"live backend requires {ENV_BASE_URL} (and usually JIRAGPT_LLM_API_KEY)"
            )
        return HttpBackend()
    if spec.startswith("scripted:"):
        return scripted_backend(spec.split(":", 1)[1], corpus, seed=seed)
    raise click.ClickException(f"unknown backend {spec!r}; use live or scripted:<behavior>")


@main.command()
@click.argument("text")
@click.option("--complex", "complex_", is_flag=True, help="Run all three phases.")
@click.option("--temperature", type=click.FloatRange(0.0, 1.0), default=0.0, show_default=True)
@click.option("--model", default=None)
@click.option("--template", type=click.Choice(VARIANT_NAMES), default="full", show_default=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--json", "as_json", is_flag=True, help="Print the raw result JSON.")
def query(text, complex_, temperature, model, template, config_path, as_json):
    """Run one natural-language query through the pipeline."""
    config = load_config(config_path)
    pipeline = Pipeline(build_issue_source(config), build_llm_backend(config))
    spec = QuerySpec(
        text=text,
        mode=QueryMode.COMPLEX if complex_ else QueryMode.BASIC,
        temperature=temperature,
        model=model or config.default_model,
        phase1_variant=template,
    )
    try:
        result = pipeline.run(spec)
    except JqlGenerationFailed as exc:
        raise click.ClickException(f"{exc}\nraw completions: {exc.completions}")
    payload = result_to_json(result, config, spec.model)
    if as_json:
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
        return
    if payload["answer"]:
        click.echo(payload["answer"])
        click.echo()
    for issue in payload["issues"]:
        click.echo(f"{issue['key']:<10} {issue['status']:<12} {issue['summary']}")
    click.echo()
    click.echo(f"JQL: {payload['jql']}")
    if payload["selected_fields"]:
        click.echo(f"Fields: {', '.join(payload['selected_fields'])}")
    cost = payload["total_cost"]
    cost_text = f"{cost:.6f} {payload['currency']}" if cost is not None else "unavailable"
    click.echo(f"Cost: {cost_text}")
    for warning in payload["warnings"]:
        click.echo(f"Warning: {warning}")


@main.command()
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(host, port, config_path):
    """Run the HTTP query service."""
    import uvicorn

    config = load_config(config_path)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port)


@main.command("mock-jira")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8080, show_default=True)
@click.option("--fixture", "fixture_path", type=click.Path(exists=True), default=None)
def mock_jira(host, port, fixture_path):
    """Run the mock Jira search server."""
    import uvicorn

    from jiragpt.mockjira.server import create_app as create_mock_app

    fixture = load_fixture(fixture_path) if fixture_path else default_fixture()
    uvicorn.run(create_mock_app(fixture), host=host, port=port)


@main.group("eval")
def eval_group():
    """Run the evaluation harness."""


def _eval_setup(corpus_path, fixture_path):
    corpus = load_corpus(corpus_path) if corpus_path else default_corpus()
    fixture = load_fixture(fixture_path) if fixture_path else default_fixture()
    return corpus, fixture.issue_source()


@eval_group.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None)
@click.option("--fixture", "fixture_path", type=click.Path(exists=True), default=None)
@click.option("--backend", default="scripted:table1", show_default=True)
@click.option("--temperature", type=click.FloatRange(0.0, 1.0), default=0.0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--decimal-comma", is_flag=True, help="Use a comma as decimal separator.")
def ablation(corpus_path, fixture_path, backend, temperature, out_dir, decimal_comma):
    """Accuracy and token cost for each cumulative phase-1 prompt variant."""
    corpus, jira = _eval_setup(corpus_path, fixture_path)
    llm = _build_backend(backend, corpus)
    runs = run_ablation(corpus, jira, llm, temperature=temperature)
    click.echo(format_summary(runs, decimal_comma=decimal_comma), nl=False)
    if out_dir:
        csv_path, summary_path = emit_report(runs, Path(out_dir), decimal_comma=decimal_comma)
        click.echo(f"report: {csv_path}")
        click.echo(f"summary: {summary_path}")
    if any(run.incomplete for run in runs):
        sys.exit(1)


@eval_group.command()
@click.option("--corpus", "corpus_path", type=click.Path(exists=True), default=None)
@click.option("--fixture", "fixture_path", type=click.Path(exists=True), default=None)
@click.option("--backend", default="scripted:tempnoise", show_default=True)
@click.option("--variant", type=click.Choice(VARIANT_NAMES), default="full", show_default=True)
@click.option("--repetitions", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default=None)
def sweep(corpus_path, fixture_path, backend, variant, repetitions, seed, out_dir):
    """Accuracy of one variant across temperatures 0.0 to 1.0 in 0.1 steps."""
    corpus, jira = _eval_setup(corpus_path, fixture_path)
    llm = _build_backend(backend, corpus, seed=seed)
    rows = run_temperature_sweep(corpus, jira, llm, variant=variant, repetitions=repetitions)
    click.echo(f"{'temp':>4} {'accuracy':>9}")
    all_runs = []
    incomplete = False
    for temperature, accuracy, runs in rows:
        click.echo(f"{temperature:>4.1f} {accuracy:>8}%")
        all_runs.extend(runs)
        incomplete = incomplete or any(run.incomplete for run in runs)
    if out_dir:
        csv_path, summary_path = emit_report(all_runs, Path(out_dir))
        click.echo(f"report: {csv_path}")
        click.echo(f"summary: {summary_path}")
    if incomplete:
        sys.exit(1)


if __name__ == "__main__":
    main()
