"""Command-line entry points.

    pwim validate DOMAIN.json          check a domain file
    pwim eval DOMAIN.json CASES.json   batch-evaluate intent phrases
    pwim play DOMAIN.json              interactive terminal session
    pwim serve                         HTTP API (+ web UI if built)
    pwim embed-server                  optional real-model backend

Exit codes: 0 success, 1 validation/assertion failure, 2 I/O or
environment failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .domain import load_domain_path
from .errors import PwimError, SchemaError
from .evaluation import parse_cases, run_eval
from .registry import bundled_domains, load_domain_dir
from .service import PlayService

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_IO = 2


def _read_file(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_IO)


def _load_domain_or_exit(path: str, lax: bool = False):
    data = _read_file(path)
    from .domain import load_domain

    try:
        return load_domain(data, lax=lax)
    except SchemaError as exc:
        click.echo(f"{path}: schema-error at {exc.path}: {exc.reason}", err=True)
        sys.exit(EXIT_FAIL)


@click.group()
def main():
    """Free-text intent matching over conditionally available actions."""


@main.command()
@click.argument("path")
@click.option("--lax", is_flag=True, help="Allow unknown fields.")
def validate(path, lax):
    """Validate a domain file; exit 0 iff it loads cleanly."""
    domain = _load_domain_or_exit(path, lax=lax)
    click.echo(
        f"ok: domain {domain.name!r}, {len(domain.schemas)} schemas, "
        f"{len(domain.initial_facts)} initial facts, cast {list(domain.cast)}"
    )


@main.command(name="eval")
@click.argument("domain_path")
@click.argument("cases_path")
@click.option("--k", default=3, show_default=True, help="Top-K cutoff.")
@click.option("--json", "as_json", is_flag=True, help="Print the JSON report.")
@click.option("--report-dir", default=None,
              help="Write report.json/report.csv plus figures here.")
def eval_cmd(domain_path, cases_path, k, as_json, report_dir):
    """Evaluate intent phrases against expected actions.

    Exits 0 iff every valid expect_top1 case ranks first.
    """
    domain = _load_domain_or_exit(domain_path)
    try:
        cases = parse_cases(_read_file(cases_path))
    except PwimError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_FAIL)

    try:
        report = run_eval(domain, cases, k=k)
    except PwimError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_FAIL)

    if as_json:
        click.echo(report.to_json(), nl=False)
    else:
        width = max((len(r.case.intent) for r in report.results), default=6)
        click.echo(f"{'intent':<{width}}  rank  similarity  expected")
        for r in report.results:
            if r.valid:
                click.echo(
                    f"{r.case.intent:<{width}}  {r.rank:>4}  "
                    f"{r.similarity:>10.4f}  {r.case.expected_summary}"
                )
            else:
                click.echo(
                    f"{r.case.intent:<{width}}  {'--':>4}  {'--':>10}  "
                    f"invalid: {r.invalid_reason}"
                )
        click.echo(
            f"top-1 {report.top1_accuracy:.2f}  top-{k} {report.topk_accuracy:.2f}  "
            f"invalid {report.invalid}"
        )

    if report_dir:
        from .report import write_report_files

        for path in write_report_files(report, report_dir):
            click.echo(f"wrote {path}", err=True)

    sys.exit(EXIT_OK if report.passed() else EXIT_FAIL)


@main.command()
@click.argument("domain_path")
@click.option("--k", default=3, show_default=True)
def play(domain_path, k):
    """Play a domain in the terminal.

    Type an intent phrase to rank the available actions, then a number
    to perform one. ``:facts`` dumps the database, ``:quit`` exits.
    """
    domain = _load_domain_or_exit(domain_path)
    service = PlayService({domain.name: domain}, k=k)
    session = service.create_session(domain.name)

    def show_actions(actions):
        for action in actions:
            click.echo(f"  - {action.summary}")

    click.echo(f"playing {domain.name!r}; available actions:")
    show_actions(service.available_actions(session))

    ranked = []
    while True:
        try:
            line = click.prompt("", prompt_suffix="> ", default="", show_default=False)
        except (EOFError, click.Abort):
            break
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":facts":
            for text in session.db.render():
                click.echo(f"  {text}")
            continue
        if line.isdigit():
            index = int(line)
            if not ranked or not (1 <= index <= len(ranked)):
                click.echo("no such choice; type an intent phrase first")
                continue
            choice = ranked[index - 1].action
            event, actions = service.perform_action(
                session.session_id, choice.action_id, step=session.step
            )
            ranked = []
            click.echo(f"[{event.step}] {event.summary}")
            show_actions(actions)
            continue
        try:
            ranked = service.submit_intent(session.session_id, line)
        except PwimError as exc:
            click.echo(f"error: {exc.code}: {exc}", err=True)
            continue
        for i, entry in enumerate(ranked, start=1):
            marker = "*" if entry.enlarged else " "
            click.echo(
                f"{i:>3}{marker} {entry.action.summary}  "
                f"(sim {entry.similarity:.3f})"
            )

    click.echo(f"transcript: {len(session.transcript)} actions")


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--domain-dir", default=None,
              help="Directory of *.domain.json files (adds to bundled domains).")
@click.option("--k", default=3, show_default=True)
@click.option("--static-dir", default="frontend/dist",
              help="Web UI assets to serve at / (skipped when missing).")
def serve(port, host, domain_dir, k, static_dir):
    """Run the HTTP API server."""
    import uvicorn

    from .api import create_app

    domains = bundled_domains()
    if domain_dir:
        try:
            domains.update(load_domain_dir(domain_dir))
        except SchemaError as exc:
            click.echo(f"error: {domain_dir}: {exc}", err=True)
            sys.exit(EXIT_FAIL)
        except OSError as exc:
            click.echo(f"error: cannot read {domain_dir}: {exc}", err=True)
            sys.exit(EXIT_IO)
    service = PlayService(domains, k=k)
    app = create_app(service, static_dir=static_dir)
    click.echo(f"serving domains {sorted(domains)} on {host}:{port}")
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        click.echo(f"error: cannot bind {host}:{port}: {exc}", err=True)
        sys.exit(EXIT_FAIL)


@main.command(name="embed-server")
@click.option("--port", default=8600, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--model", default="all-mpnet-base-v2", show_default=True)
def embed_server(port, host, model):
    """Serve the /embed protocol with a real sentence-embedding model.

    Requires the optional sentence-transformers dependency.
    """
    try:
        from .embed_server import run_server
    except ImportError as exc:
        click.echo(f"error: sentence-transformers not installed: {exc}", err=True)
        sys.exit(EXIT_IO)
    run_server(host=host, port=port, model_name=model)


if __name__ == "__main__":
    main()
