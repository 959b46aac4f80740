"""Operator-facing command line: decide, scenarios-run, af-solve, serve.

Exit codes: 0 success (all fixtures passed, for scenarios-run), 1 fixture
failures, 2 input errors. The knowledge base may be a `.kb` rule file or a
`kbversion 1` log; `CURATOR_KB` overrides the default KB path.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .af import Semantics, parse_apx
from .context import context_from_json
from .defaults import bundled_fixtures_dir, default_kb
from .dsl import parse_kb, parse_scenario
from .errors import CuratorError
from .kblog import KB_LOG_HEADER, kb_load
from .rules import KnowledgeBase, decide, decision_to_json, explain
from .service import run_fixtures, solve


def load_kb_any(path: str | Path) -> KnowledgeBase:
    """Load a knowledge base from either a rule file or a log file."""
    text = Path(path).read_text(encoding="utf-8")
    if text.split("\n", 1)[0] == KB_LOG_HEADER:
        return kb_load(path)
    return parse_kb(text)


def _resolve_kb(kb_path: str | None) -> KnowledgeBase:
    if kb_path is None:
        return default_kb()
    return load_kb_any(kb_path)


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


@click.group()
def main() -> None:
    """Ethical curation of respondent diversity for help requests."""


@main.command("decide")
@click.option("--context", "context_path", required=True, metavar="FILE.JSON",
              help="Request context as JSON.")
@click.option("--kb", "kb_path", envvar="CURATOR_KB", metavar="FILE.KB|LOG",
              help="Knowledge base (rule file or log); default: bundled rules.")
@click.option("--explain", "show_explain", is_flag=True,
              help="Print the decision trace.")
@click.option("--json", "as_json", is_flag=True,
              help="Print the canonical Decision JSON document.")
def cli_decide(context_path: str, kb_path: str | None,
               show_explain: bool, as_json: bool) -> None:
    """Decide one request context."""
    try:
        payload = json.loads(Path(context_path).read_text(encoding="utf-8"))
        ctx = context_from_json(payload)
        kb = _resolve_kb(kb_path)
        decision = decide(ctx, kb)
    except (OSError, ValueError, CuratorError) as exc:
        _fail(str(exc))
        return
    if as_json:
        sys.stdout.write(decision_to_json(decision) + "\n")
        return
    click.echo(decision.action.value)
    if show_explain:
        click.echo(explain(decision))


@main.command("scenarios-run")
@click.option("--fixtures", "fixtures_dir", metavar="DIR",
              help="Directory of .scn files; default: bundled fixtures.")
@click.option("--kb", "kb_path", envvar="CURATOR_KB", metavar="FILE.KB|LOG",
              help="Knowledge base; default: bundled rules.")
@click.option("--report", "report_format",
              type=click.Choice(["text", "json", "tap"]), default="text",
              help="Report format.")
def cli_scenarios_run(fixtures_dir: str | None, kb_path: str | None,
                      report_format: str) -> None:
    """Run scenario fixtures and compare each against its expected action."""
    directory = Path(fixtures_dir) if fixtures_dir else bundled_fixtures_dir()
    try:
        kb = _resolve_kb(kb_path)
        fixtures = []
        for path in sorted(directory.glob("*.scn")):
            fixtures.extend(parse_scenario(path.read_text(encoding="utf-8")))
        report = run_fixtures(fixtures, kb)
    except (OSError, ValueError, CuratorError) as exc:
        _fail(str(exc))
        return
    if not fixtures:
        click.echo("warning: 0 fixtures found", err=True)
    if report_format == "json":
        click.echo(json.dumps(report, indent=2))
    elif report_format == "tap":
        click.echo(f"1..{report['total']}")
        for i, result in enumerate(report["results"], start=1):
            if result["passed"]:
                click.echo(f"ok {i} - {result['name']}")
            else:
                click.echo(
                    f"not ok {i} - {result['name']} "
                    f"# expected {result['expected']}, got {result['actual']}"
                )
    else:
        for result in report["results"]:
            if result["passed"]:
                click.echo(f"PASS {result['name']} ({result['actual']})")
            else:
                click.echo(
                    f"FAIL {result['name']}: expected {result['expected']}, "
                    f"got {result['actual']}"
                )
                for entry in result.get("trace", []):
                    click.echo(f"     {entry}")
        click.echo(f"{report['passed']}/{report['total']} fixtures passed")
    sys.exit(0 if report["all_passed"] else 1)


@main.command("af-solve")
@click.option("--input", "input_path", required=True, metavar="FILE.APX",
              help="Framework in apx format.")
@click.option("--semantics", "semantics_name", required=True,
              type=click.Choice([s.value for s in Semantics]))
def cli_af_solve(input_path: str, semantics_name: str) -> None:
    """Print extensions, one sorted argument list per line; NO if none exist."""
    try:
        af = parse_apx(Path(input_path).read_text(encoding="utf-8"))
        extensions = solve(af, Semantics(semantics_name))
    except (OSError, ValueError, CuratorError) as exc:
        _fail(str(exc))
        return
    if not extensions:
        click.echo("NO")
        return
    for extension in extensions:
        click.echo("[" + ",".join(sorted(extension)) + "]")


@main.command("serve")
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--kb-log", "kb_log_path", envvar="CURATOR_KB",
              default="curator-kb.log", show_default=True, metavar="LOG",
              help="Knowledge-base log path; created with the default rules if missing.")
def cli_serve(port: int, host: str, kb_log_path: str) -> None:
    """Run the HTTP API."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(kb_log_path)
    except (OSError, CuratorError) as exc:
        _fail(str(exc))
        return
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
