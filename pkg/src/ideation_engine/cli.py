"""Command line surface: ingestion, serving, replay, and exports.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
"""
from __future__ import annotations

import sys
from pathlib import Path

import click

from .config import load_config
from .errors import IdeationError
from .ontology import build_idea_ontology, serialize_ontology
from .session import SessionEngine, read_operation_log
from .viz import concept_network, export_dot as render_dot


@click.group(name="ideation-engine")
def cli():
    """Self-hosted ideation support engine."""


def _engine_from_config(config_path: str, load_sessions: bool = True) -> SessionEngine:
    from .config import build_backend, build_store

    config = load_config(config_path)
    store = build_store(config)
    engine = SessionEngine(
        store, build_backend(config, store), data_dir=config.data_dir,
        k_hypotheses=config.k_hypotheses, suggestion_limit=config.suggestion_limit,
        max_concepts=config.max_concepts,
    )
    if load_sessions:
        engine.load_persisted_sessions()
    return engine


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--corpus", required=True, help="Target corpus id.")
@click.option("--format", "fmt", default="plain_text",
              type=click.Choice(["plain_text", "markdown", "csv_rows", "json_records"]))
@click.option("--source", "source_tag", default="internal_kms",
              type=click.Choice(["internal_kms", "external"]))
@click.option("--doc-id", default=None, help="Explicit document id (idempotent re-ingest).")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
def ingest(config_path, corpus, fmt, source_tag, doc_id, file):
    """Ingest FILE into a corpus of the knowledge store."""
    from .config import build_store

    config = load_config(config_path)
    store = build_store(config)
    raw = Path(file).read_bytes()
    documents = store.ingest_document(corpus, raw, fmt, source_tag, doc_id=doc_id)
    click.echo(f"ingested {len(documents)} document(s) into corpus {corpus!r}")
    for doc in documents:
        click.echo(f"  {doc.doc_id}")


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
def serve(config_path):
    """Run the HTTP service."""
    import uvicorn

    from .api import create_app

    config = load_config(config_path)
    data_dir = Path(config.data_dir)
    data_dir.mkdir(parents=True, exist_ok=True)
    probe = data_dir / ".write-probe"
    try:
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise click.ClickException(f"data_dir is not writable: {exc}")
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


@cli.group()
def session():
    """Session maintenance commands."""


@session.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--log", "log_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--verify/--no-verify", default=True,
              help="Check per-operation result digests while replaying.")
def replay(config_path, log_path, verify):
    """Replay an operation log and print the final snapshot digest."""
    engine = _engine_from_config(config_path, load_sessions=False)
    records = read_operation_log(log_path)
    digest = engine.replay_log(records, verify_digests=verify)
    click.echo(digest)


@cli.command(name="export-ontology")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--idea", "idea_id", required=True)
@click.option("--format", "fmt", default="turtle", type=click.Choice(["jsonld", "turtle"]))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def export_ontology(config_path, session_id, idea_id, fmt, out_path):
    """Serialize one evaluated idea of a session as an ontology document."""
    engine = _engine_from_config(config_path)
    state = engine.sessions.get(session_id)
    if state is None:
        raise click.ClickException(f"no session {session_id!r} in the data directory")
    idea = next((i for i in state.idea_set if i.idea_id == idea_id), None)
    if idea is None:
        raise click.ClickException(f"no idea {idea_id!r} in session {session_id!r}")
    evaluation = state.evaluations.get(idea_id)
    if evaluation is None:
        raise click.ClickException(f"idea {idea_id!r} has no recorded evaluation")
    graph = build_idea_ontology(state, idea, evaluation)
    Path(out_path).write_text(serialize_ontology(graph, fmt), encoding="utf-8")
    click.echo(f"wrote {out_path}")


@cli.command(name="export-dot")
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--include-pending", is_flag=True, default=False)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def export_dot(config_path, session_id, include_pending, out_path):
    """Write the session's concept network as a DOT digraph."""
    engine = _engine_from_config(config_path)
    if session_id not in engine.sessions:
        raise click.ClickException(f"no session {session_id!r} in the data directory")
    network = concept_network(engine.get_state(session_id), include_pending)
    Path(out_path).write_text(render_dot(network), encoding="utf-8")
    click.echo(f"wrote {out_path}")


def main(argv=None) -> None:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.UsageError as exc:
        if exc.ctx is not None:
            click.echo(exc.ctx.get_usage(), err=True)
        click.echo(f"error: {exc.format_message()}", err=True)
        sys.exit(1)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except IdeationError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"io error: {exc}", err=True)
        sys.exit(2)


if __name__ == "__main__":
    main()
