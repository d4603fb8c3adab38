"""Command line interface: ingest, gen, report, serve."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import click

from . import figures, reporting, synthgen
from .events import validate
from .ingest import ingest, read_log_lines, write_quarantine
from .privacy import IdentityVault
from .store import EventStore


@click.group()
@click.version_option(package_name="moocscope")
def main() -> None:
    """Course activity analytics: ingest logs, compute indicators, serve reports."""


@main.command("ingest")
@click.option("--input", "inputs", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Raw log file; repeat for several.")
@click.option("--store", "store_path", required=True, type=click.Path(file_okay=False),
              help="Analytics store directory.")
@click.option("--key-env", default="MOOCSCOPE_KEY", show_default=True,
              help="Environment variable holding the pseudonymization key.")
@click.option("--course-config", "configs", multiple=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Course config (profile format) to register before ingesting.")
@click.option("--vault", type=click.Path(dir_okay=False), default=None,
              help="Optional reversible pseudonym table, kept outside the store.")
def ingest_cmd(inputs: tuple[str, ...], store_path: str, key_env: str,
               configs: tuple[str, ...], vault: str | None) -> None:
    """Parse raw logs, tidy them, and append to the store."""
    key = os.environ.get(key_env)
    if not key:
        raise click.ClickException(f"environment variable {key_env} is not set")
    if vault is not None:
        try:
            IdentityVault.ensure_outside(vault, store_path)
        except ValueError as exc:
            raise click.ClickException(str(exc)) from exc

    store = EventStore(store_path)
    for path in configs:
        store.register_course(synthgen.load_profile(path).config)

    events, report = ingest(read_log_lines(inputs), key)
    if vault is not None:
        from urllib.parse import unquote

        from .privacy import is_token, pseudonymize

        mapping: dict[str, str] = {}
        for line in read_log_lines(inputs):
            parts = line.rstrip("\r\n").split("|")
            if len(parts) == 6 and parts[1]:
                raw = unquote(parts[1])
                if not is_token(raw):
                    mapping[pseudonymize(raw, key)] = raw
        IdentityVault(vault).record(mapping)  # type: ignore[arg-type]

    committed = store.append(events)
    write_quarantine(str(Path(store_path) / "quarantine.log"), report)

    violations = 0
    for event in events:
        try:
            config = store.config(event.course)
        except KeyError:
            continue
        violations += len(validate(event, config))

    click.echo(
        f"parsed={report.parsed} quarantined={report.quarantined} "
        f"duplicates={report.duplicates_dropped} committed={committed} "
        f"violations={violations}"
    )


@main.command("gen")
@click.option("--profile", "profile_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--seed", type=int, default=None, help="Override the profile seed.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
def gen_cmd(profile_path: str, seed: int | None, out_path: str) -> None:
    """Generate a synthetic raw log from a course profile."""
    import dataclasses

    profile = synthgen.load_profile(profile_path)
    if seed is not None:
        profile = dataclasses.replace(profile, seed=seed)
    try:
        lines = synthgen.generate_to_file(profile, out_path)
    except synthgen.ProfileError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"wrote {lines} lines to {out_path}")


@main.command("report")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--course", required=True)
@click.option("--format", "fmt", type=click.Choice(reporting.FORMATS), default="csv",
              show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--figures", "figures_dir", type=click.Path(file_okay=False), default=None,
              help="Also render the figure set into this directory.")
def report_cmd(store_path: str, course: str, fmt: str, out_path: str,
               figures_dir: str | None) -> None:
    """Export one course report, optionally with figures."""
    store = EventStore(store_path)
    try:
        view = store.snapshot(course)
    except KeyError:
        raise click.ClickException(f"unknown course {course!r}") from None
    report = reporting.build_report(view)
    Path(out_path).write_text(reporting.export(report, fmt), encoding="utf-8")
    click.echo(f"wrote {out_path}")
    if figures_dir is not None:
        paths = figures.render_course_figures(view, figures_dir)
        click.echo(f"rendered {len(paths)} figures to {figures_dir}")


@main.command("serve")
@click.option("--store", "store_path", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--addr", default="127.0.0.1:8000", show_default=True,
              help="host:port to bind.")
@click.option("--token-env", default="MOOCSCOPE_TOKEN", show_default=True,
              help="Environment variable holding the API bearer token.")
@click.option("--key-env", default="MOOCSCOPE_KEY", show_default=True,
              help="Environment variable holding the ingest key (optional).")
def serve_cmd(store_path: str, addr: str, token_env: str, key_env: str) -> None:
    """Serve the HTTP API against one store."""
    import uvicorn

    from .api import create_app

    token = os.environ.get(token_env)
    if not token:
        raise click.ClickException(f"environment variable {token_env} is not set")
    host, _, port = addr.partition(":")
    if not port:
        raise click.ClickException("--addr must be host:port")
    app = create_app(EventStore(store_path), token, ingest_key=os.environ.get(key_env))
    uvicorn.run(app, host=host, port=int(port), log_level="info")


if __name__ == "__main__":
    sys.exit(main())
