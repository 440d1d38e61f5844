"""Admin command-line interface.

Commands operate directly on a data directory (no running server needed);
errors exit nonzero with the machine-readable code on stderr.
"""

from __future__ import annotations

import sys
import tempfile
from pathlib import Path

import click

from modelarena.config import ArenaConfig
from modelarena.domain import AbilityTrack, canonical_dumps
from modelarena.errors import ArenaError, SnapshotLogMismatch
from modelarena.gateway import serve as serve_gateway
from modelarena.orchestrator import Arena
from modelarena.simulate import run_simulation
from modelarena.storage import EventLog, load_snapshot, read_snapshot_elo, replay


def _fail(exc: ArenaError) -> None:
    click.echo(f"{exc.code}: {exc.message}", err=True)
    sys.exit(1)


def _load_config(config_path: str | None, data_dir: str | None, seed: int | None = None) -> ArenaConfig:
    config = ArenaConfig.from_file(config_path) if config_path else ArenaConfig()
    config.apply_env()
    if data_dir:
        config.data_dir = Path(data_dir)
    if seed is not None:
        config.seed = seed
    return config


@click.group()
def main():
    """Crowd-sourced model evaluation arena."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), help="JSON config file.")
@click.option("--data-dir", type=click.Path(), help="Override the data directory.")
@click.option("--port", type=int, default=None)
@click.option("--admin-token", default=None)
def serve(config_path, data_dir, port, admin_token):
    """Run the HTTP JSON API."""
    try:
        config = _load_config(config_path, data_dir)
        if port is not None:
            config.port = port
        if admin_token is not None:
            config.admin_token = admin_token
        serve_gateway(config)
    except ArenaError as exc:
        _fail(exc)


@main.command("ingest-questions")
@click.argument("corpus", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path())
def ingest_questions(corpus, config_path, data_dir):
    """Ingest a JSON Lines question corpus into the store."""
    try:
        arena = Arena(_load_config(config_path, data_dir))
        with open(corpus, "r", encoding="utf-8") as fh:
            report = arena.ingest_questions(fh)
        arena.close()
        for rejection in report.rejections:
            click.echo(f"line {rejection.line}: {rejection.code}: {rejection.message}", err=True)
        click.echo(f"ingested {report.ingested}")
        if report.rejections:
            sys.exit(2)
    except ArenaError as exc:
        _fail(exc)


@main.command("register-model")
@click.argument("display_name")
@click.argument("adapter_id")
@click.option("--model-id", default=None, help="Explicit id; generated when omitted.")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path())
@click.option("--seed", type=int, default=None, help="Seed id generation (test mode).")
def register_model(display_name, adapter_id, model_id, config_path, data_dir, seed):
    """Register a model backed by a provider adapter."""
    try:
        arena = Arena(_load_config(config_path, data_dir, seed=seed))
        entry = arena.register_model(display_name, adapter_id, model_id=model_id)
        arena.close()
        click.echo(f"registered {entry.model_id} ({entry.display_name})")
    except ArenaError as exc:
        _fail(exc)


@main.command("export-leaderboard")
@click.argument("track", type=click.Choice([t.value for t in AbilityTrack], case_sensitive=False))
@click.argument("out", type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path())
def export_leaderboard(track, out, config_path, data_dir):
    """Write the canonical leaderboard JSON for one ability track."""
    try:
        arena = Arena(_load_config(config_path, data_dir))
        parsed = AbilityTrack(track.upper())
        entries = arena.leaderboard(parsed)
        arena.close()
        doc = {"track": parsed.value, "entries": [e.to_record() for e in entries]}
        Path(out).write_text(canonical_dumps(doc) + "\n", encoding="utf-8")
        click.echo(f"wrote {out} ({len(entries)} entries)")
    except ArenaError as exc:
        _fail(exc)


@main.command("replay-verify")
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path())
def replay_verify(config_path, data_dir):
    """Recompute state from the log and compare against the snapshot."""
    try:
        config = _load_config(config_path, data_dir)
        log = EventLog(config.events_path, fsync=False)
        events = log.read_all()
        elo = config.elo()
        if config.snapshot_path.exists():
            # replay with the constants the log was actually folded under
            elo = read_snapshot_elo(config.snapshot_path) or elo
        first = replay(events, elo=elo).serialize()
        second = replay(events, elo=elo).serialize()
        if first != second:
            raise SnapshotLogMismatch("replay is not deterministic")
        if config.snapshot_path.exists():
            from_snapshot = load_snapshot(config.snapshot_path, events, elo=elo).serialize()
            if from_snapshot != first:
                raise SnapshotLogMismatch("snapshot+tail state differs from full replay")
            click.echo(f"replay-verify: ok ({len(events)} events, snapshot checked)")
        else:
            click.echo(f"replay-verify: ok ({len(events)} events, no snapshot)")
    except ArenaError as exc:
        _fail(exc)


@main.command()
@click.option("--models", default=8, show_default=True)
@click.option("--votes", default=20000, show_default=True)
@click.option("--seed", default=7, show_default=True)
@click.option("--users", default=12, show_default=True)
@click.option("--k-factor", default=16.0, show_default=True)
@click.option("--data-dir", type=click.Path(), default=None, help="Defaults to a fresh temp directory.")
def simulate(models, votes, seed, users, k_factor, data_dir):
    """Run a synthetic Bradley-Terry population through the full vote path."""
    try:
        if data_dir is None:
            data_dir = tempfile.mkdtemp(prefix="modelarena-sim-")
        result = run_simulation(
            data_dir=data_dir,
            models=models,
            votes=votes,
            seed=seed,
            users=users,
            k_factor=k_factor,
        )
        click.echo(f"latent order:    {' '.join(result.latent_order)}")
        click.echo(f"recovered order: {' '.join(result.recovered_order)}")
        click.echo(f"events={result.events} data_dir={result.data_dir}")
        click.echo(f"kendall_tau={result.kendall_tau:.4f}")
    except ArenaError as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
