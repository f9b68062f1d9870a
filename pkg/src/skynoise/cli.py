"""Thin command-line client for the skynoise service.

Subcommands mirror the service endpoints one-to-one; the CLI only reads
the config file, POSTs it, and writes the returned CSV/SKGF artifacts.
By default requests run against an in-process instance of the service
(no socket needed); pass ``--server http://host:port`` to target a
running deployment, or use ``skynoise serve`` to start one.
"""

from __future__ import annotations

import base64
import json
import sys
from pathlib import Path

import click
import httpx
import yaml


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    # in-process fallback: same HTTP interface, no socket
    from fastapi.testclient import TestClient
    from .service import app
    return TestClient(app)


def _load_body(config_path: str) -> dict:
    with open(config_path) as fh:
        return yaml.safe_load(fh) or {}


def _post(server, endpoint, body) -> dict:
    with _client(server) as client:
        resp = client.post(f"/{endpoint}", json=body)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            click.echo(f"error ({resp.status_code}): {detail}", err=True)
            sys.exit(1)
        return resp.json()


def _write_outputs(data: dict, out: str, stem: str):
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    csv_path = outdir / f"{stem}.csv"
    csv_path.write_text(data["csv"])
    click.echo(f"wrote {csv_path}")
    for name, blob in data.get("dumps", {}).items():
        p = outdir / name
        p.write_bytes(base64.b64decode(blob))
        click.echo(f"wrote {p}")
    if data.get("extras"):
        extras_path = outdir / f"{stem}_extras.json"
        extras_path.write_text(json.dumps(data["extras"], indent=2, sort_keys=True))
        click.echo(f"wrote {extras_path}")


def _common_overrides(body, deterministic, resolution, dump_fields):
    run = body.setdefault("run", {})
    if deterministic:
        run["deterministic"] = True
    if dump_fields:
        run["dump_fields"] = True
    if resolution:
        grid = body.setdefault("grid", {})
        grid["nx"] = grid["ny"] = int(resolution)
    return body


@click.group()
def main():
    """Topological Skyrmion states under spatial polarization noise."""


def _experiment_command(name, help_text):
    @main.command(name=name, help=help_text)
    @click.option("--config", "config_path", required=True, type=click.Path(exists=True))
    @click.option("--out", default="out", show_default=True, help="output directory")
    @click.option("--server", default=None, help="remote service URL (default: in-process)")
    @click.option("--deterministic", is_flag=True, help="zero wall times for byte-stable CSV")
    @click.option("--resolution", type=int, default=None, help="override nx=ny")
    @click.option("--dump-fields", is_flag=True, help="also fetch SKGF field snapshots")
    def cmd(config_path, out, server, deterministic, resolution, dump_fields):
        body = _common_overrides(_load_body(config_path), deterministic,
                                 resolution, dump_fields)
        data = _post(server, name, body)
        _write_outputs(data, out, name)
        for row in data["rows"]:
            click.echo(f"  {row['experiment']:>16} {row['channel']:>22} "
                       f"sweep={row['sweep_value']:<8g} N {row['n_initial']:+.4f} "
                       f"-> {row['n_final']:+.4f}")
    return cmd


_experiment_command("simulate", "Single run: build state, apply channel, report N.")
_experiment_command("table", "Topology table: N before/after across charges.")
_experiment_command("sweep", "Constant-p sweep of one channel family.")
_experiment_command("homotopy", "N along the identity-to-channel deformation.")
_experiment_command("compactify", "Saturating depolarizer: compactification break.")


@main.command()
@click.option("--out", default="out", show_default=True)
@click.option("--server", default=None)
@click.option("--samples", type=int, default=200, show_default=True)
@click.option("--seed", type=int, default=7, show_default=True)
def oracle(out, server, samples, seed):
    """Closed-form (12,1) Stokes residuals vs the pipeline, as CSV."""
    data = _post(server, "oracle", {"samples": samples, "seed": seed})
    outdir = Path(out)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / "oracle_residuals.csv"
    path.write_text(data["csv"])
    worst = max((float(line.rsplit(",", 1)[1])
                 for line in data["csv"].splitlines()[1:]), default=0.0)
    click.echo(f"wrote {path} (worst relative error {worst:.3e})")


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--server", default=None)
def verify(config_path, server):
    """CPTP classification of every channel block in the config."""
    data = _post(server, "verify", _load_body(config_path))
    for name, rep in sorted(data["channels"].items()):
        click.echo(f"  {name:>24}: {rep['classification']:<17} "
                   f"|sum K^dag K - 1| = {rep['max_identity_deviation']:.2e}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn
    uvicorn.run("skynoise.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
