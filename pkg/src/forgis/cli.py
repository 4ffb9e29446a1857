"""Operator command line.

``serve`` runs the HTTP service; everything case-scoped (``create-case``,
``import``, ``query ...``) is a thin client of a running service, so the
store keeps a single writer. ``verify-tiles`` and ``gen-synthetic`` work on
local files and need no server.

Exit codes: 0 success; 1 the operation was rejected or found violations
(bad rows, unknown ids, dirty archive); 2 usage or environment errors
(unreachable server, missing files, bad config).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import httpx
import uvicorn

from . import __version__
from .config import ServiceConfig, apply_overrides, is_private_bind, load_config, validate_config
from .errors import ConfigError, ForgisError, MissingManifest
from .synth import SyntheticSpec, generate, write_dataset
from .tiles import open_archive, verify_archive

DEFAULT_URL = "http://127.0.0.1:8080"


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _client(url: str) -> httpx.Client:
    return httpx.Client(base_url=url, timeout=60.0)


def _request(client: httpx.Client, method: str, path: str, **kwargs) -> httpx.Response:
    try:
        return client.request(method, path, **kwargs)
    except httpx.HTTPError as exc:
        _fail(f"cannot reach service: {exc}", 2)
        raise AssertionError("unreachable")


def _check(response: httpx.Response) -> dict | list:
    body = response.json()
    if response.status_code >= 400:
        _fail(f"{body.get('code', response.status_code)}: {body.get('message', '')}", 1)
    return body


@click.group()
@click.version_option(version=__version__, prog_name="forgis")
def main():
    """Air-gapped forensic GIS workbench."""


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), help="JSON config file.")
@click.option("--bind", help="Bind address (IP literal).")
@click.option("--port", type=int, help="Listen port.")
@click.option("--tiles", "tile_path", type=click.Path(path_type=Path), help="Tile archive directory.")
@click.option("--cases", "case_root", type=click.Path(path_type=Path), help="Case store root.")
@click.option("--cache-capacity", type=int, help="Tile cache capacity (tiles).")
@click.option("--lenient", is_flag=True, default=None, help="Skip bad CSV rows on import.")
@click.option(
    "--allow-public-bind",
    is_flag=True,
    default=None,
    help="Permit a non-private bind address (the service is intranet-only by default).",
)
@click.option("--ui", "ui_dist", type=click.Path(path_type=Path), help="Static web UI directory.")
def serve(config_path, bind, port, tile_path, case_root, cache_capacity, lenient, allow_public_bind, ui_dist):
    """Run the HTTP service."""
    try:
        if config_path is not None:
            cfg = load_config(config_path)
        else:
            if tile_path is None or case_root is None:
                raise ConfigError("without --config, both --tiles and --cases are required")
            cfg = ServiceConfig(tile_archive_path=tile_path, case_root_path=case_root)
        cfg = apply_overrides(
            cfg,
            bind_address=bind,
            port=port,
            tile_archive_path=tile_path,
            case_root_path=case_root,
            cache_capacity=cache_capacity,
            lenient_import=lenient,
            allow_public_bind=allow_public_bind,
            ui_dist_path=ui_dist,
        )
        validate_config(cfg)
        if not cfg.allow_public_bind and not is_private_bind(cfg.bind_address):
            raise ConfigError(f"bind_address: {cfg.bind_address!r} is not private")
        from .api import create_app

        app = create_app(cfg)
    except ForgisError as exc:
        _fail(exc.message, 2)
        return
    archive = app.state.archive
    click.echo(
        f"forgis {__version__} listening on http://{cfg.bind_address}:{cfg.port} "
        f"(tiles: {archive.manifest.tile_count}, cases: {app.state.store.case_count()})"
    )
    uvicorn.run(app, host=cfg.bind_address, port=cfg.port, log_level="warning")


@main.command("create-case")
@click.argument("name")
@click.option("--url", default=DEFAULT_URL, show_default=True, help="Service base URL.")
def create_case(name, url):
    """Create a case and print its record."""
    with _client(url) as client:
        body = _check(_request(client, "POST", "/cases", json={"name": name}))
    click.echo(json.dumps(body, indent=2))


@main.command("import")
@click.argument("files", nargs=-1, required=True, type=click.Path(path_type=Path, exists=True))
@click.option("--case", required=True, help="Target case id.")
@click.option(
    "--format",
    "fmt",
    required=True,
    type=click.Choice(["gpx", "kml", "gml", "geojson", "wifi", "anpr", "bt", "camera"]),
)
@click.option("--label", default="", help="Layer/scan label (defaults to the file name).")
@click.option("--lenient", is_flag=True, help="Skip bad CSV rows instead of aborting.")
@click.option("--url", default=DEFAULT_URL, show_default=True, help="Service base URL.")
def import_cmd(files, case, fmt, label, lenient, url):
    """Import evidence files into a case via the service."""
    failures = 0
    with _client(url) as client:
        for path in files:
            params = {"format": fmt, "label": label or path.name}
            if lenient:
                params["lenient"] = "true"
            response = _request(
                client,
                "POST",
                f"/cases/{case}/import",
                params=params,
                content=path.read_bytes(),
                headers={"content-type": "application/octet-stream"},
            )
            body = response.json()
            if response.status_code >= 400:
                failures += 1
                click.echo(f"{path.name}: {body.get('code')}: {body.get('message')}", err=True)
                continue
            summary = {k: v for k, v in body.items() if v not in (None, [])}
            click.echo(f"{path.name}: {json.dumps(summary)}")
    if failures:
        _fail(f"{failures} of {len(files)} file(s) failed to import", 1)


@main.command("verify-tiles")
@click.argument("path", type=click.Path(path_type=Path))
def verify_tiles(path):
    """Validate a tile archive; exit 0 only if clean."""
    try:
        archive = open_archive(path)
    except MissingManifest as exc:
        _fail(exc.message, 2)
        return
    except ForgisError as exc:
        _fail(exc.message, 1)
        return
    report = verify_archive(archive)
    if report.clean:
        click.echo(f"clean: {report.tiles_found} tile(s) verified")
        return
    for violation in report.violations:
        click.echo(violation, err=True)
    _fail(f"{len(report.violations)} violation(s)", 1)


@main.command("gen-synthetic")
@click.argument("spec_path", type=click.Path(path_type=Path, exists=True))
@click.argument("out_dir", type=click.Path(path_type=Path))
def gen_synthetic(spec_path, out_dir):
    """Generate a seeded synthetic dataset with a ground-truth sidecar."""
    try:
        raw = json.loads(spec_path.read_text(encoding="utf-8"))
        spec = SyntheticSpec.from_json(raw)
    except (json.JSONDecodeError, ForgisError) as exc:
        _fail(f"bad spec: {exc}", 2)
        return
    written = write_dataset(generate(spec), out_dir)
    for path in written:
        click.echo(str(path))


@main.group()
def query():
    """Headless mirrors of the analysis endpoints."""


@query.command("cameras")
@click.option("--case", required=True)
@click.option("--lat", required=True, type=float)
@click.option("--lon", required=True, type=float)
@click.option("--radius-m", required=True, type=float)
@click.option("--exclude", default="", help="Comma-separated categories to hide.")
@click.option("--url", default=DEFAULT_URL, show_default=True)
def query_cameras(case, lat, lon, radius_m, exclude, url):
    """Cameras within a radius of a crime scene."""
    with _client(url) as client:
        body = _check(
            _request(
                client,
                "GET",
                "/cameras",
                params={"case": case, "lat": lat, "lon": lon, "radius_m": radius_m, "exclude": exclude},
            )
        )
    click.echo(json.dumps(body, indent=2))


@query.command("bssid")
@click.argument("mac_or_oui")
@click.option("--case", required=True)
@click.option("--url", default=DEFAULT_URL, show_default=True)
def query_bssid(mac_or_oui, case, url):
    """Search stored scans for a MAC or OUI prefix."""
    with _client(url) as client:
        body = _check(
            _request(client, "GET", f"/analysis/bssid/{mac_or_oui}", params={"case": case})
        )
    click.echo(json.dumps(body, indent=2))


@query.command("stops")
@click.option("--case", required=True)
@click.option("--track-id", required=True)
@click.option("--epsilon-m", default=50.0, show_default=True, type=float)
@click.option("--tau-s", default=300.0, show_default=True, type=float)
@click.option("--url", default=DEFAULT_URL, show_default=True)
def query_stops(case, track_id, epsilon_m, tau_s, url):
    """Stop segments of a stored track."""
    with _client(url) as client:
        body = _check(
            _request(
                client,
                "POST",
                "/analysis/stops",
                json={"case": case, "track_id": track_id, "epsilon_m": epsilon_m, "tau_s": tau_s},
            )
        )
    click.echo(json.dumps(body, indent=2))


@query.command("correlate")
@click.option("--case", required=True)
@click.option("--dt-s", default=60.0, show_default=True, type=float, help="Time window (seconds).")
@click.option("--d-m", default=250.0, show_default=True, type=float, help="Distance window (meters).")
@click.option("--url", default=DEFAULT_URL, show_default=True)
def query_correlate(case, dt_s, d_m, url):
    """Rank Bluetooth MAC / license plate associations."""
    with _client(url) as client:
        body = _check(
            _request(client, "POST", "/analysis/correlate", json={"case": case, "dt_s": dt_s, "d_m": d_m})
        )
    click.echo(json.dumps(body, indent=2))


if __name__ == "__main__":
    main()
