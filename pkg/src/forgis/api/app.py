"""The intranet-facing HTTP service.

One origin serves map tiles, case data, and analysis so the browser client
needs no cross-origin configuration on a locked-down network. The process
never initiates outbound connections: every handler works from the local
tile archive and case directories.
"""

from __future__ import annotations

import hashlib
from datetime import datetime, timezone

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from starlette.exceptions import HTTPException as StarletteHTTPException

from .. import __version__
from ..analysis import (
    correlate_bt_anpr,
    detect_stops,
    diff_scans,
    presence_report,
    search_bssid,
    timeline_slice,
)
from ..config import ServiceConfig
from ..errors import (
    DuplicateId,
    ForgisError,
    InvalidParameters,
    MalformedQuery,
    TileNotFound,
    UnknownCamera,
    UnknownCase,
    UnknownLayer,
    UnknownScan,
    UnknownTrack,
)
from ..ingest import (
    parse_anpr_csv,
    parse_bt_csv,
    parse_camera_csv,
    parse_geojson,
    parse_gml,
    parse_gpx,
    parse_kml,
    parse_wifi_csv,
)
from ..ingest.gpx import tracks_from_featureset
from ..mac import MacAddress
from ..records import CaseRecord
from ..spatial import GeoPoint, TileCoord
from ..store import CaseStore
from ..tiles import open_archive
from ..timeutil import iso_utc, parse_utc
from . import schemas

_STATUS_BY_ERROR = {
    UnknownCase: 404,
    UnknownLayer: 404,
    UnknownCamera: 404,
    UnknownScan: 404,
    UnknownTrack: 404,
    TileNotFound: 404,
    DuplicateId: 409,
}

LAYER_FORMATS = ("gpx", "kml", "gml", "geojson")
IMPORT_FORMATS = LAYER_FORMATS + ("wifi", "anpr", "bt", "camera")


def _error_response(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"code": code, "message": message})


def _case_json(case: CaseRecord) -> dict:
    return {
        "case_id": case.case_id,
        "name": case.name,
        "created_at": iso_utc(case.created_at),
        "layer_ids": case.layer_ids,
    }


def create_app(config: ServiceConfig) -> FastAPI:
    """Build the service around an opened tile archive and case store."""
    archive = open_archive(config.tile_archive_path, cache_capacity=config.cache_capacity)
    store = CaseStore(config.case_root_path)

    app = FastAPI(title="forgis", version=__version__, docs_url=None, redoc_url=None)
    app.state.archive = archive
    app.state.store = store
    app.state.config = config

    @app.exception_handler(ForgisError)
    async def forgis_error(request: Request, exc: ForgisError):
        status = _STATUS_BY_ERROR.get(type(exc), 400)
        return _error_response(status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(p) for p in first.get("loc", ()))
        return _error_response(400, "invalid_parameters", f"{where}: {first.get('msg', 'invalid')}")

    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        code = "not_found" if exc.status_code == 404 else "http_error"
        return _error_response(exc.status_code, code, str(exc.detail))

    @app.exception_handler(Exception)
    async def unexpected_error(request: Request, exc: Exception):
        # never leak stack traces or paths to clients
        return _error_response(500, "internal_error", "internal error")

    # --- health ---------------------------------------------------------

    @app.get("/health", response_model=schemas.HealthOut)
    def health():
        return {
            "status": "ok",
            "tile_count": archive.manifest.tile_count,
            "case_count": store.case_count(),
            "version": __version__,
        }

    # --- tiles ----------------------------------------------------------

    @app.get("/tiles/manifest.json")
    def tile_manifest():
        m = archive.manifest
        return {
            "name": m.name,
            "attribution": m.attribution,
            "min_zoom": m.min_zoom,
            "max_zoom": m.max_zoom,
            "bounds": {
                "south": m.bounds.south,
                "west": m.bounds.west,
                "north": m.bounds.north,
                "east": m.bounds.east,
            },
            "tile_format": m.tile_format,
            "tile_count": m.tile_count,
        }

    @app.get("/tiles/{z}/{x}/{y_png}")
    def get_tile(z: int, x: int, y_png: str):
        if not y_png.endswith(".png"):
            raise TileNotFound(f"no tile route for {y_png!r}")
        try:
            y = int(y_png[:-4])
        except ValueError:
            return _error_response(400, "invalid_parameters", f"tile row {y_png!r} is not an integer")
        if not archive.manifest.min_zoom <= z <= archive.manifest.max_zoom:
            return _error_response(
                400,
                "zoom_out_of_range",
                f"zoom {z} outside [{archive.manifest.min_zoom}, {archive.manifest.max_zoom}]",
            )
        try:
            coord = TileCoord(z, x, y)
        except ValueError:
            raise TileNotFound(f"no tile {z}/{x}/{y}") from None
        data = archive.get_tile(coord)
        return Response(content=data, media_type="image/png")

    # --- cases and layers -------------------------------------------------

    @app.post("/cases", response_model=schemas.CaseOut, status_code=201)
    def create_case(body: schemas.CreateCaseIn):
        return _case_json(store.create_case(body.name))

    @app.get("/cases", response_model=list[schemas.CaseOut])
    def list_cases():
        return [_case_json(c) for c in store.list_cases()]

    @app.get("/cases/{case_id}", response_model=schemas.CaseOut)
    def get_case(case_id: str):
        return _case_json(store.get_case(case_id))

    @app.post("/cases/{case_id}/import", response_model=schemas.ImportResultOut, status_code=201)
    async def import_data(
        case_id: str,
        request: Request,
        format: str = Query(...),
        label: str = Query(""),
        lenient: bool | None = Query(None),
    ):
        if format not in IMPORT_FORMATS:
            raise InvalidParameters(f"format must be one of {', '.join(IMPORT_FORMATS)}")
        store.get_case(case_id)
        data = await request.body()
        if not data:
            raise InvalidParameters("import body is empty")
        allow_bad_rows = config.lenient_import if lenient is None else lenient
        source = label or format
        result: dict = {"format": format}

        if format in LAYER_FORMATS:
            parser = {
                "gpx": parse_gpx,
                "kml": parse_kml,
                "gml": parse_gml,
                "geojson": parse_geojson,
            }[format]
            fs = parser(data, source_name=source)
            layer_id = store.add_layer(case_id, fs, label)
            result.update(layer_id=layer_id, feature_count=len(fs.features))
            if format == "gpx":
                base = "track-" + hashlib.sha256(data).hexdigest()[:12]
                track_ids = []
                for track in tracks_from_featureset(fs, base):
                    store.store_track(case_id, track)
                    track_ids.append(track.track_id)
                result.update(track_ids=track_ids)
        elif format == "wifi":
            scan, skipped = parse_wifi_csv(data, label=label, lenient=allow_bad_rows)
            store.store_scan(case_id, scan)
            result.update(
                scan_id=scan.scan_id,
                observation_count=len(scan.observations),
                skipped_rows=[{"row": r, "reason": why} for r, why in skipped],
            )
        elif format == "camera":
            cameras, skipped = parse_camera_csv(data, source_name=source, lenient=allow_bad_rows)
            count = store.upsert_cameras(case_id, cameras)
            result.update(
                camera_count=count,
                skipped_rows=[{"row": r, "reason": why} for r, why in skipped],
            )
        else:
            parser = parse_bt_csv if format == "bt" else parse_anpr_csv
            detections, skipped = parser(data, lenient=allow_bad_rows)
            store.store_detections(case_id, format, detections)
            result.update(
                detection_count=len(detections),
                skipped_rows=[{"row": r, "reason": why} for r, why in skipped],
            )
        return result

    @app.get("/cases/{case_id}/layers", response_model=list[schemas.LayerInfoOut])
    def list_layers(case_id: str):
        return [
            {"layer_id": l.layer_id, "label": l.label, "feature_count": l.feature_count}
            for l in store.list_layers(case_id)
        ]

    @app.get("/cases/{case_id}/layers/{layer_ref}")
    def get_layer(case_id: str, layer_ref: str):
        layer_id = layer_ref[:-8] if layer_ref.endswith(".geojson") else layer_ref
        data = store.get_layer_bytes(case_id, layer_id)
        return Response(content=data, media_type="application/geo+json")

    @app.get("/cases/{case_id}/scans", response_model=list[schemas.ScanInfoOut])
    def list_scans(case_id: str):
        return [
            {
                "scan_id": s.scan_id,
                "label": s.label,
                "captured_from": iso_utc(s.captured_from) if s.captured_from else None,
                "captured_to": iso_utc(s.captured_to) if s.captured_to else None,
                "observation_count": len(s.observations),
            }
            for s in store.list_scans(case_id)
        ]

    @app.get("/cases/{case_id}/scans/{scan_id}", response_model=schemas.ScanDetailOut)
    def get_scan(case_id: str, scan_id: str):
        scan = store.get_scan(case_id, scan_id)
        return {
            "scan_id": scan.scan_id,
            "label": scan.label,
            "captured_from": iso_utc(scan.captured_from) if scan.captured_from else None,
            "captured_to": iso_utc(scan.captured_to) if scan.captured_to else None,
            "observations": [
                {
                    "scan_id": scan.scan_id,
                    "bssid": o.bssid.text,
                    "ssid": o.ssid,
                    "lat": o.position.lat,
                    "lon": o.position.lon,
                    "timestamp": iso_utc(o.timestamp),
                    "signal_dbm": o.signal_dbm,
                }
                for o in scan.observations
            ],
        }

    @app.get("/cases/{case_id}/tracks", response_model=list[schemas.TrackInfoOut])
    def list_tracks(case_id: str):
        return [
            {
                "track_id": t.track_id,
                "label": t.label,
                "point_count": len(t.points),
                "start": iso_utc(t.points[0].timestamp),
                "end": iso_utc(t.points[-1].timestamp),
            }
            for t in store.list_tracks(case_id)
        ]

    # --- cameras ----------------------------------------------------------

    @app.get("/cameras", response_model=list[schemas.CameraHitOut])
    def query_cameras(
        case: str = Query(...),
        lat: float = Query(...),
        lon: float = Query(...),
        radius_m: float = Query(..., ge=0),
        exclude: str = Query(""),
    ):
        excluded = {c.strip() for c in exclude.split(",") if c.strip()}
        center = GeoPoint(lat, lon)
        hits = store.query_cameras(case, center, radius_m, excluded_categories=excluded)
        return [
            {"camera": cam.to_json(), "distance_m": dist}
            for cam, dist in hits
        ]

    @app.get("/cameras/{camera_id}", response_model=schemas.CameraOut)
    def get_camera(camera_id: str, case: str = Query(...)):
        return store.get_camera(case, camera_id).to_json()

    # --- analysis ---------------------------------------------------------

    @app.post("/analysis/scan-diff", response_model=schemas.ScanDiffOut)
    def scan_diff(body: schemas.ScanDiffIn):
        a = store.get_scan(body.case, body.scan_a)
        b = store.get_scan(body.case, body.scan_b)
        diff = diff_scans(a, b)
        return {
            "added": sorted(m.text for m in diff.added),
            "removed": sorted(m.text for m in diff.removed),
            "renamed": {
                m.text: {"old_ssid": old, "new_ssid": new}
                for m, (old, new) in sorted(diff.renamed.items(), key=lambda kv: kv[0].text)
            },
            "unchanged": sorted(m.text for m in diff.unchanged),
        }

    @app.get("/analysis/bssid/{query}", response_model=list[schemas.ObservationOut])
    def bssid_search(query: str, case: str = Query(...)):
        scans = store.list_scans(case)
        return [
            {
                "scan_id": hit.scan_id,
                "bssid": hit.observation.bssid.text,
                "ssid": hit.observation.ssid,
                "lat": hit.observation.position.lat,
                "lon": hit.observation.position.lon,
                "timestamp": iso_utc(hit.observation.timestamp),
                "signal_dbm": hit.observation.signal_dbm,
            }
            for hit in search_bssid(query, scans)
        ]

    @app.post("/analysis/presence", response_model=list[schemas.PresenceOut])
    def presence(body: schemas.PresenceIn):
        try:
            known = {MacAddress.parse(raw) for raw in body.bssids}
        except ValueError as exc:
            raise MalformedQuery(str(exc)) from None
        scans = store.list_scans(body.case)
        return [
            {
                "bssid": row.bssid.text,
                "lat": row.position.lat,
                "lon": row.position.lon,
                "timestamp": iso_utc(row.timestamp),
                "scan_id": row.scan_id,
                "ssid": row.ssid,
            }
            for row in presence_report(known, scans)
        ]

    @app.post("/analysis/correlate", response_model=list[schemas.AssociationOut])
    def correlate(body: schemas.CorrelateIn):
        bt = store.get_detections(body.case, "bt")
        anpr = store.get_detections(body.case, "anpr")
        return [
            {
                "mac": s.mac.text,
                "plate": s.plate,
                "co_occurrences": s.co_occurrences,
                "distinct_sensors": s.distinct_sensors,
                "score": s.score,
            }
            for s in correlate_bt_anpr(bt, anpr, body.dt_s, body.d_m)
        ]

    @app.post("/analysis/stops", response_model=list[schemas.StopOut])
    def stops(body: schemas.StopsIn):
        track = store.get_track(body.case, body.track_id)
        return [
            {
                "centroid_lat": s.centroid.lat,
                "centroid_lon": s.centroid.lon,
                "start": iso_utc(s.start),
                "end": iso_utc(s.end),
                "dwell_s": s.dwell_s,
                "first_index": s.point_span[0],
                "last_index": s.point_span[1],
            }
            for s in detect_stops(track, body.epsilon_m, body.tau_s)
        ]

    @app.get("/tracks/{track_id}", response_model=schemas.TrackOut)
    def get_track(
        track_id: str,
        case: str = Query(...),
        from_ts: str | None = Query(None, alias="from"),
        to_ts: str | None = Query(None, alias="to"),
    ):
        track = store.get_track(case, track_id)
        points = track.points
        if from_ts is not None or to_ts is not None:
            try:
                t_from = parse_utc(from_ts) if from_ts else datetime.min.replace(tzinfo=timezone.utc)
                t_to = parse_utc(to_ts) if to_ts else datetime.max.replace(tzinfo=timezone.utc)
            except ValueError as exc:
                raise InvalidParameters(f"bad time range: {exc}") from None
            points = timeline_slice(track, t_from, t_to)
        return {
            "track_id": track.track_id,
            "label": track.label,
            "points": [
                {"lat": p.point.lat, "lon": p.point.lon, "timestamp": iso_utc(p.timestamp)}
                for p in points
            ],
        }

    # --- static UI (secondary component) -----------------------------------

    if config.ui_dist_path is not None:
        app.mount("/", StaticFiles(directory=config.ui_dist_path, html=True), name="ui")

    return app
