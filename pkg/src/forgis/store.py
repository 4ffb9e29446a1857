"""Case-scoped evidence persistence.

Each case is a directory of human-auditable JSON files:

    cases/<case_id>/manifest.json
    cases/<case_id>/layers/<layer_id>.geojson
    cases/<case_id>/cameras.jsonl
    cases/<case_id>/scans/<scan_id>.jsonl
    cases/<case_id>/tracks/<track_id>.jsonl
    cases/<case_id>/detections_bt.jsonl
    cases/<case_id>/detections_anpr.jsonl

Every mutation lands via write-temp-then-rename, so an interrupted write
leaves either the previous or the new state on disk, never a torn record.
Writes are serialized per case (single-writer); readers see consistent
snapshots. No external database: the store must run on an air-gapped box.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    CorruptStore,
    DuplicateId,
    UnknownCamera,
    UnknownCase,
    UnknownLayer,
    UnknownScan,
    UnknownTrack,
)
from .ingest import FeatureSet, export_geojson, parse_geojson, provenance_from_geojson
from .records import (
    CameraRecord,
    CaseRecord,
    GpsTrack,
    TrackPoint,
    WifiScan,
    record_from_json,
)
from .spatial import GeoPoint, GridIndex, haversine_distance
from .timeutil import iso_utc, parse_utc

DETECTION_KINDS = ("bt", "anpr")


def _atomic_write(path: Path, data: bytes) -> None:
    """Write bytes then rename into place; fsync file and directory."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    dir_fd = os.open(path.parent, os.O_RDONLY)
    try:
        os.fsync(dir_fd)
    finally:
        os.close(dir_fd)


def _read_jsonl(path: Path) -> list[dict]:
    if not path.exists():
        return []
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise CorruptStore(f"{path.name} line {i}: {exc}") from exc
    return rows


def _dump_jsonl(rows) -> bytes:
    return "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows).encode("utf-8")


@dataclass
class LayerInfo:
    layer_id: str
    label: str
    feature_count: int


class CaseStore:
    """Single-writer, multi-reader store rooted at a directory."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        (self.root / "cases").mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()
        # cameras are the hot query path; cache the decoded list + grid index
        self._camera_cache: dict[str, tuple[list[CameraRecord], dict[str, CameraRecord], GridIndex]] = {}

    # --- plumbing ---------------------------------------------------------

    def _case_dir(self, case_id: str) -> Path:
        return self.root / "cases" / case_id

    def _lock(self, case_id: str) -> threading.RLock:
        with self._locks_guard:
            if case_id not in self._locks:
                self._locks[case_id] = threading.RLock()
            return self._locks[case_id]

    def _manifest_path(self, case_id: str) -> Path:
        return self._case_dir(case_id) / "manifest.json"

    def _load_manifest(self, case_id: str) -> dict:
        path = self._manifest_path(case_id)
        if not path.exists():
            raise UnknownCase(f"no case {case_id!r}")
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise CorruptStore(f"manifest for {case_id}: {exc}") from exc

    def _save_manifest(self, case_id: str, manifest: dict) -> None:
        _atomic_write(self._manifest_path(case_id), json.dumps(manifest, indent=2).encode("utf-8"))

    # --- cases ------------------------------------------------------------

    def create_case(self, name: str) -> CaseRecord:
        case_id = "case-" + uuid.uuid4().hex[:12]
        created = datetime.now(timezone.utc)
        manifest = {"case_id": case_id, "name": name, "created_at": iso_utc(created), "layers": []}
        with self._lock(case_id):
            self._save_manifest(case_id, manifest)
        return CaseRecord(case_id=case_id, name=name, created_at=created)

    def get_case(self, case_id: str) -> CaseRecord:
        m = self._load_manifest(case_id)
        return CaseRecord(
            case_id=m["case_id"],
            name=m["name"],
            created_at=parse_utc(m["created_at"]),
            layer_ids=[l["layer_id"] for l in m["layers"]],
        )

    def list_cases(self) -> list[CaseRecord]:
        cases_dir = self.root / "cases"
        records = []
        for entry in sorted(cases_dir.iterdir()):
            if (entry / "manifest.json").exists():
                records.append(self.get_case(entry.name))
        records.sort(key=lambda c: (c.created_at, c.case_id))
        return records

    def case_count(self) -> int:
        cases_dir = self.root / "cases"
        return sum(1 for e in cases_dir.iterdir() if (e / "manifest.json").exists())

    # --- layers -----------------------------------------------------------

    def add_layer(self, case_id: str, fs: FeatureSet, label: str) -> str:
        """Store a layer atomically: the layer file lands first, then the
        manifest; a crash in between leaves the layer invisible."""
        with self._lock(case_id):
            manifest = self._load_manifest(case_id)
            layer_id = f"layer-{len(manifest['layers']) + 1:04d}"
            path = self._case_dir(case_id) / "layers" / f"{layer_id}.geojson"
            _atomic_write(path, export_geojson(fs))
            manifest["layers"].append(
                {"layer_id": layer_id, "label": label, "feature_count": len(fs.features)}
            )
            self._save_manifest(case_id, manifest)
        return layer_id

    def list_layers(self, case_id: str) -> list[LayerInfo]:
        manifest = self._load_manifest(case_id)
        return [LayerInfo(l["layer_id"], l["label"], l["feature_count"]) for l in manifest["layers"]]

    def get_layer_bytes(self, case_id: str, layer_id: str) -> bytes:
        manifest = self._load_manifest(case_id)
        if not any(l["layer_id"] == layer_id for l in manifest["layers"]):
            raise UnknownLayer(f"no layer {layer_id!r} in case {case_id}")
        path = self._case_dir(case_id) / "layers" / f"{layer_id}.geojson"
        try:
            return path.read_bytes()
        except FileNotFoundError as exc:
            raise CorruptStore(f"layer file {layer_id} missing") from exc

    def get_layer(self, case_id: str, layer_id: str) -> FeatureSet:
        data = self.get_layer_bytes(case_id, layer_id)
        fs = parse_geojson(data, source_name=layer_id)
        original = provenance_from_geojson(data)
        if original is not None:
            fs.provenance = original
        return fs

    # --- cameras ----------------------------------------------------------

    def _cameras_path(self, case_id: str) -> Path:
        return self._case_dir(case_id) / "cameras.jsonl"

    def _load_cameras(self, case_id: str) -> tuple[list[CameraRecord], dict[str, CameraRecord], GridIndex]:
        cached = self._camera_cache.get(case_id)
        if cached is not None:
            return cached
        rows = _read_jsonl(self._cameras_path(case_id))
        cameras = [record_from_json("camera", r) for r in rows]
        by_id = {c.camera_id: c for c in cameras}
        index = GridIndex()
        for c in cameras:
            index.insert(c.camera_id, c.position)
        loaded = (cameras, by_id, index)
        self._camera_cache[case_id] = loaded
        return loaded

    def upsert_cameras(self, case_id: str, records: list[CameraRecord]) -> int:
        """Insert or replace by camera_id (last write wins); returns the
        number of records applied. First-insertion order is preserved."""
        with self._lock(case_id):
            self._load_manifest(case_id)
            existing = [
                record_from_json("camera", r) for r in _read_jsonl(self._cameras_path(case_id))
            ]
            order = [c.camera_id for c in existing]
            merged = {c.camera_id: c for c in existing}
            for rec in records:
                if rec.camera_id not in merged:
                    order.append(rec.camera_id)
                merged[rec.camera_id] = rec
            _atomic_write(self._cameras_path(case_id), _dump_jsonl(merged[i].to_json() for i in order))
            self._camera_cache.pop(case_id, None)
        return len(records)

    def list_cameras(self, case_id: str) -> list[CameraRecord]:
        with self._lock(case_id):
            self._load_manifest(case_id)
            return list(self._load_cameras(case_id)[0])

    def get_camera(self, case_id: str, camera_id: str) -> CameraRecord:
        with self._lock(case_id):
            self._load_manifest(case_id)
            by_id = self._load_cameras(case_id)[1]
        try:
            return by_id[camera_id]
        except KeyError:
            raise UnknownCamera(f"no camera {camera_id!r} in case {case_id}") from None

    def query_cameras(
        self,
        case_id: str,
        center: GeoPoint,
        radius_m: float,
        excluded_categories: set[str] = frozenset(),
    ) -> list[tuple[CameraRecord, float]]:
        """Cameras within ``radius_m`` of ``center`` (inclusive boundary),
        minus excluded categories, sorted by distance then camera_id."""
        if radius_m < 0:
            raise ValueError("radius must be non-negative")
        with self._lock(case_id):
            self._load_manifest(case_id)
            _, by_id, index = self._load_cameras(case_id)
        hits = []
        for camera_id in index.query_radius(center, radius_m):
            cam = by_id[camera_id]
            if cam.category in excluded_categories:
                continue
            hits.append((cam, haversine_distance(center, cam.position)))
        hits.sort(key=lambda pair: (pair[1], pair[0].camera_id))
        return hits

    # --- scans ------------------------------------------------------------

    def store_scan(self, case_id: str, scan: WifiScan) -> None:
        with self._lock(case_id):
            self._load_manifest(case_id)
            scans_dir = self._case_dir(case_id) / "scans"
            path = scans_dir / f"{scan.scan_id}.jsonl"
            if path.exists():
                raise DuplicateId(f"scan {scan.scan_id!r} already stored")
            scan.derive_captured_range()
            meta = {
                "scan_id": scan.scan_id,
                "label": scan.label,
                "captured_from": iso_utc(scan.captured_from) if scan.captured_from else None,
                "captured_to": iso_utc(scan.captured_to) if scan.captured_to else None,
                "seq": len(list(scans_dir.glob("*.jsonl"))) if scans_dir.exists() else 0,
            }
            rows = [meta] + [o.to_json() for o in scan.observations]
            _atomic_write(path, _dump_jsonl(rows))

    def get_scan(self, case_id: str, scan_id: str) -> WifiScan:
        self._load_manifest(case_id)
        path = self._case_dir(case_id) / "scans" / f"{scan_id}.jsonl"
        if not path.exists():
            raise UnknownScan(f"no scan {scan_id!r} in case {case_id}")
        rows = _read_jsonl(path)
        if not rows:
            raise CorruptStore(f"scan file {scan_id} is empty")
        meta = rows[0]
        try:
            scan = WifiScan(
                scan_id=meta["scan_id"],
                label=meta.get("label", ""),
                captured_from=parse_utc(meta["captured_from"]) if meta.get("captured_from") else None,
                captured_to=parse_utc(meta["captured_to"]) if meta.get("captured_to") else None,
                observations=[record_from_json("wifi_observation", r) for r in rows[1:]],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptStore(f"scan meta for {scan_id}: {exc}") from exc
        return scan

    def list_scans(self, case_id: str) -> list[WifiScan]:
        """All scans of a case in insertion order."""
        self._load_manifest(case_id)
        scans_dir = self._case_dir(case_id) / "scans"
        if not scans_dir.exists():
            return []
        ordered = []
        for path in scans_dir.glob("*.jsonl"):
            rows = _read_jsonl(path)
            seq = rows[0].get("seq", 0) if rows else 0
            ordered.append((seq, path.stem))
        return [self.get_scan(case_id, stem) for _, stem in sorted(ordered)]

    # --- tracks -----------------------------------------------------------

    def store_track(self, case_id: str, track: GpsTrack) -> None:
        with self._lock(case_id):
            self._load_manifest(case_id)
            tracks_dir = self._case_dir(case_id) / "tracks"
            path = tracks_dir / f"{track.track_id}.jsonl"
            if path.exists():
                raise DuplicateId(f"track {track.track_id!r} already stored")
            meta = {
                "track_id": track.track_id,
                "label": track.label,
                "seq": len(list(tracks_dir.glob("*.jsonl"))) if tracks_dir.exists() else 0,
            }
            rows = [meta] + [
                {"lat": tp.point.lat, "lon": tp.point.lon, "timestamp": iso_utc(tp.timestamp)}
                for tp in track.points
            ]
            _atomic_write(path, _dump_jsonl(rows))

    def get_track(self, case_id: str, track_id: str) -> GpsTrack:
        self._load_manifest(case_id)
        path = self._case_dir(case_id) / "tracks" / f"{track_id}.jsonl"
        if not path.exists():
            raise UnknownTrack(f"no track {track_id!r} in case {case_id}")
        rows = _read_jsonl(path)
        if not rows:
            raise CorruptStore(f"track file {track_id} is empty")
        meta = rows[0]
        try:
            points = [
                TrackPoint(GeoPoint(r["lat"], r["lon"]), parse_utc(r["timestamp"])) for r in rows[1:]
            ]
            return GpsTrack(track_id=meta["track_id"], label=meta.get("label", ""), points=points)
        except (KeyError, TypeError, ValueError) as exc:
            raise CorruptStore(f"track {track_id}: {exc}") from exc

    def list_tracks(self, case_id: str) -> list[GpsTrack]:
        """All tracks of a case in insertion order."""
        self._load_manifest(case_id)
        tracks_dir = self._case_dir(case_id) / "tracks"
        if not tracks_dir.exists():
            return []
        ordered = []
        for path in tracks_dir.glob("*.jsonl"):
            rows = _read_jsonl(path)
            seq = rows[0].get("seq", 0) if rows else 0
            ordered.append((seq, path.stem))
        return [self.get_track(case_id, stem) for _, stem in sorted(ordered)]

    # --- detections -------------------------------------------------------

    def store_detections(self, case_id: str, kind: str, records: list) -> int:
        """Append a batch of bt or anpr detections; atomic per call."""
        if kind not in DETECTION_KINDS:
            raise ValueError(f"detection kind must be one of {DETECTION_KINDS}")
        with self._lock(case_id):
            self._load_manifest(case_id)
            path = self._case_dir(case_id) / f"detections_{kind}.jsonl"
            rows = _read_jsonl(path)
            rows.extend(r.to_json() for r in records)
            _atomic_write(path, _dump_jsonl(rows))
        return len(records)

    def get_detections(self, case_id: str, kind: str) -> list:
        if kind not in DETECTION_KINDS:
            raise ValueError(f"detection kind must be one of {DETECTION_KINDS}")
        self._load_manifest(case_id)
        rows = _read_jsonl(self._case_dir(case_id) / f"detections_{kind}.jsonl")
        return [record_from_json(kind, r) for r in rows]
