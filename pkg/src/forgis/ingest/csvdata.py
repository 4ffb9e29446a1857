"""CSV schemas for the four evidence streams.

The collection tools named in the field (Kismet, Airodump-ng, traffic
sensors, camera registries) publish no common interchange format, so these
simple documented schemas keep evidence pipelines auditable:

    wifi:    timestamp,bssid,ssid,lat,lon,signal_dbm
    anpr:    timestamp,plate,sensor_id,lat,lon
    bt:      timestamp,mac,sensor_id,lat,lon
    camera:  camera_id,lat,lon,category,owner,description

UTF-8, comma-separated, header row mandatory. Timestamps must carry a
timezone. Imports are strict by default: any bad row aborts the import
unless ``lenient`` is set, in which case bad rows are skipped and reported.
"""

from __future__ import annotations

import csv
import hashlib
import io

from ..errors import BadRows, MalformedDocument, MissingHeader
from ..mac import MacAddress
from ..records import AnprDetection, BtDetection, CameraRecord, WifiObservation, WifiScan
from ..spatial import GeoPoint
from ..timeutil import parse_utc

WIFI_HEADER = ["timestamp", "bssid", "ssid", "lat", "lon", "signal_dbm"]
ANPR_HEADER = ["timestamp", "plate", "sensor_id", "lat", "lon"]
BT_HEADER = ["timestamp", "mac", "sensor_id", "lat", "lon"]
CAMERA_HEADER = ["camera_id", "lat", "lon", "category", "owner", "description"]

RowError = tuple[int, str]


def _rows(data: bytes, expected_header: list[str]):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"not UTF-8: {exc}") from exc
    reader = csv.reader(io.StringIO(text, newline=""))
    try:
        header = next(reader)
    except StopIteration:
        raise MissingHeader(f"empty file; expected header {','.join(expected_header)}")
    except csv.Error as exc:
        raise MalformedDocument(f"CSV error in header: {exc}") from exc
    normalized = [h.strip().lower() for h in header]
    if normalized != expected_header:
        raise MissingHeader(
            f"header is {','.join(header) or '(empty)'}; expected {','.join(expected_header)}"
        )
    return reader


def _coordinates(lat_text: str, lon_text: str) -> GeoPoint:
    lat = float(lat_text)
    lon = float(lon_text)
    if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
        raise ValueError(f"coordinates ({lat}, {lon}) out of range")
    return GeoPoint(lat, lon)


def _collect(reader, expected_width: int, build, lenient: bool):
    """Run ``build`` per row, collecting (row_number, reason) failures.

    Strict mode raises BadRows if anything failed; lenient mode returns the
    good records plus the failure list.
    """
    records = []
    errors: list[RowError] = []
    while True:
        try:
            row = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            errors.append((reader.line_num, f"CSV error: {exc}"))
            continue
        if not row or all(not cell.strip() for cell in row):
            continue
        line = reader.line_num
        if len(row) != expected_width:
            errors.append((line, f"expected {expected_width} fields, found {len(row)}"))
            continue
        try:
            records.append(build(row))
        except (ValueError, TypeError) as exc:
            errors.append((line, str(exc)))
    if errors and not lenient:
        raise BadRows(errors)
    return records, errors


def parse_wifi_csv(
    data: bytes, *, label: str = "", scan_id: str | None = None, lenient: bool = False
) -> tuple[WifiScan, list[RowError]]:
    """Parse a Wi-Fi scan CSV into a WifiScan.

    BSSIDs are canonicalized; an empty ssid field means a hidden network.
    The scan id defaults to a content-hash id so re-importing the same
    capture collides instead of silently duplicating evidence.
    """
    reader = _rows(data, WIFI_HEADER)

    def build(row) -> WifiObservation:
        ts, bssid, ssid, lat, lon, signal = (cell.strip() for cell in row)
        return WifiObservation(
            bssid=MacAddress.parse(bssid),
            ssid=ssid or None,
            position=_coordinates(lat, lon),
            timestamp=parse_utc(ts),
            signal_dbm=int(signal) if signal else None,
        )

    observations, errors = _collect(reader, len(WIFI_HEADER), build, lenient)
    scan = WifiScan(
        scan_id=scan_id or "scan-" + hashlib.sha256(data).hexdigest()[:12],
        label=label,
        observations=observations,
    )
    scan.derive_captured_range()
    return scan, errors


def parse_anpr_csv(data: bytes, *, lenient: bool = False) -> tuple[list[AnprDetection], list[RowError]]:
    """Parse ANPR detections; plates are uppercased with whitespace stripped."""
    reader = _rows(data, ANPR_HEADER)

    def build(row) -> AnprDetection:
        ts, plate, sensor, lat, lon = (cell.strip() for cell in row)
        plate = "".join(plate.split()).upper()
        if not plate:
            raise ValueError("missing plate")
        if not sensor:
            raise ValueError("missing sensor_id")
        return AnprDetection(
            plate=plate, sensor_id=sensor, position=_coordinates(lat, lon), timestamp=parse_utc(ts)
        )

    return _collect(reader, len(ANPR_HEADER), build, lenient)


def parse_bt_csv(data: bytes, *, lenient: bool = False) -> tuple[list[BtDetection], list[RowError]]:
    """Parse Bluetooth detections; MACs are canonicalized."""
    reader = _rows(data, BT_HEADER)

    def build(row) -> BtDetection:
        ts, mac, sensor, lat, lon = (cell.strip() for cell in row)
        if not sensor:
            raise ValueError("missing sensor_id")
        return BtDetection(
            mac=MacAddress.parse(mac), sensor_id=sensor, position=_coordinates(lat, lon), timestamp=parse_utc(ts)
        )

    return _collect(reader, len(BT_HEADER), build, lenient)


_CATEGORY_ALIASES = {"public": "public", "private": "private", "unknown": "unknown", "": "unknown"}


def parse_camera_csv(
    data: bytes, *, source_name: str = "csv", lenient: bool = False
) -> tuple[list[CameraRecord], list[RowError]]:
    """Parse a camera registry CSV; categories fold to public/private/unknown."""
    reader = _rows(data, CAMERA_HEADER)

    def build(row) -> CameraRecord:
        camera_id, lat, lon, category, owner, description = (cell.strip() for cell in row)
        if not camera_id:
            raise ValueError("missing camera_id")
        folded = _CATEGORY_ALIASES.get(category.lower())
        if folded is None:
            raise ValueError(f"unknown camera category {category!r}")
        return CameraRecord(
            camera_id=camera_id,
            position=_coordinates(lat, lon),
            category=folded,
            owner_contact=owner,
            description=description,
            source=source_name,
        )

    return _collect(reader, len(CAMERA_HEADER), build, lenient)
