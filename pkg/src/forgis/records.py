"""Typed evidence records: cameras, Wi-Fi scans, GPS tracks, and the two
detection streams, with their JSON (de)serialization used by the store."""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .errors import CorruptStore
from .mac import MacAddress
from .spatial import GeoPoint
from .timeutil import iso_utc, parse_utc

CAMERA_CATEGORIES = ("public", "private", "unknown")


@dataclass
class CaseRecord:
    case_id: str
    name: str
    created_at: datetime
    layer_ids: list[str] = field(default_factory=list)


@dataclass
class CameraRecord:
    camera_id: str
    position: GeoPoint
    category: str = "unknown"
    owner_contact: str = ""
    description: str = ""
    source: str = ""
    tags: tuple[str, ...] = ()

    def __post_init__(self):
        if self.category not in CAMERA_CATEGORIES:
            raise ValueError(f"camera category {self.category!r} not in {CAMERA_CATEGORIES}")

    def to_json(self) -> dict:
        return {
            "camera_id": self.camera_id,
            "lat": self.position.lat,
            "lon": self.position.lon,
            "category": self.category,
            "owner_contact": self.owner_contact,
            "description": self.description,
            "source": self.source,
            "tags": list(self.tags),
        }

    @classmethod
    def from_json(cls, d: dict) -> "CameraRecord":
        return cls(
            camera_id=d["camera_id"],
            position=GeoPoint(d["lat"], d["lon"]),
            category=d["category"],
            owner_contact=d.get("owner_contact", ""),
            description=d.get("description", ""),
            source=d.get("source", ""),
            tags=tuple(d.get("tags", ())),
        )


@dataclass
class WifiObservation:
    """One geo-referenced sighting of an access point or client radio."""

    bssid: MacAddress
    position: GeoPoint
    timestamp: datetime
    ssid: str | None = None
    signal_dbm: int | None = None

    def to_json(self) -> dict:
        return {
            "bssid": self.bssid.text,
            "ssid": self.ssid,
            "lat": self.position.lat,
            "lon": self.position.lon,
            "timestamp": iso_utc(self.timestamp),
            "signal_dbm": self.signal_dbm,
        }

    @classmethod
    def from_json(cls, d: dict) -> "WifiObservation":
        return cls(
            bssid=MacAddress.parse(d["bssid"]),
            ssid=d.get("ssid"),
            position=GeoPoint(d["lat"], d["lon"]),
            timestamp=parse_utc(d["timestamp"]),
            signal_dbm=d.get("signal_dbm"),
        )


@dataclass
class WifiScan:
    """A scan session: a labelled batch of observations. The captured
    range is derived from the observations when the scan is stored."""

    scan_id: str
    label: str = ""
    captured_from: datetime | None = None
    captured_to: datetime | None = None
    observations: list[WifiObservation] = field(default_factory=list)

    def derive_captured_range(self) -> None:
        times = [o.timestamp for o in self.observations]
        self.captured_from = min(times) if times else None
        self.captured_to = max(times) if times else None


@dataclass(frozen=True)
class TrackPoint:
    point: GeoPoint
    timestamp: datetime


@dataclass
class GpsTrack:
    """An ordered GPS trace; timestamps monotonically non-decreasing."""

    track_id: str
    label: str = ""
    points: list[TrackPoint] = field(default_factory=list)

    def __post_init__(self):
        if not self.points:
            raise ValueError("a track needs at least one point")
        for prev, cur in zip(self.points, self.points[1:]):
            if cur.timestamp < prev.timestamp:
                raise ValueError("track timestamps must be non-decreasing")


@dataclass
class BtDetection:
    mac: MacAddress
    sensor_id: str
    position: GeoPoint
    timestamp: datetime

    def to_json(self) -> dict:
        return {
            "mac": self.mac.text,
            "sensor_id": self.sensor_id,
            "lat": self.position.lat,
            "lon": self.position.lon,
            "timestamp": iso_utc(self.timestamp),
        }

    @classmethod
    def from_json(cls, d: dict) -> "BtDetection":
        return cls(
            mac=MacAddress.parse(d["mac"]),
            sensor_id=d["sensor_id"],
            position=GeoPoint(d["lat"], d["lon"]),
            timestamp=parse_utc(d["timestamp"]),
        )


@dataclass
class AnprDetection:
    plate: str
    sensor_id: str
    position: GeoPoint
    timestamp: datetime

    def to_json(self) -> dict:
        return {
            "plate": self.plate,
            "sensor_id": self.sensor_id,
            "lat": self.position.lat,
            "lon": self.position.lon,
            "timestamp": iso_utc(self.timestamp),
        }

    @classmethod
    def from_json(cls, d: dict) -> "AnprDetection":
        return cls(
            plate=d["plate"],
            sensor_id=d["sensor_id"],
            position=GeoPoint(d["lat"], d["lon"]),
            timestamp=parse_utc(d["timestamp"]),
        )


def record_from_json(kind: str, d: dict):
    """Decode one store line; raises CorruptStore on any shape error."""
    decoders = {
        "camera": CameraRecord.from_json,
        "wifi_observation": WifiObservation.from_json,
        "bt": BtDetection.from_json,
        "anpr": AnprDetection.from_json,
    }
    try:
        return decoders[kind](d)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptStore(f"bad {kind} record: {exc}") from exc
