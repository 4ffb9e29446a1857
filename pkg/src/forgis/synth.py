"""Deterministic synthetic evidence generator.

Produces desk-scale demo and training datasets in the documented CSV/GPX
formats, with a ground-truth sidecar (true stop segments, the planted
MAC/plate pair) so results can be checked against what was actually
planted. The same seed always yields byte-identical files.

The default Bluetooth detectability of 0.42 reflects the roughly 42% of
passing vehicles that carry a discoverable Bluetooth device; ANPR gantries
read essentially every plate, so its default is 1.0.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path

from .errors import InvalidParameters
from .mac import MacAddress
from .records import (
    AnprDetection,
    BtDetection,
    CameraRecord,
    TrackPoint,
    WifiObservation,
)
from .spatial import EARTH_RADIUS_M, GeoPoint, haversine_distance
from .timeutil import iso_utc, parse_utc

_M_PER_DEG_LAT = math.pi * EARTH_RADIUS_M / 180.0

DEFAULT_BASE_TIME = datetime(2016, 5, 1, 8, 0, 0, tzinfo=timezone.utc)


@dataclass
class StopSpec:
    lat: float
    lon: float
    dwell_s: float


@dataclass
class TrackProfile:
    start: tuple[float, float]
    end: tuple[float, float]
    stops: list[StopSpec] = field(default_factory=list)
    speed_mps: float = 15.0
    sample_interval_s: float = 5.0
    jitter_m: float = 3.0


@dataclass
class PlantedPair:
    mac: str
    plate: str
    n_sensors: int = 5
    n_passes: int = 3


@dataclass
class SyntheticSpec:
    seed: int
    n_cameras: int = 0
    n_scan_networks: int = 0
    n_noise_vehicles: int = 0
    bt_p: float = 0.42
    anpr_p: float = 1.0
    area_center: tuple[float, float] = (52.0800, 4.3250)
    area_radius_m: float = 5000.0
    base_time: datetime = DEFAULT_BASE_TIME
    track_profile: TrackProfile | None = None
    planted_pair: PlantedPair | None = None

    @classmethod
    def from_json(cls, raw: dict) -> "SyntheticSpec":
        try:
            track = None
            if raw.get("track_profile"):
                tp = raw["track_profile"]
                track = TrackProfile(
                    start=tuple(tp["start"]),
                    end=tuple(tp["end"]),
                    stops=[StopSpec(s["lat"], s["lon"], s["dwell_s"]) for s in tp.get("stops", [])],
                    speed_mps=float(tp.get("speed_mps", 15.0)),
                    sample_interval_s=float(tp.get("sample_interval_s", 5.0)),
                    jitter_m=float(tp.get("jitter_m", 3.0)),
                )
            planted = None
            if raw.get("planted_pair"):
                pp = raw["planted_pair"]
                planted = PlantedPair(
                    mac=MacAddress.parse(pp["mac"]).text,
                    plate="".join(pp["plate"].split()).upper(),
                    n_sensors=int(pp.get("n_sensors", 5)),
                    n_passes=int(pp.get("n_passes", 3)),
                )
            return cls(
                seed=int(raw["seed"]),
                n_cameras=int(raw.get("n_cameras", 0)),
                n_scan_networks=int(raw.get("n_scan_networks", 0)),
                n_noise_vehicles=int(raw.get("n_noise_vehicles", 0)),
                bt_p=float(raw.get("bt_p", 0.42)),
                anpr_p=float(raw.get("anpr_p", 1.0)),
                area_center=tuple(raw.get("area_center", (52.0800, 4.3250))),
                area_radius_m=float(raw.get("area_radius_m", 5000.0)),
                base_time=parse_utc(raw["base_time"]) if raw.get("base_time") else DEFAULT_BASE_TIME,
                track_profile=track,
                planted_pair=planted,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameters(f"bad synthetic spec: {exc}") from exc


@dataclass
class SyntheticDataset:
    spec: SyntheticSpec
    cameras: list[CameraRecord] = field(default_factory=list)
    wifi_observations: list[WifiObservation] = field(default_factory=list)
    track_points: list[TrackPoint] = field(default_factory=list)
    true_stops: list[dict] = field(default_factory=list)
    bt: list[BtDetection] = field(default_factory=list)
    anpr: list[AnprDetection] = field(default_factory=list)

    def ground_truth(self) -> dict:
        planted = None
        if self.spec.planted_pair is not None:
            pp = self.spec.planted_pair
            planted = {
                "mac": pp.mac,
                "plate": pp.plate,
                "n_sensors": pp.n_sensors,
                "n_passes": pp.n_passes,
            }
        return {
            "seed": self.spec.seed,
            "stops": self.true_stops,
            "planted_pair": planted,
            "counts": {
                "cameras": len(self.cameras),
                "wifi_observations": len(self.wifi_observations),
                "track_points": len(self.track_points),
                "bt_detections": len(self.bt),
                "anpr_detections": len(self.anpr),
            },
        }


def _offset(origin: GeoPoint, north_m: float, east_m: float) -> GeoPoint:
    lat = origin.lat + north_m / _M_PER_DEG_LAT
    lon = origin.lon + east_m / (_M_PER_DEG_LAT * math.cos(math.radians(origin.lat)))
    return GeoPoint(lat, lon)


def _point_in_disc(rng: random.Random, center: GeoPoint, radius_m: float) -> GeoPoint:
    r = radius_m * math.sqrt(rng.random())
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return _offset(center, r * math.cos(theta), r * math.sin(theta))


def _jittered(rng: random.Random, p: GeoPoint, sigma_m: float) -> GeoPoint:
    return _offset(p, rng.gauss(0.0, sigma_m), rng.gauss(0.0, sigma_m))


def _random_mac(rng: random.Random) -> MacAddress:
    # locally-administered prefix keeps synthetic MACs out of vendor space
    octets = [0x02] + [rng.randrange(256) for _ in range(5)]
    return MacAddress.parse("".join(f"{o:02X}" for o in octets))


def _random_plate(rng: random.Random) -> str:
    letters = "".join(rng.choice("ABCDEFGHJKLMNPRSTVWXYZ") for _ in range(2))
    digits = "".join(rng.choice("0123456789") for _ in range(3))
    tail = "".join(rng.choice("ABCDEFGHJKLMNPRSTVWXYZ") for _ in range(1))
    return f"{letters}{digits}{tail}"


def _generate_cameras(rng: random.Random, spec: SyntheticSpec) -> list[CameraRecord]:
    center = GeoPoint(*spec.area_center)
    cameras = []
    for i in range(spec.n_cameras):
        cameras.append(
            CameraRecord(
                camera_id=f"cam-{i:05d}",
                position=_point_in_disc(rng, center, spec.area_radius_m),
                category=rng.choices(["public", "private", "unknown"], weights=[45, 45, 10])[0],
                owner_contact=f"owner-{i:05d}",
                description=f"synthetic camera {i}",
                source="gen-synthetic",
            )
        )
    return cameras


def _generate_wifi(rng: random.Random, spec: SyntheticSpec) -> list[WifiObservation]:
    center = GeoPoint(*spec.area_center)
    observations = []
    for i in range(spec.n_scan_networks):
        hidden = rng.random() < 0.1
        observations.append(
            WifiObservation(
                bssid=_random_mac(rng),
                ssid=None if hidden else f"net-{i:04d}",
                position=_point_in_disc(rng, center, spec.area_radius_m),
                timestamp=spec.base_time + timedelta(seconds=10 * i),
                signal_dbm=-rng.randrange(30, 90),
            )
        )
    return observations


def _generate_track(rng: random.Random, spec: SyntheticSpec) -> tuple[list[TrackPoint], list[dict]]:
    """Piecewise trajectory: legs at constant speed between stop positions,
    dwells sampled in place. All samples sit on the interval grid, so the
    ground-truth stop times are exactly the sampled arrival/departure."""
    profile = spec.track_profile
    if profile is None:
        return [], []
    interval = profile.sample_interval_s
    step_m = profile.speed_mps * interval
    points: list[TrackPoint] = []
    true_stops: list[dict] = []

    def sample(pos: GeoPoint, k: int) -> None:
        points.append(
            TrackPoint(
                _jittered(rng, pos, profile.jitter_m),
                spec.base_time + timedelta(seconds=k * interval),
            )
        )

    k = 0
    current = GeoPoint(*profile.start)
    sample(current, k)
    waypoints = [(GeoPoint(s.lat, s.lon), s.dwell_s) for s in profile.stops]
    waypoints.append((GeoPoint(*profile.end), 0.0))

    for target, dwell_s in waypoints:
        total = haversine_distance(current, target)
        # constant-length steps; the final (possibly short) step lands on target
        while total > 0:
            advance = min(step_m, total)
            frac = advance / total
            current = GeoPoint(
                current.lat + (target.lat - current.lat) * frac,
                current.lon + (target.lon - current.lon) * frac,
            )
            total -= advance
            k += 1
            sample(current, k)
        if dwell_s > 0:
            n_dwell = int(dwell_s // interval)
            arrival = points[-1].timestamp
            for _ in range(n_dwell):
                k += 1
                sample(current, k)
            departure = points[-1].timestamp
            true_stops.append(
                {
                    "lat": target.lat,
                    "lon": target.lon,
                    "start": iso_utc(arrival),
                    "end": iso_utc(departure),
                    "dwell_s": (departure - arrival).total_seconds(),
                }
            )
    return points, true_stops


def _generate_detections(
    rng: random.Random, spec: SyntheticSpec
) -> tuple[list[BtDetection], list[AnprDetection]]:
    """Planted vehicle runs every sensor site on each pass; noise plates and
    noise Bluetooth devices move independently, so they co-occur only by
    coincidence."""
    planted = spec.planted_pair
    if planted is None and spec.n_noise_vehicles == 0:
        return [], []
    n_sensors = planted.n_sensors if planted else 5
    center = GeoPoint(*spec.area_center)
    sites = [
        _offset(center, 0.0, (k - (n_sensors - 1) / 2.0) * 1000.0) for k in range(n_sensors)
    ]
    bt: list[BtDetection] = []
    anpr: list[AnprDetection] = []
    span_s = 4 * 3600.0

    if planted is not None:
        mac = MacAddress.parse(planted.mac)
        for pass_i in range(planted.n_passes):
            pass_start = pass_i * 3600.0 + rng.uniform(0.0, 600.0)
            for k, site in enumerate(sites):
                t_pass = pass_start + k * 120.0 + rng.uniform(-10.0, 10.0)
                if rng.random() < spec.anpr_p:
                    anpr.append(
                        AnprDetection(
                            plate=planted.plate,
                            sensor_id=f"anpr-{k:02d}",
                            position=_jittered(rng, site, 10.0),
                            timestamp=spec.base_time + timedelta(seconds=t_pass + rng.uniform(-5.0, 5.0)),
                        )
                    )
                if rng.random() < spec.bt_p:
                    bt.append(
                        BtDetection(
                            mac=mac,
                            sensor_id=f"bt-{k:02d}",
                            position=_jittered(rng, site, 10.0),
                            timestamp=spec.base_time + timedelta(seconds=t_pass + rng.uniform(-15.0, 15.0)),
                        )
                    )

    for _ in range(spec.n_noise_vehicles):
        plate = _random_plate(rng)
        k = rng.randrange(n_sensors)
        t = rng.uniform(0.0, span_s)
        if rng.random() < spec.anpr_p:
            anpr.append(
                AnprDetection(
                    plate=plate,
                    sensor_id=f"anpr-{k:02d}",
                    position=_jittered(rng, sites[k], 10.0),
                    timestamp=spec.base_time + timedelta(seconds=t),
                )
            )
    for _ in range(spec.n_noise_vehicles):
        mac = _random_mac(rng)
        k = rng.randrange(n_sensors)
        t = rng.uniform(0.0, span_s)
        bt.append(
            BtDetection(
                mac=mac,
                sensor_id=f"bt-{k:02d}",
                position=_jittered(rng, sites[k], 10.0),
                timestamp=spec.base_time + timedelta(seconds=t),
            )
        )
    return bt, anpr


def generate(spec: SyntheticSpec) -> SyntheticDataset:
    """Build the full dataset for a spec; same seed, same dataset."""
    rng = random.Random(spec.seed)
    ds = SyntheticDataset(spec=spec)
    ds.cameras = _generate_cameras(rng, spec)
    ds.wifi_observations = _generate_wifi(rng, spec)
    ds.track_points, ds.true_stops = _generate_track(rng, spec)
    ds.bt, ds.anpr = _generate_detections(rng, spec)
    return ds


# --- file emission -----------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.7f}"


def _camera_csv(cameras: list[CameraRecord]) -> str:
    lines = ["camera_id,lat,lon,category,owner,description"]
    for c in cameras:
        lines.append(
            f"{c.camera_id},{_fmt(c.position.lat)},{_fmt(c.position.lon)},{c.category},"
            f"{c.owner_contact},{c.description}"
        )
    return "\n".join(lines) + "\n"


def _wifi_csv(observations: list[WifiObservation]) -> str:
    lines = ["timestamp,bssid,ssid,lat,lon,signal_dbm"]
    for o in observations:
        signal = "" if o.signal_dbm is None else str(o.signal_dbm)
        lines.append(
            f"{iso_utc(o.timestamp)},{o.bssid.text},{o.ssid or ''},"
            f"{_fmt(o.position.lat)},{_fmt(o.position.lon)},{signal}"
        )
    return "\n".join(lines) + "\n"


def _bt_csv(detections: list[BtDetection]) -> str:
    lines = ["timestamp,mac,sensor_id,lat,lon"]
    for d in detections:
        lines.append(
            f"{iso_utc(d.timestamp)},{d.mac.text},{d.sensor_id},"
            f"{_fmt(d.position.lat)},{_fmt(d.position.lon)}"
        )
    return "\n".join(lines) + "\n"


def _anpr_csv(detections: list[AnprDetection]) -> str:
    lines = ["timestamp,plate,sensor_id,lat,lon"]
    for d in detections:
        lines.append(
            f"{iso_utc(d.timestamp)},{d.plate},{d.sensor_id},"
            f"{_fmt(d.position.lat)},{_fmt(d.position.lon)}"
        )
    return "\n".join(lines) + "\n"


def _track_gpx(points: list[TrackPoint]) -> str:
    body = "".join(
        f'      <trkpt lat="{_fmt(p.point.lat)}" lon="{_fmt(p.point.lon)}">'
        f"<time>{iso_utc(p.timestamp)}</time></trkpt>\n"
        for p in points
    )
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<gpx version="1.1" creator="forgis gen-synthetic" '
        'xmlns="http://www.topografix.com/GPX/1/1">\n'
        "  <trk>\n    <name>synthetic-track</name>\n    <trkseg>\n"
        f"{body}"
        "    </trkseg>\n  </trk>\n</gpx>\n"
    )


def write_dataset(ds: SyntheticDataset, out_dir: Path | str) -> list[Path]:
    """Write the dataset files; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def emit(name: str, text: str) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8", newline="\n")
        written.append(path)

    if ds.cameras:
        emit("cameras.csv", _camera_csv(ds.cameras))
    if ds.wifi_observations:
        emit("wifi.csv", _wifi_csv(ds.wifi_observations))
    if ds.track_points:
        emit("track.gpx", _track_gpx(ds.track_points))
    if ds.bt:
        emit("bt.csv", _bt_csv(ds.bt))
    if ds.anpr:
        emit("anpr.csv", _anpr_csv(ds.anpr))
    emit("ground_truth.json", json.dumps(ds.ground_truth(), indent=2, sort_keys=True) + "\n")
    return written
