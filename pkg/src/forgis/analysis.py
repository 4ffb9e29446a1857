"""Investigative computations over stored evidence.

Four tools: Wi-Fi scan diffing (which networks appeared, vanished, or were
renamed between two scans), Wigle-style BSSID search across all stored
scans, post-mortem presence reports, Bluetooth-to-license-plate
correlation, and GPS stop detection with timeline slicing.

All functions are pure over the snapshots the store hands them, and every
list output carries a total, documented ordering so evidence reports are
reproducible byte for byte.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from typing import Iterable, Sequence

from .errors import InvalidParameters, MalformedQuery
from .mac import MacAddress, parse_oui_prefix
from .records import AnprDetection, BtDetection, GpsTrack, TrackPoint, WifiObservation, WifiScan
from .spatial import GeoPoint, haversine_distance


# --- scan comparison --------------------------------------------------------

@dataclass
class ScanDiff:
    """Partition of two scans' BSSIDs: the four key sets are pairwise
    disjoint and together cover every BSSID seen in either scan."""

    added: set[MacAddress] = field(default_factory=set)
    removed: set[MacAddress] = field(default_factory=set)
    renamed: dict[MacAddress, tuple[str | None, str | None]] = field(default_factory=dict)
    unchanged: set[MacAddress] = field(default_factory=set)


def _latest_ssids(scan: WifiScan) -> dict[MacAddress, str | None]:
    """BSSID -> SSID of its most recent observation (later list position
    wins ties, so repeated sightings resolve deterministically)."""
    best: dict[MacAddress, tuple[datetime, int, str | None]] = {}
    for i, obs in enumerate(scan.observations):
        cur = best.get(obs.bssid)
        if cur is None or (obs.timestamp, i) >= (cur[0], cur[1]):
            best[obs.bssid] = (obs.timestamp, i, obs.ssid)
    return {bssid: ssid for bssid, (_, _, ssid) in best.items()}


def diff_scans(a: WifiScan, b: WifiScan) -> ScanDiff:
    """Compare two scans keyed by BSSID.

    added = only in ``b``; removed = only in ``a``; renamed = present in
    both with a different SSID (hidden -> named counts as a rename);
    unchanged = present in both with the same SSID.
    """
    ssids_a = _latest_ssids(a)
    ssids_b = _latest_ssids(b)
    diff = ScanDiff()
    for bssid in set(ssids_a) | set(ssids_b):
        in_a = bssid in ssids_a
        in_b = bssid in ssids_b
        if in_a and not in_b:
            diff.removed.add(bssid)
        elif in_b and not in_a:
            diff.added.add(bssid)
        elif ssids_a[bssid] == ssids_b[bssid]:
            diff.unchanged.add(bssid)
        else:
            diff.renamed[bssid] = (ssids_a[bssid], ssids_b[bssid])
    return diff


# --- BSSID search / presence ------------------------------------------------

@dataclass(frozen=True)
class BssidHit:
    scan_id: str
    observation: WifiObservation


@dataclass(frozen=True)
class PresenceEvidence:
    """One sighting of a known device: where and when a queried BSSID was
    seen, and in which scan."""

    bssid: MacAddress
    position: GeoPoint
    timestamp: datetime
    scan_id: str
    ssid: str | None = None


def _hit_order(hit: BssidHit):
    return (hit.observation.timestamp, hit.observation.bssid.text, hit.scan_id)


def search_bssid(query: str, scans: Iterable[WifiScan]) -> list[BssidHit]:
    """Find observations matching a full MAC or a 3-octet OUI prefix,
    across all given scans, sorted by timestamp ascending."""
    full: MacAddress | None = None
    prefix: str | None = None
    try:
        full = MacAddress.parse(query)
    except ValueError:
        try:
            prefix = parse_oui_prefix(query) + ":"
        except ValueError:
            raise MalformedQuery(
                f"{query!r} is neither a MAC address nor a 3-octet OUI prefix"
            ) from None

    hits = []
    for scan in scans:
        for obs in scan.observations:
            if full is not None:
                if obs.bssid == full:
                    hits.append(BssidHit(scan.scan_id, obs))
            elif obs.bssid.text.startswith(prefix):
                hits.append(BssidHit(scan.scan_id, obs))
    hits.sort(key=_hit_order)
    return hits


def presence_report(known_bssids: Iterable[MacAddress], scans: Sequence[WifiScan]) -> list[PresenceEvidence]:
    """One evidence row per observation of any known BSSID, time-ordered.

    Equivalent to the union of per-MAC searches; the known set typically
    comes from a post-mortem examination of a seized device.
    """
    known = set(known_bssids)
    if not known:
        raise InvalidParameters("presence report needs a non-empty set of known BSSIDs")
    rows = []
    for scan in scans:
        for obs in scan.observations:
            if obs.bssid in known:
                rows.append(
                    PresenceEvidence(
                        bssid=obs.bssid,
                        position=obs.position,
                        timestamp=obs.timestamp,
                        scan_id=scan.scan_id,
                        ssid=obs.ssid,
                    )
                )
    rows.sort(key=lambda r: (r.timestamp, r.bssid.text, r.scan_id))
    return rows


# --- Bluetooth <-> ANPR correlation ------------------------------------------

@dataclass(frozen=True)
class AssociationScore:
    """Evidence that a Bluetooth MAC travels with a license plate."""

    mac: MacAddress
    plate: str
    co_occurrences: int
    distinct_sensors: int
    score: float


def correlate_bt_anpr(
    bt: Sequence[BtDetection],
    anpr: Sequence[AnprDetection],
    time_window_s: float,
    max_distance_m: float,
) -> list[AssociationScore]:
    """Rank (mac, plate) pairs by spatiotemporal co-occurrence.

    A co-occurrence is a Bluetooth detection and an ANPR detection within
    ``time_window_s`` seconds and ``max_distance_m`` meters of each other;
    each Bluetooth detection pairs with at most one ANPR detection per
    plate (the nearest in time). A pair's score is
    ``co_occurrences * distinct_sensors``, where sensors are the distinct
    Bluetooth sensor ids involved — repeated sightings by one stationary
    sensor (a parked car) score far below a pair seen along a route.
    Output is sorted by score descending, ties by co-occurrences
    descending then (mac, plate). Input order never affects the result.
    """
    if time_window_s < 0 or max_distance_m < 0:
        raise InvalidParameters("time window and distance must be non-negative")
    if not bt or not anpr:
        return []

    anpr_sorted = sorted(anpr, key=lambda d: (d.timestamp, d.plate, d.sensor_id))
    anpr_times = [d.timestamp for d in anpr_sorted]
    window = timedelta(seconds=time_window_s)

    pairs: dict[tuple[MacAddress, str], tuple[int, set[str]]] = {}
    for det in sorted(bt, key=lambda d: (d.timestamp, d.mac.text, d.sensor_id)):
        lo = bisect.bisect_left(anpr_times, det.timestamp - window)
        hi = bisect.bisect_right(anpr_times, det.timestamp + window)
        best_per_plate: dict[str, tuple[float, datetime, str]] = {}
        for cand in anpr_sorted[lo:hi]:
            if haversine_distance(det.position, cand.position) > max_distance_m:
                continue
            key = (
                abs((cand.timestamp - det.timestamp).total_seconds()),
                cand.timestamp,
                cand.sensor_id,
            )
            cur = best_per_plate.get(cand.plate)
            if cur is None or key < cur:
                best_per_plate[cand.plate] = key
        for plate in best_per_plate:
            count, sensors = pairs.setdefault((det.mac, plate), (0, set()))
            pairs[(det.mac, plate)] = (count + 1, sensors | {det.sensor_id})

    scores = [
        AssociationScore(
            mac=mac,
            plate=plate,
            co_occurrences=count,
            distinct_sensors=len(sensors),
            score=float(count * len(sensors)),
        )
        for (mac, plate), (count, sensors) in pairs.items()
    ]
    scores.sort(key=lambda s: (-s.score, -s.co_occurrences, s.mac.text, s.plate))
    return scores


# --- GPS stops / timeline -----------------------------------------------------

@dataclass(frozen=True)
class StopSegment:
    """A maximal span where the vehicle stayed within ``epsilon`` of the
    segment anchor for at least the dwell threshold."""

    centroid: GeoPoint
    start: datetime
    end: datetime
    dwell_s: float
    point_span: tuple[int, int]


def detect_stops(track: GpsTrack, epsilon_m: float = 50.0, tau_s: float = 300.0) -> list[StopSegment]:
    """Stay-point sweep over a track.

    Anchored at point ``i``, the segment extends over consecutive points
    within ``epsilon_m`` meters of the anchor; if it spans at least
    ``tau_s`` seconds it is emitted (centroid = arithmetic mean of the
    spanned coordinates) and the sweep resumes after it, otherwise the
    anchor advances one point. Segments never overlap and are time-ordered.
    """
    if epsilon_m <= 0 or tau_s <= 0:
        raise InvalidParameters("epsilon and tau must be positive")
    points = track.points
    stops = []
    i = 0
    n = len(points)
    while i < n:
        anchor = points[i].point
        j = i
        while j + 1 < n and haversine_distance(points[j + 1].point, anchor) <= epsilon_m:
            j += 1
        dwell = (points[j].timestamp - points[i].timestamp).total_seconds()
        if dwell >= tau_s:
            lat = math.fsum(p.point.lat for p in points[i : j + 1]) / (j - i + 1)
            lon = math.fsum(p.point.lon for p in points[i : j + 1]) / (j - i + 1)
            stops.append(
                StopSegment(
                    centroid=GeoPoint(lat, lon),
                    start=points[i].timestamp,
                    end=points[j].timestamp,
                    dwell_s=dwell,
                    point_span=(i, j),
                )
            )
            i = j + 1
        else:
            i += 1
    return stops


def timeline_slice(track: GpsTrack, t_from: datetime, t_to: datetime) -> list[TrackPoint]:
    """Points of a track with ``t_from <= t <= t_to``, order preserved.

    An empty result is a valid view (range before/after the track)."""
    if t_from > t_to:
        raise InvalidParameters("range start is after range end")
    return [p for p in track.points if t_from <= p.timestamp <= t_to]
