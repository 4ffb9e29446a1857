"""GPX 1.0/1.1 parsing (namespace-tolerant)."""

from __future__ import annotations

import json

from ..errors import MalformedDocument
from ..records import GpsTrack, TrackPoint
from ..timeutil import parse_utc
from .features import Feature, FeatureSet, LineStringGeometry, PointGeometry, make_provenance
from .xmlcommon import coordinate_pair, local_name, parse_xml_root

# property key holding per-point timestamps of a track, as a JSON array of
# ISO-8601 strings (null where a point carried no time)
POINT_TIMES_KEY = "point_times"


def _child_text(elem, name: str) -> str | None:
    for child in elem:
        if local_name(child.tag) == name and child.text is not None:
            return child.text.strip()
    return None


def _point_time(elem, context: str):
    raw = _child_text(elem, "time")
    if raw is None:
        return None
    try:
        return parse_utc(raw)
    except ValueError as exc:
        raise MalformedDocument(f"<{context}> has bad timestamp {raw!r}: {exc}") from exc


def _trkpt_to_point(pt):
    return coordinate_pair(pt.get("lat"), pt.get("lon"), local_name(pt.tag))


def parse_gpx(data: bytes, source_name: str = "gpx") -> FeatureSet:
    """Parse GPX bytes into a FeatureSet.

    Waypoints become Point features. Each track segment becomes one
    LineString feature with per-point timestamps preserved under
    ``point_times``; a single-point segment degenerates to a Point feature
    flagged ``degenerate_track``. Feature order follows document order.
    """
    root = parse_xml_root(data)
    if local_name(root.tag) != "gpx":
        raise MalformedDocument(f"root element is <{local_name(root.tag)}>, expected <gpx>")

    features: list[Feature] = []
    for node in root:
        kind = local_name(node.tag)
        if kind == "wpt":
            point = _trkpt_to_point(node)
            props = {}
            for key in ("name", "desc"):
                val = _child_text(node, key)
                if val is not None:
                    props[key] = val
            features.append(Feature(PointGeometry(point), props, _point_time(node, "wpt")))
        elif kind == "trk":
            track_name = _child_text(node, "name")
            for seg in node:
                if local_name(seg.tag) != "trkseg":
                    continue
                pts = [p for p in seg if local_name(p.tag) == "trkpt"]
                if not pts:
                    continue
                coords = [_trkpt_to_point(p) for p in pts]
                times = [_point_time(p, "trkpt") for p in pts]
                props = {}
                if track_name is not None:
                    props["name"] = track_name
                if len(coords) == 1:
                    props["degenerate_track"] = "true"
                    features.append(Feature(PointGeometry(coords[0]), props, times[0]))
                    continue
                if any(t is not None for t in times):
                    props[POINT_TIMES_KEY] = json.dumps(
                        [t.isoformat().replace("+00:00", "Z") if t else None for t in times]
                    )
                first_time = next((t for t in times if t is not None), None)
                features.append(Feature(LineStringGeometry(tuple(coords)), props, first_time))

    return FeatureSet(features, make_provenance(source_name, "GPX", data))


def tracks_from_featureset(fs: FeatureSet, base_id: str) -> list[GpsTrack]:
    """Lift fully-timestamped LineString features into GpsTrack records.

    Segments lacking a timestamp on any point, or with out-of-order
    timestamps, stay layer-only: a track without reliable times cannot
    feed the timeline or stop detection.
    """
    tracks = []
    for feature in fs.features:
        if not isinstance(feature.geometry, LineStringGeometry):
            continue
        raw_times = feature.properties.get(POINT_TIMES_KEY)
        if raw_times is None:
            continue
        times = json.loads(raw_times)
        if any(t is None for t in times) or len(times) != len(feature.geometry.points):
            continue
        points = [
            TrackPoint(p, parse_utc(t)) for p, t in zip(feature.geometry.points, times)
        ]
        label = feature.properties.get("name", "")
        try:
            tracks.append(GpsTrack(track_id=f"{base_id}-{len(tracks)}", label=label, points=points))
        except ValueError:
            continue
    return tracks
