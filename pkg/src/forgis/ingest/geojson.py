"""GeoJSON (RFC 7946) import and export — the layer wire format.

Export writes a FeatureCollection with coordinates rounded to 7 decimal
places (~1 cm) and the originating provenance as a foreign member, so a
parse of an exported layer reproduces the geometry within 1e-7 degrees.
"""

from __future__ import annotations

import json

from ..errors import InvalidCoordinate, MalformedDocument
from ..spatial import GeoPoint
from ..timeutil import iso_utc, parse_utc
from .features import Feature, FeatureSet, LineStringGeometry, PointGeometry, Provenance, make_provenance

SUPPORTED_GEOMETRIES = ("Point", "LineString")


def _position(coords, where: str) -> GeoPoint:
    if not isinstance(coords, (list, tuple)) or len(coords) < 2:
        raise MalformedDocument(f"{where}: position must be [lon, lat]")
    lon, lat = coords[0], coords[1]
    if isinstance(lon, bool) or isinstance(lat, bool) or not isinstance(lon, (int, float)) or not isinstance(lat, (int, float)):
        raise MalformedDocument(f"{where}: non-numeric position {coords!r}")
    if not -90.0 <= lat <= 90.0 or not -180.0 <= lon <= 180.0:
        raise InvalidCoordinate(f"{where}: position ({lat}, {lon}) out of range")
    return GeoPoint(lat, lon)


def _flatten_properties(raw) -> dict[str, str]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise MalformedDocument("feature properties must be an object")
    props = {}
    for key, value in raw.items():
        if value is None:
            continue
        props[str(key)] = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
    return props


def parse_geojson(data: bytes, source_name: str = "geojson") -> FeatureSet:
    """Parse a GeoJSON FeatureCollection of Point/LineString features.

    Unsupported geometry kinds are skipped (counted in provenance), not
    fatal: partial import of open geodata beats total failure. A
    ``timestamp`` property holding a UTC instant is lifted onto the
    feature.
    """
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise MalformedDocument("root must be a FeatureCollection")
    raw_features = doc.get("features")
    if not isinstance(raw_features, list):
        raise MalformedDocument("FeatureCollection lacks a features array")

    features: list[Feature] = []
    skipped = 0
    for i, raw in enumerate(raw_features):
        where = f"features[{i}]"
        if not isinstance(raw, dict) or raw.get("type") != "Feature":
            raise MalformedDocument(f"{where} is not a Feature")
        geom = raw.get("geometry")
        if geom is None:
            skipped += 1
            continue
        if not isinstance(geom, dict):
            raise MalformedDocument(f"{where}: geometry must be an object")
        gtype = geom.get("type")
        if gtype not in SUPPORTED_GEOMETRIES:
            skipped += 1
            continue
        coords = geom.get("coordinates")
        if gtype == "Point":
            geometry = PointGeometry(_position(coords, where))
        else:
            if not isinstance(coords, list) or len(coords) < 2:
                raise MalformedDocument(f"{where}: LineString needs at least 2 positions")
            geometry = LineStringGeometry(tuple(_position(c, where) for c in coords))
        props = _flatten_properties(raw.get("properties"))
        timestamp = None
        if "timestamp" in props:
            try:
                timestamp = parse_utc(props["timestamp"])
            except ValueError:
                timestamp = None
            else:
                del props["timestamp"]
        features.append(Feature(geometry, props, timestamp))

    return FeatureSet(features, make_provenance(source_name, "GeoJSON", data, skipped=skipped))


def _round7(value: float) -> float:
    return round(value, 7)


def _geometry_json(geometry) -> dict:
    if isinstance(geometry, PointGeometry):
        p = geometry.point
        return {"type": "Point", "coordinates": [_round7(p.lon), _round7(p.lat)]}
    return {
        "type": "LineString",
        "coordinates": [[_round7(p.lon), _round7(p.lat)] for p in geometry.points],
    }


def export_geojson(fs: FeatureSet) -> bytes:
    """Render a FeatureSet as an RFC 7946 FeatureCollection (UTF-8 bytes)."""
    features = []
    for feature in fs.features:
        props = dict(feature.properties)
        if feature.timestamp is not None:
            props["timestamp"] = iso_utc(feature.timestamp)
        features.append(
            {"type": "Feature", "geometry": _geometry_json(feature.geometry), "properties": props}
        )
    prov = fs.provenance
    doc = {
        "type": "FeatureCollection",
        "features": features,
        "provenance": {
            "source_name": prov.source_name,
            "source_format": prov.source_format,
            "import_time": iso_utc(prov.import_time),
            "content_sha256": prov.content_sha256,
            "skipped_count": prov.skipped_count,
        },
    }
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")).encode("utf-8")


def provenance_from_geojson(data: bytes) -> Provenance | None:
    """Recover the provenance foreign member from an exported layer, if any."""
    try:
        doc = json.loads(data.decode("utf-8"))
        raw = doc.get("provenance")
        if not isinstance(raw, dict):
            return None
        return Provenance(
            source_name=raw["source_name"],
            source_format=raw["source_format"],
            import_time=parse_utc(raw["import_time"]),
            content_sha256=raw.get("content_sha256"),
            skipped_count=raw.get("skipped_count", 0),
        )
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError):
        return None
