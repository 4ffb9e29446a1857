"""KML 2.2 parsing: the Placemark Point/LineString subset.

KML writes coordinates longitude-first; this parser flips them into the
system-wide (lat, lon) order.
"""

from __future__ import annotations

from ..errors import MalformedDocument
from ..spatial import GeoPoint
from ..timeutil import parse_utc
from .features import Feature, FeatureSet, LineStringGeometry, PointGeometry, make_provenance
from .xmlcommon import coordinate_pair, local_name, parse_xml_root


def _coordinates_text(geom) -> str:
    for child in geom.iter():
        if local_name(child.tag) == "coordinates":
            return child.text or ""
    raise MalformedDocument(f"<{local_name(geom.tag)}> lacks <coordinates>")


def _parse_tuples(text: str) -> list[GeoPoint]:
    points = []
    for token in text.split():
        parts = token.split(",")
        if len(parts) < 2:
            raise MalformedDocument(f"coordinate tuple {token!r} needs 'lon,lat[,alt]'")
        # KML axis order: lon first
        points.append(coordinate_pair(parts[1], parts[0], "coordinates"))
    return points


def _placemark_time(pm):
    for child in pm.iter():
        if local_name(child.tag) == "when" and child.text:
            try:
                return parse_utc(child.text.strip())
            except ValueError as exc:
                raise MalformedDocument(f"bad <when> timestamp {child.text!r}: {exc}") from exc
    return None


def parse_kml(data: bytes, source_name: str = "kml") -> FeatureSet:
    """Parse KML bytes into a FeatureSet.

    Placemarks with Point or LineString geometry are kept in document
    order; name/description are copied into properties. Placemarks with
    other geometry kinds (polygons, multi-geometries) are skipped and
    counted in provenance.
    """
    root = parse_xml_root(data)
    features: list[Feature] = []
    skipped = 0
    for pm in root.iter():
        if local_name(pm.tag) != "Placemark":
            continue
        props = {}
        for key in ("name", "description"):
            for child in pm:
                if local_name(child.tag) == key and child.text is not None:
                    props[key] = child.text.strip()
        geom = None
        for child in pm.iter():
            if local_name(child.tag) in ("Point", "LineString"):
                geom = child
                break
        if geom is None:
            skipped += 1
            continue
        pts = _parse_tuples(_coordinates_text(geom))
        when = _placemark_time(pm)
        if local_name(geom.tag) == "Point":
            if len(pts) != 1:
                raise MalformedDocument(f"<Point> must carry exactly one tuple, found {len(pts)}")
            features.append(Feature(PointGeometry(pts[0]), props, when))
        else:
            if not pts:
                raise MalformedDocument("<LineString> has no coordinates")
            if len(pts) == 1:
                props["degenerate_track"] = "true"
                features.append(Feature(PointGeometry(pts[0]), props, when))
            else:
                features.append(Feature(LineStringGeometry(tuple(pts)), props, when))

    return FeatureSet(features, make_provenance(source_name, "KML", data, skipped=skipped))
