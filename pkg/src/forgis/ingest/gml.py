"""GML 3 subset parsing: gml:Point/gml:pos and gml:LineString/gml:posList.

Only EPSG:4326 (axis order "lat lon") is supported; any other declared CRS
is rejected rather than silently reprojected.
"""

from __future__ import annotations

import re

from ..errors import MalformedDocument, UnsupportedCrs
from ..spatial import GeoPoint
from .features import Feature, FeatureSet, LineStringGeometry, PointGeometry, make_provenance
from .xmlcommon import coordinate_pair, local_name, parse_xml_root

# EPSG:4326 in its common spellings: "EPSG:4326", "urn:ogc:def:crs:EPSG::4326",
# "http://www.opengis.net/def/crs/EPSG/0/4326"
_EPSG_4326 = re.compile(r"(?i)epsg.*?[:/#]\s*0*4326\s*$")


def _check_crs(elem) -> None:
    srs = elem.get("srsName")
    if srs is not None and not _EPSG_4326.search(srs):
        raise UnsupportedCrs(f"srsName {srs!r} is not EPSG:4326")


def _pos_point(text: str, element: str) -> GeoPoint:
    parts = text.split()
    if len(parts) not in (2, 3):
        raise MalformedDocument(f"<{element}> must hold 'lat lon', found {len(parts)} values")
    return coordinate_pair(parts[0], parts[1], element)


def parse_gml(data: bytes, source_name: str = "gml") -> FeatureSet:
    """Parse a GML document into a FeatureSet.

    Geometries are collected in document order. ``gml:pos`` is read as
    "lat lon" per the EPSG:4326 axis rule; ``gml:posList`` is consumed as
    consecutive lat/lon pairs.
    """
    root = parse_xml_root(data)
    features: list[Feature] = []
    for elem in root.iter():
        kind = local_name(elem.tag)
        if kind == "Point":
            _check_crs(elem)
            pos = next((c for c in elem if local_name(c.tag) == "pos"), None)
            if pos is None or pos.text is None:
                raise MalformedDocument("<Point> lacks <pos>")
            _check_crs(pos)
            features.append(Feature(PointGeometry(_pos_point(pos.text, "pos"))))
        elif kind == "LineString":
            _check_crs(elem)
            pos_list = next((c for c in elem if local_name(c.tag) == "posList"), None)
            if pos_list is None or pos_list.text is None:
                raise MalformedDocument("<LineString> lacks <posList>")
            _check_crs(pos_list)
            values = pos_list.text.split()
            if len(values) % 2 != 0:
                raise MalformedDocument(f"<posList> holds {len(values)} values, expected lat/lon pairs")
            pts = tuple(
                coordinate_pair(values[i], values[i + 1], "posList") for i in range(0, len(values), 2)
            )
            if len(pts) < 2:
                raise MalformedDocument("<posList> needs at least two positions")
            features.append(Feature(LineStringGeometry(pts)))

    return FeatureSet(features, make_provenance(source_name, "GML", data))
