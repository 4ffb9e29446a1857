"""Geodata ingestion: format parsers and the normalized feature model."""

from .csvdata import parse_anpr_csv, parse_bt_csv, parse_camera_csv, parse_wifi_csv
from .features import (
    Feature,
    FeatureSet,
    LineStringGeometry,
    PointGeometry,
    Provenance,
)
from .geojson import export_geojson, parse_geojson, provenance_from_geojson
from .gml import parse_gml
from .gpx import POINT_TIMES_KEY, parse_gpx
from .kml import parse_kml

__all__ = [
    "Feature",
    "FeatureSet",
    "PointGeometry",
    "LineStringGeometry",
    "Provenance",
    "parse_gpx",
    "parse_kml",
    "parse_gml",
    "parse_geojson",
    "parse_wifi_csv",
    "parse_anpr_csv",
    "parse_bt_csv",
    "parse_camera_csv",
    "export_geojson",
    "provenance_from_geojson",
    "POINT_TIMES_KEY",
]
